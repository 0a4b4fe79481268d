#include "sdw/words.hpp"

#include <algorithm>
#include <string_view>
#include <unordered_set>

namespace sdw {

Word Word::parse(const std::string& text, int alphabet_size) {
    std::vector<Symbol> s;
    if (text.find(',') != std::string::npos) {
        size_t pos = 0;
        while (pos <= text.size()) {
            size_t e = text.find(',', pos);
            if (e == std::string::npos) e = text.size();
            std::string tok = text.substr(pos, e - pos);
            if (tok.empty())
                throw ConfigError("empty symbol in word '" + text + "'");
            long v = std::stol(tok);
            if (v < 0 || v >= alphabet_size)
                throw ConfigError("symbol " + tok + " out of range for alphabet size " +
                                  std::to_string(alphabet_size));
            s.push_back(static_cast<Symbol>(v));
            pos = e + 1;
            if (e == text.size()) break;
        }
    } else {
        for (char c : text) {
            if (c < '0' || c > '9')
                throw ConfigError(std::string("bad symbol character '") + c + "'");
            int v = c - '0';
            if (v >= alphabet_size)
                throw ConfigError("symbol " + std::to_string(v) +
                                  " out of range for alphabet size " +
                                  std::to_string(alphabet_size));
            s.push_back(static_cast<Symbol>(v));
        }
    }
    return Word(std::move(s));
}

Word Word::subword(size_t pos, size_t len) const {
    return Word(std::vector<Symbol>(s_.begin() + static_cast<long>(pos),
                                    s_.begin() + static_cast<long>(pos + len)));
}

std::string Word::str() const {
    bool wide = false;
    for (Symbol a : s_)
        if (a > 9) wide = true;
    std::string out;
    for (size_t i = 0; i < s_.size(); ++i) {
        if (wide && i) out += ',';
        out += std::to_string(static_cast<int>(s_[i]));
    }
    return out;
}

Word concat(WordView u, WordView v) {
    Word w{u};
    w.append(v);
    return w;
}

bool is_prefix(WordView p, WordView w) {
    if (p.size() > w.size()) return false;
    return std::equal(p.begin(), p.end(), w.begin());
}

int lex_compare(WordView u, WordView v) {
    size_t n = std::min(u.size(), v.size());
    for (size_t i = 0; i < n; ++i) {
        if (u[i] != v[i]) return u[i] < v[i] ? -1 : 1;
    }
    if (u.size() == v.size()) return 0;
    return u.size() < v.size() ? -1 : 1;
}

LanguageSlice enumerate_language_oracle(int alphabet_size, const AdmissOracle& admissible,
                                        int n, size_t cap) {
    if (n < 0) throw ConfigError("negative word length");
    LanguageSlice cur;
    cur.n = 0;
    cur.count = 1; // the empty word
    for (int len = 1; len <= n; ++len) {
        LanguageSlice next;
        next.n = len;
        std::vector<Symbol> scratch(static_cast<size_t>(len));
        for (size_t i = 0; i < cur.count; ++i) {
            WordView p = cur.n ? cur.word(i) : WordView{};
            std::copy(p.begin(), p.end(), scratch.begin());
            for (int a = 0; a < alphabet_size; ++a) {
                scratch[static_cast<size_t>(len) - 1] = static_cast<Symbol>(a);
                if (!admissible(WordView(scratch))) continue;
                if (next.count == cap)
                    throw CapError("language enumeration exceeded cap of " +
                                   std::to_string(cap) + " words at length " +
                                   std::to_string(len));
                next.flat.insert(next.flat.end(), scratch.begin(), scratch.end());
                ++next.count;
            }
        }
        cur = std::move(next);
        // Lexicographic order is inherited: parents are sorted and children are
        // visited in symbol order.
    }
    return cur;
}

size_t complexity_function(WordView prefix, size_t n) {
    if (n == 0) return 1;
    if (n > prefix.size())
        throw ConfigError("block length exceeds available prefix");
    std::unordered_set<std::string_view> seen;
    const char* base = reinterpret_cast<const char*>(prefix.data());
    for (size_t i = 0; i + n <= prefix.size(); ++i)
        seen.emplace(base + i, n);
    return seen.size();
}

} // namespace sdw
