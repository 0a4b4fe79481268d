#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace sdw {

using Symbol = std::uint8_t;

struct Alphabet {
    int size = 2; // symbols are 0..size-1
};

using WordView = std::span<const Symbol>;

// Finite word over a dense 0..m-1 alphabet.  Plain vector storage; equality
// and hashing are bit-exact.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Symbol> s) : s_(std::move(s)) {}
    Word(WordView v) : s_(v.begin(), v.end()) {}

    // "0110" -> word; digits only (alphabet sizes beyond 10 use {a,b,c,...}? no:
    // multi-digit alphabets are entered comma-separated, e.g. "10,0,3").
    static Word parse(const std::string& text, int alphabet_size);

    size_t size() const { return s_.size(); }
    bool empty() const { return s_.empty(); }
    Symbol operator[](size_t i) const { return s_[i]; }
    const std::vector<Symbol>& symbols() const { return s_; }
    operator WordView() const { return WordView(s_); }
    WordView view() const { return WordView(s_); }

    void push_back(Symbol a) { s_.push_back(a); }
    void append(WordView v) { s_.insert(s_.end(), v.begin(), v.end()); }
    Word subword(size_t pos, size_t len) const;
    WordView suffix_view(size_t pos) const { return WordView(s_).subspan(pos); }

    bool operator==(const Word& o) const { return s_ == o.s_; }

    std::string str() const;

private:
    std::vector<Symbol> s_;
};

Word concat(WordView u, WordView v);
bool is_prefix(WordView p, WordView w);

// Lexicographic order; a proper prefix compares less.  Returns -1/0/+1.
int lex_compare(WordView u, WordView v);

// Admissibility oracle on finite words.
using AdmissOracle = std::function<bool(WordView)>;

// All admissible words of one length, flat-packed in lexicographic order.
struct LanguageSlice {
    int n = 0;
    size_t count = 0;
    std::vector<Symbol> flat; // count * n symbols

    WordView word(size_t i) const {
        return WordView(flat).subspan(i * static_cast<size_t>(n),
                                      static_cast<size_t>(n));
    }
    Word word_copy(size_t i) const { return Word(word(i)); }
};

inline constexpr size_t kDefaultEnumCap = 10'000'000;

// Grows L_n from L_{n-1} by prefix extension, pruning with the oracle, so the
// cost tracks the output size rather than m^n.  Exceeding `cap` words at any
// level raises CapError (never silent truncation).
LanguageSlice enumerate_language_oracle(int alphabet_size, const AdmissOracle& admissible,
                                        int n, size_t cap = kDefaultEnumCap);

// Number of distinct length-n factors of the supplied prefix.  This is a
// lower bound for the complexity of the underlying infinite word: factors the
// prefix has not reached yet are invisible by construction.
size_t complexity_function(WordView prefix, size_t n);

} // namespace sdw
