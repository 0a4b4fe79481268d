#include "sdw/subshift.hpp"

#include <algorithm>
#include <memory>
#include <set>

namespace sdw {

namespace {

bool symbols_in_range(WordView w, int m) {
    for (Symbol a : w)
        if (a >= m) return false;
    return true;
}

} // namespace

SubshiftSpec build_full_shift(int m) {
    if (m < 1) throw ConfigError("full shift needs at least one symbol");
    SubshiftSpec s;
    s.alphabet.size = m;
    s.kind = ShiftKind::Full;
    s.admissible = [m](WordView w) { return symbols_in_range(w, m); };
    s.tau = 0;
    s.in_G = s.admissible;
    s.in_Cp = [](WordView w) { return w.empty(); };
    s.in_Cs = s.in_Cp;
    s.ps_words = [](int) { return std::vector<Word>{}; };
    return s;
}

// ---------------------------------------------------------------------------
// SFT

namespace {

struct SftState {
    int m;
    std::vector<Word> forbidden;

    bool admissible(WordView w) const {
        if (!symbols_in_range(w, m)) return false;
        for (const Word& f : forbidden) {
            if (f.size() > w.size()) continue;
            auto fv = f.view();
            for (size_t i = 0; i + fv.size() <= w.size(); ++i) {
                if (std::equal(fv.begin(), fv.end(), w.begin() + static_cast<long>(i)))
                    return false;
            }
        }
        return true;
    }
};

} // namespace

SubshiftSpec build_sft(const SftSpec& spec) {
    auto st = std::make_shared<SftState>();
    st->m = spec.alphabet_size;
    if (st->m < 1) throw ConfigError("SFT needs at least one symbol");
    st->forbidden = spec.forbidden;
    for (const Word& f : st->forbidden) {
        if (f.empty()) throw ConfigError("empty forbidden word");
        if (!symbols_in_range(f, st->m))
            throw ConfigError("forbidden word uses symbols outside the alphabet");
    }
    if (spec.matrix) {
        const auto& M = *spec.matrix;
        if (M.size() != static_cast<size_t>(st->m))
            throw ConfigError("transition matrix size does not match alphabet");
        for (const auto& row : M) {
            if (row.size() != static_cast<size_t>(st->m))
                throw ConfigError("transition matrix is not square");
            for (int e : row)
                if (e != 0 && e != 1) throw ConfigError("transition matrix entries must be 0/1");
        }
        if (st->forbidden.empty()) {
            for (int i = 0; i < st->m; ++i)
                for (int j = 0; j < st->m; ++j)
                    if (!M[static_cast<size_t>(i)][static_cast<size_t>(j)])
                        st->forbidden.push_back(Word(std::vector<Symbol>{
                            static_cast<Symbol>(i), static_cast<Symbol>(j)}));
        } else {
            // Both presentations given: they must induce the same 2-blocks.
            for (int i = 0; i < st->m; ++i)
                for (int j = 0; j < st->m; ++j) {
                    std::vector<Symbol> ij{static_cast<Symbol>(i), static_cast<Symbol>(j)};
                    bool adm = st->admissible(WordView(ij));
                    if (adm != (M[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0))
                        throw ConfigError("matrix and forbidden-word presentations disagree");
                }
        }
    }

    size_t k = 1; // window size of the SFT
    for (const Word& f : st->forbidden) k = std::max(k, f.size());

    SubshiftSpec s;
    s.alphabet.size = st->m;
    s.kind = ShiftKind::Sft;
    s.admissible = [st](WordView w) { return st->admissible(w); };

    // Consistency: some admissible word of every length up to 20.  Short
    // lengths by direct enumeration, longer ones via reachability in the
    // (k-1)-block graph, which also decides topological mixing.
    int probe = static_cast<int>(std::min<size_t>(k - 1, 20));
    LanguageSlice blocks;
    try {
        blocks = enumerate_language_oracle(st->m, s.admissible, probe);
    } catch (const CapError&) {
        throw ConfigError("SFT window too large to analyze");
    }
    for (int len = 1; len <= probe; ++len) {
        LanguageSlice l = enumerate_language_oracle(st->m, s.admissible, len);
        if (l.count == 0)
            throw ConfigError("SFT language is empty at length " + std::to_string(len));
    }
    size_t N = blocks.count;
    if (N == 0) throw ConfigError("SFT language is empty");

    // Adjacency between (k-1)-blocks: append one symbol, keep the window legal.
    std::vector<std::vector<char>> A(N, std::vector<char>(N, 0));
    {
        // Index blocks for lookup.
        std::vector<Word> blk;
        blk.reserve(N);
        for (size_t i = 0; i < N; ++i) blk.push_back(blocks.word_copy(i));
        auto find_block = [&](WordView w) -> long {
            long lo = 0, hi = static_cast<long>(N) - 1;
            while (lo <= hi) {
                long mid = (lo + hi) / 2;
                int c = lex_compare(blk[static_cast<size_t>(mid)], w);
                if (c == 0) return mid;
                if (c < 0) lo = mid + 1; else hi = mid - 1;
            }
            return -1;
        };
        for (size_t i = 0; i < N; ++i) {
            for (int a = 0; a < st->m; ++a) {
                Word ext = blk[i];
                ext.push_back(static_cast<Symbol>(a));
                if (!st->admissible(ext)) continue;
                long j = probe == 0 ? 0
                                    : find_block(ext.suffix_view(ext.size() -
                                                                 static_cast<size_t>(probe)));
                if (j >= 0) A[i][static_cast<size_t>(j)] = 1;
            }
        }
    }

    // Existence of admissible words of every length up to 20.
    {
        std::vector<char> reach(N, 1);
        for (int len = probe + 1; len <= 20; ++len) {
            std::vector<char> next(N, 0);
            bool any = false;
            for (size_t i = 0; i < N; ++i) {
                if (!reach[i]) continue;
                for (size_t j = 0; j < N; ++j)
                    if (A[i][j]) { next[j] = 1; any = true; }
            }
            if (!any)
                throw ConfigError("SFT language is empty at length " + std::to_string(len));
            reach = std::move(next);
        }
    }

    // Mixing: least t with A^t strictly positive.
    long t_mix = -1;
    {
        std::vector<std::vector<char>> P = A;
        long cap_t = static_cast<long>(2 * N * N + 10);
        for (long t = 1; t <= cap_t; ++t) {
            bool allpos = true;
            for (size_t i = 0; i < N && allpos; ++i)
                for (size_t j = 0; j < N; ++j)
                    if (!P[i][j]) { allpos = false; break; }
            if (allpos) { t_mix = t; break; }
            // P := P * A (boolean)
            std::vector<std::vector<char>> Q(N, std::vector<char>(N, 0));
            for (size_t i = 0; i < N; ++i)
                for (size_t l = 0; l < N; ++l)
                    if (P[i][l])
                        for (size_t j = 0; j < N; ++j)
                            if (A[l][j]) Q[i][j] = 1;
            P = std::move(Q);
        }
    }

    if (t_mix >= 0) {
        // Mixing SFT: specification holds for the whole language with
        // tau = t_mix - (k-1) extra connector symbols.
        s.tau = static_cast<int>(std::max<long>(0, t_mix - probe));
        s.in_G = s.admissible;
        s.in_Cp = [](WordView w) { return w.empty(); };
        s.in_Cs = s.in_Cp;
        s.ps_words = [](int) { return std::vector<Word>{}; };
    }
    // Non-mixing: decomposition fields stay absent; construction ops refuse.
    return s;
}

// ---------------------------------------------------------------------------
// S-gap

SubshiftSpec build_s_gap(const SGapSet& sg) {
    if (sg.values.empty() && !sg.tail_from)
        throw ConfigError("S-gap shift needs a nonempty gap set");
    auto values = std::make_shared<std::set<long>>(sg.values.begin(), sg.values.end());
    for (long v : *values)
        if (v < 0) throw ConfigError("negative gap length");
    std::optional<long> tail = sg.tail_from;
    if (tail && *tail < 0) throw ConfigError("negative gap length");

    auto in_S = [values, tail](long g) {
        if (values->count(g)) return true;
        return tail && g >= *tail;
    };
    long min_s = tail ? *tail : values->empty() ? 0 : *values->begin();
    if (!values->empty()) min_s = std::min(min_s, *values->begin());
    if (tail) min_s = std::min(min_s, *tail);

    // Internal gaps (runs of 0s strictly between two 1s) must lie in S;
    // boundary runs are unconstrained.
    auto gaps_ok = [in_S](WordView w) {
        long last_one = -1;
        for (size_t i = 0; i < w.size(); ++i) {
            if (w[i] != 1) continue;
            if (last_one >= 0) {
                long gap = static_cast<long>(i) - last_one - 1;
                if (!in_S(gap)) return false;
            }
            last_one = static_cast<long>(i);
        }
        return true;
    };

    SubshiftSpec s;
    s.alphabet.size = 2;
    s.kind = ShiftKind::SGap;
    s.admissible = [gaps_ok](WordView w) {
        return symbols_in_range(w, 2) && gaps_ok(w);
    };
    // Core: empty word, or words starting and ending with 1 with legal
    // internal gaps.  Any two such words glue through 0^min 1 0^min, hence
    // tau = 2*min(S)+1 (min(S)+1 alone cannot bridge e.g. S={1}).
    s.tau = static_cast<int>(2 * min_s + 1);
    s.in_G = [gaps_ok](WordView w) {
        if (w.empty()) return true;
        return w.front() == 1 && w.back() == 1 && gaps_ok(w);
    };
    auto ones_free = [](WordView w) {
        for (Symbol a : w)
            if (a == 1) return false;
        return true;
    };
    s.in_Cp = ones_free;
    s.in_Cs = ones_free;
    return s;
}

// ---------------------------------------------------------------------------
// Generic operations

LanguageSlice enumerate_language(const SubshiftSpec& shift, int n, size_t cap) {
    return enumerate_language_oracle(shift.alphabet.size, shift.admissible, n, cap);
}

Word gluing_word(const SubshiftSpec& shift, WordView u, WordView v) {
    if (!shift.has_decomposition())
        throw SpecificationError("shift has no specification metadata (tau/G)");
    int tau = *shift.tau;
    if (tau == 0) {
        Word uv = concat(u, v);
        if (!shift.admissible(uv))
            throw SpecificationError("tau = 0 but concatenation is inadmissible");
        return Word{};
    }
    LanguageSlice conn = enumerate_language(shift, tau);
    for (size_t i = 0; i < conn.count; ++i) {
        Word cand{u};
        cand.append(conn.word(i));
        cand.append(v);
        if (shift.admissible(cand)) return conn.word_copy(i);
    }
    throw SpecificationError("no gluing word of length " + std::to_string(tau) +
                             " exists; decomposition metadata is wrong");
}

Decomposition decompose_word(const SubshiftSpec& shift, WordView w) {
    if (!shift.in_G || !shift.in_Cp || !shift.in_Cs)
        throw SpecificationError("shift has no decomposition oracle");
    if (!shift.admissible(w))
        throw ConfigError("decompose_word: inadmissible input");
    size_t n = w.size();
    for (size_t glen = n + 1; glen-- > 0;) {
        for (size_t plen = 0; plen + glen <= n; ++plen) {
            WordView p = w.subspan(0, plen);
            WordView g = w.subspan(plen, glen);
            WordView suf = w.subspan(plen + glen);
            if (shift.in_Cp(p) && shift.in_G(g) && shift.in_Cs(suf))
                return Decomposition{Word(p), Word(g), Word(suf)};
        }
    }
    throw SpecificationError("word does not decompose as C^p G C^s");
}

} // namespace sdw
