#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "words.hpp"

namespace sdw {

enum class ShiftKind { Full, Sft, Beta, SGap, Coded };

struct Decomposition {
    Word p, g, s; // prefix part, core, suffix part; p+g+s reconcatenates the input
};

// A subshift presented as an admissibility oracle plus optional structural
// metadata: the decomposition L = C^p G C^s and the specification gap tau for
// the core G.  Shifts without that metadata still enumerate fine but refuse
// gluing/construction operations.
struct SubshiftSpec {
    Alphabet alphabet;
    ShiftKind kind = ShiftKind::Coded;
    AdmissOracle admissible;

    std::optional<int> tau;
    std::function<bool(WordView)> in_Cp, in_G, in_Cs;

    // Closed-form list of the C^p ∪ C^s words of length n, where that set is
    // cheap to produce directly (full shift: empty; beta shift: the single
    // quasi-greedy prefix).  Absent means "filter the enumerated language".
    std::function<std::vector<Word>(int)> ps_words;

    bool has_decomposition() const {
        return tau.has_value() && static_cast<bool>(in_G);
    }
};

// SFT presented by a forbidden-factor list, a 0/1 transition matrix, or both
// (the presentations must agree when both are given).
struct SftSpec {
    int alphabet_size = 2;
    std::vector<Word> forbidden;
    std::optional<std::vector<std::vector<int>>> matrix;
};

struct SGapSet {
    std::vector<long> values;          // explicit allowed gap lengths
    std::optional<long> tail_from;     // additionally every gap >= this value
};

SubshiftSpec build_full_shift(int m);
SubshiftSpec build_sft(const SftSpec& spec);
SubshiftSpec build_s_gap(const SGapSet& s);

LanguageSlice enumerate_language(const SubshiftSpec& shift, int n,
                                 size_t cap = kDefaultEnumCap);

// Lexicographically least j in L_tau with u j v admissible.
Word gluing_word(const SubshiftSpec& shift, WordView u, WordView v);

// Canonical split w = p g s with g in G maximal, then p minimal.
Decomposition decompose_word(const SubshiftSpec& shift, WordView w);

} // namespace sdw
