#pragma once

#include "potential.hpp"

namespace sdw {

// Pruned cover of the shift by cylinders of d_phi-diameter about rho: every
// infinite point has exactly one member as a prefix.
struct CoverCollection {
    mpq_class rho;
    std::vector<Word> members;      // lexicographic order, prefix-free
    std::vector<int> stratum;       // per member: largest l with diam >= c_*^l rho
    std::vector<LogReal> neg_log_diam; // per member: S* (exact)

    size_t size() const { return members.size(); }
    // Index of the unique member that is a prefix of x, or -1.
    long member_prefix_of(WordView x) const;
};

// Longest-prefix cover at scale rho with eager pruning: a word becomes
// a member as soon as one of its admissible extensions drops below rho.
CoverCollection build_cover(const SubshiftSpec& shift, const Potential& phi,
                            const mpq_class& rho, size_t cap = kDefaultEnumCap);

// Stratification C_D^n(l): D-words with diameter in [c_*^l e^{-n},
// min(c_*^{l+1}, c*) e^{-n}); scale is n (a positive "real" as a LogReal).
struct Strata {
    LogReal scale; // n
    std::vector<std::vector<Word>> strata; // index l
};

Strata stratify(const SubshiftSpec& shift, const std::function<bool(WordView)>& D,
                const Potential& phi, const LogReal& scale,
                size_t cap = kDefaultEnumCap);

// Greedy unique parse of a word into cover members.
struct Recoding {
    std::vector<size_t> member_seq; // indices into cover.members
    std::vector<size_t> offsets;    // start position of each parsed member
    size_t parsed_len = 0;
    size_t remainder = 0;           // trailing symbols that end mid-member
    Word source;
};

Recoding recode(const SubshiftSpec& shift, const CoverCollection& cover, WordView x);

// Recoded metric d_phi^rho between two parses: exp(-sum of S* over the
// members of `a` before the first disagreement).
MetricResult recoded_distance(const SubshiftSpec& shift, const Potential& phi,
                              const CoverCollection& cover, const Recoding& a,
                              const Recoding& b);

} // namespace sdw
