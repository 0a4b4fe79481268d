#pragma once

#include <cstdint>
#include <optional>

#include "potential.hpp"
#include "subshift.hpp"

namespace sdw {

// One level of the tower schedule.  l/n are exact while they fit; the level-2+
// counts explode hyperexponentially, so they are also carried in log space
// (and as big integers while that is still affordable) for the feasibility
// checks and lazy permutation indexing.
struct SchedulePoint {
    int k = 1;
    double log_l = 0, log_n = 0;
    std::optional<long> l_exact, n_exact;
    std::optional<mpz_class> n_big; // present whenever n_k is materializable
};

struct ConstructionPlan {
    double h = 0;        // target entropy
    int tau = 0;
    long l1 = 0, n1 = 0;
    std::vector<Word> bricks; // first n1 elements of G_{l1}, lex order
    std::uint64_t seed = 0;
    int alphabet = 2;
    std::vector<SchedulePoint> schedule; // k = 1.. while representable
    // Finite-k entropy bracket reported with the plan:
    // [(log n1 - 3)/(l1+tau), complexity_upper_bound(plan, 1)].
    double bracket_lower = 0, bracket_upper = 0;
};

// Dense-orbit point (the h = h_top case): G enumerated by length then lex,
// chained with lexicographically least gluing words.
Word construct_dense_point(const SubshiftSpec& shift, size_t target_length,
                           size_t cap = kDefaultEnumCap);

// Pick the smallest l1 >= hint whose bracket [(l1+tau)h+2, (l1+tau)h+3)
// contains an integer n1 <= #G_{l1}; schedule recorded to `depth` levels.
ConstructionPlan plan_intermediate_entropy(const SubshiftSpec& shift, double h,
                                           std::optional<long> l1_hint,
                                           std::uint64_t seed, int depth = 3,
                                           long l1_cap = 64,
                                           size_t cap = kDefaultEnumCap);

// Lazily emit the configuration u1 u2 u3 ... (permutation words over the
// brick tower, gluing words inserted between consecutive bricks).
Word generate_prefix(const ConstructionPlan& plan, const SubshiftSpec& shift,
                     size_t length, size_t cap = 10'000'000);

// (1/l_{k+1}) log of the closed-form factor-count bound
// (l_k + 2 tau) n_k^{n_k+1} m^{tau(sum_{j<k} n_1...n_j + n_k)}.
double complexity_upper_bound(const ConstructionPlan& plan, int k);

struct SubsystemPlan {
    double alpha = 0, epsilon = 0;
    double n1 = 0;      // diameter scale
    int stratum = 0;    // chosen l
    std::vector<Word> members; // A_1, lexicographically first
    double count_log = 0;      // log #A_1
    double C = 0, Cprime = 0;  // effective diameter-sandwich constants
    double lower = 0, upper = 0; // dimension bounds for (A_1 Lambda^tau)^N
};

SubsystemPlan construct_subsystem_step1(const SubshiftSpec& shift, const Potential& phi,
                                        double alpha, double epsilon,
                                        const LogReal& n1_scale,
                                        size_t cap = kDefaultEnumCap);

} // namespace sdw
