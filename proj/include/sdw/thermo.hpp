#pragma once

#include <string>

#include "potential.hpp"

namespace sdw {

// Growth-rate table for a word family: per-n log counts, the per-n rates,
// and a bracketing interval for the limit.
struct GrowthEstimate {
    int n_max = 0;
    std::vector<double> log_count; // index n-1
    std::vector<double> rate;      // log_count[n-1] / n
    double lower = 0, upper = 0;
    double estimate = 0; // midpoint of [lower, upper]
    std::string method;  // "subadditive-bracket" | "plain-limsup"
};

// Z_n(shift, D, c*phi) = sum over D-words of length n of the supremum of
// e^{S_n(c*phi)} over the cylinder (attained at S_max for c > 0, S* for c < 0).
double z_n(const SubshiftSpec& shift, const std::function<bool(WordView)>& D,
           const Potential& phi, double multiplier, int n,
           size_t cap = kDefaultEnumCap);

// Entropy bracket: Fekete minimum of (1/n) log #L_n from above; gluing
// superadditivity of the core G from below when the shift carries
// decomposition metadata, a tail-difference band otherwise.
GrowthEstimate entropy_estimate(const SubshiftSpec& shift, int n_max,
                                size_t cap = kDefaultEnumCap);

// Same table machinery for an arbitrary decidable word family D; the band
// comes from the successive differences log #D_{n+1} - log #D_n over the
// tail and the point estimate from a least-squares slope.
GrowthEstimate growth_rate(const SubshiftSpec& shift,
                           const std::function<bool(WordView)>& D, int n_max,
                           size_t cap = kDefaultEnumCap);

struct DimensionResult {
    double gamma = 0;            // root of the averaged pressure estimate
    double lower = 0, upper = 0; // certified finite-n bracket
    double correction = 0;       // bracket width (finite-size correction)
    int n_max = 0;
};

// Root gamma of P(-gamma phi) = 0 by bisection on the sign of the averaged
// finite-n pressure estimate; the bracket comes from the roots of the
// one-sided estimates (subadditive from above, gluing from below).
DimensionResult solve_dimension_gamma(const SubshiftSpec& shift, const Potential& phi,
                                      int n_max = 20, double tol = 1e-4,
                                      size_t cap = kDefaultEnumCap);

// Bernoulli weights on a full shift, or a stationary Markov chain on an SFT.
struct MarkovMeasureSpec {
    std::vector<double> bernoulli;          // nonempty => Bernoulli
    std::vector<std::vector<double>> P;     // row-stochastic transition matrix
    std::vector<double> pi;                 // stationary left eigenvector
};

// h(mu)/integral(phi dmu), both in closed form.
double measure_dimension(const SubshiftSpec& shift, const Potential& phi,
                         const MarkovMeasureSpec& mu);

struct PressureGapReport {
    std::vector<double> z;            // Z_n over the prefix/suffix words
    std::vector<double> partial_sums;
    std::vector<double> ratios;       // Z_{n+1}/Z_n where defined
    std::string verdict;              // "converging (ratio < 1 sustained)" | "inconclusive"
};

// Convergence diagnostic for sum_n Z_n(C^p union C^s, -gamma phi).
PressureGapReport pressure_gap_check(const SubshiftSpec& shift, const Potential& phi,
                                     double gamma, int n_max,
                                     size_t cap = kDefaultEnumCap);

struct CountingBand {
    std::vector<double> z; // Z_n(L, -gamma phi), n = 1..n_max
    double min_z = 0, max_z = 0;
};

CountingBand uniform_counting_check(const SubshiftSpec& shift, const Potential& phi,
                                    double gamma, int n_max,
                                    size_t cap = kDefaultEnumCap);

} // namespace sdw
