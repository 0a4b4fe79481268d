#pragma once

#include <gmpxx.h>
#include <optional>
#include <string>

#include "words.hpp"

namespace sdw {

// A point of [0,1): an exact rational, or a caller-supplied digit stream with
// a declared base (the stream length is its trusted depth).
struct RealPoint {
    std::optional<mpq_class> rational;
    std::optional<Word> stream;
    int stream_base = 0;

    static RealPoint from_rational(const mpq_class& q);
    static RealPoint from_stream(Word digits, int base);
};

struct DigitStream {
    Word digits;
    // (preperiod, period) when the expansion is eventually periodic and the
    // cycle was actually observed within the requested depth.
    std::optional<std::pair<size_t, size_t>> periodicity;
};

// First n base-p digits; exact for rationals, with remainder-cycle period
// detection.
DigitStream digits_of_real(const RealPoint& x, int base, size_t n);

struct OrbitProfile {
    int base = 2;
    std::vector<size_t> p_x;     // block counts, n = 1..n_max
    std::vector<double> dim_est; // log p_x(n) / (n log base)
    bool periodic = false;
    size_t preperiod = 0, period = 0;
    double dim = 0;   // 0 exactly for periodic streams, last estimate otherwise
    bool exact = false;
    std::string note; // "estimate (finite-n)" unless exact
};

// Block-counting profile of the orbit closure under multiplication by the
// base; prefix_len 0 means n_max^2 (longer when a period needs confirming).
OrbitProfile orbit_closure_profile(const RealPoint& x, int base, int n_max,
                                   size_t prefix_len = 0);

struct DependenceVerdict {
    bool dependent = false;
    long a = 0, b = 0;     // minimal exponents with p^a = q^b when dependent
    mpz_class common;      // the common value p^a
    std::optional<long> common_base; // primitive m with p, q both powers of m
};

DependenceVerdict multiplicative_dependence(long p, long q);

struct FurstenbergReport {
    std::optional<OrbitProfile> profile_p, profile_q;
    double s = 0; // sum of the available dimension estimates
    DependenceVerdict dependence;
    std::optional<OrbitProfile> common_base_profile; // dependent pairs only
    std::string note;
};

FurstenbergReport furstenberg_profile(const RealPoint& x, int p, int q, int n_max);

} // namespace sdw
