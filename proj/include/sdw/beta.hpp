#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exactreal.hpp"
#include "subshift.hpp"

namespace sdw {

struct BetaDigits {
    std::vector<int> digits;
    bool finite = false; // greedy expansion of 1 terminated (remainder hit 0)
    // (preperiod, period) of the quasi-greedy expansion d*, when known.
    std::optional<std::pair<int, int>> periodicity;
};

struct FullWordVerdict {
    bool full = false;
    bool certain = true; // false when decided only to a depth limit
};

namespace detail {
struct BetaEngine;
}

// A real base beta > 1 given exactly (integer, rational, quadratic irrational)
// or as a decimal literal with an explicit precision interval.  Every floor
// and lexicographic decision is certified: exact presentations decide exactly,
// the decimal presentation refuses (PrecisionError) rather than guess.
class BetaSpec {
public:
    static BetaSpec integer(long k);               // k >= 2; full-shift convention
    static BetaSpec golden();                      // (1+sqrt(5))/2
    static BetaSpec quadratic(long a, long b, long c, const mpz_class& d); // (a+b*sqrt(d))/c
    static BetaSpec rational(const mpq_class& q);  // q > 1
    static BetaSpec decimal(const std::string& digits, int precision_digits);

    bool is_integer() const;
    long integer_value() const; // valid only when is_integer()
    int alphabet_size() const;  // floor(beta)+1, or k for integer beta
    double to_double() const;
    LogReal log_beta() const;   // exact presentations only
    std::string str() const;    // round-trips through the config grammar

    std::shared_ptr<detail::BetaEngine> engine() const { return eng_; }

private:
    BetaSpec() = default;
    std::shared_ptr<detail::BetaEngine> eng_;
};

// Greedy expansion of 1: d_n = floor(beta * r_{n-1}), r_n = beta*r_{n-1} - d_n.
BetaDigits expansion_of_one(const BetaSpec& beta, int depth);

// Quasi-greedy expansion d*: the greedy one when infinite; when greedy is
// finite d_1..d_M, the periodic word (d_1..d_{M-1}(d_M - 1))^inf.
BetaDigits quasi_greedy_expansion(const BetaSpec& beta, int depth);

// Parry criterion: every shifted suffix of w is lexicographically <= d*.
bool is_admissible_beta(const BetaSpec& beta, WordView w);

// w is full iff w . (d*|_k) is admissible for every k; exact when d* is
// eventually periodic, depth-limited (flagged) otherwise.
FullWordVerdict is_full_word(const BetaSpec& beta, WordView w);

SubshiftSpec build_beta_shift(const BetaSpec& beta);

// First n greedy digits of x in base beta (T_beta iteration), certified.
Word beta_digits_of_real(const mpq_class& x, const BetaSpec& beta, int n);

} // namespace sdw
