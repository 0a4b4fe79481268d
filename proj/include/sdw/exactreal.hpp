#pragma once

#include <gmpxx.h>
#include <map>
#include <string>

#include "errors.hpp"

namespace sdw {

// Exact element of the real quadratic field Q(sqrt(d)):  a + b*sqrt(d)
// with a, b rational and d a fixed non-negative integer.  d = 0 (or a
// perfect square, which the constructor collapses) means the value is plain
// rational.  Mixing two genuinely different radicands is an error.
class Quadratic {
public:
    Quadratic() : a_(0), b_(0), d_(0) {}
    Quadratic(long v) : a_(v), b_(0), d_(0) {}
    Quadratic(const mpq_class& a) : a_(a), b_(0), d_(0) {}
    Quadratic(const mpq_class& a, const mpq_class& b, const mpz_class& d);

    static Quadratic sqrt_of(const mpz_class& d);

    const mpq_class& a() const { return a_; }
    const mpq_class& b() const { return b_; }
    const mpz_class& d() const { return d_; }

    bool is_rational() const { return b_ == 0; }
    // Valid only when is_rational().
    const mpq_class& rational() const;

    Quadratic operator+(const Quadratic& o) const;
    Quadratic operator-(const Quadratic& o) const;
    Quadratic operator-() const;
    Quadratic operator*(const Quadratic& o) const;
    Quadratic inverse() const;
    Quadratic operator/(const Quadratic& o) const;
    Quadratic pow(long e) const; // e may be negative

    bool operator==(const Quadratic& o) const { return (*this - o).sign() == 0; }

    // Exact sign: -1, 0, +1.  Decided by comparing a^2 against b^2 d when
    // the two terms pull in opposite directions; no floating point involved.
    int sign() const;
    int compare(const Quadratic& o) const { return (*this - o).sign(); }

    mpz_class floor() const;
    double to_double() const;
    std::string str() const;

private:
    mpq_class a_, b_;
    mpz_class d_;

    // Promote the pair to a common radicand; throws ConfigError on a clash.
    static mpz_class common_d(const Quadratic& x, const Quadratic& y);
};

// Exact real kept in "log space": a rational constant plus a rational
// combination of logarithms of interned positive atoms (primes and quadratic
// irrationals).  log(6) is stored as log(2)+log(3), so cancellations like
// log(6) - log(2) - log(3) normalize to a literal zero and sign() is exact.
// When the symbolic form is not literally zero, sign() first tries an exact
// product comparison (clearing denominators and comparing integer powers) and
// otherwise falls back to MPFR interval refinement; an interval that cannot
// separate from zero within the precision budget raises PrecisionError.
class LogReal {
public:
    LogReal() : cst_(0) {}

    static LogReal rational(const mpq_class& q);
    static LogReal log_rational(const mpq_class& q);   // requires q > 0
    static LogReal log_quadratic(const Quadratic& v);  // requires v > 0

    LogReal operator+(const LogReal& o) const;
    LogReal operator-(const LogReal& o) const;
    LogReal operator-() const;
    LogReal scaled(const mpq_class& c) const;
    LogReal& operator+=(const LogReal& o) { *this = *this + o; return *this; }
    LogReal& operator-=(const LogReal& o) { *this = *this - o; return *this; }

    bool is_literal_zero() const { return cst_ == 0 && lg_.empty(); }

    int sign() const;           // certified; may throw PrecisionError
    int compare(const LogReal& o) const { return (*this - o).sign(); }
    bool operator<(const LogReal& o) const { return compare(o) < 0; }
    bool operator<=(const LogReal& o) const { return compare(o) <= 0; }
    bool operator>(const LogReal& o) const { return compare(o) > 0; }
    bool operator>=(const LogReal& o) const { return compare(o) >= 0; }
    bool operator==(const LogReal& o) const { return compare(o) == 0; }

    double value() const;       // best-effort double, not certified

private:
    mpq_class cst_;
    std::map<int, mpq_class> lg_; // atom id -> coefficient of log(atom)

    void drop_zeros();
    friend LogReal atom_combination(mpq_class cst, std::map<int, mpq_class> lg);
};

inline const LogReal& min(const LogReal& x, const LogReal& y) { return y < x ? y : x; }
inline const LogReal& max(const LogReal& x, const LogReal& y) { return x < y ? y : x; }

} // namespace sdw
