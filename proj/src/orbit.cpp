#include "sdw/orbit.hpp"

#include <cmath>
#include <map>
#include <numeric>

namespace sdw {

RealPoint RealPoint::from_rational(const mpq_class& q) {
    if (sgn(q) < 0 || q >= 1)
        throw ConfigError("point must be a rational in [0,1)");
    RealPoint x;
    x.rational = q;
    return x;
}

RealPoint RealPoint::from_stream(Word digits, int base) {
    if (base < 2) throw ConfigError("digit stream base must be >= 2");
    for (size_t i = 0; i < digits.size(); ++i)
        if (digits[i] >= base)
            throw ConfigError("digit stream contains a digit outside its base");
    RealPoint x;
    x.stream = std::move(digits);
    x.stream_base = base;
    return x;
}

DigitStream digits_of_real(const RealPoint& x, int base, size_t n) {
    if (base < 2) throw ConfigError("base must be >= 2");
    DigitStream out;
    if (x.stream) {
        if (base != x.stream_base)
            throw ConfigError("stream is declared in base " +
                              std::to_string(x.stream_base) +
                              ", requested base " + std::to_string(base));
        if (n > x.stream->size())
            throw ConfigError("requested depth exceeds the trusted stream depth");
        out.digits = x.stream->subword(0, n);
        return out;
    }
    if (!x.rational) throw ConfigError("empty point");
    // Long division: track numerators against the fixed denominator; the
    // numerator state cycling is exactly eventual periodicity.
    mpz_class num = x.rational->get_num(), den = x.rational->get_den();
    std::map<std::string, size_t> seen;
    for (size_t i = 0; i < n; ++i) {
        if (!out.periodicity) {
            std::string key = num.get_str();
            auto [it, fresh] = seen.emplace(std::move(key), i);
            if (!fresh) out.periodicity = {it->second, i - it->second};
        }
        num *= base;
        mpz_class d = num / den;
        num -= d * den;
        out.digits.push_back(static_cast<Symbol>(mpz_get_ui(d.get_mpz_t())));
    }
    return out;
}

OrbitProfile orbit_closure_profile(const RealPoint& x, int base, int n_max,
                                   size_t prefix_len) {
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    OrbitProfile out;
    out.base = base;
    size_t want = prefix_len ? prefix_len
                             : static_cast<size_t>(n_max) * static_cast<size_t>(n_max);
    want = std::max(want, static_cast<size_t>(2 * n_max));
    DigitStream ds;
    if (x.rational) {
        // Grow the prefix until the remainder cycle is seen twice: the block
        // counts are then exact for every n <= n_max.
        ds = digits_of_real(x, base, want);
        while (!ds.periodicity) {
            want *= 2;
            ds = digits_of_real(x, base, want);
        }
        std::pair<size_t, size_t> per = *ds.periodicity;
        size_t need = per.first + 2 * per.second + static_cast<size_t>(n_max);
        if (ds.digits.size() < need) ds = digits_of_real(x, base, need);
        out.periodic = true;
        out.preperiod = per.first;
        out.period = per.second;
        out.exact = true;
    } else {
        want = std::min(want, x.stream->size());
        if (want < static_cast<size_t>(n_max))
            throw ConfigError("stream shorter than n_max");
        ds = digits_of_real(x, base, want);
    }
    for (int n = 1; n <= n_max; ++n) {
        size_t c = complexity_function(ds.digits, static_cast<size_t>(n));
        out.p_x.push_back(c);
        out.dim_est.push_back(std::log(static_cast<double>(c)) /
                              (n * std::log(static_cast<double>(base))));
    }
    if (out.periodic) {
        // Finite orbit closure: dimension exactly 0.
        out.dim = 0;
        out.note = "eventually periodic (preperiod " + std::to_string(out.preperiod) +
                   ", period " + std::to_string(out.period) + "); orbit closure finite";
    } else {
        out.dim = out.dim_est.back();
        out.note = "estimate (finite-n block counting on a depth-" +
                   std::to_string(ds.digits.size()) + " prefix)";
    }
    return out;
}

namespace {

std::map<long, long> factorize(long n) {
    std::map<long, long> f;
    for (long p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            ++f[p];
            n /= p;
        }
    if (n > 1) ++f[n];
    return f;
}

} // namespace

DependenceVerdict multiplicative_dependence(long p, long q) {
    if (p < 2 || q < 2) throw ConfigError("bases must be integers >= 2");
    DependenceVerdict v;
    std::map<long, long> fp = factorize(p), fq = factorize(q);
    if (fp.size() != fq.size()) return v;
    // Same support and proportional exponent vectors <=> common power base.
    std::vector<long> ep, eq;
    for (auto itp = fp.begin(), itq = fq.begin(); itp != fp.end(); ++itp, ++itq) {
        if (itp->first != itq->first) return v;
        ep.push_back(itp->second);
        eq.push_back(itq->second);
    }
    for (size_t k = 1; k < ep.size(); ++k)
        if (ep[k] * eq[0] != eq[k] * ep[0]) return v;
    long g0 = std::gcd(ep[0], eq[0]);
    long i = ep[0] / g0, j = eq[0] / g0; // p = m^i, q = m^j with gcd(i,j) = 1
    for (size_t k = 0; k < ep.size(); ++k)
        if (ep[k] % i != 0 || eq[k] % j != 0) return v;
    v.dependent = true;
    v.a = j;
    v.b = i;
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(j));
    v.common = pw;
    long m = 1;
    {
        auto it = fp.begin();
        for (size_t k = 0; k < ep.size(); ++k, ++it)
            for (long e = 0; e < ep[k] / i; ++e) m *= it->first;
    }
    v.common_base = m;
    return v;
}

FurstenbergReport furstenberg_profile(const RealPoint& x, int p, int q, int n_max) {
    FurstenbergReport out;
    out.dependence = multiplicative_dependence(p, q);
    if (x.rational) {
        out.profile_p = orbit_closure_profile(x, p, n_max);
        out.profile_q = orbit_closure_profile(x, q, n_max);
        out.s = out.profile_p->dim + out.profile_q->dim;
        if (out.dependence.dependent)
            out.common_base_profile =
                orbit_closure_profile(x, static_cast<int>(*out.dependence.common_base),
                                      n_max);
    } else {
        // Streams are single-base: only the matching profile is available.
        if (x.stream_base == p) {
            out.profile_p = orbit_closure_profile(x, p, n_max);
            out.s = out.profile_p->dim;
            out.note = "q-profile requires exact-rational or base-q stream input";
        } else if (x.stream_base == q) {
            out.profile_q = orbit_closure_profile(x, q, n_max);
            out.s = out.profile_q->dim;
            out.note = "p-profile requires exact-rational or base-p stream input";
        } else {
            throw ConfigError("stream base matches neither p nor q");
        }
    }
    return out;
}

} // namespace sdw
