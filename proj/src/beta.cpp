#include "sdw/beta.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace sdw {

namespace detail {

// Number the engine iterates on: exact (quadratic field element, which also
// covers rationals) or a rational interval enclosing the true value.
struct BNum {
    bool exact = true;
    Quadratic q;
    mpq_class lo, hi;

    static BNum of(const Quadratic& v) { return BNum{true, v, 0, 0}; }
    static BNum interval(const mpq_class& lo, const mpq_class& hi) {
        return BNum{false, Quadratic(), lo, hi};
    }
};

struct BetaEngine {
    std::mutex mu;

    enum class Kind { Integer, Rational, QuadraticIrr, Decimal } kind;
    long int_k = 0;            // Kind::Integer
    Quadratic exact_beta;      // exact kinds
    mpq_class dec_lo, dec_hi;  // Kind::Decimal
    std::string dec_text;      // original literal, for str()
    int dec_prec = 0;
    int alphabet = 0;

    // Greedy expansion state (non-integer kinds).
    std::vector<int> greedy;
    bool greedy_finite = false;
    BNum rem;
    std::vector<std::pair<std::string, int>> seen_states; // exact kinds only
    std::optional<std::pair<int, int>> greedy_period;

    BNum beta_num() const {
        if (kind == Kind::Decimal) return BNum::interval(dec_lo, dec_hi);
        return BNum::of(exact_beta);
    }

    static std::string state_key(const Quadratic& q) {
        return q.a().get_str() + "|" + q.b().get_str() + "|" + q.d().get_str();
    }

    // One greedy step on r: returns digit, mutates r := beta*r - d.
    int greedy_step(BNum& r) {
        BNum b = beta_num();
        if (r.exact) {
            Quadratic y = b.q * r.q;
            mpz_class f = y.floor();
            long d = mpz_get_si(f.get_mpz_t());
            r.q = y - Quadratic(mpq_class(f));
            return static_cast<int>(d);
        }
        // Interval path: all quantities are >= 0 here.
        mpq_class ylo = b.lo * r.lo, yhi = b.hi * r.hi;
        mpz_class flo, fhi;
        mpz_fdiv_q(flo.get_mpz_t(), ylo.get_num_mpz_t(), ylo.get_den_mpz_t());
        mpz_fdiv_q(fhi.get_mpz_t(), yhi.get_num_mpz_t(), yhi.get_den_mpz_t());
        if (flo != fhi)
            throw PrecisionError("decimal beta: digit floor undecidable at the given "
                                 "precision (expansion depth " +
                                 std::to_string(greedy.size() + 1) + ")");
        r.lo = ylo - mpq_class(flo);
        r.hi = yhi - mpq_class(flo);
        return static_cast<int>(mpz_get_si(flo.get_mpz_t()));
    }

    // Extend the cached greedy expansion of 1 to `depth` digits (or until it
    // terminates).  Caller holds the mutex.
    void extend_greedy(int depth) {
        if (kind == Kind::Integer)
            throw ConfigError("internal: greedy machinery on integer beta");
        if (greedy.empty() && !greedy_finite) {
            rem = beta_num().exact ? BNum::of(Quadratic(mpq_class(1)))
                                   : BNum::interval(1, 1);
        }
        while (static_cast<int>(greedy.size()) < depth && !greedy_finite) {
            if (rem.exact) {
                if (rem.q.sign() == 0) { greedy_finite = true; break; }
                if (!greedy_period) {
                    std::string key = state_key(rem.q);
                    for (auto& [k2, idx] : seen_states) {
                        if (k2 == key) {
                            greedy_period = {idx, static_cast<int>(greedy.size()) - idx};
                            break;
                        }
                    }
                    if (!greedy_period)
                        seen_states.emplace_back(key, static_cast<int>(greedy.size()));
                }
                if (greedy_period) {
                    // Digits repeat; read them off the cache.
                    auto [pre, per] = *greedy_period;
                    int i = pre + (static_cast<int>(greedy.size()) - pre) % per;
                    greedy.push_back(greedy[static_cast<size_t>(i)]);
                    continue;
                }
            } else {
                // True remainder is >= 0; a certified-zero interval cannot
                // happen from a finite decimal literal, and an interval
                // straddling 0 means we can no longer tell terminating from
                // tiny -- refuse.
                if (sgn(rem.lo) <= 0 && sgn(rem.hi) >= 0 && !(rem.lo == 0 && rem.hi == 0))
                    throw PrecisionError(
                        "decimal beta: cannot distinguish a terminating expansion "
                        "from a small remainder at the given precision");
            }
            greedy.push_back(greedy_step(rem));
            // Detect termination eagerly: the requested depth may end exactly
            // on the digit that zeroes the remainder, and d* readers need the
            // finite flag before asking for the next digit.
            if (rem.exact && rem.q.sign() == 0) greedy_finite = true;
        }
    }

    // 0-based digit of the quasi-greedy expansion d*.
    int dstar_digit(int i) {
        if (kind == Kind::Integer) return static_cast<int>(int_k - 1);
        extend_greedy(i + 1);
        if (greedy_finite) {
            int M = static_cast<int>(greedy.size());
            int j = i % M;
            int d = greedy[static_cast<size_t>(j)];
            return j == M - 1 ? d - 1 : d;
        }
        if (greedy_period && i >= static_cast<int>(greedy.size())) {
            auto [pre, per] = *greedy_period;
            return greedy[static_cast<size_t>(pre + (i - pre) % per)];
        }
        return greedy[static_cast<size_t>(i)];
    }

    // (preperiod, period) of d*, probing the greedy recursion to `explore`.
    std::optional<std::pair<int, int>> dstar_period(int explore) {
        if (kind == Kind::Integer) return std::make_pair(0, 1);
        extend_greedy(explore);
        if (greedy_finite) return std::make_pair(0, static_cast<int>(greedy.size()));
        return greedy_period;
    }
};

} // namespace detail

using detail::BetaEngine;

namespace {

constexpr int kPeriodProbeDepth = 512;  // how far we look for d* periodicity
constexpr int kDepthLimit = 2048;       // fallback comparison depth when aperiodic

std::shared_ptr<BetaEngine> make_engine() { return std::make_shared<BetaEngine>(); }

// Alphabet of a non-integer beta: floor(beta) + 1.
int alphabet_of(BetaEngine& e) {
    if (e.kind == BetaEngine::Kind::Decimal) {
        mpz_class flo, fhi;
        mpz_fdiv_q(flo.get_mpz_t(), e.dec_lo.get_num_mpz_t(), e.dec_lo.get_den_mpz_t());
        mpz_fdiv_q(fhi.get_mpz_t(), e.dec_hi.get_num_mpz_t(), e.dec_hi.get_den_mpz_t());
        if (flo != fhi)
            throw PrecisionError("decimal beta: floor(beta) undecidable at the given precision");
        return static_cast<int>(mpz_get_si(flo.get_mpz_t())) + 1;
    }
    return static_cast<int>(mpz_get_si(e.exact_beta.floor().get_mpz_t())) + 1;
}

} // namespace

BetaSpec BetaSpec::integer(long k) {
    if (k < 2) throw ConfigError("integer beta must be >= 2");
    BetaSpec b;
    b.eng_ = make_engine();
    b.eng_->kind = BetaEngine::Kind::Integer;
    b.eng_->int_k = k;
    b.eng_->exact_beta = Quadratic(mpq_class(k));
    b.eng_->alphabet = static_cast<int>(k);
    return b;
}

BetaSpec BetaSpec::golden() { return quadratic(1, 1, 2, 5); }

BetaSpec BetaSpec::quadratic(long a, long b, long c, const mpz_class& d) {
    if (c == 0) throw ConfigError("quadratic beta: zero denominator");
    Quadratic v(mpq_class(a, c), mpq_class(b, c), d);
    if (v.compare(Quadratic(mpq_class(1))) <= 0)
        throw ConfigError("beta must exceed 1");
    if (v.is_rational()) {
        const mpq_class& q = v.rational();
        if (q.get_den() == 1) return integer(mpz_get_si(q.get_num_mpz_t()));
        return rational(q);
    }
    BetaSpec s;
    s.eng_ = make_engine();
    s.eng_->kind = BetaEngine::Kind::QuadraticIrr;
    s.eng_->exact_beta = v;
    s.eng_->alphabet = alphabet_of(*s.eng_);
    return s;
}

BetaSpec BetaSpec::rational(const mpq_class& q_in) {
    mpq_class q = q_in;
    q.canonicalize();
    if (q <= 1) throw ConfigError("beta must exceed 1");
    if (q.get_den() == 1) return integer(mpz_get_si(q.get_num_mpz_t()));
    BetaSpec s;
    s.eng_ = make_engine();
    s.eng_->kind = BetaEngine::Kind::Rational;
    s.eng_->exact_beta = Quadratic(q);
    s.eng_->alphabet = alphabet_of(*s.eng_);
    return s;
}

BetaSpec BetaSpec::decimal(const std::string& digits, int precision_digits) {
    if (precision_digits < 1) throw ConfigError("decimal beta: precision must be >= 1");
    // Parse the literal exactly as a rational.
    std::string t = digits;
    size_t dot = t.find('.');
    std::string intpart = dot == std::string::npos ? t : t.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : t.substr(dot + 1);
    if (intpart.empty() || intpart.find_first_not_of("0123456789") != std::string::npos ||
        frac.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("decimal beta: bad literal '" + digits + "'");
    mpz_class num(intpart + frac, 10);
    mpz_class den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    mpq_class mid(num, den);
    mid.canonicalize();
    mpz_class p10 = 1;
    for (int i = 0; i < precision_digits; ++i) p10 *= 10;
    mpq_class half(1, 2 * p10);
    BetaSpec s;
    s.eng_ = make_engine();
    s.eng_->kind = BetaEngine::Kind::Decimal;
    s.eng_->dec_lo = mid - half;
    s.eng_->dec_hi = mid + half;
    s.eng_->dec_text = digits;
    s.eng_->dec_prec = precision_digits;
    if (s.eng_->dec_lo <= 1)
        throw ConfigError("beta must exceed 1 (certified)");
    s.eng_->alphabet = alphabet_of(*s.eng_);
    return s;
}

bool BetaSpec::is_integer() const { return eng_->kind == BetaEngine::Kind::Integer; }

long BetaSpec::integer_value() const {
    if (!is_integer()) throw ConfigError("beta is not an integer");
    return eng_->int_k;
}

int BetaSpec::alphabet_size() const { return eng_->alphabet; }

double BetaSpec::to_double() const {
    if (eng_->kind == BetaEngine::Kind::Decimal)
        return (eng_->dec_lo.get_d() + eng_->dec_hi.get_d()) / 2;
    return eng_->exact_beta.to_double();
}

LogReal BetaSpec::log_beta() const {
    if (eng_->kind == BetaEngine::Kind::Decimal)
        throw ConfigError("log(beta) requires an exact beta presentation "
                          "(integer, quadratic or rational)");
    return LogReal::log_quadratic(eng_->exact_beta);
}

std::string BetaSpec::str() const {
    switch (eng_->kind) {
        case BetaEngine::Kind::Integer:
            return "integer:" + std::to_string(eng_->int_k);
        case BetaEngine::Kind::Decimal:
            return "decimal:" + eng_->dec_text + "@" + std::to_string(eng_->dec_prec);
        default: {
            const Quadratic& q = eng_->exact_beta;
            // (a + b sqrt(d))/c with a common denominator c.
            mpz_class c;
            mpz_lcm(c.get_mpz_t(), q.a().get_den_mpz_t(), q.b().get_den_mpz_t());
            mpz_class a = mpz_class(q.a().get_num() * (c / q.a().get_den()));
            mpz_class b = mpz_class(q.b().get_num() * (c / q.b().get_den()));
            mpz_class d = q.d() == 0 ? mpz_class(1) : q.d();
            return "quadratic:" + a.get_str() + "," + b.get_str() + "," + c.get_str() +
                   "," + d.get_str();
        }
    }
}

BetaDigits expansion_of_one(const BetaSpec& beta, int depth) {
    if (depth < 1) throw ConfigError("depth must be >= 1");
    auto e = beta.engine();
    std::lock_guard<std::mutex> lk(e->mu);
    BetaDigits out;
    if (beta.is_integer()) {
        // 1 = k * k^{-1}: the greedy machinery is bypassed by convention.
        out.digits = {static_cast<int>(e->int_k)};
        out.finite = true;
        out.periodicity = {0, 1};
        return out;
    }
    e->extend_greedy(depth);
    out.digits.assign(e->greedy.begin(),
                      e->greedy.begin() +
                          std::min<size_t>(e->greedy.size(), static_cast<size_t>(depth)));
    out.finite = e->greedy_finite && static_cast<int>(e->greedy.size()) <= depth;
    out.periodicity = e->greedy_period;
    return out;
}

BetaDigits quasi_greedy_expansion(const BetaSpec& beta, int depth) {
    if (depth < 1) throw ConfigError("depth must be >= 1");
    auto e = beta.engine();
    std::lock_guard<std::mutex> lk(e->mu);
    BetaDigits out;
    for (int i = 0; i < depth; ++i) out.digits.push_back(e->dstar_digit(i));
    out.finite = false; // d* is infinite by construction
    out.periodicity = e->dstar_period(std::max(depth, kPeriodProbeDepth));
    return out;
}

namespace {

// Lexicographic comparison of suffix.d* against d* itself, the common core of
// admissibility and fullness.  `suffix` may be empty.
//
// Returns -1/0/+1 when decided within `limit` compared symbols; when no
// difference shows up within the limit, returns 0 with *certain=false unless
// the limit provably covers a full eventual period.
int compare_against_dstar(BetaEngine& e, WordView suffix, int limit, bool* certain) {
    *certain = true;
    for (int i = 0; i < limit; ++i) {
        int a = i < static_cast<int>(suffix.size())
                    ? suffix[static_cast<size_t>(i)]
                    : e.dstar_digit(i - static_cast<int>(suffix.size()));
        int b = e.dstar_digit(i);
        if (a != b) return a < b ? -1 : 1;
    }
    auto per = e.dstar_period(kPeriodProbeDepth);
    if (per) {
        int needed = static_cast<int>(suffix.size()) + per->first + 2 * per->second;
        if (limit >= needed) return 0; // genuinely equal streams
    }
    *certain = false;
    return 0;
}

int fullness_limit(BetaEngine& e, size_t extra) {
    auto per = e.dstar_period(kPeriodProbeDepth);
    if (per) return static_cast<int>(extra) + per->first + 2 * per->second;
    return static_cast<int>(extra) + kDepthLimit;
}

} // namespace

bool is_admissible_beta(const BetaSpec& beta, WordView w) {
    auto e = beta.engine();
    std::lock_guard<std::mutex> lk(e->mu);
    int m = e->alphabet;
    for (Symbol a : w)
        if (a >= m) return false;
    if (beta.is_integer()) return true;
    // Finite comparison: sigma^k(w) <= d* truncated to the compared length.
    for (size_t k = 0; k < w.size(); ++k) {
        WordView suf = w.subspan(k);
        for (size_t i = 0; i < suf.size(); ++i) {
            int d = e->dstar_digit(static_cast<int>(i));
            if (suf[i] != d) {
                if (suf[i] > d) return false;
                break; // strictly below d*: this suffix is fine
            }
        }
    }
    return true;
}

FullWordVerdict is_full_word(const BetaSpec& beta, WordView w) {
    auto e = beta.engine();
    std::lock_guard<std::mutex> lk(e->mu);
    for (Symbol a : w)
        if (a >= e->alphabet)
            throw ConfigError("is_full_word: symbol out of range");
    if (beta.is_integer()) return {true, true};
    FullWordVerdict out{true, true};
    // w is full iff the infinite word w.d* is in the shift, i.e. every shifted
    // suffix (suffix of w followed by d*) is <= d*.
    for (size_t j = 0; j < w.size(); ++j) {
        WordView suf = w.subspan(j);
        // First re-check plain admissibility of the suffix against d*.
        bool certain = true;
        int limit = fullness_limit(*e, suf.size());
        int c = compare_against_dstar(*e, suf, limit, &certain);
        if (c > 0) return {false, true};
        if (!certain) out.certain = false;
    }
    return out;
}

SubshiftSpec build_beta_shift(const BetaSpec& beta) {
    SubshiftSpec s;
    s.alphabet.size = beta.alphabet_size();
    s.kind = ShiftKind::Beta;
    BetaSpec b = beta; // shared engine travels with the closures
    s.admissible = [b](WordView w) { return is_admissible_beta(b, w); };
    s.tau = 0;
    s.in_Cp = [](WordView w) { return w.empty(); };
    s.in_G = [b](WordView w) { return is_full_word(b, w).full; };
    s.in_Cs = [b](WordView w) {
        auto e = b.engine();
        std::lock_guard<std::mutex> lk(e->mu);
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i] != e->dstar_digit(static_cast<int>(i))) return false;
        return true;
    };
    // C^p = {empty}, C^s = prefixes of d*: one word per positive length.
    s.ps_words = [b](int n) {
        std::vector<Word> out;
        if (n <= 0) return out;
        auto e = b.engine();
        std::lock_guard<std::mutex> lk(e->mu);
        Word w;
        for (int i = 0; i < n; ++i)
            w.push_back(static_cast<Symbol>(e->dstar_digit(i)));
        out.push_back(std::move(w));
        return out;
    };
    return s;
}

Word beta_digits_of_real(const mpq_class& x, const BetaSpec& beta, int n) {
    if (x < 0 || x >= 1) throw ConfigError("beta digits: x must lie in [0,1)");
    if (n < 0) throw ConfigError("negative depth");
    auto e = beta.engine();
    std::lock_guard<std::mutex> lk(e->mu);
    detail::BNum t = e->beta_num().exact ? detail::BNum::of(Quadratic(x))
                                         : detail::BNum::interval(x, x);
    Word out;
    for (int i = 0; i < n; ++i) {
        int d = e->greedy_step(t);
        if (d < 0 || d >= e->alphabet)
            throw ConfigError("internal: digit out of range in beta expansion");
        out.push_back(static_cast<Symbol>(d));
    }
    return out;
}

} // namespace sdw
