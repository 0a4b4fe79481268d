#include "sdw/construct.hpp"

#include "sdw/cover.hpp"
#include "sdw/thermo.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mpfr.h>

namespace sdw {

namespace {

// All randomness in the tower flows from one 64-bit seed through SplitMix64.
std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t level, std::uint64_t idx) {
    std::uint64_t s = seed;
    (void)splitmix64(s);
    s ^= 0x632BE59BD9B4E019ULL * (level + 1);
    (void)splitmix64(s);
    s ^= idx;
    return splitmix64(s);
}

std::uint64_t fold_mpz(const mpz_class& j) {
    // Fold 64-bit limbs of |j| into one word (enough distinct keys in practice).
    mpz_class t = j;
    std::uint64_t acc = 0;
    for (int r = 0; t != 0 && r < 8; ++r) {
        acc = ((acc << 13) | (acc >> 51)) ^ mpz_get_ui(t.get_mpz_t());
        mpz_fdiv_q_2exp(t.get_mpz_t(), t.get_mpz_t(), 64);
    }
    return acc;
}

std::vector<std::uint32_t> fisher_yates(size_t n, std::uint64_t key) {
    std::vector<std::uint32_t> p(n);
    for (size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
    std::uint64_t s = key;
    for (size_t i = n; i > 1; --i) {
        size_t j = static_cast<size_t>(splitmix64(s) % i);
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

mpz_class mpz_uniform(const mpz_class& n, std::uint64_t key) {
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2) + 64;
    mpz_class acc = 0;
    std::uint64_t s = key;
    for (size_t got = 0; got < bits; got += 64) {
        acc <<= 64;
        acc += splitmix64(s);
    }
    return acc % n;
}

// Lazy affine permutation j -> (a j + b) mod n for astronomically large n.
struct AffinePerm {
    mpz_class a, b, n;
    AffinePerm(const mpz_class& n_, std::uint64_t key) : n(n_) {
        a = mpz_uniform(n, key ^ 0x1111111111111111ULL);
        if (a == 0) a = 1;
        mpz_class g;
        while (true) {
            mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
            if (g == 1) break;
            a = (a + 1) % n;
            if (a == 0) a = 1;
        }
        b = mpz_uniform(n, key ^ 0x2222222222222222ULL);
    }
    mpz_class operator()(const mpz_class& j) const { return (a * j + b) % n; }
};

// Appends gluing word + brick to `out`, validating the gluing against a tail
// window (SFT/S-gap/beta admissibility is local, so a generous window is
// exact for every shift in the zoo).
struct Emitter {
    const SubshiftSpec& shift;
    int tau;
    size_t target;
    size_t cap;
    Word out;
    std::vector<Word> connectors; // L_tau, lex order

    Emitter(const SubshiftSpec& sh, int t, size_t tgt, size_t cp)
        : shift(sh), tau(t), target(tgt), cap(cp) {
        if (target > cap)
            throw CapError("requested prefix length exceeds the generation cap");
        if (tau > 0) {
            LanguageSlice l = enumerate_language(shift, tau);
            for (size_t i = 0; i < l.count; ++i) connectors.push_back(l.word_copy(i));
        }
    }

    // false once the target length is reached.
    bool emit(const Word& brick) {
        if (!out.empty() && tau > 0) {
            size_t w = std::min(out.size(), brick.size() + 2 * static_cast<size_t>(tau) + 64);
            WordView tail = out.view().subspan(out.size() - w);
            bool glued = false;
            for (const Word& j : connectors) {
                Word cand{tail};
                cand.append(j);
                cand.append(brick);
                if (shift.admissible(cand)) {
                    out.append(j);
                    glued = true;
                    break;
                }
            }
            if (!glued)
                throw SpecificationError("no gluing word fits during generation");
        }
        out.append(brick);
        return out.size() < target;
    }

    Word take() {
        if (out.size() > target) out = out.subword(0, target);
        return std::move(out);
    }
};

} // namespace

Word construct_dense_point(const SubshiftSpec& shift, size_t target_length, size_t cap) {
    if (!shift.has_decomposition())
        throw SpecificationError("dense-point construction needs specification metadata");
    int tau = *shift.tau;
    // Enumerate G by length then lex and chain everything.
    Emitter em(shift, tau, target_length, cap);
    for (int len = 1;; ++len) {
        LanguageSlice l = enumerate_language(shift, len, cap);
        bool progressed = false;
        for (size_t i = 0; i < l.count; ++i) {
            WordView w = l.word(i);
            if (!shift.in_G(w)) continue;
            progressed = true;
            if (!em.emit(l.word_copy(i))) return em.take();
        }
        if (!progressed && len > 40)
            throw SpecificationError("core G produced no words up to length 40");
    }
}

ConstructionPlan plan_intermediate_entropy(const SubshiftSpec& shift, double h,
                                           std::optional<long> l1_hint,
                                           std::uint64_t seed, int depth, long l1_cap,
                                           size_t cap) {
    if (!shift.has_decomposition())
        throw SpecificationError("tower construction needs specification metadata");
    if (h < 0) throw ConfigError("target entropy must be non-negative");
    int tau = *shift.tau;
    int m = shift.alphabet.size;

    {
        GrowthEstimate est = entropy_estimate(shift, 10, cap);
        if (h > est.upper + 1e-9)
            throw ConfigError("target entropy exceeds the entropy upper bound " +
                              std::to_string(est.upper));
    }

    ConstructionPlan plan;
    plan.h = h;
    plan.tau = tau;
    plan.seed = seed;
    plan.alphabet = m;

    std::string last_reason = "no feasible l1 tried";
    for (long l1 = std::max<long>(1, l1_hint.value_or(1)); l1 <= l1_cap; ++l1) {
        double X = (static_cast<double>(l1) + tau) * h + 2.0;
        double eX = std::exp(X);
        if (eX > 9e17) {
            last_reason = "brick count bracket exceeds representable integers";
            break;
        }
        long n1 = static_cast<long>(std::floor(eX));
        while (std::log(static_cast<double>(n1)) < X) ++n1;
        if (!(std::log(static_cast<double>(n1)) < X + 1.0)) {
            last_reason = "no integer in the bracket [e^{(l1+tau)h+2}, e^{(l1+tau)h+3})";
            continue;
        }
        // Count the core words of length l1.
        LanguageSlice l = enumerate_language(shift, static_cast<int>(l1), cap);
        std::vector<Word> core;
        for (size_t i = 0; i < l.count && static_cast<long>(core.size()) < n1; ++i)
            if (shift.in_G(l.word(i))) core.push_back(l.word_copy(i));
        if (static_cast<long>(core.size()) < n1) {
            last_reason = "needed n1 = " + std::to_string(n1) + " bricks at l1 = " +
                          std::to_string(l1) + " but #G_{l1} is smaller (h too close to "
                          "h_top at this scale; for h = h_top use the dense-orbit path)";
            continue;
        }
        double l2 = static_cast<double>(l1) * n1 + static_cast<double>(n1 - 1) * tau;
        double lhs = static_cast<double>(n1) * (std::log(static_cast<double>(n1)) - 1.0);
        if (!(lhs > l2 * h + 2.0)) {
            last_reason = "feasibility n1(log n1 - 1) > l2 h + 2 failed at l1 = " +
                          std::to_string(l1);
            continue;
        }
        plan.l1 = l1;
        plan.n1 = n1;
        plan.bricks = std::move(core);
        break;
    }
    if (plan.n1 == 0)
        throw InfeasibleError("intermediate-entropy plan infeasible up to l1 = " +
                              std::to_string(l1_cap) + ": " + last_reason);

    // Schedule: l_{k+1} = l_k n_k + (n_k - 1) tau, with log n_{k+1} in
    // [(l_{k+1}+tau) h + 2, +3).  Stop once even log n_k overflows doubles.
    SchedulePoint s1;
    s1.k = 1;
    s1.l_exact = plan.l1;
    s1.n_exact = plan.n1;
    s1.n_big = mpz_class(plan.n1);
    s1.log_l = std::log(static_cast<double>(plan.l1));
    s1.log_n = std::log(static_cast<double>(plan.n1));
    plan.schedule.push_back(s1);
    for (int k = 2; k <= depth; ++k) {
        const SchedulePoint& prev = plan.schedule.back();
        SchedulePoint sp;
        sp.k = k;
        if (prev.l_exact && prev.n_exact &&
            *prev.l_exact < 9e15 / *prev.n_exact) {
            long lk = *prev.l_exact * *prev.n_exact + (*prev.n_exact - 1) * plan.tau;
            sp.l_exact = lk;
            sp.log_l = std::log(static_cast<double>(lk));
        } else {
            // l_{k} = n_{k-1}(l_{k-1} + tau) - tau; the -tau is invisible in logs.
            sp.log_l = prev.log_n +
                       std::log(std::exp(std::min(prev.log_l, 700.0)) + plan.tau);
            if (prev.log_l > 690) sp.log_l = prev.log_n + prev.log_l; // l >> tau
        }
        double X = sp.log_l; // placeholder; real X needs l itself
        if (sp.l_exact) {
            X = (static_cast<double>(*sp.l_exact) + plan.tau) * h + 2.0;
        } else {
            if (sp.log_l > std::log(std::numeric_limits<double>::max()) - 5) break;
            X = std::exp(sp.log_l) * h + 2.0; // l + tau ~ l at this magnitude
            if (!std::isfinite(X)) break;
        }
        sp.log_n = X; // smallest integer above e^X has essentially this log
        if (X < 40000) {
            // Materialize n_k exactly: ceil(e^X) as a big integer.
            mpfr_t t;
            mpfr_init2(t, 64 + static_cast<mpfr_prec_t>(X * 1.5));
            mpfr_set_d(t, X, MPFR_RNDN);
            mpfr_exp(t, t, MPFR_RNDU);
            mpz_class n;
            mpfr_get_z(n.get_mpz_t(), t, MPFR_RNDU); // smallest integer >= e^X
            mpfr_clear(t);
            sp.n_big = n;
            if (n < 9e17) sp.n_exact = mpz_get_si(n.get_mpz_t());
            sp.log_n = std::log(n.get_d());
            if (!std::isfinite(sp.log_n)) sp.log_n = X;
        }
        // Feasibility n_k <= n_{k-1}! via log(n_{k-1}!) >= n_{k-1}(log n_{k-1}-1).
        double log_fact;
        if (prev.n_exact && *prev.n_exact < 1e6) {
            log_fact = std::lgamma(static_cast<double>(*prev.n_exact) + 1.0);
        } else {
            log_fact = std::exp(prev.log_n) * (prev.log_n - 1.0);
            if (!std::isfinite(log_fact)) log_fact = std::numeric_limits<double>::max();
        }
        if (sp.log_n > log_fact)
            throw InfeasibleError("schedule level " + std::to_string(k) +
                                  " violates n_k <= n_{k-1}!");
        plan.schedule.push_back(sp);
        if (!sp.n_big) break; // indices beyond this level are not addressable
    }

    plan.bracket_lower = (std::log(static_cast<double>(plan.n1)) - 3.0) /
                         (static_cast<double>(plan.l1) + plan.tau);
    plan.bracket_upper = complexity_upper_bound(plan, 1);
    return plan;
}

double complexity_upper_bound(const ConstructionPlan& plan, int k) {
    if (k < 1 || static_cast<size_t>(k) >= plan.schedule.size() + 1)
        throw ConfigError("schedule too shallow for complexity bound at level " +
                          std::to_string(k));
    const SchedulePoint& sk = plan.schedule[static_cast<size_t>(k - 1)];
    // log l_{k+1}
    double log_lk1;
    if (static_cast<size_t>(k) < plan.schedule.size()) {
        log_lk1 = plan.schedule[static_cast<size_t>(k)].log_l;
    } else if (sk.l_exact && sk.n_exact) {
        log_lk1 = std::log(static_cast<double>(*sk.l_exact) * static_cast<double>(*sk.n_exact) +
                           static_cast<double>(*sk.n_exact - 1) * plan.tau);
    } else {
        throw ConfigError("schedule too shallow for complexity bound at level " +
                          std::to_string(k));
    }
    double tau = plan.tau, logm = std::log(static_cast<double>(plan.alphabet));
    double term_a, term_b, term_c;
    if (sk.l_exact && sk.n_exact && log_lk1 < 690) {
        double lk1 = std::exp(log_lk1);
        double nk = static_cast<double>(*sk.n_exact);
        term_a = std::log(static_cast<double>(*sk.l_exact) + 2 * tau) / lk1;
        term_b = (nk + 1) * std::log(nk) / lk1;
        double prod = 1, sum = 0;
        for (int j = 1; j < k; ++j) {
            prod *= std::exp(plan.schedule[static_cast<size_t>(j - 1)].log_n);
            sum += prod;
        }
        sum += nk;
        term_c = tau * logm * sum / lk1;
    } else {
        // Log-space evaluation for astronomically large levels.
        term_a = std::exp(std::log(std::max(sk.log_l, 1e-9)) - log_lk1);
        term_b = std::exp(sk.log_n + std::log(std::max(sk.log_n, 1e-9)) - log_lk1);
        if (tau > 0) {
            double log_sum = sk.log_n; // n_k dominates or ties the brick products
            double acc = 0;
            for (int j = 1; j < k; ++j) {
                acc += plan.schedule[static_cast<size_t>(j - 1)].log_n;
                log_sum = std::max(log_sum, acc);
            }
            term_c = std::exp(std::log(tau * logm) + log_sum + std::log(static_cast<double>(k)) -
                              log_lk1);
        } else {
            term_c = 0;
        }
    }
    return term_a + term_b + term_c;
}

Word generate_prefix(const ConstructionPlan& plan, const SubshiftSpec& shift,
                     size_t length, size_t cap) {
    if (plan.bricks.empty()) throw ConfigError("plan has no bricks");
    Emitter em(shift, plan.tau, length, cap);

    size_t n1 = static_cast<size_t>(plan.n1);
    // u1: seed-selected permutation word over E_1.
    auto emit_perm_word = [&](std::uint64_t key) -> bool {
        std::vector<std::uint32_t> p = fisher_yates(n1, key);
        for (std::uint32_t idx : p)
            if (!em.emit(plan.bricks[idx])) return false;
        return true;
    };

    // Emit the whole-brick stream of one element of E_k (k >= 2), selected by
    // the lazy index j.  E_2 elements are permutation words of E_1; E_k
    // elements are permutation words of E_{k-1}.
    std::function<bool(int, const mpz_class&)> emit_ek = [&](int k,
                                                             const mpz_class& j) -> bool {
        if (k == 2) return emit_perm_word(mix_key(plan.seed, 2, fold_mpz(j)));
        const SchedulePoint& below = plan.schedule[static_cast<size_t>(k - 2)];
        if (!below.n_big)
            throw CapError("generation ran past the addressable schedule depth");
        AffinePerm pi(*below.n_big, mix_key(plan.seed, static_cast<std::uint64_t>(k),
                                            fold_mpz(j)));
        for (mpz_class i = 0; i < *below.n_big; ++i)
            if (!emit_ek(k - 1, pi(i))) return false;
        return true;
    };

    bool more = emit_perm_word(mix_key(plan.seed, 1, 0));
    for (int k = 2; more; ++k) {
        if (static_cast<size_t>(k) > plan.schedule.size())
            throw CapError("requested length exceeds the representable schedule");
        const SchedulePoint& sp = plan.schedule[static_cast<size_t>(k - 1)];
        std::uint64_t key = mix_key(plan.seed, 0xA0 + static_cast<std::uint64_t>(k), 0);
        mpz_class r;
        if (sp.n_big) {
            r = mpz_uniform(*sp.n_big, key);
        } else {
            // n_k is too large to materialize; any index keys a valid element
            // of E_k, so draw from the first 2^64 of them.
            r = mpz_class(static_cast<unsigned long>(key));
        }
        more = emit_ek(k, r);
    }
    return em.take();
}

SubsystemPlan construct_subsystem_step1(const SubshiftSpec& shift, const Potential& phi,
                                        double alpha, double epsilon,
                                        const LogReal& n1_scale, size_t cap) {
    DimensionResult gam = solve_dimension_gamma(shift, phi, 12, 1e-3, cap);
    if (!(alpha >= 0) || !(alpha < gam.gamma))
        throw ConfigError("alpha must lie in [0, gamma); gamma estimate is " +
                          std::to_string(gam.gamma));
    if (!(epsilon > 0) || !(epsilon < (gam.gamma - alpha) / 2))
        throw ConfigError("epsilon must lie in (0, (gamma - alpha)/2)");
    if (!shift.has_decomposition())
        throw SpecificationError("subsystem construction needs the core predicate G");

    Strata st = stratify(shift, shift.in_G, phi, n1_scale, cap);
    int best_l = -1;
    size_t best_count = 0;
    for (size_t l = 0; l < st.strata.size(); ++l) {
        if (st.strata[l].size() > best_count) {
            best_count = st.strata[l].size();
            best_l = static_cast<int>(l);
        }
    }
    if (best_l < 0)
        throw InfeasibleError("no core words at this diameter scale; enlarge n_1");

    double n1 = n1_scale.value();
    double lo = (alpha + epsilon / 2) * n1, hi = (alpha + epsilon) * n1;
    long N = static_cast<long>(std::floor(std::exp(lo))) + 1;
    while (std::log(static_cast<double>(N)) <= lo) ++N;
    if (!(std::log(static_cast<double>(N)) < hi))
        throw InfeasibleError("count window (alpha+eps/2, alpha+eps) contains no "
                              "integer at this n_1; retry with a larger scale");
    if (static_cast<size_t>(N) > best_count)
        throw InfeasibleError("largest stratum holds " + std::to_string(best_count) +
                              " words but the window needs " + std::to_string(N) +
                              "; retry with a larger n_1");

    SubsystemPlan out;
    out.alpha = alpha;
    out.epsilon = epsilon;
    out.n1 = n1;
    out.stratum = best_l;
    const auto& layer = st.strata[static_cast<size_t>(best_l)];
    out.members.assign(layer.begin(), layer.begin() + N);
    out.count_log = std::log(static_cast<double>(N));

    double max_s = -std::numeric_limits<double>::infinity();
    double min_s = std::numeric_limits<double>::infinity();
    for (const Word& w : out.members) {
        double s = birkhoff_sum(shift, phi, w).s_star.value();
        max_s = std::max(max_s, s);
        min_s = std::min(min_s, s);
    }
    double tau = shift.tau ? static_cast<double>(*shift.tau) : 0.0;
    double a_star = phi.max_value().value();
    double b = phi.variation_sum().value();
    out.C = max_s + tau * a_star + b - n1;
    out.Cprime = n1 - min_s;
    out.lower = out.count_log / (n1 + out.C);
    out.upper = (out.count_log + tau * std::log(static_cast<double>(shift.alphabet.size))) /
                (n1 - out.Cprime);
    return out;
}

} // namespace sdw
