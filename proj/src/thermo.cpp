#include "sdw/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace sdw {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-length histogram of Birkhoff sums: (S*, S_max) -> word count.  Counts
// stay exact in doubles well past any enumerable language size.
struct Level {
    std::map<std::pair<double, double>, double> bins;
    double total = 0;
    double log_count() const { return total > 0 ? std::log(total) : kNegInf; }
};

// log sum_w sup_cyl e^{mult * S}; the sup picks S_max for mult > 0, S* for
// mult < 0 (the cylinder minimum makes the exponent largest).
double log_z(const Level& lv, double mult) {
    if (lv.bins.empty()) return kNegInf;
    double best = kNegInf;
    for (const auto& [s, c] : lv.bins) {
        double e = mult * (mult > 0 ? s.second : s.first) + std::log(c);
        best = std::max(best, e);
    }
    double acc = 0;
    for (const auto& [s, c] : lv.bins)
        acc += std::exp(mult * (mult > 0 ? s.second : s.first) + std::log(c) - best);
    return best + std::log(acc);
}

// Histograms for lengths 1..n_max of the D-words (D empty = whole language).
std::vector<Level> collect(const SubshiftSpec& shift,
                           const std::function<bool(WordView)>& D,
                           const Potential& phi, int n_max, size_t cap) {
    std::vector<Level> out(static_cast<size_t>(n_max));
    if (shift.kind == ShiftKind::Full && phi.depth() == 1 && !D) {
        // Composition DP: a full-shift word's Birkhoff sum depends only on
        // its symbol counts, so the histogram composes level by level.
        std::vector<double> vals(static_cast<size_t>(shift.alphabet.size));
        for (int a = 0; a < shift.alphabet.size; ++a) {
            std::vector<Symbol> s{static_cast<Symbol>(a)};
            vals[static_cast<size_t>(a)] = phi.eval_d(WordView(s));
        }
        std::map<double, double> h{{0.0, 1.0}};
        for (int n = 1; n <= n_max; ++n) {
            std::map<double, double> nh;
            for (const auto& [s, c] : h)
                for (double v : vals) nh[s + v] += c;
            h = std::move(nh);
            Level& lv = out[static_cast<size_t>(n - 1)];
            for (const auto& [s, c] : h) {
                lv.bins[{s, s}] += c;
                lv.total += c;
            }
        }
        return out;
    }
    for (int n = 1; n <= n_max; ++n) {
        LanguageSlice l = enumerate_language(shift, n, cap);
        Level& lv = out[static_cast<size_t>(n - 1)];
        for (size_t i = 0; i < l.count; ++i) {
            WordView w = l.word(i);
            if (D && !D(w)) continue;
            BirkhoffSums b = birkhoff_sum(shift, phi, w);
            lv.bins[{b.s_star.value(), b.s_max.value()}] += 1;
            lv.total += 1;
        }
    }
    return out;
}

// Least-squares slope of log_count against n over the tail half of the table;
// skips empty levels.
double tail_slope(const std::vector<double>& log_count) {
    int n_max = static_cast<int>(log_count.size());
    int from = std::max(1, n_max / 2);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (int n = from; n <= n_max; ++n) {
        double y = log_count[static_cast<size_t>(n - 1)];
        if (!std::isfinite(y)) continue;
        sx += n; sy += y; sxx += static_cast<double>(n) * n; sxy += n * y;
        ++k;
    }
    if (k < 2) return 0;
    double den = k * sxx - sx * sx;
    return den != 0 ? (k * sxy - sx * sy) / den : 0;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol) {
    // expects f(lo) >= 0 >= f(hi)
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) >= 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double z_n(const SubshiftSpec& shift, const std::function<bool(WordView)>& D,
           const Potential& phi, double multiplier, int n, size_t cap) {
    if (n < 1) throw ConfigError("z_n needs n >= 1");
    std::vector<Level> lv = collect(shift, D, phi, n, cap);
    double l = log_z(lv[static_cast<size_t>(n - 1)], multiplier);
    return std::isfinite(l) ? std::exp(l) : 0.0;
}

GrowthEstimate entropy_estimate(const SubshiftSpec& shift, int n_max, size_t cap) {
    if (n_max < 4) throw ConfigError("entropy estimate needs n_max >= 4");
    GrowthEstimate out;
    out.n_max = n_max;
    for (int n = 1; n <= n_max; ++n) {
        double lc;
        if (shift.kind == ShiftKind::Full) {
            lc = n * std::log(static_cast<double>(shift.alphabet.size));
        } else {
            lc = std::log(static_cast<double>(enumerate_language(shift, n, cap).count));
        }
        out.log_count.push_back(lc);
        out.rate.push_back(lc / n);
    }
    // Subadditivity of log #L_n makes every (1/n) log #L_n an upper bound.
    out.upper = *std::min_element(out.rate.begin(), out.rate.end());
    if (shift.has_decomposition()) {
        // Gluing makes (u, v) -> u j v injective from G_a x G_b into
        // G_{a+b+tau}, so every (log #G_n)/(n + tau) is a lower bound.
        int tau = *shift.tau;
        out.lower = 0;
        for (int n = 1; n <= n_max; ++n) {
            size_t g = 0;
            if (shift.kind == ShiftKind::Full) {
                out.lower = std::max(out.lower, out.log_count[static_cast<size_t>(n - 1)] /
                                                    (n + tau));
                continue;
            }
            LanguageSlice l = enumerate_language(shift, n, cap);
            for (size_t i = 0; i < l.count; ++i)
                if (shift.in_G(l.word(i))) ++g;
            if (g > 0)
                out.lower = std::max(out.lower,
                                     std::log(static_cast<double>(g)) / (n + tau));
        }
        out.method = "subadditive-bracket";
    } else {
        double lo = out.upper;
        for (int n = std::max(2, n_max / 2); n <= n_max; ++n) {
            double d = out.log_count[static_cast<size_t>(n - 1)] -
                       out.log_count[static_cast<size_t>(n - 2)];
            lo = std::min(lo, d);
        }
        out.lower = std::max(0.0, lo);
        out.method = "plain-limsup";
    }
    if (out.lower > out.upper) out.lower = out.upper;
    out.estimate = 0.5 * (out.lower + out.upper);
    return out;
}

GrowthEstimate growth_rate(const SubshiftSpec& shift,
                           const std::function<bool(WordView)>& D, int n_max,
                           size_t cap) {
    if (n_max < 4) throw ConfigError("growth rate needs n_max >= 4");
    GrowthEstimate out;
    out.n_max = n_max;
    out.method = "plain-limsup";
    for (int n = 1; n <= n_max; ++n) {
        LanguageSlice l = enumerate_language(shift, n, cap);
        size_t c = 0;
        for (size_t i = 0; i < l.count; ++i)
            if (!D || D(l.word(i))) ++c;
        double lc = c > 0 ? std::log(static_cast<double>(c)) : kNegInf;
        out.log_count.push_back(lc);
        out.rate.push_back(c > 0 ? lc / n : 0.0);
    }
    // Band from the successive differences over the tail, point estimate
    // from the least-squares slope (exact for geometric counts).
    double lo = std::numeric_limits<double>::infinity(), hi = kNegInf;
    for (int n = std::max(2, n_max / 2); n <= n_max; ++n) {
        double a = out.log_count[static_cast<size_t>(n - 2)];
        double b = out.log_count[static_cast<size_t>(n - 1)];
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        double d = b - a;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    if (!std::isfinite(hi)) { lo = hi = 0; } // at most one nonempty tail level
    out.lower = std::max(0.0, lo);
    out.upper = std::max(out.lower, hi);
    out.estimate = tail_slope(out.log_count);
    if (out.estimate < out.lower || out.estimate > out.upper)
        out.estimate = 0.5 * (out.lower + out.upper);
    return out;
}

DimensionResult solve_dimension_gamma(const SubshiftSpec& shift, const Potential& phi,
                                      int n_max, double tol, size_t cap) {
    if (tol <= 0) throw ConfigError("tolerance must be positive");
    if (n_max < 4)
        throw InfeasibleError("dimension solver needs n_max >= 4");
    DimensionResult out;
    out.n_max = n_max;
    if (shift.kind == ShiftKind::Full && phi.is_constant()) {
        // P(-gamma phi) = log m - gamma phi vanishes at exactly log m / phi.
        out.gamma = std::log(static_cast<double>(shift.alphabet.size)) /
                    phi.min_value().value();
        out.lower = out.upper = out.gamma;
        out.correction = 0;
        return out;
    }
    if (!shift.has_decomposition())
        throw InfeasibleError("dimension solver needs specification metadata (gluing "
                              "gap and core predicate)");

    std::vector<Level> L = collect(shift, nullptr, phi, n_max, cap);
    std::vector<Level> G = collect(shift, shift.in_G, phi, n_max, cap);
    double tau = static_cast<double>(*shift.tau);
    double shed = tau * phi.max_value().value() + phi.variation_sum().value();

    auto p_hi = [&](double g) {
        double best = std::numeric_limits<double>::infinity();
        for (int n = 1; n <= n_max; ++n)
            best = std::min(best, log_z(L[static_cast<size_t>(n - 1)], -g) / n);
        return best;
    };
    auto p_lo = [&](double g) {
        double best = kNegInf;
        for (int n = 1; n <= n_max; ++n) {
            double z = log_z(G[static_cast<size_t>(n - 1)], -g);
            if (!std::isfinite(z)) continue;
            best = std::max(best, (z - g * shed) / (n + tau));
        }
        return best;
    };
    auto p_mid = [&](double g) { return 0.5 * (p_lo(g) + p_hi(g)); };

    GrowthEstimate h = entropy_estimate(shift, n_max, cap);
    double ga = h.lower / phi.max_value().value();
    double gb = h.upper / phi.min_value().value();
    if (gb <= ga) gb = ga + 1;
    for (int i = 0; i < 8 && p_mid(ga) < 0 && ga > 1e-12; ++i) ga *= 0.5;
    if (p_mid(ga) < 0) ga = 0;
    for (int i = 0; i < 8 && p_mid(gb) > 0; ++i) gb *= 1.5;
    if (!(p_mid(ga) >= 0) || !(p_mid(gb) < 0))
        throw InfeasibleError("pressure estimates do not change sign on the entropy "
                              "sandwich; increase n_max");
    out.gamma = bisect_root(p_mid, ga, gb, tol);

    // One-sided roots certify the bracket: the subadditive estimate majorizes
    // the pressure (root from above), the gluing estimate minorizes it.
    if (p_lo(0) <= 0) {
        out.lower = 0;
    } else {
        double b = gb;
        for (int i = 0; i < 8 && p_lo(b) > 0; ++i) b *= 1.5;
        out.lower = bisect_root(p_lo, 0, b, tol);
    }
    {
        double b = gb;
        for (int i = 0; i < 8 && p_hi(b) > 0; ++i) b *= 1.5;
        out.upper = bisect_root(p_hi, 0, b, tol);
    }
    out.correction = out.upper - out.lower;
    out.gamma = std::clamp(out.gamma, out.lower, out.upper);
    return out;
}

double measure_dimension(const SubshiftSpec& shift, const Potential& phi,
                         const MarkovMeasureSpec& mu) {
    size_t m = static_cast<size_t>(shift.alphabet.size);
    double h = 0;
    std::function<double(WordView)> mass;
    if (!mu.bernoulli.empty()) {
        if (mu.bernoulli.size() != m)
            throw ConfigError("Bernoulli weight vector has the wrong length");
        double s = 0;
        for (size_t a = 0; a < m; ++a) {
            double p = mu.bernoulli[a];
            if (p < 0) throw ConfigError("Bernoulli weights must be non-negative");
            s += p;
            if (p > 0) {
                std::vector<Symbol> w{static_cast<Symbol>(a)};
                if (!shift.admissible(WordView(w)))
                    throw ConfigError("measure charges an inadmissible symbol");
                h -= p * std::log(p);
            }
        }
        if (std::abs(s - 1) > 1e-9)
            throw ConfigError("Bernoulli weights must sum to 1");
        mass = [&mu](WordView w) {
            double p = 1;
            for (Symbol a : w) p *= mu.bernoulli[a];
            return p;
        };
    } else {
        if (mu.P.size() != m || mu.pi.size() != m)
            throw ConfigError("Markov spec dimensions do not match the alphabet");
        double psum = 0;
        for (size_t i = 0; i < m; ++i) {
            if (mu.P[i].size() != m)
                throw ConfigError("Markov transition matrix is not square");
            double row = 0;
            for (size_t j = 0; j < m; ++j) {
                double p = mu.P[i][j];
                if (p < 0) throw ConfigError("transition probabilities must be >= 0");
                row += p;
                if (p > 0) {
                    std::vector<Symbol> w{static_cast<Symbol>(i), static_cast<Symbol>(j)};
                    if (!shift.admissible(WordView(w)))
                        throw ConfigError("measure charges a forbidden transition");
                }
            }
            if (std::abs(row - 1) > 1e-9)
                throw ConfigError("transition matrix rows must sum to 1");
            psum += mu.pi[i];
        }
        if (std::abs(psum - 1) > 1e-9)
            throw ConfigError("stationary vector must sum to 1");
        for (size_t j = 0; j < m; ++j) {
            double acc = 0;
            for (size_t i = 0; i < m; ++i) acc += mu.pi[i] * mu.P[i][j];
            if (std::abs(acc - mu.pi[j]) > 1e-8)
                throw ConfigError("supplied vector is not stationary for the matrix");
        }
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j)
                if (mu.P[i][j] > 0) h -= mu.pi[i] * mu.P[i][j] * std::log(mu.P[i][j]);
        mass = [&mu](WordView w) {
            double p = mu.pi[w[0]];
            for (size_t i = 0; i + 1 < w.size(); ++i) p *= mu.P[w[i]][w[i + 1]];
            return p;
        };
    }

    // integral of phi: sum of cylinder masses times table values.  The table
    // ranges over admissible depth-k words, so total mass 1 doubles as the
    // support-compatibility check.
    double integral = 0, total = 0;
    for (const auto& [w, v] : phi.entries()) {
        double p = mass(w);
        total += p;
        integral += p * v.value();
    }
    if (std::abs(total - 1) > 1e-6)
        throw ConfigError("measure support is incompatible with the shift (cylinder "
                          "masses over the potential table sum to " + std::to_string(total) + ")");
    return h / integral;
}

PressureGapReport pressure_gap_check(const SubshiftSpec& shift, const Potential& phi,
                                     double gamma, int n_max, size_t cap) {
    if (!shift.has_decomposition() || (!shift.ps_words && !(shift.in_Cp && shift.in_Cs)))
        throw ConfigError("pressure gap check needs decomposition metadata");
    PressureGapReport out;
    double acc = 0;
    bool any_word = false;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<Word> ws;
        if (shift.ps_words) {
            ws = shift.ps_words(n);
        } else {
            LanguageSlice l = enumerate_language(shift, n, cap);
            for (size_t i = 0; i < l.count; ++i)
                if (shift.in_Cp(l.word(i)) || shift.in_Cs(l.word(i)))
                    ws.push_back(l.word_copy(i));
        }
        double z = 0;
        for (const Word& w : ws) {
            any_word = true;
            z += std::exp(-gamma * birkhoff_sum(shift, phi, w).s_star.value());
        }
        acc += z;
        out.z.push_back(z);
        out.partial_sums.push_back(acc);
    }
    for (size_t i = 0; i + 1 < out.z.size(); ++i)
        if (out.z[i] > 0) out.ratios.push_back(out.z[i + 1] / out.z[i]);
    if (!any_word) {
        out.verdict = "converging (no prefix/suffix words)";
        return out;
    }
    size_t need = std::min<size_t>(3, out.ratios.size());
    bool sustained = need > 0;
    for (size_t i = out.ratios.size() - need; i < out.ratios.size(); ++i)
        if (!(out.ratios[i] < 1)) sustained = false;
    out.verdict = sustained ? "converging (ratio < 1 sustained)" : "inconclusive";
    return out;
}

CountingBand uniform_counting_check(const SubshiftSpec& shift, const Potential& phi,
                                    double gamma, int n_max, size_t cap) {
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    std::vector<Level> L = collect(shift, nullptr, phi, n_max, cap);
    CountingBand out;
    for (int n = 1; n <= n_max; ++n) {
        double l = log_z(L[static_cast<size_t>(n - 1)], -gamma);
        out.z.push_back(std::isfinite(l) ? std::exp(l) : 0.0);
    }
    out.min_z = *std::min_element(out.z.begin(), out.z.end());
    out.max_z = *std::max_element(out.z.begin(), out.z.end());
    return out;
}

} // namespace sdw
