#pragma once

#include <utility>
#include <vector>

#include "exactreal.hpp"
#include "subshift.hpp"

namespace sdw {

// Depth-k locally constant strictly positive potential: one value per
// admissible length-k word.  Values are exact log-space reals, with cached
// doubles for hot loops; comparisons that matter are done on the exact form.
class Potential {
public:
    static Potential constant(int alphabet_size, const LogReal& value);
    static Potential from_table(int alphabet_size, int depth,
                                std::vector<std::pair<Word, LogReal>> entries);

    int depth() const { return depth_; }
    int alphabet_size() const { return m_; }
    bool is_constant() const { return constant_; }

    const LogReal& eval(WordView first_k) const; // uses the first depth() symbols
    double eval_d(WordView first_k) const;

    const LogReal& min_value() const { return min_; }
    const LogReal& max_value() const { return max_; }

    // Var_n(phi): oscillation over table entries agreeing on the first n
    // symbols; exactly zero for n >= depth.
    LogReal variation(int n) const;
    // b = sum of Var_i over i >= 1 (finitely many nonzero terms).
    LogReal variation_sum() const;

    const std::vector<std::pair<Word, LogReal>>& entries() const { return entries_; }

private:
    int m_ = 2;
    int depth_ = 1;
    bool constant_ = false;
    std::vector<std::pair<Word, LogReal>> entries_; // lex-sorted by word
    std::vector<double> entry_d_;
    std::vector<long> dense_;   // word index (base-m) -> entry position, -1 absent
    LogReal min_, max_;

    long slot(WordView w) const;
};

struct BirkhoffSums {
    LogReal s_max;  // Birkhoff sum with the maximizing completion
    LogReal s_star; // minimized over the cylinder (depends on first n symbols only)
};

// S_n and S_n* of a length-n word; for depth-k phi the last k-1 terms range
// over the admissible completions of w.
BirkhoffSums birkhoff_sum(const SubshiftSpec& shift, const Potential& phi, WordView w);

// -log of the cylinder diameter, i.e. S_n* itself.
LogReal cylinder_neg_log_diameter(const SubshiftSpec& shift, const Potential& phi,
                                  WordView w);
double cylinder_diameter(const SubshiftSpec& shift, const Potential& phi, WordView w);

struct MetricResult {
    bool indistinguishable = false; // inputs agree to their full common depth
    double distance = 0.0;
    size_t split = 0; // first disagreement index when distinguishable
};

// d_phi(w, v) = exp(-S_n* phi) at the first disagreement index n.
MetricResult d_phi(const SubshiftSpec& shift, const Potential& phi, WordView w,
                   WordView v);

} // namespace sdw
