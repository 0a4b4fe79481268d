#include "sdw/potential.hpp"

#include <algorithm>
#include <cmath>

namespace sdw {

Potential Potential::constant(int alphabet_size, const LogReal& value) {
    if (value.sign() <= 0)
        throw ConfigError("potential values must be strictly positive");
    Potential p;
    p.m_ = alphabet_size;
    p.depth_ = 1;
    p.constant_ = true;
    for (int a = 0; a < alphabet_size; ++a)
        p.entries_.emplace_back(Word(std::vector<Symbol>{static_cast<Symbol>(a)}), value);
    p.entry_d_.assign(p.entries_.size(), value.value());
    p.dense_.resize(static_cast<size_t>(alphabet_size));
    for (long a = 0; a < alphabet_size; ++a) p.dense_[static_cast<size_t>(a)] = a;
    p.min_ = p.max_ = value;
    return p;
}

Potential Potential::from_table(int alphabet_size, int depth,
                                std::vector<std::pair<Word, LogReal>> entries) {
    if (depth < 1) throw ConfigError("potential depth must be >= 1");
    if (entries.empty()) throw ConfigError("potential table is empty");
    double cells = std::pow(static_cast<double>(alphabet_size), depth);
    if (cells > (1 << 22))
        throw ConfigError("potential table too deep for this alphabet");
    Potential p;
    p.m_ = alphabet_size;
    p.depth_ = depth;
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
        return lex_compare(x.first, y.first) < 0;
    });
    p.dense_.assign(static_cast<size_t>(cells), -1);
    bool first = true;
    for (auto& [w, v] : entries) {
        if (static_cast<int>(w.size()) != depth)
            throw ConfigError("potential table word '" + w.str() + "' has wrong length");
        if (v.sign() <= 0)
            throw ConfigError("potential values must be strictly positive");
        long idx = 0;
        for (size_t i = 0; i < w.size(); ++i) {
            if (w[i] >= alphabet_size)
                throw ConfigError("potential table symbol out of range");
            idx = idx * alphabet_size + w[i];
        }
        if (p.dense_[static_cast<size_t>(idx)] != -1)
            throw ConfigError("duplicate potential table entry '" + w.str() + "'");
        p.dense_[static_cast<size_t>(idx)] = static_cast<long>(p.entries_.size());
        if (first) {
            p.min_ = p.max_ = v;
            first = false;
        } else {
            if (v < p.min_) p.min_ = v;
            if (p.max_ < v) p.max_ = v;
        }
        p.entry_d_.push_back(v.value());
        p.entries_.emplace_back(std::move(w), std::move(v));
    }
    p.constant_ = !(p.min_ < p.max_);
    return p;
}

long Potential::slot(WordView w) const {
    if (static_cast<int>(w.size()) < depth_)
        throw ConfigError("potential evaluated on a word shorter than its depth");
    long idx = 0;
    for (int i = 0; i < depth_; ++i) {
        Symbol a = w[static_cast<size_t>(i)];
        if (a >= m_) throw ConfigError("potential evaluated on out-of-range symbol");
        idx = idx * m_ + a;
    }
    long pos = dense_[static_cast<size_t>(idx)];
    if (pos < 0)
        throw ConfigError("potential has no value for an admissible window (table incomplete)");
    return pos;
}

const LogReal& Potential::eval(WordView w) const { return entries_[static_cast<size_t>(slot(w))].second; }

double Potential::eval_d(WordView w) const { return entry_d_[static_cast<size_t>(slot(w))]; }

LogReal Potential::variation(int n) const {
    if (n < 1) throw ConfigError("variation index must be >= 1");
    if (n >= depth_ || constant_) return LogReal();
    // Entries are lex-sorted, so words sharing a length-n prefix are adjacent.
    LogReal best;
    size_t i = 0;
    while (i < entries_.size()) {
        size_t j = i + 1;
        LogReal lo = entries_[i].second, hi = entries_[i].second;
        auto prefix = entries_[i].first.view().subspan(0, static_cast<size_t>(n));
        while (j < entries_.size() &&
               std::equal(prefix.begin(), prefix.end(), entries_[j].first.view().begin())) {
            if (entries_[j].second < lo) lo = entries_[j].second;
            if (hi < entries_[j].second) hi = entries_[j].second;
            ++j;
        }
        LogReal osc = hi - lo;
        if (best < osc) best = osc;
        i = j;
    }
    return best;
}

LogReal Potential::variation_sum() const {
    LogReal b;
    for (int i = 1; i < depth_; ++i) b += variation(i);
    return b;
}

BirkhoffSums birkhoff_sum(const SubshiftSpec& shift, const Potential& phi, WordView w) {
    size_t n = w.size();
    if (n == 0) throw ConfigError("birkhoff_sum of the empty word");
    if (!shift.admissible(w)) throw ConfigError("birkhoff_sum: inadmissible word");
    int k = phi.depth();
    LogReal head;
    size_t full_terms = n + 1 >= static_cast<size_t>(k) ? n + 1 - static_cast<size_t>(k) : 0;
    for (size_t i = 0; i < full_terms; ++i)
        head += phi.eval(w.subspan(i, static_cast<size_t>(k)));
    if (k == 1 || full_terms == n)
        return {head, head};

    // The trailing k-1 windows overhang the word: range over admissible
    // completions of w by k-1 symbols and take the extremes.
    LogReal best_min, best_max;
    bool any = false;
    std::vector<Symbol> ext(w.begin(), w.end());
    size_t need = static_cast<size_t>(k) - 1;
    // DFS over completions.
    std::vector<int> stack{0};
    auto tail_of = [&]() {
        LogReal t;
        for (size_t i = full_terms; i < n; ++i)
            t += phi.eval(WordView(ext).subspan(i, static_cast<size_t>(k)));
        return t;
    };
    std::function<void(size_t)> rec = [&](size_t got) {
        if (got == need) {
            LogReal t = tail_of();
            if (!any) {
                best_min = best_max = t;
                any = true;
            } else {
                if (t < best_min) best_min = t;
                if (best_max < t) best_max = t;
            }
            return;
        }
        for (int a = 0; a < shift.alphabet.size; ++a) {
            ext.push_back(static_cast<Symbol>(a));
            if (shift.admissible(WordView(ext))) rec(got + 1);
            ext.pop_back();
        }
    };
    rec(0);
    if (!any)
        throw Error("internal: admissible word has no admissible completion");
    return {head + best_max, head + best_min};
}

LogReal cylinder_neg_log_diameter(const SubshiftSpec& shift, const Potential& phi,
                                  WordView w) {
    return birkhoff_sum(shift, phi, w).s_star;
}

double cylinder_diameter(const SubshiftSpec& shift, const Potential& phi, WordView w) {
    return std::exp(-cylinder_neg_log_diameter(shift, phi, w).value());
}

MetricResult d_phi(const SubshiftSpec& shift, const Potential& phi, WordView w,
                   WordView v) {
    size_t common = std::min(w.size(), v.size());
    size_t split = common;
    for (size_t i = 0; i < common; ++i) {
        if (w[i] != v[i]) { split = i; break; }
    }
    if (split == common) {
        // No disagreement within the supplied depth; the underlying points
        // may still differ further out, so report rather than return 0.
        return {true, 0.0, common};
    }
    if (split == 0) return {false, 1.0, 0}; // empty common prefix: diameter of the whole space
    LogReal s = birkhoff_sum(shift, phi, w.subspan(0, split)).s_star;
    return {false, std::exp(-s.value()), split};
}

} // namespace sdw
