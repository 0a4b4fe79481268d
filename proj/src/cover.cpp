#include "sdw/cover.hpp"

#include <cmath>

namespace sdw {

long CoverCollection::member_prefix_of(WordView x) const {
    for (size_t i = 0; i < members.size(); ++i)
        if (is_prefix(members[i], x)) return static_cast<long>(i);
    return -1;
}

namespace {

// Largest l >= 0 with S* <= L - l*min_phi (diam >= c_*^l * rho), capped.
int stratum_of(const LogReal& s_star, const LogReal& L, const LogReal& min_phi) {
    int l = 0;
    while (l < 64) {
        LogReal bound = L - min_phi.scaled(l + 1);
        if (s_star <= bound)
            ++l;
        else
            break;
    }
    return l;
}

} // namespace

CoverCollection build_cover(const SubshiftSpec& shift, const Potential& phi,
                            const mpq_class& rho, size_t cap) {
    if (sgn(rho) <= 0 || rho >= 1)
        throw ConfigError("cover scale rho must lie in (0,1)");
    LogReal L = -LogReal::log_rational(rho); // = log(1/rho); member iff S* <= L
    CoverCollection out;
    out.rho = rho;

    // DFS in symbol order (members come out in lexicographic order).  A node
    // always has diameter >= rho; it is emitted once any admissible child
    // falls below rho, otherwise we descend into all children.
    std::function<void(Word&, const LogReal&)> dfs = [&](Word& w, const LogReal& s_star) {
        std::vector<std::pair<Symbol, LogReal>> kids;
        bool emit = false;
        for (int a = 0; a < shift.alphabet.size; ++a) {
            w.push_back(static_cast<Symbol>(a));
            if (shift.admissible(w)) {
                LogReal cs = birkhoff_sum(shift, phi, w).s_star;
                if (cs > L)
                    emit = true; // child diameter < rho: w is the longest prefix here
                else
                    kids.emplace_back(static_cast<Symbol>(a), cs);
            }
            w = w.subword(0, w.size() - 1);
        }
        if (kids.empty()) emit = true; // dead end: nothing finer than w exists
        if (emit) {
            if (out.members.size() >= cap)
                throw CapError("cover exceeded cap of " + std::to_string(cap) + " members");
            out.members.push_back(w);
            out.stratum.push_back(stratum_of(s_star, L, phi.min_value()));
            out.neg_log_diam.push_back(s_star);
            return;
        }
        for (auto& [a, cs] : kids) {
            w.push_back(a);
            dfs(w, cs);
            w = w.subword(0, w.size() - 1);
        }
    };

    // Root: every single-symbol cylinder must still have diameter >= rho,
    // otherwise the only "longest prefix" for some points is the empty word.
    for (int a = 0; a < shift.alphabet.size; ++a) {
        std::vector<Symbol> s{static_cast<Symbol>(a)};
        if (!shift.admissible(WordView(s))) continue;
        LogReal cs = birkhoff_sum(shift, phi, WordView(s)).s_star;
        if (cs > L)
            throw ConfigError("rho too large: a single-symbol cylinder is already "
                              "smaller than rho");
    }
    for (int a = 0; a < shift.alphabet.size; ++a) {
        std::vector<Symbol> s{static_cast<Symbol>(a)};
        if (!shift.admissible(WordView(s))) continue;
        Word w{WordView(s)};
        dfs(w, birkhoff_sum(shift, phi, WordView(s)).s_star);
    }
    if (out.members.empty())
        throw ConfigError("empty cover: shift has no admissible symbols");
    return out;
}

Strata stratify(const SubshiftSpec& shift, const std::function<bool(WordView)>& D,
                const Potential& phi, const LogReal& scale, size_t cap) {
    if (scale.sign() <= 0) throw ConfigError("stratification scale must be positive");
    Strata out;
    out.scale = scale;
    LogReal band_lo = scale - phi.max_value(); // collect when S* in (scale-max, scale]
    size_t total = 0;

    std::function<void(Word&)> dfs = [&](Word& w) {
        LogReal s_star = birkhoff_sum(shift, phi, w).s_star;
        if (s_star > scale) return; // diameter < e^{-n}: too deep
        if (s_star > band_lo && D(w)) {
            int l = stratum_of(s_star, scale, phi.min_value());
            if (static_cast<size_t>(l) >= out.strata.size())
                out.strata.resize(static_cast<size_t>(l) + 1);
            if (++total > cap)
                throw CapError("stratification exceeded cap of " + std::to_string(cap));
            out.strata[static_cast<size_t>(l)].push_back(w);
        }
        for (int a = 0; a < shift.alphabet.size; ++a) {
            w.push_back(static_cast<Symbol>(a));
            if (shift.admissible(w)) dfs(w);
            w = w.subword(0, w.size() - 1);
        }
    };
    for (int a = 0; a < shift.alphabet.size; ++a) {
        std::vector<Symbol> s{static_cast<Symbol>(a)};
        if (!shift.admissible(WordView(s))) continue;
        Word w{WordView(s)};
        dfs(w);
    }
    // Within-stratum disjointness is guaranteed (diameters in one band cannot
    // nest); verify it anyway since downstream selection relies on it.
    for (const auto& layer : out.strata) {
        for (size_t i = 0; i + 1 < layer.size(); ++i)
            if (is_prefix(layer[i], layer[i + 1]))
                throw Error("internal: nested cylinders within one stratum");
    }
    return out;
}

Recoding recode(const SubshiftSpec& shift, const CoverCollection& cover, WordView x) {
    if (!shift.admissible(x)) throw ConfigError("recode: inadmissible input");
    Recoding r;
    r.source = Word(x);
    size_t pos = 0;
    while (pos < x.size()) {
        long idx = cover.member_prefix_of(x.subspan(pos));
        if (idx < 0) break; // ends mid-member
        r.member_seq.push_back(static_cast<size_t>(idx));
        r.offsets.push_back(pos);
        pos += cover.members[static_cast<size_t>(idx)].size();
    }
    if (r.member_seq.empty())
        throw ConfigError("recode: prefix too short to parse even one cover member");
    r.parsed_len = pos;
    r.remainder = x.size() - pos;
    return r;
}

MetricResult recoded_distance(const SubshiftSpec& shift, const Potential& phi,
                              const CoverCollection& cover, const Recoding& a,
                              const Recoding& b) {
    size_t common = std::min(a.member_seq.size(), b.member_seq.size());
    size_t split = common;
    for (size_t i = 0; i < common; ++i) {
        if (a.member_seq[i] != b.member_seq[i]) { split = i; break; }
    }
    if (split == common) return {true, 0.0, common};
    if (split == 0) return {false, 1.0, 0};
    // Sum S* over the disagreeing-point prefix of `a`, segment by segment.
    LogReal s;
    for (size_t i = 0; i < split; ++i) {
        size_t len = cover.members[a.member_seq[i]].size();
        s += birkhoff_sum(shift, phi, a.source.view().subspan(a.offsets[i], len)).s_star;
    }
    (void)cover;
    return {false, std::exp(-s.value()), split};
}

} // namespace sdw
