#include "sdw/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sdw/beta.hpp"
#include "sdw/construct.hpp"
#include "sdw/cover.hpp"
#include "sdw/orbit.hpp"
#include "sdw/thermo.hpp"

namespace sdw {

namespace {

const std::set<std::string> kKnownKeys = {
    "cmd",       "shift.kind", "shift.m",    "shift.forbid", "shift.sgap",
    "shift.beta", "potential.const", "potential.table",
    "nmax",      "n",          "rho",        "gamma",        "h",
    "alpha",     "epsilon",    "seed",       "cap",          "tol",
    "l1",        "depth",      "length",     "x",            "base",
    "p",         "q",          "word",       "n1",           "out",
    "stream_out"};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

long parse_long(const std::string& s, const std::string& field) {
    try {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("field '" + field + "': '" + s + "' is not an integer");
    }
}

double parse_double(const std::string& s, const std::string& field) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("field '" + field + "': '" + s + "' is not a number");
    }
}

// "a/b", plain integers, and decimal literals (parsed exactly).
mpq_class parse_rational(const std::string& s, const std::string& field) {
    if (s.empty()) throw ConfigError("field '" + field + "': empty number");
    size_t slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            mpz_class num(s.substr(0, slash), 10), den(s.substr(slash + 1), 10);
            if (den == 0) throw ConfigError("field '" + field + "': zero denominator");
            mpq_class q(num, den);
            q.canonicalize();
            return q;
        }
        size_t dot = s.find('.');
        if (dot == std::string::npos) return mpq_class(mpz_class(s, 10));
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac = s.size() - dot - 1;
        mpz_class den = 1;
        for (size_t i = 0; i < frac; ++i) den *= 10;
        mpq_class q(mpz_class(digits, 10), den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ConfigError("field '" + field + "': '" + s + "' is not a rational");
    }
}

BetaSpec parse_beta(const std::string& s) {
    if (s == "golden") return BetaSpec::golden();
    size_t colon = s.find(':');
    std::string tag = s.substr(0, colon == std::string::npos ? s.size() : colon);
    std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (tag == "integer") return BetaSpec::integer(parse_long(rest, "shift.beta"));
    if (tag == "quadratic") {
        std::stringstream ss(rest);
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(ss, part, ',')) parts.push_back(trim(part));
        if (parts.size() != 4)
            throw ConfigError("shift.beta: quadratic form needs a,b,c,d");
        return BetaSpec::quadratic(parse_long(parts[0], "shift.beta"),
                                   parse_long(parts[1], "shift.beta"),
                                   parse_long(parts[2], "shift.beta"),
                                   mpz_class(parts[3], 10));
    }
    if (tag == "decimal") {
        size_t at = rest.find('@');
        if (at == std::string::npos)
            throw ConfigError("shift.beta: decimal form is digits@precision");
        return BetaSpec::decimal(rest.substr(0, at),
                                 static_cast<int>(parse_long(rest.substr(at + 1),
                                                             "shift.beta")));
    }
    // Bare rational/decimal literal.
    mpq_class q = parse_rational(s, "shift.beta");
    if (q <= 1) throw ConfigError("shift.beta: beta must exceed 1");
    return BetaSpec::rational(q);
}

// Value grammar for potentials and targets: [coeff*]logK | [coeff*]logbeta |
// log:a/b | plain rational.  Exact throughout.
LogReal parse_value(const std::string& s, const BetaSpec* beta,
                    const std::string& field) {
    std::string body = s;
    mpq_class coeff = 1;
    size_t star = s.find('*');
    if (star != std::string::npos) {
        coeff = parse_rational(trim(s.substr(0, star)), field);
        body = trim(s.substr(star + 1));
    }
    LogReal v;
    if (body == "logbeta") {
        if (!beta)
            throw ConfigError("field '" + field + "': logbeta needs a beta shift");
        v = beta->log_beta();
    } else if (body.rfind("log:", 0) == 0) {
        mpq_class q = parse_rational(body.substr(4), field);
        if (q <= 0) throw ConfigError("field '" + field + "': log of a non-positive value");
        v = LogReal::log_rational(q);
    } else if (body.rfind("log", 0) == 0 && body.size() > 3 &&
               std::isdigit(static_cast<unsigned char>(body[3]))) {
        mpq_class q = parse_rational(body.substr(3), field);
        if (q <= 1) throw ConfigError("field '" + field + "': log base must exceed 1");
        v = LogReal::log_rational(q);
    } else {
        v = LogReal::rational(parse_rational(body, field));
    }
    return coeff == 1 ? v : v.scaled(coeff);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
}

struct Context {
    SubshiftSpec shift;
    std::optional<BetaSpec> beta;
    std::optional<Potential> phi;
    size_t cap = kDefaultEnumCap;
};

Context build_context(const ExperimentConfig& cfg, bool need_shift, bool need_phi) {
    Context ctx;
    ctx.cap = static_cast<size_t>(parse_long(cfg.get_or("cap", "10000000"), "cap"));
    if (cfg.has("shift.beta")) ctx.beta = parse_beta(cfg.get("shift.beta"));
    if (need_shift) {
        std::string kind = cfg.get("shift.kind");
        if (kind == "full") {
            long m = parse_long(cfg.get_or("shift.m", "2"), "shift.m");
            if (m < 2) throw ConfigError("shift.m must be >= 2");
            ctx.shift = build_full_shift(static_cast<int>(m));
        } else if (kind == "sft") {
            SftSpec spec;
            spec.alphabet_size =
                static_cast<int>(parse_long(cfg.get_or("shift.m", "2"), "shift.m"));
            std::stringstream ss(cfg.get("shift.forbid"));
            std::string w;
            while (std::getline(ss, w, ','))
                spec.forbidden.push_back(Word::parse(trim(w), spec.alphabet_size));
            ctx.shift = build_sft(spec);
        } else if (kind == "beta") {
            if (!ctx.beta) throw ConfigError("shift.kind=beta needs shift.beta");
            ctx.shift = build_beta_shift(*ctx.beta);
        } else if (kind == "sgap") {
            SGapSet s;
            std::stringstream ss(cfg.get("shift.sgap"));
            std::string part;
            while (std::getline(ss, part, ',')) {
                part = trim(part);
                if (!part.empty() && part.back() == '+')
                    s.tail_from = parse_long(part.substr(0, part.size() - 1), "shift.sgap");
                else
                    s.values.push_back(parse_long(part, "shift.sgap"));
            }
            ctx.shift = build_s_gap(s);
        } else {
            throw ConfigError("shift.kind must be full|sft|beta|sgap, got '" + kind + "'");
        }
    }
    if (need_phi) {
        const BetaSpec* b = ctx.beta ? &*ctx.beta : nullptr;
        if (cfg.has("potential.table")) {
            std::vector<std::pair<Word, LogReal>> entries;
            std::stringstream ss(cfg.get("potential.table"));
            std::string item;
            int depth = 0;
            while (std::getline(ss, item, ';')) {
                item = trim(item);
                size_t colon = item.find(':');
                if (colon == std::string::npos)
                    throw ConfigError("potential.table entries are word:value");
                Word w = Word::parse(trim(item.substr(0, colon)), ctx.shift.alphabet.size);
                depth = static_cast<int>(w.size());
                entries.emplace_back(std::move(w),
                                     parse_value(trim(item.substr(colon + 1)), b,
                                                 "potential.table"));
            }
            ctx.phi = Potential::from_table(ctx.shift.alphabet.size, depth,
                                            std::move(entries));
        } else {
            ctx.phi = Potential::constant(ctx.shift.alphabet.size,
                                          parse_value(cfg.get("potential.const"), b,
                                                      "potential.const"));
        }
    }
    return ctx;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot open output path '" + path + "'");
        f << content;
        if (!f.good()) throw ConfigError("write failed for '" + path + "'");
    }
    std::filesystem::rename(tmp, target);
}

void emit(const ExperimentConfig& cfg, const std::vector<std::string>& lines,
          std::ostream& fallback) {
    std::string text;
    text += std::string("# tool=") + kToolVersion + "\n";
    for (const auto& [k, v] : cfg.kv) text += "# " + k + "=" + v + "\n";
    for (const auto& l : lines) text += l + "\n";
    if (cfg.has("out"))
        atomic_write(cfg.get("out"), text);
    else
        fallback << text;
}

// ---- commands -------------------------------------------------------------

std::vector<std::string> cmd_entropy(const ExperimentConfig& cfg) {
    Context ctx = build_context(cfg, true, false);
    int n_max = static_cast<int>(parse_long(cfg.get("nmax"), "nmax"));
    GrowthEstimate g = entropy_estimate(ctx.shift, n_max, ctx.cap);
    std::vector<std::string> out{"n,count,rate,lower,upper"};
    for (int n = 1; n <= n_max; ++n)
        out.push_back(std::to_string(n) + "," +
                      fmt(std::exp(g.log_count[static_cast<size_t>(n - 1)])) + "," +
                      fmt(g.rate[static_cast<size_t>(n - 1)]) + "," + fmt(g.lower) +
                      "," + fmt(g.upper));
    out.push_back("# method=" + g.method + " estimate=" + fmt(g.estimate));
    return out;
}

std::vector<std::string> cmd_pressure(const ExperimentConfig& cfg) {
    Context ctx = build_context(cfg, true, true);
    int n_max = static_cast<int>(parse_long(cfg.get("nmax"), "nmax"));
    double gamma = parse_double(cfg.get_or("gamma", "1"), "gamma");
    std::vector<std::string> out{"n,value,rate,lower,upper"};
    for (int n = 1; n <= n_max; ++n) {
        double z = z_n(ctx.shift, nullptr, *ctx.phi, -gamma, n, ctx.cap);
        out.push_back(std::to_string(n) + "," + fmt(z) + "," + fmt(std::log(z) / n) +
                      ",,");
    }
    return out;
}

std::vector<std::string> cmd_dimension(const ExperimentConfig& cfg) {
    Context ctx = build_context(cfg, true, true);
    int n_max = static_cast<int>(parse_long(cfg.get("nmax"), "nmax"));
    double tol = parse_double(cfg.get_or("tol", "0.0001"), "tol");
    DimensionResult r = solve_dimension_gamma(ctx.shift, *ctx.phi, n_max, tol, ctx.cap);
    return {"gamma,lower,upper,correction,nmax",
            fmt(r.gamma) + "," + fmt(r.lower) + "," + fmt(r.upper) + "," +
                fmt(r.correction) + "," + std::to_string(r.n_max)};
}

std::vector<std::string> cmd_gapcheck(const ExperimentConfig& cfg) {
    Context ctx = build_context(cfg, true, true);
    int n_max = static_cast<int>(parse_long(cfg.get("nmax"), "nmax"));
    double gamma = parse_double(cfg.get_or("gamma", "1"), "gamma");
    PressureGapReport r = pressure_gap_check(ctx.shift, *ctx.phi, gamma, n_max, ctx.cap);
    std::vector<std::string> out{"n,z,partial_sum,ratio"};
    for (size_t i = 0; i < r.z.size(); ++i) {
        std::string ratio = i > 0 && i - 1 < r.ratios.size() ? fmt(r.ratios[i - 1]) : "";
        out.push_back(std::to_string(i + 1) + "," + fmt(r.z[i]) + "," +
                      fmt(r.partial_sums[i]) + "," + ratio);
    }
    out.push_back("# verdict=" + r.verdict);
    return out;
}

std::vector<std::string> cmd_cover(const ExperimentConfig& cfg) {
    Context ctx = build_context(cfg, true, true);
    mpq_class rho = parse_rational(cfg.get("rho"), "rho");
    CoverCollection c = build_cover(ctx.shift, *ctx.phi, rho, ctx.cap);
    std::vector<std::string> out{"index,member,stratum,neg_log_diam"};
    for (size_t i = 0; i < c.members.size(); ++i)
        out.push_back(std::to_string(i) + "," + c.members[i].str() + "," +
                      std::to_string(c.stratum[i]) + "," +
                      fmt(c.neg_log_diam[i].value()));
    return out;
}

std::vector<std::string> cmd_construct(const ExperimentConfig& cfg) {
    Context ctx = build_context(cfg, true, false);
    const BetaSpec* b = ctx.beta ? &*ctx.beta : nullptr;
    double h = parse_value(cfg.get("h"), b, "h").value();
    std::uint64_t seed =
        static_cast<std::uint64_t>(parse_long(cfg.get_or("seed", "0"), "seed"));
    std::optional<long> l1;
    if (cfg.has("l1")) l1 = parse_long(cfg.get("l1"), "l1");
    int depth = static_cast<int>(parse_long(cfg.get_or("depth", "3"), "depth"));
    ConstructionPlan plan =
        plan_intermediate_entropy(ctx.shift, h, l1, seed, depth, 64, ctx.cap);
    size_t length;
    if (cfg.has("length")) {
        length = static_cast<size_t>(parse_long(cfg.get("length"), "length"));
    } else {
        length = static_cast<size_t>(plan.l1) * static_cast<size_t>(plan.n1) +
                 static_cast<size_t>(plan.n1 - 1) * static_cast<size_t>(plan.tau);
    }
    Word w = generate_prefix(plan, ctx.shift, length);
    std::vector<std::string> out{"key,value",
                                 "l1," + std::to_string(plan.l1),
                                 "n1," + std::to_string(plan.n1),
                                 "tau," + std::to_string(plan.tau),
                                 "bracket_lower," + fmt(plan.bracket_lower),
                                 "bracket_upper," + fmt(plan.bracket_upper),
                                 "length," + std::to_string(w.size()),
                                 "word," + w.str()};
    if (cfg.has("stream_out")) atomic_write(cfg.get("stream_out"), w.str() + "\n");
    return out;
}

std::vector<std::string> cmd_subsystem(const ExperimentConfig& cfg) {
    Context ctx = build_context(cfg, true, true);
    const BetaSpec* b = ctx.beta ? &*ctx.beta : nullptr;
    double alpha = parse_double(cfg.get("alpha"), "alpha");
    double epsilon = parse_double(cfg.get("epsilon"), "epsilon");
    LogReal n1 = parse_value(cfg.get("n1"), b, "n1");
    SubsystemPlan p = construct_subsystem_step1(ctx.shift, *ctx.phi, alpha, epsilon,
                                                n1, ctx.cap);
    std::vector<std::string> out{
        "key,value",
        "alpha," + fmt(p.alpha),
        "epsilon," + fmt(p.epsilon),
        "n1," + fmt(p.n1),
        "stratum," + std::to_string(p.stratum),
        "count," + std::to_string(p.members.size()),
        "count_log," + fmt(p.count_log),
        "C," + fmt(p.C),
        "Cprime," + fmt(p.Cprime),
        "lower," + fmt(p.lower),
        "upper," + fmt(p.upper)};
    for (const Word& w : p.members) out.push_back("member," + w.str());
    return out;
}

std::vector<std::string> cmd_beta(const ExperimentConfig& cfg, const std::string& sub) {
    if (!cfg.has("shift.beta")) throw ConfigError("beta commands need shift.beta");
    BetaSpec beta = parse_beta(cfg.get("shift.beta"));
    if (sub == "expand1") {
        int n = static_cast<int>(parse_long(cfg.get("nmax"), "nmax"));
        BetaDigits d = expansion_of_one(beta, n);
        std::string digits;
        for (size_t i = 0; i < d.digits.size(); ++i) {
            if (i) digits += ' ';
            digits += std::to_string(d.digits[i]);
        }
        std::vector<std::string> out{"key,value", "digits," + digits,
                                     std::string("finite,") + (d.finite ? "1" : "0")};
        if (d.periodicity)
            out.push_back("periodicity," + std::to_string(d.periodicity->first) + "+" +
                          std::to_string(d.periodicity->second));
        return out;
    }
    if (sub == "admissible" || sub == "full") {
        Word w = Word::parse(cfg.get("word"), beta.alphabet_size());
        if (sub == "admissible")
            return {"key,value",
                    std::string("admissible,") + (is_admissible_beta(beta, w) ? "1" : "0")};
        FullWordVerdict v = is_full_word(beta, w);
        return {"key,value", std::string("full,") + (v.full ? "1" : "0"),
                std::string("certain,") + (v.certain ? "1" : "0")};
    }
    if (sub == "digits") {
        mpq_class x = parse_rational(cfg.get("x"), "x");
        int n = static_cast<int>(parse_long(cfg.get("n"), "n"));
        Word w = beta_digits_of_real(x, beta, n);
        return {"key,value", "digits," + w.str()};
    }
    throw ConfigError("beta subcommands: expand1|admissible|full|digits");
}

std::vector<std::string> cmd_orbit(const ExperimentConfig& cfg) {
    RealPoint x = RealPoint::from_rational(parse_rational(cfg.get("x"), "x"));
    int base = static_cast<int>(parse_long(cfg.get("base"), "base"));
    int n_max = static_cast<int>(parse_long(cfg.get("nmax"), "nmax"));
    OrbitProfile p = orbit_closure_profile(x, base, n_max);
    std::vector<std::string> out{"n,p_x,dim_estimate"};
    for (int n = 1; n <= n_max; ++n)
        out.push_back(std::to_string(n) + "," +
                      std::to_string(p.p_x[static_cast<size_t>(n - 1)]) + "," +
                      fmt(p.dim_est[static_cast<size_t>(n - 1)]));
    out.push_back("# dim=" + fmt(p.dim) + (p.periodic ? " periodic=1" : " periodic=0") +
                  " note=" + p.note);
    return out;
}

std::vector<std::string> cmd_furstenberg(const ExperimentConfig& cfg) {
    RealPoint x = RealPoint::from_rational(parse_rational(cfg.get("x"), "x"));
    int p = static_cast<int>(parse_long(cfg.get("p"), "p"));
    int q = static_cast<int>(parse_long(cfg.get("q"), "q"));
    int n_max = static_cast<int>(parse_long(cfg.get("nmax"), "nmax"));
    FurstenbergReport r = furstenberg_profile(x, p, q, n_max);
    std::vector<std::string> out{"base,n,p_x,dim_estimate"};
    auto rows = [&](const OrbitProfile& pr) {
        for (int n = 1; n <= n_max; ++n)
            out.push_back(std::to_string(pr.base) + "," + std::to_string(n) + "," +
                          std::to_string(pr.p_x[static_cast<size_t>(n - 1)]) + "," +
                          fmt(pr.dim_est[static_cast<size_t>(n - 1)]));
    };
    if (r.profile_p) rows(*r.profile_p);
    if (r.profile_q) rows(*r.profile_q);
    if (r.common_base_profile) rows(*r.common_base_profile);
    std::string verdict = r.dependence.dependent
                              ? "dependent " + std::to_string(p) + "^" +
                                    std::to_string(r.dependence.a) + "=" +
                                    std::to_string(q) + "^" +
                                    std::to_string(r.dependence.b)
                              : "independent";
    out.push_back("# dim_p=" + fmt(r.profile_p ? r.profile_p->dim : 0.0) +
                  " dim_q=" + fmt(r.profile_q ? r.profile_q->dim : 0.0) +
                  " s=" + fmt(r.s) + " verdict=" + verdict +
                  (r.note.empty() ? "" : " note=" + r.note));
    return out;
}

} // namespace

const std::string& ExperimentConfig::get(const std::string& k) const {
    auto it = kv.find(k);
    if (it == kv.end()) throw ConfigError("missing required key '" + k + "'");
    return it->second;
}

std::string ExperimentConfig::get_or(const std::string& k, const std::string& dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key=value, got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (!kKnownKeys.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                              key + "'");
        cfg.kv[key] = val;
    }
    return cfg;
}

void resolve_defaults(ExperimentConfig& cfg) {
    if (!cfg.has("cmd")) throw ConfigError("missing required key 'cmd'");
    if (!cfg.has("cap")) {
        const char* env = std::getenv("SDW_ENUM_CAP");
        cfg.kv["cap"] = env ? env : "10000000";
    }
    const std::string& cmd = cfg.get("cmd");
    auto dflt = [&](const char* k, const char* v) {
        if (!cfg.has(k)) cfg.kv[k] = v;
    };
    if (cmd == "entropy" || cmd == "pressure" || cmd == "dimension" ||
        cmd == "gapcheck" || cmd == "orbit" || cmd == "furstenberg")
        dflt("nmax", "20");
    if (cmd == "pressure" || cmd == "gapcheck") dflt("gamma", "1");
    if (cmd == "dimension") dflt("tol", "0.0001");
    if (cmd == "construct") {
        dflt("seed", "0");
        dflt("depth", "3");
    }
    // Early semantic checks that need no machinery.
    if (cfg.has("shift.beta")) (void)parse_beta(cfg.get("shift.beta"));
}

int run(ExperimentConfig cfg, std::ostream& fallback_out, std::ostream& err) {
    auto record = [&](const char* cls, const std::string& msg) {
        nlohmann::json j{{"error", cls}, {"message", msg}};
        err << j.dump() << "\n";
    };
    try {
        resolve_defaults(cfg);
        const std::string& cmd = cfg.get("cmd");
        std::vector<std::string> lines;
        if (cmd == "entropy") lines = cmd_entropy(cfg);
        else if (cmd == "pressure") lines = cmd_pressure(cfg);
        else if (cmd == "dimension") lines = cmd_dimension(cfg);
        else if (cmd == "gapcheck") lines = cmd_gapcheck(cfg);
        else if (cmd == "cover") lines = cmd_cover(cfg);
        else if (cmd == "construct") lines = cmd_construct(cfg);
        else if (cmd == "subsystem") lines = cmd_subsystem(cfg);
        else if (cmd.rfind("beta.", 0) == 0) lines = cmd_beta(cfg, cmd.substr(5));
        else if (cmd == "orbit") lines = cmd_orbit(cfg);
        else if (cmd == "furstenberg") lines = cmd_furstenberg(cfg);
        else throw ConfigError("unknown command '" + cmd + "'");
        emit(cfg, lines, fallback_out);
        return kExitOk;
    } catch (const ConfigError& e) {
        record("config", e.what());
        return kExitConfig;
    } catch (const PrecisionError& e) {
        record("precision", e.what());
        return kExitPrecision;
    } catch (const CapError& e) {
        record("cap", e.what());
        return kExitCap;
    } catch (const InfeasibleError& e) {
        record("infeasible", e.what());
        return kExitInfeasible;
    } catch (const SpecificationError& e) {
        record("infeasible", e.what());
        return kExitInfeasible;
    } catch (const std::exception& e) {
        record("internal", e.what());
        return kExitInternal;
    }
}

} // namespace sdw
