#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sdw/beta.hpp"
#include "sdw/cover.hpp"

using namespace sdw;

namespace {

Potential log23(int m = 2) {
    return Potential::from_table(m, 1,
                                 {{Word::parse("0", 2), LogReal::log_rational(2)},
                                  {Word::parse("1", 2), LogReal::log_rational(3)}});
}

Word random_admissible(const SubshiftSpec& shift, size_t len, std::mt19937_64& rng) {
    Word w;
    for (size_t i = 0; i < len; ++i) {
        std::vector<Symbol> options;
        for (int a = 0; a < shift.alphabet.size; ++a) {
            w.push_back(static_cast<Symbol>(a));
            if (shift.admissible(w)) options.push_back(static_cast<Symbol>(a));
            w = w.subword(0, w.size() - 1);
        }
        REQUIRE(!options.empty());
        w.push_back(options[rng() % options.size()]);
    }
    return w;
}

} // namespace

TEST_CASE("birkhoff sums") {
    SubshiftSpec full2 = build_full_shift(2);
    SUBCASE("constant potential") {
        Potential c = Potential::constant(2, LogReal::log_rational(2));
        BirkhoffSums b = birkhoff_sum(full2, c, Word::parse("010", 2));
        CHECK(b.s_star == LogReal::log_rational(8));
        CHECK(b.s_max == b.s_star);
    }
    SUBCASE("depth-1 table evaluates directly") {
        Potential p = log23();
        BirkhoffSums b = birkhoff_sum(full2, p, Word::parse("01", 2));
        CHECK(b.s_star == LogReal::log_rational(6));
        CHECK(birkhoff_sum(full2, p, Word::parse("1", 2)).s_star ==
              LogReal::log_rational(3));
    }
    SUBCASE("depth-2 table minimizes over completions") {
        Potential p = Potential::from_table(
            2, 2,
            {{Word::parse("00", 2), LogReal::rational(1)},
             {Word::parse("01", 2), LogReal::rational(2)},
             {Word::parse("10", 2), LogReal::rational(3)},
             {Word::parse("11", 2), LogReal::rational(5)}});
        BirkhoffSums b = birkhoff_sum(full2, p, Word::parse("10", 2));
        // S covers windows "10" and "0?" (? ranges over completions).
        CHECK(b.s_star == LogReal::rational(4)); // 3 + min(1,2)
        CHECK(b.s_max == LogReal::rational(5));  // 3 + max(1,2)
        CHECK(p.variation(1) == LogReal::rational(2)); // osc within [1]: 5-3
        CHECK(p.variation(2) == LogReal());
        CHECK(p.variation_sum() == LogReal::rational(2));
    }
    SUBCASE("inadmissible words are rejected") {
        SubshiftSpec gm = build_sft({2, {Word::parse("11", 2)}, std::nullopt});
        Potential c = Potential::constant(2, LogReal::log_rational(2));
        CHECK_THROWS_AS(birkhoff_sum(gm, c, Word::parse("011", 2)), ConfigError);
    }
}

TEST_CASE("metric and diameters") {
    SubshiftSpec full2 = build_full_shift(2);
    Potential c2 = Potential::constant(2, LogReal::log_rational(2));
    SUBCASE("constant potential metric") {
        MetricResult r =
            d_phi(full2, c2, Word::parse("0110", 2), Word::parse("0100", 2));
        CHECK(!r.indistinguishable);
        CHECK(r.split == 2);
        CHECK(r.distance == doctest::Approx(0.25));
    }
    SUBCASE("weighted metric") {
        MetricResult r = d_phi(full2, log23(), Word::parse("010", 2), Word::parse("011", 2));
        CHECK(r.split == 2);
        CHECK(r.distance == doctest::Approx(1.0 / 6.0));
    }
    SUBCASE("indistinguishable to depth") {
        MetricResult r =
            d_phi(full2, c2, Word::parse("0101010101", 2), Word::parse("0101010101", 2));
        CHECK(r.indistinguishable);
    }
    SUBCASE("cylinder diameters") {
        CHECK(cylinder_diameter(full2, c2, Word::parse("0110", 2)) ==
              doctest::Approx(1.0 / 16));
        BetaSpec g = BetaSpec::golden();
        SubshiftSpec gs = build_beta_shift(g);
        Potential cb = Potential::constant(2, g.log_beta());
        CHECK(cylinder_diameter(gs, cb, Word::parse("010", 2)) ==
              doctest::Approx(0.2360679775).epsilon(1e-8));
    }
    SUBCASE("diameter shrinks with the prefix") {
        std::mt19937_64 rng(5);
        Word w = random_admissible(full2, 12, rng);
        double prev = 1.0;
        for (size_t l = 1; l <= w.size(); ++l) {
            double d = cylinder_diameter(full2, log23(), w.subword(0, l));
            CHECK(d < prev);
            prev = d;
        }
    }
}

TEST_CASE("covers") {
    SubshiftSpec full2 = build_full_shift(2);
    Potential c2 = Potential::constant(2, LogReal::log_rational(2));
    SUBCASE("full shift at rho = 0.2 and the 0.25 boundary") {
        CoverCollection cov = build_cover(full2, c2, mpq_class(1, 5));
        REQUIRE(cov.size() == 4);
        CHECK(cov.members[0].str() == "00");
        CHECK(cov.members[3].str() == "11");
        CoverCollection at = build_cover(full2, c2, mpq_class(1, 4));
        CHECK(at.size() == 4); // diameter 0.25 >= rho keeps length 2
    }
    SUBCASE("golden-mean SFT at rho = 0.2") {
        SubshiftSpec gm = build_sft({2, {Word::parse("11", 2)}, std::nullopt});
        CoverCollection cov = build_cover(gm, c2, mpq_class(1, 5));
        REQUIRE(cov.size() == 3);
        CHECK(cov.members[0].str() == "00");
        CHECK(cov.members[1].str() == "01");
        CHECK(cov.members[2].str() == "10");
    }
    SUBCASE("rho too large is rejected") {
        CHECK_THROWS_AS(build_cover(full2, c2, mpq_class(3, 5)), ConfigError);
    }
    SUBCASE("partition property on random words") {
        BetaSpec g = BetaSpec::golden();
        SubshiftSpec gs = build_beta_shift(g);
        Potential cb = Potential::constant(2, g.log_beta());
        CoverCollection cov = build_cover(gs, cb, mpq_class(1, 10));
        // Prefix-free (no member a prefix of the next in lex order).
        for (size_t i = 0; i + 1 < cov.size(); ++i)
            CHECK(!is_prefix(cov.members[i], cov.members[i + 1]));
        std::mt19937_64 rng(77);
        for (int it = 0; it < 200; ++it) {
            Word w = random_admissible(gs, 30, rng);
            long hits = 0;
            for (const Word& m : cov.members)
                if (is_prefix(m, w)) ++hits;
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("stratification") {
    SubshiftSpec full2 = build_full_shift(2);
    Potential c2 = Potential::constant(2, LogReal::log_rational(2));
    SUBCASE("all words at scale 3 log 2") {
        auto all = [](WordView) { return true; };
        Strata st = stratify(full2, all, c2, LogReal::log_rational(8));
        REQUIRE(!st.strata.empty());
        CHECK(st.strata[0].size() == 8);
        size_t total = 0;
        for (const auto& layer : st.strata) total += layer.size();
        CHECK(total == 8);
    }
    SUBCASE("empty predicate gives empty strata") {
        auto none = [](WordView) { return false; };
        Strata st = stratify(full2, none, c2, LogReal::log_rational(8));
        for (const auto& layer : st.strata) CHECK(layer.empty());
    }
    SUBCASE("full words of the golden beta shift") {
        BetaSpec g = BetaSpec::golden();
        SubshiftSpec gs = build_beta_shift(g);
        Potential cb = Potential::constant(2, g.log_beta());
        Strata st = stratify(gs, gs.in_G, cb, g.log_beta().scaled(4));
        REQUIRE(!st.strata.empty());
        for (const Word& w : st.strata[0]) {
            CHECK(w.size() == 4);
            CHECK(gs.in_G(w));
        }
        CHECK(st.strata[0].size() == 5); // F_5 full words of length 4
    }
}

TEST_CASE("recoding") {
    SubshiftSpec full2 = build_full_shift(2);
    Potential c2 = Potential::constant(2, LogReal::log_rational(2));
    CoverCollection cov = build_cover(full2, c2, mpq_class(1, 5));
    SUBCASE("greedy parse") {
        Recoding r = recode(full2, cov, Word::parse("011010", 2));
        REQUIRE(r.member_seq.size() == 3);
        CHECK(cov.members[r.member_seq[0]].str() == "01");
        CHECK(cov.members[r.member_seq[1]].str() == "10");
        CHECK(cov.members[r.member_seq[2]].str() == "10");
        CHECK(r.remainder == 0);
    }
    SUBCASE("odd tail is reported") {
        Recoding r = recode(full2, cov, Word::parse("01101", 2));
        CHECK(r.parsed_len == 4);
        CHECK(r.remainder == 1);
    }
    SUBCASE("lipschitz sandwich against the plain metric") {
        std::mt19937_64 rng(3);
        double b = 0; // constant potential: variation sum is zero
        double max_member = 0;
        for (const LogReal& s : cov.neg_log_diam)
            max_member = std::max(max_member, s.value());
        for (int it = 0; it < 200; ++it) {
            Word u = random_admissible(full2, 20, rng);
            Word v = random_admissible(full2, 20, rng);
            Recoding ru = recode(full2, cov, u), rv = recode(full2, cov, v);
            MetricResult rho = recoded_distance(full2, c2, cov, ru, rv);
            if (rho.indistinguishable) continue;
            MetricResult plain = d_phi(full2, c2, u, v);
            if (plain.indistinguishable) continue;
            double c_rho =
                std::exp((static_cast<double>(rho.split) + 1) * b + max_member);
            CHECK(plain.distance <= rho.distance * (1 + 1e-12));
            CHECK(rho.distance <= plain.distance * c_rho * (1 + 1e-12));
        }
    }
}
