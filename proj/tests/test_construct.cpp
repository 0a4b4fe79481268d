#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sdw/beta.hpp"
#include "sdw/construct.hpp"
#include "sdw/cover.hpp"

using namespace sdw;

namespace {

const double kLogGolden = std::log((1 + std::sqrt(5.0)) / 2);

SubshiftSpec golden_mean_sft() {
    return build_sft({2, {Word::parse("11", 2)}, std::nullopt});
}

void check_plan_invariants(const ConstructionPlan& plan, const SubshiftSpec& shift) {
    REQUIRE(plan.n1 >= 2);
    REQUIRE(plan.bricks.size() == static_cast<size_t>(plan.n1));
    for (const Word& b : plan.bricks) {
        CHECK(b.size() == static_cast<size_t>(plan.l1));
        CHECK(shift.in_G(b));
    }
    for (size_t i = 0; i + 1 < plan.bricks.size(); ++i)
        CHECK(lex_compare(plan.bricks[i], plan.bricks[i + 1]) < 0);
    // n1 is pinned to the window [(l1+tau)h + 2, (l1+tau)h + 3).
    double t = (plan.l1 + plan.tau) * plan.h;
    CHECK(std::log(static_cast<double>(plan.n1)) >= t + 2 - 1e-9);
    CHECK(std::log(static_cast<double>(plan.n1)) < t + 3 + 1e-9);
    // Level-2 feasibility: enough permutations of the bricks.
    REQUIRE(plan.schedule.size() >= 2);
    double n1 = static_cast<double>(plan.n1);
    CHECK(n1 * (std::log(n1) - 1) >
          std::exp(plan.schedule[1].log_l) * plan.h + 2);
    CHECK(plan.bracket_lower <= plan.h + 1e-9);
    CHECK(plan.bracket_upper >= plan.h - 1e-9);
}

} // namespace

TEST_CASE("tower plans on the full 2-shift") {
    SubshiftSpec full2 = build_full_shift(2);
    struct Row {
        double h;
        long l1, n1;
    };
    const Row rows[] = {
        {0.0, 3, 8},
        {0.25 * std::log(2.0), 4, 15},
        {0.50 * std::log(2.0), 6, 60},
        {0.75 * std::log(2.0), 12, 3784},
    };
    for (const Row& r : rows) {
        CAPTURE(r.h);
        ConstructionPlan plan =
            plan_intermediate_entropy(full2, r.h, std::nullopt, 42);
        CHECK(plan.l1 == r.l1);
        CHECK(plan.n1 == r.n1);
        check_plan_invariants(plan, full2);
    }
    SUBCASE("an l1 hint shifts the search window") {
        ConstructionPlan plan = plan_intermediate_entropy(full2, 0.0, 5, 42);
        CHECK(plan.l1 == 5);
        CHECK(plan.n1 == 8); // window does not depend on l1 when h = 0
    }
}

TEST_CASE("tower plan on the golden beta shift") {
    BetaSpec b = BetaSpec::golden();
    SubshiftSpec gs = build_beta_shift(b);
    ConstructionPlan plan =
        plan_intermediate_entropy(gs, 0.5 * kLogGolden, std::nullopt, 7);
    CHECK(plan.l1 == 10);
    CHECK(plan.n1 == 82); // ceil(phi^5 e^2), under #G_10 = 89
    check_plan_invariants(plan, gs);
}

TEST_CASE("plan rejections") {
    SubshiftSpec full2 = build_full_shift(2);
    SUBCASE("h above the entropy cap") {
        CHECK_THROWS_AS(plan_intermediate_entropy(full2, 0.8, std::nullopt, 1),
                        ConfigError);
        CHECK_THROWS_AS(plan_intermediate_entropy(full2, -0.1, std::nullopt, 1),
                        ConfigError);
    }
    SUBCASE("h too close to the cap exhausts the enumeration budget") {
        // l1 would have to exceed 600 before the brick window fits under 2^l1;
        // the language enumeration hits the cap long before that.
        CHECK_THROWS_AS(
            plan_intermediate_entropy(full2, 0.69, std::nullopt, 1, 3, 64, 200000),
            CapError);
    }
    SUBCASE("a too-small l1 cap is infeasible") {
        CHECK_THROWS_AS(
            plan_intermediate_entropy(full2, 0.5 * std::log(2.0), std::nullopt, 1, 3, 5),
            InfeasibleError);
    }
    SUBCASE("non-mixing shifts carry no tower metadata") {
        SubshiftSpec alt =
            build_sft({2, {Word::parse("00", 2), Word::parse("11", 2)}, std::nullopt});
        CHECK_THROWS_AS(plan_intermediate_entropy(alt, 0.0, std::nullopt, 1),
                        SpecificationError);
    }
}

TEST_CASE("generated prefixes") {
    SubshiftSpec full2 = build_full_shift(2);
    double h = 0.5 * std::log(2.0);
    ConstructionPlan plan = plan_intermediate_entropy(full2, h, std::nullopt, 11);
    SUBCASE("admissible, deterministic, seed-sensitive") {
        Word w = generate_prefix(plan, full2, 1500);
        CHECK(w.size() == 1500);
        CHECK(full2.admissible(w));
        Word w2 = generate_prefix(plan, full2, 1500);
        CHECK(lex_compare(w, w2) == 0);
        ConstructionPlan other = plan_intermediate_entropy(full2, h, std::nullopt, 12);
        Word w3 = generate_prefix(other, full2, 1500);
        CHECK(lex_compare(w, w3) != 0);
    }
    SUBCASE("first level visits every brick") {
        // u1 permutes all n1 bricks, so the prefix of length l1*n1 already
        // shows n1 distinct l1-blocks.
        Word w = generate_prefix(plan, full2,
                                 static_cast<size_t>(plan.l1 * plan.n1));
        CHECK(complexity_function(w, static_cast<size_t>(plan.l1)) >=
              static_cast<size_t>(plan.n1) -
                  static_cast<size_t>(plan.l1 - 1));
        Word longer = generate_prefix(plan, full2,
                                      static_cast<size_t>(plan.l1 * (plan.n1 + 2)));
        CHECK(complexity_function(longer, static_cast<size_t>(plan.l1)) >=
              static_cast<size_t>(plan.n1));
    }
    SUBCASE("golden-mean prefixes respect the constraint") {
        SubshiftSpec gm = golden_mean_sft();
        ConstructionPlan p2 =
            plan_intermediate_entropy(gm, 0.5 * kLogGolden, std::nullopt, 3);
        Word w = generate_prefix(p2, gm, 800);
        CHECK(gm.admissible(w));
    }
}

TEST_CASE("complexity upper bound") {
    SubshiftSpec full2 = build_full_shift(2);
    ConstructionPlan plan =
        plan_intermediate_entropy(full2, 0.25 * std::log(2.0), std::nullopt, 9, 4);
    // Level-1: (1/l2) [log(l1 + 2 tau) + (n1+1) log n1].
    double direct = (std::log(static_cast<double>(plan.l1)) +
                     (plan.n1 + 1) * std::log(static_cast<double>(plan.n1))) /
                    std::exp(plan.schedule[1].log_l);
    CHECK(complexity_upper_bound(plan, 1) == doctest::Approx(direct).epsilon(1e-9));
    // The per-level bounds decrease toward h.
    double prev = complexity_upper_bound(plan, 1);
    CHECK(prev > plan.h);
    for (int k = 2; static_cast<size_t>(k) < plan.schedule.size(); ++k) {
        double cur = complexity_upper_bound(plan, k);
        CHECK(cur > plan.h - 1e-9);
        CHECK(cur < prev + 1e-9);
        prev = cur;
    }
    CHECK_THROWS_AS(complexity_upper_bound(plan, 0), ConfigError);
    CHECK_THROWS_AS(complexity_upper_bound(plan, 99), ConfigError);
}

TEST_CASE("dense orbit points") {
    SUBCASE("full 2-shift") {
        SubshiftSpec full2 = build_full_shift(2);
        Word w = construct_dense_point(full2, 120);
        CHECK(w.size() == 120);
        CHECK(full2.admissible(w));
        // G ordered by length then lex: every 3-block appears early.
        CHECK(complexity_function(w, 3) == 8);
    }
    SUBCASE("golden-mean SFT") {
        SubshiftSpec gm = golden_mean_sft();
        Word w = construct_dense_point(gm, 200);
        CHECK(w.size() == 200);
        CHECK(gm.admissible(w));
        CHECK(complexity_function(w, 2) == 3);
    }
}

TEST_CASE("subsystem step 1 on the full 2-shift") {
    SubshiftSpec full2 = build_full_shift(2);
    Potential c2 = Potential::constant(2, LogReal::log_rational(2));
    LogReal scale = LogReal::log_rational(1024); // 10 log 2
    struct Row {
        double alpha;
        long n;
    };
    const Row rows[] = {{0.25, 7}, {0.5, 39}, {0.75, 216}};
    for (const Row& r : rows) {
        CAPTURE(r.alpha);
        SubsystemPlan p = construct_subsystem_step1(full2, c2, r.alpha, 0.05, scale);
        CHECK(p.members.size() == static_cast<size_t>(r.n));
        CHECK(p.C == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(p.Cprime == doctest::Approx(0.0).epsilon(1e-9));
        double expected = std::log(static_cast<double>(r.n)) / (10 * std::log(2.0));
        CHECK(p.lower == doctest::Approx(expected).epsilon(1e-9));
        CHECK(p.upper == doctest::Approx(expected).epsilon(1e-9));
        // The reported dimension window brackets alpha within epsilon.
        CHECK(p.lower > r.alpha);
        CHECK(p.upper < r.alpha + 0.05);
        // Members are cylinders at the requested diameter scale.
        for (const Word& m : p.members) {
            CHECK(m.size() == 10);
            CHECK(full2.in_G(m));
        }
        for (size_t i = 0; i + 1 < p.members.size(); ++i)
            CHECK(lex_compare(p.members[i], p.members[i + 1]) < 0);
    }
    SUBCASE("bad alpha or epsilon") {
        CHECK_THROWS_AS(construct_subsystem_step1(full2, c2, 1.2, 0.05, scale),
                        ConfigError);
        CHECK_THROWS_AS(construct_subsystem_step1(full2, c2, 0.5, 0.4, scale),
                        ConfigError);
        CHECK_THROWS_AS(construct_subsystem_step1(full2, c2, 0.5, 0.0, scale),
                        ConfigError);
    }
}

TEST_CASE("subsystem step 1 on the golden-mean SFT") {
    SubshiftSpec gm = golden_mean_sft();
    Potential c2 = Potential::constant(2, LogReal::log_rational(2));
    SubsystemPlan p = construct_subsystem_step1(gm, c2, 0.3, 0.05,
                                                LogReal::log_rational(1 << 14));
    CHECK(!p.members.empty());
    for (const Word& m : p.members) CHECK(gm.in_G(m));
    CHECK(p.lower <= p.upper);
    CHECK(p.upper < 0.41); // window widened by the gluing corrections C, C'
}
