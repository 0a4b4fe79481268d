#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdw/exactreal.hpp"

using namespace sdw;

TEST_CASE("quadratic field basics") {
    Quadratic phi(mpq_class(1, 2), mpq_class(1, 2), 5); // (1+sqrt5)/2
    CHECK(phi.sign() == 1);
    CHECK(phi.floor() == 1);
    CHECK(phi.to_double() == doctest::Approx(1.6180339887).epsilon(1e-9));

    SUBCASE("phi^2 = phi + 1") {
        CHECK(phi * phi == phi + Quadratic(1));
    }
    SUBCASE("inverse is phi - 1") {
        CHECK(phi.inverse() == phi - Quadratic(1));
    }
    SUBCASE("pow") {
        CHECK(phi.pow(3) == phi * phi * phi);
        CHECK(phi.pow(-2) == (phi * phi).inverse());
        CHECK(phi.pow(0) == Quadratic(1));
    }
    SUBCASE("perfect square radicand collapses") {
        Quadratic r = Quadratic::sqrt_of(9);
        CHECK(r.is_rational());
        CHECK(r.rational() == 3);
    }
    SUBCASE("exact sign near ties") {
        // sqrt(2) vs 99/70 and 141/100: classic convergent comparisons
        Quadratic s2 = Quadratic::sqrt_of(2);
        CHECK(s2.compare(Quadratic(mpq_class(99, 70))) < 0);
        CHECK(s2.compare(Quadratic(mpq_class(141, 100))) > 0);
        CHECK((s2 * s2).compare(Quadratic(2)) == 0);
    }
    SUBCASE("floor of negative values") {
        Quadratic neg = Quadratic(0) - phi;
        CHECK(neg.floor() == -2);
    }
    SUBCASE("mixing radicands is rejected") {
        CHECK_THROWS_AS(Quadratic::sqrt_of(2) + Quadratic::sqrt_of(3), ConfigError);
    }
}

TEST_CASE("log-space reals") {
    LogReal l2 = LogReal::log_rational(2);
    LogReal l3 = LogReal::log_rational(3);
    LogReal l6 = LogReal::log_rational(6);

    SUBCASE("log 6 - log 2 - log 3 is literally zero") {
        CHECK((l6 - l2 - l3).is_literal_zero());
        CHECK((l6 - l2 - l3).sign() == 0);
    }
    SUBCASE("rational constants mix in") {
        LogReal x = LogReal::rational(mpq_class(1, 2)) + l2;
        CHECK(x.sign() == 1);
        CHECK(x.value() == doctest::Approx(0.5 + std::log(2.0)));
    }
    SUBCASE("exact power comparisons") {
        // 3 log 2 vs 2 log 3  <=>  8 vs 9
        CHECK(l2.scaled(3) < l3.scaled(2));
        // 19 log 2 vs 12 log 3  <=>  524288 vs 531441
        CHECK(l2.scaled(19) < l3.scaled(12));
        CHECK(l3.scaled(12) > l2.scaled(19));
    }
    SUBCASE("golden ratio logs") {
        Quadratic phi(mpq_class(1, 2), mpq_class(1, 2), 5);
        LogReal lp = LogReal::log_quadratic(phi);
        // log(phi^2) = log(phi + 1) and 2 log phi agree exactly.
        CHECK(lp.scaled(2) == LogReal::log_quadratic(phi * phi));
        CHECK(lp.scaled(2) == LogReal::log_quadratic(phi + Quadratic(1)));
        CHECK(lp.value() == doctest::Approx(0.4812118250596).epsilon(1e-10));
        CHECK(lp < l2);
        CHECK(lp.scaled(2) > l2);
    }
    SUBCASE("ordering and min/max") {
        CHECK(max(l2, l3) == l3);
        CHECK(min(l2, l3) == l2);
        CHECK((l3 - l2).sign() == 1);
        CHECK((-(l3 - l2)).sign() == -1);
    }
    SUBCASE("log of rational splits into prime atoms") {
        LogReal l15_8 = LogReal::log_rational(mpq_class(15, 8));
        LogReal recon = LogReal::log_rational(3) + LogReal::log_rational(5) -
                        LogReal::log_rational(2).scaled(3);
        CHECK((l15_8 - recon).is_literal_zero());
    }
}
