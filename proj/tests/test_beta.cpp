#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdw/beta.hpp"

using namespace sdw;

namespace {

// Brute-force fullness oracle: u is full iff u.v stays admissible for every
// admissible v up to the probe length (exact here because d* has period 2).
bool full_oracle(const BetaSpec& beta, const SubshiftSpec& shift, WordView u,
                 int probe = 12) {
    for (int n = 1; n <= probe; ++n) {
        LanguageSlice l = enumerate_language(shift, n);
        for (size_t i = 0; i < l.count; ++i) {
            Word uv{u};
            uv.append(l.word(i));
            if (!is_admissible_beta(beta, uv)) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("golden beta expansions") {
    BetaSpec b = BetaSpec::golden();
    CHECK(b.alphabet_size() == 2);
    CHECK(!b.is_integer());
    CHECK(b.to_double() == doctest::Approx(1.6180339887).epsilon(1e-9));

    SUBCASE("greedy expansion of 1 is finite: 11") {
        BetaDigits d = expansion_of_one(b, 10);
        CHECK(d.finite);
        CHECK(d.digits == std::vector<int>{1, 1});
    }
    SUBCASE("quasi-greedy d* = (10)^inf") {
        BetaDigits d = quasi_greedy_expansion(b, 7);
        CHECK(d.digits == std::vector<int>{1, 0, 1, 0, 1, 0, 1});
        REQUIRE(d.periodicity.has_value());
        CHECK(d.periodicity->second == 2);
    }
    SUBCASE("admissibility excludes factor 11") {
        CHECK(is_admissible_beta(b, Word::parse("101010", 2)));
        CHECK(!is_admissible_beta(b, Word::parse("011", 2)));
        CHECK(!is_admissible_beta(b, Word::parse("110", 2)));
    }
}

TEST_CASE("golden beta shift structure") {
    BetaSpec b = BetaSpec::golden();
    SubshiftSpec s = build_beta_shift(b);
    CHECK(s.kind == ShiftKind::Beta);
    CHECK(*s.tau == 0);

    SUBCASE("language equals the golden-mean SFT language") {
        long f1 = 2, f2 = 3;
        CHECK(enumerate_language(s, 1).count == 2);
        for (int n = 2; n <= 10; ++n) {
            CHECK(enumerate_language(s, n).count == static_cast<size_t>(f2));
            long f3 = f1 + f2;
            f1 = f2;
            f2 = f3;
        }
    }
    SUBCASE("full words are the admissible words ending in 0") {
        // u.d* starts 1..., so u full iff u admissible and ends in 0; the
        // count at length n is therefore #L_{n-1}: 1, 2, 3, 5, 8, ...
        std::vector<long> fib{1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
        for (int n = 1; n <= 9; ++n) {
            LanguageSlice l = enumerate_language(s, n);
            long cnt = 0;
            for (size_t i = 0; i < l.count; ++i)
                if (s.in_G(l.word(i))) ++cnt;
            CHECK(cnt == fib[static_cast<size_t>(n)]);
        }
    }
    SUBCASE("fullness matches the surjectivity oracle") {
        for (int n = 1; n <= 7; ++n) {
            LanguageSlice l = enumerate_language(s, n);
            for (size_t i = 0; i < l.count; ++i) {
                FullWordVerdict v = is_full_word(b, l.word(i));
                CHECK(v.certain);
                CHECK(v.full == full_oracle(b, s, l.word(i)));
            }
        }
    }
    SUBCASE("full words are closed under concatenation") {
        std::vector<Word> full;
        for (int n = 1; n <= 5; ++n) {
            LanguageSlice l = enumerate_language(s, n);
            for (size_t i = 0; i < l.count; ++i)
                if (s.in_G(l.word(i))) full.push_back(l.word_copy(i));
        }
        for (const Word& u : full)
            for (const Word& v : full)
                CHECK(is_full_word(b, concat(u, v)).full);
    }
    SUBCASE("C^s holds exactly the d* prefixes") {
        CHECK(s.in_Cs(Word::parse("10", 2)));
        CHECK(s.in_Cs(Word::parse("1010", 2)));
        CHECK(!s.in_Cs(Word::parse("11", 2)));
        CHECK(!s.in_Cs(Word::parse("01", 2)));
        auto ps = s.ps_words(3);
        REQUIRE(ps.size() == 1);
        CHECK(ps[0].str() == "101");
    }
    SUBCASE("every admissible word decomposes") {
        for (int n = 1; n <= 8; ++n) {
            LanguageSlice l = enumerate_language(s, n);
            for (size_t i = 0; i < l.count; ++i) {
                Decomposition d = decompose_word(s, l.word(i));
                Word back = concat(d.p, d.g);
                back.append(d.s);
                CHECK(lex_compare(back, l.word(i)) == 0);
            }
        }
    }
}

TEST_CASE("integer beta is the full shift") {
    BetaSpec b = BetaSpec::integer(3);
    CHECK(b.is_integer());
    CHECK(b.integer_value() == 3);
    CHECK(b.alphabet_size() == 3);
    BetaDigits d = expansion_of_one(b, 5);
    CHECK(d.finite);
    CHECK(d.digits == std::vector<int>{3});
    CHECK(is_admissible_beta(b, Word::parse("222", 3)));
    CHECK(is_full_word(b, Word::parse("221", 3)).full);
    SubshiftSpec s = build_beta_shift(b);
    CHECK(enumerate_language(s, 4).count == 81);
    // d* = (2)^inf by the quasi-greedy convention.
    auto ps = s.ps_words(2);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].str() == "22");
}

TEST_CASE("rational beta") {
    BetaSpec b = BetaSpec::rational(mpq_class(3, 2));
    CHECK(!b.is_integer());
    CHECK(b.alphabet_size() == 2);
    BetaDigits d = expansion_of_one(b, 8);
    CHECK(d.digits[0] == 1);
    CHECK_FALSE(d.finite);
    SubshiftSpec s = build_beta_shift(b);
    // Sandwich beta^n <= #L_n: exact comparison via logs.
    LogReal lb = b.log_beta();
    for (int n = 2; n <= 10; ++n) {
        size_t c = enumerate_language(s, n).count;
        CHECK(LogReal::log_rational(static_cast<long>(c)) >= lb.scaled(n));
    }
    // d* suffixes stay admissible (Parry self-consistency).
    BetaDigits q = quasi_greedy_expansion(b, 24);
    Word w;
    for (int x : q.digits) w.push_back(static_cast<Symbol>(x));
    for (size_t k = 0; k < 8; ++k)
        CHECK(is_admissible_beta(b, w.suffix_view(k)));
}

TEST_CASE("quadratic beta constructor normalizes") {
    // (4 + 0 sqrt(2))/2 is just the integer 2.
    BetaSpec b = BetaSpec::quadratic(4, 0, 2, 2);
    CHECK(b.is_integer());
    CHECK(b.integer_value() == 2);
    CHECK_THROWS_AS(BetaSpec::quadratic(1, 0, 2, 0), ConfigError); // 1/2 < 1
    CHECK_THROWS_AS(BetaSpec::rational(mpq_class(1, 2)), ConfigError);
    // str() round-trips through the config grammar.
    CHECK(BetaSpec::golden().str() == "quadratic:1,1,2,5");
    CHECK(BetaSpec::integer(4).str() == "integer:4");
}

TEST_CASE("decimal beta refuses rather than guesses") {
    BetaSpec b = BetaSpec::decimal("1.618", 3);
    CHECK(b.alphabet_size() == 2);
    CHECK_THROWS_AS(b.log_beta(), ConfigError);
    BetaDigits d1 = expansion_of_one(b, 1);
    CHECK(d1.digits == std::vector<int>{1});
    // The second digit needs to know 1.618^2 vs golden exactly -- undecidable
    // at three digits of precision.
    CHECK_THROWS_AS(expansion_of_one(b, 4), PrecisionError);
    CHECK_THROWS_AS(BetaSpec::decimal("0.9", 2), ConfigError);
}

TEST_CASE("digits of reals in base beta") {
    BetaSpec g = BetaSpec::golden();
    Word d = beta_digits_of_real(mpq_class(1, 2), g, 6);
    CHECK(d.size() == 6);
    CHECK(is_admissible_beta(g, d));
    CHECK(d[0] == 0); // 1/2 < 1/phi

    BetaSpec b3 = BetaSpec::integer(3);
    CHECK(beta_digits_of_real(mpq_class(1, 3), b3, 4).str() == "1000");
    CHECK_THROWS_AS(beta_digits_of_real(mpq_class(3, 2), g, 4), ConfigError);
}
