#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdw/words.hpp"

using namespace sdw;

TEST_CASE("word parsing and printing") {
    Word w = Word::parse("0110", 2);
    CHECK(w.size() == 4);
    CHECK(w.str() == "0110");
    CHECK(w[1] == 1);

    Word big = Word::parse("10,0,3", 12);
    CHECK(big.size() == 3);
    CHECK(big[0] == 10);
    CHECK(big.str() == "10,0,3");

    CHECK_THROWS_AS(Word::parse("012", 2), ConfigError);
    CHECK(Word::parse("", 2).empty());
}

TEST_CASE("prefix, concat, lexicographic order") {
    Word a = Word::parse("010", 2), b = Word::parse("0101", 2);
    CHECK(is_prefix(a, b));
    CHECK(!is_prefix(b, a));
    CHECK(concat(a, b).str() == "0100101");
    CHECK(lex_compare(a, b) < 0); // proper prefix compares less
    CHECK(lex_compare(b, a) > 0);
    CHECK(lex_compare(a, a) == 0);
    CHECK(lex_compare(Word::parse("011", 2), Word::parse("10", 2)) < 0);
}

TEST_CASE("language enumeration") {
    AdmissOracle all = [](WordView) { return true; };
    LanguageSlice l = enumerate_language_oracle(2, all, 3);
    CHECK(l.count == 8);
    CHECK(l.word_copy(0).str() == "000");
    CHECK(l.word_copy(7).str() == "111");
    for (size_t i = 0; i + 1 < l.count; ++i)
        CHECK(lex_compare(l.word(i), l.word(i + 1)) < 0);

    SUBCASE("oracle pruning propagates") {
        AdmissOracle no11 = [](WordView w) {
            for (size_t i = 0; i + 1 < w.size(); ++i)
                if (w[i] == 1 && w[i + 1] == 1) return false;
            return true;
        };
        CHECK(enumerate_language_oracle(2, no11, 5).count == 13); // Fibonacci
    }
    SUBCASE("cap is enforced, not truncated") {
        CHECK_THROWS_AS(enumerate_language_oracle(2, all, 10, 100), CapError);
    }
}

TEST_CASE("subword complexity") {
    Word w = Word::parse("01010101", 2);
    for (size_t n = 1; n <= 4; ++n) CHECK(complexity_function(w, n) == 2);
    CHECK(complexity_function(w, 0) == 1);
    CHECK(complexity_function(w, 8) == 1);
    CHECK_THROWS_AS(complexity_function(w, 9), ConfigError);

    Word c = Word::parse("0110100110010110", 2); // Thue-Morse prefix
    CHECK(complexity_function(c, 1) == 2);
    CHECK(complexity_function(c, 2) == 4);
}
