#include "doctest.h"
#include "wikitag/text.hpp"

using namespace wikitag;

TEST_CASE("normalize lowercases, collapses whitespace, trims") {
  CHECK(Normalize("MERCURY ") == "mercury");
  CHECK(Normalize("  Diego   Maradona\t won ") == "diego maradona won");
  CHECK(Normalize("") == "");
  CHECK(Normalize("   ") == "");
  CHECK(Normalize("already clean") == "already clean");
}

TEST_CASE("tokenize splits on non-alphanumeric runs") {
  auto toks = Tokenize("Diego Maradona won");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].surface == "Diego");
  CHECK(toks[1].surface == "Maradona");
  CHECK(toks[2].surface == "won");

  CHECK(Tokenize("").empty());

  auto punct = Tokenize("act, the act.");
  REQUIRE(punct.size() == 3);
  CHECK(punct[0].surface == "act");
  CHECK(punct[1].surface == "the");
  CHECK(punct[2].surface == "act");
}

TEST_CASE("tokenize records exact char spans") {
  auto toks = Tokenize("ab  cd");
  REQUIRE(toks.size() == 2);
  CHECK(toks[0].char_begin == 0);
  CHECK(toks[0].char_end == 2);
  CHECK(toks[1].char_begin == 4);
  CHECK(toks[1].char_end == 6);
  // Spans ascending and non-overlapping.
  CHECK(toks[0].char_end <= toks[1].char_begin);
}

TEST_CASE("normalized phrase joins token windows") {
  auto toks = Tokenize("The Quick  Fox");
  CHECK(NormalizedPhrase(toks, 0, 2) == "the quick");
  CHECK(NormalizedPhrase(toks, 1, 3) == "quick fox");
  CHECK(NormalizedPhrase(toks, 0, 0) == "");
}

TEST_CASE("forbidden anchor text: single char or digits only") {
  CHECK(IsForbiddenAnchorText("7"));
  CHECK(IsForbiddenAnchorText("1234"));
  CHECK(IsForbiddenAnchorText("a"));
  CHECK_FALSE(IsForbiddenAnchorText("a7"));
  CHECK_FALSE(IsForbiddenAnchorText("mercury"));
  CHECK_FALSE(IsForbiddenAnchorText("12 monkeys"));
}

TEST_CASE("title qualifier stripping") {
  CHECK(StripTitleQualifier("Mercury (planet)") == "Mercury");
  CHECK(StripTitleQualifier("Mercury") == "Mercury");
  CHECK(StripTitleQualifier("(whole title)") == "(whole title)");
  CHECK(StripTitleQualifier("A (b) (c)") == "A (b)");
}
