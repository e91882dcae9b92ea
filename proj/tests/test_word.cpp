#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "esp/text.hpp"
#include "oracle.hpp"

using namespace esp;

TEST_CASE("eval-matches-oracle-product") {
  std::mt19937_64 rng(11);
  for (const char* d : {"zmod:15", "q", "poly:q:t"}) {
    Ring r = ring_make(d);
    for (std::size_t n = 2; n <= 3; ++n)
      for (int t = 0; t < 30; ++t) {
        Word w = oracle::random_word(r, n, rng);
        Word a = oracle::random_abcd_word(r, n, rng);
        w.append(a);
        CHECK(oracle::equal(eval(w), oracle::eval(w)));
        CHECK(oracle::equal(eval(w) * eval(inverse(w)), oracle::ident(r, 2 * n)));
      }
  }
}

TEST_CASE("word-text-round-trip") {
  Ring r = ring_make("zmod:15");
  std::mt19937_64 rng(3);
  Word w = oracle::random_word(r, 3, rng);
  w.push(Atom::unit(Shape::B, 2, r->from_int(4)));
  w.push(Atom::corner(mat2(r, r->from_int(2), r->from_int(1), r->from_int(1), r->from_int(1))));
  Word back = parse_word(r, 3, word_text(w));
  CHECK(word_text(back) == word_text(w));
  CHECK(eval(back) == eval(w));
}

TEST_CASE("parse-errors-name-the-line") {
  Ring r = ring_make("zmod:15");
  try {
    parse_word(r, 2, "A 2 1\n# comment\nZ 3 4\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_word(r, 2, "A 5 1\n"), Error);
  CHECK(parse_word(r, 2, "").empty());
}

TEST_CASE("commutator-word") {
  Ring r = ring_make("zmod:105");
  Word g(r, 2, {Atom::abcd(Shape::A, 2, r->from_int(3))});
  Word h(r, 2, {Atom::abcd(Shape::B, 2, r->from_int(5))});
  Matrix expect = eval(g) * eval(h) * eval(inverse(g)) * eval(inverse(h));
  CHECK(eval(commutator(g, h)) == expect);
}
