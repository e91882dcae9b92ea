#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "esp/rewrite.hpp"
#include "esp/text.hpp"
#include "oracle.hpp"

using namespace esp;

TEST_CASE("decompose-full-round-trip-zmod") {
  std::mt19937_64 rng(21);
  for (const char* d : {"zmod:15", "zmod:105"})
    for (std::size_t n = 2; n <= 3; ++n) {
      Ring r = ring_make(d);
      for (int t = 0; t < 15; ++t) {
        Word w = oracle::random_word(r, n, rng);
        auto cert = decompose_full(w);
        INFO(word_text(w));
        CHECK(cert.verified);
        CHECK(is_abcd_only(cert.output));
        CHECK(oracle::equal(oracle::eval(cert.output), oracle::eval(w)));
        CHECK_FALSE(cert.trace.empty());
      }
    }
}

TEST_CASE("decompose-full-polynomial-and-rational") {
  std::mt19937_64 rng(8);
  for (const char* d : {"poly:q:t", "q"}) {
    Ring r = ring_make(d);
    for (int t = 0; t < 5; ++t) {
      Word w = oracle::random_word(r, 2, rng, 5);
      auto cert = decompose_full(w);
      CHECK(is_abcd_only(cert.output));
      CHECK(oracle::equal(oracle::eval(cert.output), oracle::eval(w)));
    }
  }
}

TEST_CASE("empty-word-decomposes-to-empty") {
  Ring r = ring_make("zmod:15");
  auto cert = decompose_full(Word(r, 2));
  CHECK(cert.verified);
  CHECK(cert.output.empty());
}

TEST_CASE("corner-words-absorbed") {
  Ring r = ring_make("zmod:15");
  for (int c = 0; c < 15; ++c)
    for (Atom a : {Atom::e21(r->from_int(c)), Atom::e12(r->from_int(c))}) {
      Word w(r, 2, {a});
      auto cert = decompose_full(w);
      CHECK(is_abcd_only(cert.output));
      CHECK(oracle::equal(oracle::eval(cert.output), oracle::eval(w)));
    }
}

TEST_CASE("corner-units-and-corner-to-abcd") {
  Ring r = ring_make("q");
  Word delta = e2_word(r, {Atom::e21(r->from_int(3)), Atom::e12(r->from_rational(mpq_class(1, 2))),
                           Atom::e21(r->from_int(-1))});
  Word u = corner_units(delta);
  for (const auto& a : u.atoms) CHECK(a.kind == AtomKind::Unit);
  CHECK(eval(u) == eval(delta));
  Word big = corner_to_abcd(delta, 3);
  CHECK(is_abcd_only(big));
  CHECK(eval(big) == place_block(3, eval(delta), 1));
  CHECK_THROWS_AS(corner_units(Word(r, 1, {Atom::s(1, 1, r->one())})), Error);
}

TEST_CASE("unit-factors-and-unit-to-abcd") {
  Ring r = ring_make("zmod:105");
  for (Shape s : {Shape::B, Shape::C}) {
    Elem y = r->from_int(11);
    CHECK(eval(e2_word(r, unit_e2_factors(s, y))) == unit_block(s, y));
    for (std::size_t pos = 1; pos <= 3; ++pos) {
      Word w = unit_to_abcd(r, 3, s, pos, y, pos == 1 ? 3 : 2);
      CHECK(is_abcd_only(w));
      CHECK(oracle::equal(oracle::eval(w), oracle::U(r, 3, s, pos, y)));
    }
  }
}

TEST_CASE("units-in-place-and-push-agree-with-body") {
  Ring r = ring_make("zmod:15");
  Word body(r, 2, {Atom::unit(Shape::B, 2, r->from_int(4)), Atom::abcd(Shape::A, 2, r->from_int(7)),
                  Atom::unit(Shape::C, 2, r->from_int(2))});
  UnitPush inplace = units_in_place(body);
  CHECK(is_abcd_only(inplace.tail));
  CHECK(eval(inplace.tail) == eval(body));
  UnitPush push = push_units_left(body);
  CHECK(is_abcd_only(push.tail));
  CHECK(push.diag.matrix(r) * eval(push.tail) == eval(body));
  RewriteOptions opt;
  opt.units = UnitStrategy::Push;
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    Word w(r, 2, {Atom::s(1 + rng() % 2, 3 + rng() % 2, r->from_int(rng() % 15))});
    CHECK(decompose_full(w, opt).verified);
  }
}

TEST_CASE("decompose-initial-contract") {
  Ring r = ring_make("zmod:15");
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    Word w = reduce_to_row12(oracle::random_word(r, 3, rng));
    auto d = decompose_initial(w);
    CHECK(place_block(3, eval(d.delta), 1) * eval(d.body) == eval(w));
    for (const auto& a : d.body.atoms) {
      bool ok = a.kind == AtomKind::ABCD || (a.kind == AtomKind::Unit && a.i >= 2);
      CHECK(ok);
    }
  }
}

TEST_CASE("conjugate-by-corner") {
  Ring r = ring_make("zmod:15");
  Matrix delta = mat2(r, r->from_int(2), r->from_int(7), r->from_int(1), r->from_int(4));
  REQUIRE(det2(delta).is_one());
  Word h(r, 3, {Atom::abcd(Shape::A, 2, r->from_int(3)), Atom::abcd(Shape::D, 3, r->from_int(5))});
  Word w = conjugate_by_corner(delta, h);
  CHECK(is_abcd_only(w));
  Matrix d = place_block(3, delta, 1);
  CHECK(eval(w) == d * eval(h) * place_block(3, inverse_sl2(delta), 1));
}

TEST_CASE("row12-reduction") {
  Ring r = ring_make("poly:q:x");
  Elem x = parse_elem(r, "x");
  for (std::size_t n = 2; n <= 4; ++n)
    for (std::size_t i = 3; i <= 2 * n; ++i)
      for (std::size_t j = 1; j <= 2 * n; ++j) {
        if (i == j || j == pi_index(i)) continue;
        Word w(r, n, {Atom::s(i, j, x)});
        Word out = reduce_to_row12(w);
        for (const auto& a : out.atoms) {
          bool row12 = a.kind != AtomKind::S || a.i <= 2;
          CHECK(row12);
        }
        CHECK(eval(out) == eval(w));
      }
}

TEST_CASE("row12-rules-file-matches-discovery") {
  std::ifstream f(std::string(ESP_DATA_DIR) + "/row12_rules.txt");
  REQUIRE(f);
  std::stringstream ss;
  ss << f.rdbuf();
  auto parsed = parse_row12_rules(ss.str());
  CHECK(row12_rules_text(parsed) == row12_rules_text(row12_rules()));
}

TEST_CASE("simplify-merges-and-drops") {
  Ring r = ring_make("zmod:15");
  Word w(r, 2, {Atom::abcd(Shape::A, 2, r->from_int(3)), Atom::abcd(Shape::A, 2, r->from_int(12)),
               Atom::e12(r->from_int(2)), Atom::e12(r->from_int(5)), Atom::s(1, 3, r->zero())});
  Word s = simplify(w);
  REQUIRE(s.size() == 1);
  CHECK(s.atoms[0].kind == AtomKind::E12);
  CHECK(s.atoms[0].param == r->from_int(7));
  CHECK(eval(s) == eval(w));
}

TEST_CASE("factor-symplectic-round-trip") {
  std::mt19937_64 rng(17);
  for (const char* d : {"zmod:15", "zmod:9", "q"}) {
    Ring r = ring_make(d);
    for (int t = 0; t < 8; ++t) {
      Matrix g = oracle::eval(oracle::random_word(r, 3, rng));
      Word f = factor_symplectic(g);
      CHECK(oracle::equal(oracle::eval(f), g));
    }
  }
  CHECK_THROWS_AS(factor_symplectic(Matrix::identity(ring_make("poly:q:t"), 4)), Error);
}

TEST_CASE("long-roots") {
  Ring r = ring_make("zmod:15");
  for (std::size_t k = 1; k <= 3; ++k)
    for (bool up : {true, false}) {
      Matrix expect = Matrix::identity(r, 6);
      if (up) expect(2 * k - 2, 2 * k - 1) = r->from_int(4);
      else expect(2 * k - 1, 2 * k - 2) = r->from_int(4);
      CHECK(eval(long_root(r, 3, k, up, r->from_int(4))) == expect);
    }
}

TEST_CASE("fuel-exhaustion") {
  Ring r = ring_make("zmod:15");
  RewriteOptions opt;
  opt.fuel = 1;
  std::mt19937_64 rng(2);
  Word w = oracle::random_word(r, 3, rng, 8);
  while (w.size() < 6) w.append(oracle::random_word(r, 3, rng, 8));
  try {
    decompose_full(w, opt);
    FAIL("expected StepBudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepBudgetExceeded);
  }
}
