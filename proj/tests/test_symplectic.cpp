#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "esp/identities.hpp"
#include "esp/text.hpp"
#include "oracle.hpp"

using namespace esp;

TEST_CASE("generators-match-oracle") {
  Ring r = ring_make("poly:q:x");
  Elem x = parse_elem(r, "x");
  for (std::size_t n = 2; n <= 4; ++n) {
    CHECK(oracle::equal(psi(r, n), oracle::psi(r, n)));
    for (std::size_t i = 1; i <= 2 * n; ++i)
      for (std::size_t j = 1; j <= 2 * n; ++j) {
        if (i == j || j == pi_index(i)) continue;
        Matrix s = gen_S(r, n, i, j, x);
        CHECK(oracle::equal(s, oracle::S(r, n, i, j, x)));
        CHECK(oracle::symplectic(s));
      }
    for (Shape sh : kShapes)
      for (std::size_t i = 2; i <= n; ++i) {
        Matrix e = gen_abcd(r, n, sh, i, x);
        CHECK(oracle::equal(e, oracle::E(r, n, sh, i, x)));
        CHECK(is_symplectic(e));
        CHECK(oracle::equal(e * symplectic_inverse(e), oracle::ident(r, 2 * n)));
      }
    for (Shape sh : {Shape::B, Shape::C})
      for (std::size_t j = 1; j <= n; ++j) CHECK(oracle::equal(gen_small(r, n, sh, j, x), oracle::U(r, n, sh, j, x)));
  }
}

TEST_CASE("symplectic-predicate") {
  Ring r = ring_make("zmod:15");
  Matrix m = Matrix::identity(r, 4);
  m(0, 2) = r->from_int(1);
  CHECK_FALSE(is_symplectic(m));
  CHECK(is_symplectic(gen_corner(r, 2, CornerKind::E12, r->from_int(4))));
}

TEST_CASE("splitting-property") {
  Ring r = ring_make("poly:q:x,y");
  Elem x = parse_elem(r, "x"), y = parse_elem(r, "y");
  BlockRow row{shape_matrix(Shape::A, x), shape_matrix(Shape::C, y)};
  auto [top, bottom] = splitting(row);
  CHECK(oracle::equal(oracle::mul(top, bottom), block_E(row)));
  BlockRow one{shape_matrix(Shape::A, x), Matrix::zero(r, 2, 2)};
  CHECK(oracle::equal(block_E(one), oracle::E(r, 3, Shape::A, 2, x)));
  BlockRow bad{mat2(r, x, y, y, x), Matrix::zero(r, 2, 2)};
  CHECK_THROWS_AS(block_E(bad), Error);
}

TEST_CASE("shape-products-closed-form") {
  Ring r = ring_make("poly:q:x,y");
  Elem x = parse_elem(r, "x"), y = parse_elem(r, "y");
  for (Shape p : kShapes)
    for (Shape q : kShapes) CHECK(id_shape_product(p, q, x, y).holds());
}

TEST_CASE("same-shape-brackets-vanish-through-n4") {
  Ring r = ring_make("poly:q:x,y");
  Elem x = parse_elem(r, "x"), y = parse_elem(r, "y");
  for (std::size_t n = 2; n <= 4; ++n)
    for (Shape s : kShapes)
      for (std::size_t i = 2; i <= n; ++i)
        for (std::size_t j = 2; j <= n; ++j)
          CHECK(bracket(gen_abcd(r, n, s, i, x), gen_abcd(r, n, s, j, y)).is_identity());
}

TEST_CASE("sympmat-round-trip") {
  Ring r = ring_make("zmod:15");
  Matrix m = gen_S(r, 2, 1, 3, r->from_int(4)) * gen_abcd(r, 2, Shape::D, 2, r->from_int(7));
  Ring back;
  Matrix p = parse_sympmat(format_sympmat(m), &back);
  CHECK(same_ring(back, r));
  CHECK(p == m);
  CHECK_THROWS_AS(parse_sympmat("sympmat n=2 ring=zmod:15 entries=1;2"), Error);
}

TEST_CASE("bad-indices") {
  Ring r = ring_make("zmod:15");
  CHECK_THROWS_AS(gen_S(r, 2, 1, 2, r->one()), Error);
  CHECK_THROWS_AS(gen_S(r, 2, 1, 1, r->one()), Error);
  CHECK_THROWS_AS(gen_abcd(r, 2, Shape::A, 1, r->one()), Error);
  CHECK_THROWS_AS(gen_abcd(r, 2, Shape::A, 3, r->one()), Error);
}
