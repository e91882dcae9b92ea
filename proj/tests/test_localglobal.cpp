#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "esp/localglobal.hpp"
#include "esp/text.hpp"
#include "oracle.hpp"

using namespace esp;

namespace {

Ring loc_t() { return ring_make("loc:poly:q:t:s=t"); }

Matrix conj_target(const Ring& L, std::size_t n, Shape X, std::size_t i, const Elem& a, int k, Shape Y,
                   std::size_t j, int m, const Elem& x) {
  Elem g = frac(L, a, k);
  Elem h = L->embed(x * L->base()->pow(L->s(), m));
  Matrix e = oracle::E(L, n, X, i, g);
  return oracle::mul(oracle::mul(e, oracle::E(L, n, Y, j, h)), oracle::E(L, n, X, i, -g));
}

int error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return static_cast<int>(e.code());
  }
  return -1;
}

}  // namespace

TEST_CASE("conj-same-shape-single-term") {
  Ring L = loc_t();
  const Ring& B = L->base();
  Elem a = parse_elem(B, "1+t"), x = parse_elem(B, "2");
  for (Shape s : kShapes) {
    auto d = conj_decompose(L, 3, s, 2, a, 1, s, 3, 2, x);
    CHECK(d.case_no == 1);
    CHECK(d.word.size() == 1);
  }
}

TEST_CASE("conj-all-pairs-match-oracle") {
  Ring L = loc_t();
  const Ring& B = L->base();
  Elem a = parse_elem(B, "1+t"), x = parse_elem(B, "2-t");
  for (auto [k, m] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 4}, {1, 5}})
    for (Shape X : kShapes)
      for (Shape Y : kShapes)
        for (std::size_t i = 2; i <= 3; ++i)
          for (std::size_t j = 2; j <= 3; ++j) {
            auto d = conj_terms(L, 3, X, i, a, k, Y, j, m, x);
            CHECK(is_abcd_only(d.word));
            CHECK(oracle::equal(oracle::eval(d.word), conj_target(L, 3, X, i, a, k, Y, j, m, x)));
            CHECK(d.trace.terms.size() <= 45);
            if (d.case_no == 2) CHECK(d.trace.terms.size() <= 5);
          }
}

TEST_CASE("conj-bilinear-exponents-positive") {
  Ring L = loc_t();
  const Ring& B = L->base();
  auto d = conj_decompose(L, 2, Shape::A, 2, B->one(), 1, Shape::B, 2, 3, B->one());
  CHECK(d.case_no == 2);
  CHECK(d.trace.min_exponent() >= 1);
}

TEST_CASE("conj-exponent-too-small") {
  Ring L = loc_t();
  const Ring& B = L->base();
  for (int m : {0, 1, 2})
    CHECK(error_code([&] { conj_terms(L, 2, Shape::A, 2, B->one(), 2, Shape::D, 2, m, B->one()); }) ==
          static_cast<int>(ErrorCode::ExponentTooSmall));
  CHECK(error_code([&] { conj_terms(ring_make("q"), 2, Shape::A, 2, B->one(), 1, Shape::D, 2, 3, B->one()); }) ==
        static_cast<int>(ErrorCode::RingMismatch));
}

TEST_CASE("conj-min-exponent-monotone-unbounded") {
  Ring L = loc_t();
  const Ring& B = L->base();
  Elem a = parse_elem(B, "1+t"), x = parse_elem(B, "3");
  for (int k = 1; k <= 2; ++k)
    for (Shape X : kShapes)
      for (Shape Y : kShapes)
        for (std::size_t i = 2; i <= 3; ++i)
          for (std::size_t j = 2; j <= 3; ++j) {
            if (X == Y) continue;
            int prev = -1000, first = 0;
            for (int m = k + 1; m <= k + 6; ++m) {
              int e = conj_terms(L, 3, X, i, a, k, Y, j, m, x).trace.min_exponent();
              if (m == k + 1) first = e;
              CHECK(e >= prev);
              prev = e;
            }
            int far = conj_terms(L, 3, X, i, a, k, Y, j, 8 * k + 8, x).trace.min_exponent();
            CHECK(far > first);
            CHECK(far >= 1);
          }
}

TEST_CASE("merge-terms-collects-s-factors") {
  Ring L = loc_t();
  const Ring& B = L->base();
  std::vector<ValTerm> t{{Shape::A, 2, 1, parse_elem(B, "t^2")}, {Shape::A, 2, 3, parse_elem(B, "1")},
                         {Shape::B, 2, 0, B->zero()}};
  auto m = merge_terms(L->s(), t);
  REQUIRE(m.size() == 1);
  CHECK(m[0].exp == 3);
  CHECK(m[0].coeff == B->from_int(2));
}

TEST_CASE("group-identity-shuffle") {
  Ring r = ring_make("zmod:15");
  std::mt19937_64 rng(5);
  for (int t = 0; t < 500; ++t) {
    std::size_t k = 1 + rng() % 4;
    std::vector<std::pair<Word, Word>> pairs;
    Matrix lhs = Matrix::identity(r, 4);
    for (std::size_t i = 0; i < k; ++i) {
      Word a = oracle::random_word(r, 2, rng, 3), b = rng() % 3 ? oracle::random_word(r, 2, rng, 3) : Word(r, 2);
      lhs = lhs * eval(a) * eval(b);
      pairs.emplace_back(a, b);
    }
    CHECK(oracle::equal(oracle::eval(group_identity_shuffle(pairs)), lhs));
  }
  CHECK_THROWS_AS(group_identity_shuffle({}), Error);
}

TEST_CASE("dilate-single-atom") {
  Ring Lx = ring_make("upoly:loc:poly:q:t:s=t:X");
  const Ring& L = Lx->base();
  Elem inv = Lx->embed(frac(L, L->base()->one(), 1));
  Word w(Lx, 2, {Atom::abcd(Shape::A, 2, uni_var(Lx) * inv)});
  auto d = dilate(w);
  CHECK(d.m == 1);
  CHECK(is_abcd_only(d.word));
  Elem sm = Lx->embed(L->embed(L->s()));
  Matrix expect = eval(w).map(Lx, [&](const Elem& p) { return eval_hom(p, uni_var(Lx) * sm, [](const Elem& c) { return c; }); });
  Matrix got = eval(d.word).map(Lx, [&](const Elem& p) {
    return eval_hom(p, uni_var(Lx), [&](const Elem& c) { return Lx->embed(L->embed(c)); });
  });
  CHECK(got == expect);
}

TEST_CASE("dilate-conjugated-atom") {
  Ring Lx = ring_make("upoly:loc:poly:q:t:s=t:X");
  const Ring& L = Lx->base();
  Elem inv = Lx->embed(frac(L, L->base()->one(), 1));
  Word w(Lx, 2, {Atom::abcd(Shape::A, 2, inv), Atom::abcd(Shape::D, 2, uni_var(Lx) * inv),
                 Atom::abcd(Shape::A, 2, -inv)});
  auto d = dilate(w);
  CHECK(d.m >= 2);
  CHECK(d.attempts.size() == static_cast<std::size_t>(d.m));
  CHECK(is_abcd_only(d.word));
}

TEST_CASE("dilate-trivial-cases") {
  Ring Lx = ring_make("upoly:loc:poly:q:t:s=t:X");
  CHECK(dilate(Word(Lx, 2)).m == 0);
  Word integral(Lx, 2, {Atom::abcd(Shape::C, 2, uni_var(Lx) * parse_elem(Lx, "t"))});
  CHECK(dilate(integral).m == 0);
  Word not_h(Lx, 2, {Atom::abcd(Shape::C, 2, Lx->one())});
  CHECK(error_code([&] { dilate(not_h); }) == static_cast<int>(ErrorCode::NotHomotopy));
  Word bad(Lx, 2, {Atom::e12(uni_var(Lx))});
  CHECK(error_code([&] { dilate(bad); }) == static_cast<int>(ErrorCode::AlphabetViolation));
  CHECK(error_code([&] { dilate(Word(ring_make("upoly:q:X"), 2)); }) == static_cast<int>(ErrorCode::RingMismatch));
}

TEST_CASE("cover-parse-and-check") {
  Ring r = ring_make("zmod:15");
  CoverData c = parse_cover(r, "# two units\ns=2 c=12 b=2 N=1\ns=7 c=1 b=7 N=1\n");
  REQUIRE(c.elems.size() == 2);
  check_cover(c);
  CHECK(parse_cover(r, cover_text(c)).elems.size() == 2);
  CHECK(error_code([&] { check_cover(parse_cover(r, "s=2 c=1 b=2 N=1\ns=7 c=1 b=7 N=1")); }) ==
        static_cast<int>(ErrorCode::CoverNotComaximal));
  CHECK(error_code([&] { check_cover(parse_cover(r, "s=3 c=1 b=1 N=1")); }) ==
        static_cast<int>(ErrorCode::CoverExponentTooSmall));
  CHECK(error_code([&] { parse_cover(r, "s=2 c=1"); }) == static_cast<int>(ErrorCode::ParseError));
  CHECK(error_code([&] { parse_cover(r, "s=2 c=1 b=2 N=1 q=3"); }) == static_cast<int>(ErrorCode::ParseError));
  CHECK(error_code([&] { check_cover(CoverData{}); }) == static_cast<int>(ErrorCode::CoverNotComaximal));
}

TEST_CASE("unit-cover-zmod") {
  for (const char* d : {"zmod:15", "zmod:105", "zmod:7"}) {
    CoverData c = unit_cover(ring_make(d));
    check_cover(c);
    CHECK(c.elems.size() == 2);
  }
}

TEST_CASE("patch-random-homotopies") {
  Ring r = ring_make("zmod:15");
  Ring RX = RingImpl::uni_poly(r, "X");
  CoverData cover = unit_cover(r);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    Word g = oracle::random_abcd_word(r, 2, rng, 3);
    Word h0 = oracle::random_abcd_word(r, 2, rng, 3);
    Word h = map_word(h0, RX, [&](const Elem& p) { return RX->embed(p) * uni_var(RX); });
    Matrix alpha = eval(concat(concat(lift_word(g, RX), h), inverse(lift_word(g, RX))));
    auto p = patch(alpha, cover, conjugate_locals(cover, g, h));
    CHECK(is_abcd_only(p.word));
    CHECK(eval(p.word) == alpha);
  }
}

TEST_CASE("patch-trivial-cover") {
  Ring r = ring_make("zmod:15");
  Ring RX = RingImpl::uni_poly(r, "X");
  CoverData cover = parse_cover(r, "s=1 c=1 b=1 N=0");
  Word h(RX, 2, {Atom::abcd(Shape::B, 2, uni_var(RX) * RX->from_int(4))});
  auto p = patch(eval(h), cover, conjugate_locals(cover, Word(r, 2), h));
  CHECK(p.m == std::vector<int>{0});
  CHECK(eval(p.word) == eval(h));
}

TEST_CASE("patch-rejects-mismatch") {
  Ring r = ring_make("zmod:15");
  Ring RX = RingImpl::uni_poly(r, "X");
  CoverData cover = unit_cover(r);
  Word h(RX, 2, {Atom::abcd(Shape::B, 2, uni_var(RX))});
  Word other(RX, 2, {Atom::abcd(Shape::C, 2, uni_var(RX))});
  auto locals = conjugate_locals(cover, Word(r, 2), other);
  CHECK(error_code([&] { patch(eval(h), cover, locals); }) == static_cast<int>(ErrorCode::LocalWordMismatch));
  locals.pop_back();
  CHECK(error_code([&] { patch(eval(h), cover, locals); }) == static_cast<int>(ErrorCode::LocalWordMismatch));
}

TEST_CASE("normality-identity-corner-general") {
  Ring r = ring_make("zmod:15");
  CoverData cover = unit_cover(r);
  Word h(r, 2, {Atom::abcd(Shape::B, 2, r->from_int(4)), Atom::abcd(Shape::D, 2, r->from_int(7))});
  CHECK(normality_demo(Matrix::identity(r, 4), h, cover).verified);
  Word corner(r, 2, {Atom::e12(r->from_int(3)), Atom::e21(r->from_int(2))});
  auto nc = normality_demo(eval(corner), h, cover);
  CHECK(nc.verified);
  CHECK(nc.g.empty());
  std::mt19937_64 rng(9);
  for (int t = 0; t < 3; ++t) {
    Matrix gamma = eval(oracle::random_word(r, 2, rng, 4));
    auto res = normality_demo(gamma, h, cover);
    CHECK(res.verified);
    CHECK(is_abcd_only(res.word));
    CHECK(oracle::equal(oracle::eval(res.word), oracle::mul(oracle::mul(gamma, eval(h)), symplectic_inverse(gamma))));
  }
  CHECK(error_code([&] { normality_demo(Matrix::identity(r, 4), Word(r, 2, {Atom::e12(r->one())}), cover); }) ==
        static_cast<int>(ErrorCode::AlphabetViolation));
}
