#pragma once

// Reference constructions used as oracles: generator matrices written out
// entry by entry and a plain triple-loop product, sharing nothing with the
// library beyond ring arithmetic. Also random inputs for property tests.

#include <array>
#include <random>
#include <stdexcept>

#include "esp/word.hpp"

namespace oracle {

using esp::Elem;
using esp::Matrix;
using esp::Ring;

inline Matrix ident(const Ring& r, std::size_t d) {
  Matrix m(r, d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = i == j ? r->one() : r->zero();
  return m;
}

inline Matrix mul(const Matrix& a, const Matrix& b) {
  const Ring& r = a.ring();
  Matrix c(r, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Elem s = r->zero();
      for (std::size_t k = 0; k < a.cols(); ++k) s = s + a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline bool equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

// psi_n = [[0,1],[-1,0]] repeated on the diagonal.
inline Matrix psi(const Ring& r, std::size_t n) {
  Matrix m(r, 2 * n, 2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = 0; j < 2 * n; ++j) m(i, j) = r->zero();
  for (std::size_t k = 0; k < n; ++k) {
    m(2 * k, 2 * k + 1) = r->one();
    m(2 * k + 1, 2 * k) = -r->one();
  }
  return m;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.ring(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline bool symplectic(const Matrix& m) {
  Matrix p = oracle::psi(m.ring(), m.rows() / 2);
  return equal(mul(mul(transpose(m), p), m), p);
}

// The 2x2 entries of A(x), B(x), C(x), D(x).
inline std::array<Elem, 4> shape(esp::Shape s, const Elem& x) {
  switch (s) {
    case esp::Shape::A: return {x, x, x, x};
    case esp::Shape::B: return {x, -x, x, -x};
    case esp::Shape::C: return {x, x, -x, -x};
    case esp::Shape::D: return {-x, x, x, -x};
  }
  throw std::logic_error("shape");
}

inline std::size_t pi(std::size_t i) { return i % 2 ? i + 1 : i - 1; }

// I + l e_ij - (-1)^{i+j} l e_{pi(j) pi(i)}, 1-based.
inline Matrix S(const Ring& r, std::size_t n, std::size_t i, std::size_t j, const Elem& l) {
  Matrix m = ident(r, 2 * n);
  m(i - 1, j - 1) = m(i - 1, j - 1) + l;
  Elem c = (i + j) % 2 ? l : -l;
  m(pi(j) - 1, pi(i) - 1) = m(pi(j) - 1, pi(i) - 1) + c;
  return m;
}

// E(X_i)(x): X in rows 1-2 at block i, psi_1 X^t psi_1 in block row i, column block 1.
inline Matrix E(const Ring& r, std::size_t n, esp::Shape s, std::size_t i, const Elem& x) {
  auto [a, b, c, d] = shape(s, x);
  Matrix m = ident(r, 2 * n);
  std::size_t o = 2 * i - 2;
  m(0, o) = a;
  m(0, o + 1) = b;
  m(1, o) = c;
  m(1, o + 1) = d;
  Matrix X(r, 2, 2);
  X(0, 0) = a;
  X(0, 1) = b;
  X(1, 0) = c;
  X(1, 1) = d;
  Matrix p = oracle::psi(r, 1), low = mul(mul(p, transpose(X)), p);
  for (std::size_t u = 0; u < 2; ++u)
    for (std::size_t v = 0; v < 2; ++v) m(o + u, v) = low(u, v);
  return m;
}

// I_2 + B(y) or I_2 + C(y) at block j.
inline Matrix U(const Ring& r, std::size_t n, esp::Shape s, std::size_t j, const Elem& y) {
  auto e = shape(s, y);
  Matrix m = ident(r, 2 * n);
  std::size_t o = 2 * j - 2;
  for (std::size_t u = 0; u < 2; ++u)
    for (std::size_t v = 0; v < 2; ++v) m(o + u, o + v) = m(o + u, o + v) + e[2 * u + v];
  return m;
}

inline Matrix atom(const Ring& r, std::size_t n, const esp::Atom& a) {
  Elem p = a.param.valid() ? r->embed(a.param) : Elem();
  switch (a.kind) {
    case esp::AtomKind::S: return S(r, n, a.i, a.j, p);
    case esp::AtomKind::E12: {
      Matrix m = ident(r, 2 * n);
      m(0, 1) = p;
      return m;
    }
    case esp::AtomKind::E21: {
      Matrix m = ident(r, 2 * n);
      m(1, 0) = p;
      return m;
    }
    case esp::AtomKind::ABCD: return E(r, n, a.shape, a.i, p);
    case esp::AtomKind::Unit: return U(r, n, a.shape, a.i, p);
    default: throw std::logic_error("oracle covers S, E12, E21, ABCD and unit atoms");
  }
}

inline Matrix eval(const esp::Word& w) {
  Matrix m = ident(w.ring, 2 * w.n);
  for (const auto& a : w.atoms) m = mul(m, atom(w.ring, w.n, a));
  return m;
}

// Residues, small fractions, small integers, plus a multiple of the first
// variable of a polynomial ring.
inline Elem random_elem(const Ring& r, std::mt19937_64& rng) {
  switch (r->kind()) {
    case esp::RingKind::IntegersMod: return r->from_int(static_cast<std::int64_t>(rng() % r->modulus()));
    case esp::RingKind::Rationals:
      return r->from_rational(mpq_class(static_cast<long>(rng() % 15) - 7, 1 + static_cast<long>(rng() % 4)));
    case esp::RingKind::MultiPoly:
    case esp::RingKind::UniPoly: {
      Elem v = r->kind() == esp::RingKind::UniPoly ? esp::uni_var(r) : *r->variable_elem(r->variables().front());
      return r->from_int(static_cast<std::int64_t>(rng() % 7) - 3) +
             r->from_int(static_cast<std::int64_t>(rng() % 3) - 1) * v;
    }
    default: return r->from_int(static_cast<std::int64_t>(rng() % 7) - 3);
  }
}

// A word of 1..max_len classical generators S_ij, E12, E21.
inline esp::Word random_word(const Ring& r, std::size_t n, std::mt19937_64& rng, std::size_t max_len = 8) {
  esp::Word w(r, n);
  std::size_t len = 1 + rng() % max_len;
  for (std::size_t k = 0; k < len; ++k) {
    Elem e = oracle::random_elem(r, rng);
    std::size_t kind = rng() % 6;
    if (kind == 0) {
      w.push(esp::Atom::e12(e));
    } else if (kind == 1) {
      w.push(esp::Atom::e21(e));
    } else {
      std::size_t i, j;
      do {
        i = 1 + rng() % (2 * n);
        j = 1 + rng() % (2 * n);
      } while (i == j || j == pi(i));
      w.push(esp::Atom::s(i, j, e));
    }
  }
  return w;
}

// A word of 1..max_len ABCD atoms.
inline esp::Word random_abcd_word(const Ring& r, std::size_t n, std::mt19937_64& rng, std::size_t max_len = 4) {
  esp::Word w(r, n);
  std::size_t len = 1 + rng() % max_len;
  for (std::size_t k = 0; k < len; ++k)
    w.push(esp::Atom::abcd(esp::kShapes[rng() % 4], 2 + rng() % (n - 1), oracle::random_elem(r, rng)));
  return w;
}

}  // namespace oracle
