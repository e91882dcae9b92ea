#include "esp/symplectic.hpp"

namespace esp {

char shape_char(Shape s) {
  switch (s) {
    case Shape::A: return 'A';
    case Shape::B: return 'B';
    case Shape::C: return 'C';
    case Shape::D: return 'D';
  }
  return '?';
}

std::optional<Shape> shape_from_char(char c) {
  switch (c) {
    case 'A': return Shape::A;
    case 'B': return Shape::B;
    case 'C': return Shape::C;
    case 'D': return Shape::D;
    default: return std::nullopt;
  }
}

Matrix psi(const Ring& ring, std::size_t n) {
  Matrix m(ring, 2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    m(2 * k, 2 * k + 1) = ring->one();
    m(2 * k + 1, 2 * k) = -ring->one();
  }
  return m;
}

bool is_symplectic(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
    throw Error(ErrorCode::DimensionMismatch, "symplectic test needs a square matrix of even size");
  Matrix p = psi(m.ring(), m.rows() / 2);
  return m.transpose() * p * m == p;
}

Matrix symplectic_inverse(const Matrix& m) {
  Matrix p = psi(m.ring(), m.rows() / 2);
  return -(p * m.transpose() * p);
}

Matrix gen_S(const Ring& ring, std::size_t n, std::size_t i, std::size_t j, const Elem& lambda) {
  if (i < 1 || j < 1 || i > 2 * n || j > 2 * n || i == j || j == pi_index(i))
    throw Error(ErrorCode::BadIndices, "S(" + std::to_string(i) + "," + std::to_string(j) + ") in Sp_" +
                                           std::to_string(2 * n));
  Elem l = ring->embed(lambda);
  Matrix m = Matrix::identity(ring, 2 * n);
  m(i - 1, j - 1) += l;
  Elem corr = ((i + j) % 2 == 0) ? -l : l;
  m(pi_index(j) - 1, pi_index(i) - 1) += corr;
  return m;
}

Matrix gen_corner(const Ring& ring, std::size_t n, CornerKind kind, const Elem& x) {
  Matrix m = Matrix::identity(ring, 2 * n);
  if (kind == CornerKind::E12) m(0, 1) = ring->embed(x);
  else m(1, 0) = ring->embed(x);
  return m;
}

Matrix shape_matrix(Shape s, const Elem& x) {
  const Ring& r = x.ring();
  Elem nx = -x;
  switch (s) {
    case Shape::A: return mat2(r, x, x, x, x);
    case Shape::B: return mat2(r, x, nx, x, nx);
    case Shape::C: return mat2(r, x, x, nx, nx);
    case Shape::D: return mat2(r, nx, x, x, nx);
  }
  return Matrix();
}

Matrix unit_block(Shape s, const Elem& y) {
  if (s != Shape::B && s != Shape::C) throw Error(ErrorCode::BadIndices, "unit blocks have shape B or C");
  return Matrix::identity(y.ring(), 2) + shape_matrix(s, y);
}

Block2x2 block2_make(Shape s, const Elem& x) {
  Block2x2 b;
  b.tag = static_cast<Block2x2::Tag>(static_cast<int>(s));
  b.param = x;
  b.entries = shape_matrix(s, x);
  return b;
}

Block2x2 block2_general(const Matrix& m) {
  Block2x2 b;
  b.entries = m;
  return b;
}

namespace {

// Entry (p, q): the product p(x)q(y) is shape `out` with parameter coef*xy,
// or zero when coef == 0.
struct ShapeProduct {
  Shape out;
  int coef;
};

constexpr ShapeProduct kShapeTable[4][4] = {
    {{Shape::A, 2}, {Shape::B, 2}, {Shape::A, 0}, {Shape::A, 0}},
    {{Shape::A, 0}, {Shape::A, 0}, {Shape::A, 2}, {Shape::B, -2}},
    {{Shape::C, 2}, {Shape::D, -2}, {Shape::A, 0}, {Shape::A, 0}},
    {{Shape::A, 0}, {Shape::A, 0}, {Shape::C, -2}, {Shape::D, -2}},
};

}  // namespace

Block2x2 block2_mul(const Block2x2& p, const Block2x2& q) {
  if (p.tag == Block2x2::Tag::General || q.tag == Block2x2::Tag::General)
    return block2_general(p.entries * q.entries);
  const auto& e = kShapeTable[static_cast<int>(p.tag)][static_cast<int>(q.tag)];
  if (e.coef == 0) return block2_general(Matrix::zero(p.param.ring(), 2, 2));
  return block2_make(e.out, e.coef * (p.param * q.param));
}

BlockRow empty_row(const Ring& ring, std::size_t n) { return BlockRow(n - 1, Matrix::zero(ring, 2, 2)); }

namespace {

Matrix row_matrix(const BlockRow& row) {
  const Ring& r = row.front().ring();
  Matrix x(r, 2, 2 * row.size());
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (!det2(row[k]).is_zero())
      throw Error(ErrorCode::NonZeroDet, "block at position " + std::to_string(k + 2) + " has nonzero determinant");
    x.set_block(0, 2 * k, row[k]);
  }
  return x;
}

}  // namespace

Matrix block_E(const BlockRow& row) {
  if (row.empty()) throw Error(ErrorCode::DimensionMismatch, "E(X) needs n >= 2");
  auto [top, bottom] = splitting(row);
  return top + bottom - Matrix::identity(top.ring(), top.rows());
}

Matrix block_E_at(std::size_t n, std::size_t pos, const Matrix& x) {
  if (pos < 2 || pos > n) throw Error(ErrorCode::BadIndices, "block position " + std::to_string(pos) + " not in 2.." + std::to_string(n));
  BlockRow row = empty_row(x.ring(), n);
  row[pos - 2] = x;
  return block_E(row);
}

Matrix gen_abcd(const Ring& ring, std::size_t n, Shape s, std::size_t i, const Elem& x) {
  if (i < 2 || i > n) throw Error(ErrorCode::BadIndices, "block position " + std::to_string(i) + " not in 2.." + std::to_string(n));
  // Top block X at (1, i); bottom block psi_1 X^t psi_1 = [[-d, b], [c, -a]] at (i, 1).
  Matrix blk = shape_matrix(s, ring->embed(x));
  Matrix m = Matrix::identity(ring, 2 * n);
  const std::size_t c = 2 * i - 2;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t k = 0; k < 2; ++k) m(r, c + k) = blk(r, k);
  m(c, 0) = -blk(1, 1), m(c, 1) = blk(0, 1);
  m(c + 1, 0) = blk(1, 0), m(c + 1, 1) = -blk(0, 0);
  return m;
}

Matrix gen_small(const Ring& ring, std::size_t n, Shape y_shape, std::size_t j, const Elem& y) {
  if (j < 1 || j > n) throw Error(ErrorCode::BadIndices, "unit position " + std::to_string(j) + " not in 1.." + std::to_string(n));
  return place_block(n, unit_block(y_shape, ring->embed(y)), j);
}

Matrix gen_placed(const Ring& ring, std::size_t n, Shape s, std::size_t f, std::size_t g, const Elem& x) {
  if (f < 1 || g <= f || g > n)
    throw Error(ErrorCode::BadIndices, "placed block " + std::to_string(f) + ".." + std::to_string(g));
  std::size_t k = g - f + 1;
  return place_block(n, gen_abcd(ring, k, s, k, x), f);
}

std::pair<Matrix, Matrix> splitting(const BlockRow& row) {
  Matrix x = row_matrix(row);
  const Ring& r = x.ring();
  std::size_t n = row.size() + 1;
  Matrix top = Matrix::identity(r, 2 * n);
  top.set_block(0, 2, x);
  Matrix bottom = Matrix::identity(r, 2 * n);
  bottom.set_block(2, 0, psi(r, n - 1) * x.transpose() * psi(r, 1));
  return {top, bottom};
}

}  // namespace esp
