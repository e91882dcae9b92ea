#include "esp/matrix.hpp"

#include <sstream>

namespace esp {

namespace {

void require_same(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, std::string(op) + " of " + std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()) + " and " + std::to_string(b.rows()) +
                                                  "x" + std::to_string(b.cols()));
}

}  // namespace

Matrix::Matrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), a_(rows * cols, ring_->zero()) {}

Matrix Matrix::identity(const Ring& ring, std::size_t n) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = ring->one();
  return m;
}

Matrix Matrix::zero(const Ring& ring, std::size_t rows, std::size_t cols) { return Matrix(ring, rows, cols); }

Matrix Matrix::from_entries(const Ring& ring, std::size_t rows, std::size_t cols, std::vector<Elem> entries) {
  if (entries.size() != rows * cols)
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(rows * cols) + " entries, got " +
                                                  std::to_string(entries.size()));
  Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < entries.size(); ++i) m.a_[i] = ring->embed(entries[i]);
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(ring_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::operator-() const {
  Matrix m = *this;
  for (auto& e : m.a_) e = -e;
  return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same(a, b, "sum");
  Matrix m = a;
  for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] += b.a_[i];
  return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same(a, b, "difference");
  Matrix m = a;
  for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] -= b.a_[i];
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_)
    throw Error(ErrorCode::DimensionMismatch, "product of " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                                                  " and " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  Matrix m(a.ring_, a.rows_, b.cols_);
  const Elem one = a.ring_->one();
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Elem& x = a(i, k);
      if (x.is_zero()) continue;
      bool unit = x == one;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Elem& y = b(k, j);
        if (y.is_zero()) continue;
        m(i, j) += unit ? y : x * y;
      }
    }
  }
  return m;
}

Matrix operator*(const Elem& c, const Matrix& a) {
  Matrix m = a;
  for (auto& e : m.a_) e = c * e;
  return m;
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t i = 0; i < a.a_.size(); ++i)
    if (a.a_[i] != b.a_[i]) return false;
  return true;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
  if (r0 + rows > rows_ || c0 + cols > cols_) throw Error(ErrorCode::DimensionMismatch, "block out of range");
  Matrix m(ring_, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
  return m;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw Error(ErrorCode::DimensionMismatch, "block out of range");
  for (std::size_t r = 0; r < b.rows_; ++r)
    for (std::size_t c = 0; c < b.cols_; ++c) (*this)(r0 + r, c0 + c) = ring_->embed(b(r, c));
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (r == c ? !(*this)(r, c).is_one() : !(*this)(r, c).is_zero()) return false;
  return true;
}

bool Matrix::is_zero() const {
  for (const auto& e : a_)
    if (!e.is_zero()) return false;
  return true;
}

Matrix Matrix::map(const Ring& target, const std::function<Elem(const Elem&)>& f) const {
  Matrix m(target, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = target->embed(f(a_[i]));
  return m;
}

Matrix Matrix::lift(const Ring& target) const {
  return map(target, [](const Elem& e) { return e; });
}

std::string Matrix::str() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < rows_; ++r) {
    os << "[";
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << (*this)(r, c).str();
    os << "]\n";
  }
  return os.str();
}

Elem det2(const Matrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

Matrix inverse_sl2(const Matrix& m) {
  if (!det2(m).is_one()) throw Error(ErrorCode::NotInvertible, "2x2 matrix does not have determinant 1");
  return mat2(m.ring(), m(1, 1), -m(0, 1), -m(1, 0), m(0, 0));
}

Matrix mat2(const Ring& ring, const Elem& a, const Elem& b, const Elem& c, const Elem& d) {
  return Matrix::from_entries(ring, 2, 2, {a, b, c, d});
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix m(a.ring(), a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

Matrix place_block(std::size_t n, const Matrix& m, std::size_t pos) {
  if (pos < 1 || 2 * (pos - 1) + m.rows() > 2 * n) throw Error(ErrorCode::BadIndices, "block does not fit");
  Matrix out = Matrix::identity(m.ring(), 2 * n);
  out.set_block(2 * (pos - 1), 2 * (pos - 1), m);
  return out;
}

}  // namespace esp
