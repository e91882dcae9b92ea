#pragma once

// Dense matrices over a ring. Sizes stay small (2n <= 12), so storage is a
// flat row-major vector and products skip zero entries of the left factor.

#include <functional>
#include <string>
#include <vector>

#include "esp/ring.hpp"

namespace esp {

class Matrix {
 public:
  Matrix() = default;
  Matrix(Ring ring, std::size_t rows, std::size_t cols);

  static Matrix identity(const Ring& ring, std::size_t n);
  static Matrix zero(const Ring& ring, std::size_t rows, std::size_t cols);
  /// Row-major from a flat list.
  static Matrix from_entries(const Ring& ring, std::size_t rows, std::size_t cols, std::vector<Elem> entries);

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  // 0-based access.
  const Elem& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  Elem& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const std::vector<Elem>& entries() const { return a_; }

  Matrix transpose() const;
  Matrix operator-() const;
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Elem& c, const Matrix& a);
  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  bool is_identity() const;
  bool is_zero() const;

  /// Entrywise image in another ring.
  Matrix map(const Ring& target, const std::function<Elem(const Elem&)>& f) const;
  /// Embeds entries into `target` (a ring further up the tower).
  Matrix lift(const Ring& target) const;

  std::string str() const;

 private:
  Ring ring_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Elem> a_;
};

/// 2x2 determinant.
Elem det2(const Matrix& m);
/// Inverse of a 2x2 matrix with determinant 1.
Matrix inverse_sl2(const Matrix& m);
Matrix mat2(const Ring& ring, const Elem& a, const Elem& b, const Elem& c, const Elem& d);

/// a ⊥ b.
Matrix direct_sum(const Matrix& a, const Matrix& b);
/// I_{2(pos-1)} ⊥ m ⊥ I for a 2x2 (or 2k x 2k) block m placed at block `pos`.
Matrix place_block(std::size_t n, const Matrix& m, std::size_t pos);

}  // namespace esp
