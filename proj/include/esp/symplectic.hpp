#pragma once

// The standard alternating form, the classical elementary symplectic
// generators, the four rank-one block shapes and the E(X) constructor.
//
// Indices follow the usual 1-based matrix conventions: S_ij acts on rows and
// columns 1..2n, and block position p covers rows/columns 2p-1 and 2p.

#include <optional>
#include <utility>
#include <vector>

#include "esp/matrix.hpp"

namespace esp {

enum class Shape { A, B, C, D };

char shape_char(Shape s);
std::optional<Shape> shape_from_char(char c);
inline constexpr Shape kShapes[] = {Shape::A, Shape::B, Shape::C, Shape::D};

enum class CornerKind { E12, E21 };

Matrix psi(const Ring& ring, std::size_t n);
bool is_symplectic(const Matrix& m);
/// For symplectic m: m^{-1} = -psi m^t psi.
Matrix symplectic_inverse(const Matrix& m);

/// The transposition pi = (1 2)(3 4)...; 1-based.
inline std::size_t pi_index(std::size_t i) { return (i % 2 == 1) ? i + 1 : i - 1; }

Matrix gen_S(const Ring& ring, std::size_t n, std::size_t i, std::size_t j, const Elem& lambda);
Matrix gen_corner(const Ring& ring, std::size_t n, CornerKind kind, const Elem& x);

/// The 2x2 matrices A(a), B(b), C(c), D(d).
Matrix shape_matrix(Shape s, const Elem& x);
/// I_2 + B(y) or I_2 + C(y).
Matrix unit_block(Shape s, const Elem& y);

struct Block2x2 {
  enum class Tag { A, B, C, D, General };
  Tag tag = Tag::General;
  Elem param;      // tagged shapes
  Matrix entries;  // always filled

  Matrix matrix() const { return entries; }
};

Block2x2 block2_make(Shape s, const Elem& x);
Block2x2 block2_general(const Matrix& m);
/// Product using the closed-form shape table; untagged operands fall back to
/// plain multiplication.
Block2x2 block2_mul(const Block2x2& p, const Block2x2& q);

/// The 2 x (2n-2) matrix X as its blocks X_3, X_5, ..., X_{2n-1}, i.e. one
/// 2x2 block per position 2..n.
using BlockRow = std::vector<Matrix>;

BlockRow empty_row(const Ring& ring, std::size_t n);
/// [[I_2, X], [psi_{n-1} X^t psi_1, I]]; n = row.size() + 1.
Matrix block_E(const BlockRow& row);
/// block_E with a single block X at position pos.
Matrix block_E_at(std::size_t n, std::size_t pos, const Matrix& x);
/// E(X_i)(x) for a basic shape X at position i in 2..n.
Matrix gen_abcd(const Ring& ring, std::size_t n, Shape s, std::size_t i, const Elem& x);
/// I_{2j-2} ⊥ (I_2 + Y(y)) ⊥ I, Y in {B, C}, 1 <= j <= n.
Matrix gen_small(const Ring& ring, std::size_t n, Shape y_shape, std::size_t j, const Elem& y);
/// I_{2(f-1)} ⊥ E(Z_{g-f+1})(x) ⊥ I_{2(n-g)}: the basic shape coupling blocks
/// f and g (f < g). gen_placed(.., 1, i, ..) is gen_abcd(.., i, ..).
Matrix gen_placed(const Ring& ring, std::size_t n, Shape s, std::size_t f, std::size_t g, const Elem& x);

/// top = [[I, X], [0, I]], bottom = [[I, 0], [psi X^t psi, I]].
std::pair<Matrix, Matrix> splitting(const BlockRow& row);

}  // namespace esp
