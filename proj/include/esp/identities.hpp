#pragma once

// Closed-form identities between symplectic generators. Each constructor
// materializes both sides as matrices so that checking is plain equality,
// independent of any rewriting.
//
// The commutator tables are data (BracketTables) so that a corrupted copy can
// be run through the same checks.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "esp/word.hpp"

namespace esp {

using Bindings = std::vector<std::pair<std::string, Elem>>;

struct IdentityInstance {
  std::string name;
  std::size_t n = 0;
  Matrix lhs;
  Matrix rhs;
  Bindings bindings;

  bool holds() const { return lhs == rhs; }
};

std::string bindings_text(const Bindings& b);

// ---------------------------------------------------------------------------
// Commutator tables.

/// Right-hand side of [E(X_i)(x), E(Y_j)(y)] for one of the cases i<j, i=j,
/// i>j: the identity, a unit I_2+Z(c xy) at block 1 or at block i, the basic
/// shape Z(c xy) coupling blocks min(i,j) and max(i,j), or an explicit matrix.
struct BracketRule {
  enum class Kind { Identity, UnitFirst, UnitAtI, Placed, Special };
  Kind kind = Kind::Identity;
  Shape shape = Shape::A;
  int coef = 0;
};

/// One term Z(c x^ex y^ey) of a 2x2 block.
struct ShapeTerm {
  Shape shape;
  int coef;
  int ex;
  int ey;
};

/// A 4x4 matrix given by its 2x2 blocks; diagonal blocks carry an implicit I_2.
struct SpecialMatrix {
  std::array<std::vector<ShapeTerm>, 4> blocks;  // (1,1), (1,2), (2,1), (2,2)
};

/// Right-hand side of [E(X_i)(x), I ⊥ (I_2+Y(y)) at j ⊥ I]: identity, or
/// (I_2 + U(c1 x^2 y) at block 1 or i) · E(Z_i)(c2 x y).
struct UnitRule {
  bool identity = true;
  Shape unit_shape = Shape::B;
  bool unit_at_first = true;
  int unit_coef = 0;
  Shape e_shape = Shape::A;
  int e_coef = 0;
};

struct Erratum {
  std::string entry;
  std::string printed;
  std::string corrected;
};

struct BracketTables {
  // [X][Y][case], case 0: i<j, 1: i=j, 2: i>j.
  std::array<std::array<std::array<BracketRule, 3>, 4>, 4> bracket;
  // Explicit i = j matrices for (A,D), (B,C), (C,B), (D,A), indexed by X.
  std::array<SpecialMatrix, 4> special;
  // [X][Y in {B,C}][case], case 0: j=1, 1: j=i, 2: otherwise.
  std::array<std::array<std::array<UnitRule, 3>, 2>, 4> unit;
  std::vector<Erratum> errata;
};

/// The tables exactly as printed in the source.
const BracketTables& printed_tables();
/// The printed tables with oracle-found corrections applied; `errata` lists
/// every change.
const BracketTables& corrected_tables();

Matrix special_matrix(const SpecialMatrix& s, const Elem& x, const Elem& y);

Word commutator_abcd(const Ring& ring, std::size_t n, Shape X, std::size_t i, const Elem& x, Shape Y, std::size_t j,
                     const Elem& y, const BracketTables& t = corrected_tables());
Word commutator_with_unit(const Ring& ring, std::size_t n, Shape X, std::size_t i, const Elem& x, Shape Y,
                          std::size_t j, const Elem& y, const BracketTables& t = corrected_tables());

IdentityInstance id_commutator_abcd(const Ring& ring, std::size_t n, Shape X, std::size_t i, const Elem& x, Shape Y,
                                    std::size_t j, const Elem& y, const BracketTables& t = corrected_tables());
IdentityInstance id_commutator_with_unit(const Ring& ring, std::size_t n, Shape X, std::size_t i, const Elem& x,
                                         Shape Y, std::size_t j, const Elem& y,
                                         const BracketTables& t = corrected_tables());

/// Product table of the 2x2 shapes: the closed form against plain
/// multiplication.
IdentityInstance id_shape_product(Shape p, Shape q, const Elem& x, const Elem& y);

// ---------------------------------------------------------------------------
// Conjugation and splitting identities.

/// E21(l) S_{1,2n-1}(x) S_{1,2n}(y) E21(-l) = (delta ⊥ I) E^n[[x,y],[lx,ly]]
/// with delta = E21(l) E12(xy) E21(-l).
IdentityInstance id_conjugate_corner(const Ring& ring, std::size_t n, const Elem& l, const Elem& x, const Elem& y);

/// E^k[[lx,ly],[mx,my]] = (eps ⊥ I) E12(-xy) S_{1,2k-1}(x) S_{1,2k}(y) (eps ⊥ I)^{-1}
/// where (l, m) is the first column of eps. Throws RowConditionFailed otherwise.
IdentityInstance id_elementary_criterion(const Ring& ring, std::size_t n, std::size_t k, const Elem& l,
                                         const Elem& m, const Elem& x, const Elem& y, const Matrix& eps);

/// (delta ⊥ I) prod_{i=3}^{2n} S_{1i}(y_i) (delta ⊥ I)^{-1}
///   = (sigma ⊥ I) prod_{i=2}^{n} E^i[[l y_{2i-1}, l y_{2i}], [m y_{2i-1}, m y_{2i}]]
/// with (l, m) the first column of delta and sigma = delta E12(sum y_{2i-1} y_{2i}) delta^{-1}.
/// `ys` holds y_3..y_{2n}.
IdentityInstance id_conj_S_row(const Ring& ring, std::size_t n, const Matrix& delta, const std::vector<Elem>& ys);
/// The same for row 2: S_{2i}(y_i), with (l, m) the second column of delta
/// and sigma = delta E21(-sum y_{2i-1} y_{2i}) delta^{-1}.
IdentityInstance id_conj_S_row2(const Ring& ring, std::size_t n, const Matrix& delta, const std::vector<Elem>& ys);

/// [[1-2lmab, 2l^2ab], [-2m^2ab, 1+2lmab]].
Matrix ch_matrix(const Elem& l, const Elem& m, const Elem& a, const Elem& b);
/// E^pos[[lx,ly],[mx,my]] = (Ch ⊥ I) E^pos[[la,la],[ma,ma]] E^pos[[lb,-lb],[mb,-mb]],
/// a = (x+y)/2, b = (x-y)/2.
IdentityInstance id_ch_split(const Ring& ring, std::size_t n, std::size_t pos, const Elem& l, const Elem& m,
                             const Elem& x, const Elem& y);
/// Ch = eps E12(2ab) eps^{-1} when (l, m) is the first column of eps.
IdentityInstance id_ch_conjugate(const Ring& ring, const Matrix& eps, const Elem& a, const Elem& b);

/// The row-proportional A-type block as E(A)·E(C)·(I_2 + C(2xy)) at pos, with
/// x = (l+m)a/2, y = (l-m)a/2.
IdentityInstance id_ac_split(const Ring& ring, std::size_t n, std::size_t pos, const Elem& l, const Elem& m,
                             const Elem& a);
/// The B-type block as E(B)·E(D)·(I_2 + B(2xy)) at pos, x = (l+m)b/2, y = (m-l)b/2.
IdentityInstance id_bd_split(const Ring& ring, std::size_t n, std::size_t pos, const Elem& l, const Elem& m,
                             const Elem& b);

/// (delta ⊥ I) E^pos[[lx,ly],[mx,my]] (delta ⊥ I)^{-1} = E^pos[[l'x,l'y],[m'x,m'y]],
/// (l', m')^t = delta (l, m)^t.
IdentityInstance id_conj_block(const Ring& ring, std::size_t n, std::size_t pos, const Matrix& delta, const Elem& l,
                               const Elem& m, const Elem& x, const Elem& y);

/// (delta ⊥ I) E(Z_i)(x) (delta ⊥ I)^{-1} as two E^i blocks and a unit at i.
Word sl2_conj_word(const Ring& ring, std::size_t n, const Matrix& delta, Shape shape, std::size_t i, const Elem& x);
IdentityInstance id_sl2_conj(const Ring& ring, std::size_t n, const Matrix& delta, Shape shape, std::size_t i,
                             const Elem& x);

/// [E(A_i)(x), E(D_i)(2yz)] and [E(B_i)(x), E(C_i)(2yz)] expanded through
/// [x, y[z,w]] = [x,y] y [[x,z]z, [x,w]w] [w,z] y^{-1}.
Word composite_AD_word(const Ring& ring, std::size_t n, std::size_t i, const Elem& x, const Elem& y, const Elem& z);
Word composite_BC_word(const Ring& ring, std::size_t n, std::size_t i, const Elem& x, const Elem& y, const Elem& z);
IdentityInstance id_composite_AD(const Ring& ring, std::size_t n, std::size_t i, const Elem& x, const Elem& y,
                                 const Elem& z);
IdentityInstance id_composite_BC(const Ring& ring, std::size_t n, std::size_t i, const Elem& x, const Elem& y,
                                 const Elem& z);

/// The bracket [g, h] of two matrices, g and h symplectic.
Matrix bracket(const Matrix& g, const Matrix& h);

}  // namespace esp
