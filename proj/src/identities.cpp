#include "esp/identities.hpp"

namespace esp {

std::string bindings_text(const Bindings& b) {
  std::string out;
  for (std::size_t k = 0; k < b.size(); ++k) out += (k ? ", " : "") + b[k].first + "=" + b[k].second.str();
  return out;
}

Matrix bracket(const Matrix& g, const Matrix& h) { return g * h * symplectic_inverse(g) * symplectic_inverse(h); }

namespace {

using K = BracketRule::Kind;

constexpr BracketRule kId{K::Identity, Shape::A, 0};
constexpr BracketRule kSpecial{K::Special, Shape::A, 0};
constexpr BracketRule first(Shape s, int c) { return {K::UnitFirst, s, c}; }
constexpr BracketRule at_i(Shape s, int c) { return {K::UnitAtI, s, c}; }
constexpr BracketRule placed(Shape s, int c) { return {K::Placed, s, c}; }

constexpr int idx(Shape s) { return static_cast<int>(s); }
constexpr int unit_idx(Shape s) { return s == Shape::B ? 0 : 1; }

UnitRule unit_rule(Shape u, bool at_first, int uc, Shape e, int ec) { return {false, u, at_first, uc, e, ec}; }

BracketTables make_printed() {
  using S = Shape;
  BracketTables t;
  for (auto& row : t.bracket)
    for (auto& cell : row) cell = {kId, kId, kId};
  auto set = [&](S x, S y, BracketRule lt, BracketRule eq, BracketRule gt) { t.bracket[idx(x)][idx(y)] = {lt, eq, gt}; };
  set(S::A, S::B, kId, first(S::B, 4), kId);
  set(S::A, S::C, placed(S::C, -2), at_i(S::C, -4), placed(S::C, -2));
  set(S::A, S::D, placed(S::D, -2), kSpecial, placed(S::D, -2));
  set(S::B, S::A, kId, first(S::B, -4), kId);
  set(S::B, S::C, placed(S::A, 2), kSpecial, placed(S::A, 2));
  set(S::B, S::D, placed(S::B, -2), at_i(S::B, -4), placed(S::B, -2));
  set(S::C, S::A, placed(S::C, 2), at_i(S::C, 4), placed(S::C, 2));
  set(S::C, S::B, placed(S::D, -2), kSpecial, placed(S::D, -2));
  set(S::C, S::D, kId, first(S::C, 4), kId);
  set(S::D, S::A, placed(S::A, 2), kSpecial, placed(S::A, 2));
  set(S::D, S::B, placed(S::B, 2), at_i(S::B, 4), placed(S::B, 2));
  set(S::D, S::C, kId, first(S::C, -4), kId);

  // Displayed i = j = 2 brackets.
  t.special[idx(S::A)].blocks = {{{{S::A, 8, 2, 2}, {S::A, 2, 1, 1}, {S::D, 2, 1, 1}},
                                  {{S::D, 4, 1, 2}, {S::A, -4, 2, 1}},
                                  {{S::A, 4, 1, 2}, {S::D, -4, 2, 1}},
                                  {{S::D, -8, 2, 2}, {S::D, -2, 1, 1}, {S::A, -2, 1, 1}}}};
  t.special[idx(S::B)].blocks = {{{{S::A, 2, 1, 1}, {S::D, 2, 1, 1}, {S::A, 8, 2, 2}},
                                  {{S::B, -4, 2, 1}, {S::C, 4, 1, 2}},
                                  {{S::B, -4, 2, 1}, {S::C, 4, 1, 2}},
                                  {{S::A, 2, 1, 1}, {S::D, 2, 1, 1}, {S::A, 8, 2, 2}}}};
  t.special[idx(S::C)].blocks = {{{{S::A, -2, 1, 1}, {S::D, -2, 1, 1}, {S::D, -8, 2, 2}},
                                  {{S::B, 4, 1, 2}, {S::C, -4, 2, 1}},
                                  {{S::B, 4, 1, 2}, {S::C, -4, 1, 2}},
                                  {{S::A, -2, 1, 1}, {S::D, -2, 1, 1}, {S::D, -8, 2, 2}}}};
  t.special[idx(S::D)].blocks = {{{{S::A, -2, 1, 1}, {S::D, -2, 1, 1}, {S::D, -8, 2, 2}},
                                  {{S::A, 4, 1, 2}, {S::D, -4, 2, 1}},
                                  {{S::D, 4, 1, 2}, {S::A, -4, 2, 1}},
                                  {{S::A, 2, 1, 1}, {S::D, 2, 1, 1}, {S::A, 8, 2, 2}}}};

  // Brackets with units; cases j = 1, j = i, otherwise.
  auto uset = [&](S x, S y, UnitRule first_case, UnitRule same, UnitRule other) {
    t.unit[idx(x)][unit_idx(y)] = {first_case, same, other};
  };
  UnitRule id;
  uset(S::B, S::B, id, id, id);
  uset(S::C, S::C, id, id, id);
  uset(S::A, S::B, id, unit_rule(S::B, true, 4, S::B, 2), id);
  uset(S::A, S::C, unit_rule(S::C, false, 4, S::C, -2), id, id);
  uset(S::B, S::C, unit_rule(S::B, false, -4, S::D, -2), unit_rule(S::B, true, -4, S::A, 2), id);
  uset(S::C, S::B, unit_rule(S::C, false, -4, S::A, -2), unit_rule(S::C, true, -4, S::D, 2), id);
  uset(S::D, S::B, unit_rule(S::B, false, 4, S::B, -2), id, id);
  uset(S::D, S::C, unit_rule(S::B, false, 4, S::C, -2), id, id);
  return t;
}

BracketTables make_corrected();

}  // namespace

const BracketTables& printed_tables() {
  static const BracketTables t = make_printed();
  return t;
}

const BracketTables& corrected_tables() {
  static const BracketTables t = make_corrected();
  return t;
}

namespace {

BracketTables make_corrected() {
  using S = Shape;
  BracketTables t = make_printed();
  auto patch_gt = [&](S x, S y, BracketRule r, const char* entry, const char* printed, const char* corrected) {
    t.bracket[idx(x)][idx(y)][2] = r;
    t.errata.push_back({entry, printed, corrected});
  };
  // For i > j the shape sits on blocks j..i with the roles of the two blocks
  // exchanged, which swaps A and D.
  patch_gt(S::A, S::D, placed(S::A, -2), "bracket-AD-gt", "E(D)(-2xy) on blocks j..i", "E(A)(-2xy) on blocks j..i");
  patch_gt(S::B, S::C, placed(S::D, 2), "bracket-BC-gt", "E(A)(2xy) on blocks j..i", "E(D)(2xy) on blocks j..i");
  patch_gt(S::C, S::B, placed(S::A, -2), "bracket-CB-gt", "E(D)(-2xy) on blocks j..i", "E(A)(-2xy) on blocks j..i");
  patch_gt(S::D, S::A, placed(S::D, 2), "bracket-DA-gt", "E(A)(2xy) on blocks j..i", "E(D)(2xy) on blocks j..i");

  t.special[idx(S::C)].blocks[2][1] = {S::C, -4, 2, 1};
  t.errata.push_back({"bracket-CB-eq", "block (2,1) term C(-4xy^2)", "block (2,1) term C(-4x^2y)"});

  auto patch_unit = [&](S x, S y, int c, UnitRule r, const char* entry, const char* printed, const char* corrected) {
    t.unit[idx(x)][unit_idx(y)][c] = r;
    t.errata.push_back({entry, printed, corrected});
  };
  patch_unit(S::B, S::C, 0, unit_rule(S::B, false, -4, S::D, 2), "unit-bracket-BUC-first", "U_B(-4x^2y)_i E(D_i)(-2xy)",
             "U_B(-4x^2y)_i E(D_i)(2xy)");
  patch_unit(S::C, S::B, 1, unit_rule(S::C, true, -4, S::D, -2), "unit-bracket-CUB-same", "U_C(-4x^2y)_1 E(D_i)(2xy)",
             "U_C(-4x^2y)_1 E(D_i)(-2xy)");
  patch_unit(S::D, S::B, 0, unit_rule(S::B, false, 4, S::B, 2), "unit-bracket-DUB-first", "U_B(4x^2y)_i E(B_i)(-2xy)",
             "U_B(4x^2y)_i E(B_i)(2xy)");
  patch_unit(S::D, S::C, 0, UnitRule{}, "unit-bracket-DUC-first", "U_B(4x^2y)_i E(C_i)(-2xy)", "I");
  patch_unit(S::D, S::C, 1, unit_rule(S::C, true, 4, S::C, -2), "unit-bracket-DUC-same", "I",
             "U_C(4x^2y)_1 E(C_i)(-2xy)");
  return t;
}

Elem monomial(const Elem& x, const Elem& y, int coef, int ex, int ey) {
  const Ring& r = x.ring();
  return coef * (r->pow(x, ex) * r->pow(y, ey));
}

Matrix embed_on_blocks(std::size_t n, std::size_t i, const Matrix& m4) {
  Matrix out = Matrix::identity(m4.ring(), 2 * n);
  std::size_t off = 2 * (i - 1);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      std::size_t rr = r < 2 ? r : off + r - 2;
      std::size_t cc = c < 2 ? c : off + c - 2;
      out(rr, cc) = m4(r, c);
    }
  }
  return out;
}

void check_position(std::size_t n, std::size_t i, std::size_t lo) {
  if (i < lo || i > n)
    throw Error(ErrorCode::BadIndices, "position " + std::to_string(i) + " not in " + std::to_string(lo) + ".." +
                                           std::to_string(n));
}

}  // namespace

Matrix special_matrix(const SpecialMatrix& s, const Elem& x, const Elem& y) {
  const Ring& r = x.ring();
  Matrix m = Matrix::identity(r, 4);
  for (int b = 0; b < 4; ++b) {
    Matrix blk = Matrix::zero(r, 2, 2);
    for (const auto& term : s.blocks[b]) blk = blk + shape_matrix(term.shape, monomial(x, y, term.coef, term.ex, term.ey));
    std::size_t r0 = (b / 2) * 2, c0 = (b % 2) * 2;
    if (b == 0 || b == 3) blk = blk + Matrix::identity(r, 2);
    m.set_block(r0, c0, blk);
  }
  return m;
}

Word commutator_abcd(const Ring& ring, std::size_t n, Shape X, std::size_t i, const Elem& x0, Shape Y, std::size_t j,
                     const Elem& y0, const BracketTables& t) {
  check_position(n, i, 2);
  check_position(n, j, 2);
  Elem x = ring->embed(x0), y = ring->embed(y0);
  int c = i < j ? 0 : (i == j ? 1 : 2);
  const BracketRule& rule = t.bracket[idx(X)][idx(Y)][c];
  Word w(ring, n);
  Elem p = ring->from_int(rule.coef) * x * y;
  switch (rule.kind) {
    case K::Identity: break;
    case K::UnitFirst: w.push(Atom::unit(rule.shape, 1, p)); break;
    case K::UnitAtI: w.push(Atom::unit(rule.shape, i, p)); break;
    case K::Placed: w.push(Atom::placed(rule.shape, std::min(i, j), std::max(i, j), p)); break;
    case K::Special: w.push(Atom::dense(embed_on_blocks(n, i, special_matrix(t.special[idx(X)], x, y)))); break;
  }
  return w;
}

Word commutator_with_unit(const Ring& ring, std::size_t n, Shape X, std::size_t i, const Elem& x0, Shape Y,
                          std::size_t j, const Elem& y0, const BracketTables& t) {
  check_position(n, i, 2);
  check_position(n, j, 1);
  if (Y != Shape::B && Y != Shape::C) throw Error(ErrorCode::BadIndices, "unit shape must be B or C");
  Elem x = ring->embed(x0), y = ring->embed(y0);
  int c = j == 1 ? 0 : (j == i ? 1 : 2);
  const UnitRule& rule = t.unit[idx(X)][unit_idx(Y)][c];
  Word w(ring, n);
  if (rule.identity) return w;
  w.push(Atom::unit(rule.unit_shape, rule.unit_at_first ? 1 : i, ring->from_int(rule.unit_coef) * x * x * y));
  w.push(Atom::abcd(rule.e_shape, i, ring->from_int(rule.e_coef) * x * y));
  return w;
}

IdentityInstance id_commutator_abcd(const Ring& ring, std::size_t n, Shape X, std::size_t i, const Elem& x, Shape Y,
                                    std::size_t j, const Elem& y, const BracketTables& t) {
  IdentityInstance inst;
  const char* cs = i < j ? "lt" : (i == j ? "eq" : "gt");
  inst.name = std::string("bracket-") + shape_char(X) + shape_char(Y) + "-" + cs;
  inst.n = n;
  inst.lhs = bracket(gen_abcd(ring, n, X, i, x), gen_abcd(ring, n, Y, j, y));
  inst.rhs = eval(commutator_abcd(ring, n, X, i, x, Y, j, y, t));
  inst.bindings = {{"i", ring->from_int(static_cast<std::int64_t>(i))},
                   {"j", ring->from_int(static_cast<std::int64_t>(j))},
                   {"x", x},
                   {"y", y}};
  return inst;
}

IdentityInstance id_commutator_with_unit(const Ring& ring, std::size_t n, Shape X, std::size_t i, const Elem& x,
                                         Shape Y, std::size_t j, const Elem& y, const BracketTables& t) {
  IdentityInstance inst;
  const char* cs = j == 1 ? "first" : (j == i ? "same" : "other");
  inst.name = std::string("unit-bracket-") + shape_char(X) + "U" + shape_char(Y) + "-" + cs;
  inst.n = n;
  inst.lhs = bracket(gen_abcd(ring, n, X, i, x), gen_small(ring, n, Y, j, y));
  inst.rhs = eval(commutator_with_unit(ring, n, X, i, x, Y, j, y, t));
  inst.bindings = {{"i", ring->from_int(static_cast<std::int64_t>(i))},
                   {"j", ring->from_int(static_cast<std::int64_t>(j))},
                   {"x", x},
                   {"y", y}};
  return inst;
}

IdentityInstance id_shape_product(Shape p, Shape q, const Elem& x, const Elem& y) {
  IdentityInstance inst;
  inst.name = std::string("shape-product-") + shape_char(p) + shape_char(q);
  inst.n = 1;
  inst.lhs = shape_matrix(p, x) * shape_matrix(q, y);
  inst.rhs = block2_mul(block2_make(p, x), block2_make(q, y)).matrix();
  inst.bindings = {{"x", x}, {"y", y}};
  return inst;
}

IdentityInstance id_conjugate_corner(const Ring& ring, std::size_t n, const Elem& l, const Elem& x, const Elem& y) {
  IdentityInstance inst;
  inst.name = "corner-conjugation";
  inst.n = n;
  Matrix e21 = gen_corner(ring, n, CornerKind::E21, l);
  Matrix e21i = gen_corner(ring, n, CornerKind::E21, -l);
  inst.lhs = e21 * gen_S(ring, n, 1, 2 * n - 1, x) * gen_S(ring, n, 1, 2 * n, y) * e21i;
  Matrix delta = gen_corner(ring, 1, CornerKind::E21, l) * gen_corner(ring, 1, CornerKind::E12, x * y) *
                 gen_corner(ring, 1, CornerKind::E21, -l);
  inst.rhs = place_block(n, delta, 1) * block_E_at(n, n, mat2(ring, x, y, l * x, l * y));
  inst.bindings = {{"lambda", l}, {"x", x}, {"y", y}};
  return inst;
}

IdentityInstance id_elementary_criterion(const Ring& ring, std::size_t n, std::size_t k, const Elem& l,
                                         const Elem& m, const Elem& x, const Elem& y, const Matrix& eps) {
  check_position(n, k, 2);
  if (!det2(eps).is_one()) throw Error(ErrorCode::RowConditionFailed, "eps must have determinant 1");
  if (eps(0, 0) != l || eps(1, 0) != m)
    throw Error(ErrorCode::RowConditionFailed, "(lambda, mu) must be the first column of eps");
  IdentityInstance inst;
  inst.name = "elementary-criterion";
  inst.n = n;
  inst.lhs = block_E_at(n, k, mat2(ring, l * x, l * y, m * x, m * y));
  Matrix e = place_block(n, eps, 1);
  inst.rhs = e * gen_corner(ring, n, CornerKind::E12, -(x * y)) * gen_S(ring, n, 1, 2 * k - 1, x) *
             gen_S(ring, n, 1, 2 * k, y) * place_block(n, inverse_sl2(eps), 1);
  inst.bindings = {{"lambda", l}, {"mu", m}, {"x", x}, {"y", y}};
  return inst;
}

namespace {

IdentityInstance conj_S_row(const Ring& ring, std::size_t n, const Matrix& delta, const std::vector<Elem>& ys,
                            std::size_t row) {
  if (ys.size() != 2 * n - 2) throw Error(ErrorCode::DimensionMismatch, "need y_3..y_2n");
  IdentityInstance inst;
  inst.name = row == 1 ? "conjugate-row1" : "conjugate-row2";
  inst.n = n;
  Matrix d = place_block(n, delta, 1);
  Matrix prod = Matrix::identity(ring, 2 * n);
  for (std::size_t i = 3; i <= 2 * n; ++i) prod = prod * gen_S(ring, n, row, i, ys[i - 3]);
  inst.lhs = d * prod * place_block(n, inverse_sl2(delta), 1);
  Elem sum = ring->zero();
  for (std::size_t i = 2; i <= n; ++i) sum += ys[2 * i - 4] * ys[2 * i - 3];
  Elem l = delta(0, row - 1), m = delta(1, row - 1);
  Matrix inner = row == 1 ? gen_corner(ring, 1, CornerKind::E12, sum) : gen_corner(ring, 1, CornerKind::E21, -sum);
  Matrix sigma = delta * inner * inverse_sl2(delta);
  Matrix rhs = place_block(n, sigma, 1);
  for (std::size_t i = 2; i <= n; ++i) {
    const Elem& a = ys[2 * i - 4];
    const Elem& b = ys[2 * i - 3];
    rhs = rhs * block_E_at(n, i, mat2(ring, l * a, l * b, m * a, m * b));
  }
  inst.rhs = rhs;
  inst.bindings = {{"p", delta(0, 0)}, {"q", delta(0, 1)}, {"r", delta(1, 0)}, {"s", delta(1, 1)}};
  for (std::size_t i = 0; i < ys.size(); ++i) inst.bindings.emplace_back("y" + std::to_string(i + 3), ys[i]);
  return inst;
}

}  // namespace

IdentityInstance id_conj_S_row(const Ring& ring, std::size_t n, const Matrix& delta, const std::vector<Elem>& ys) {
  return conj_S_row(ring, n, delta, ys, 1);
}

IdentityInstance id_conj_S_row2(const Ring& ring, std::size_t n, const Matrix& delta, const std::vector<Elem>& ys) {
  return conj_S_row(ring, n, delta, ys, 2);
}

Matrix ch_matrix(const Elem& l, const Elem& m, const Elem& a, const Elem& b) {
  const Ring& r = l.ring();
  Elem ab = a * b;
  return mat2(r, r->one() - 2 * (l * m * ab), 2 * (l * l * ab), -2 * (m * m * ab), r->one() + 2 * (l * m * ab));
}

IdentityInstance id_ch_split(const Ring& ring, std::size_t n, std::size_t pos, const Elem& l, const Elem& m,
                             const Elem& x, const Elem& y) {
  check_position(n, pos, 2);
  IdentityInstance inst;
  inst.name = "ch-split";
  inst.n = n;
  Elem a = ring->half(x + y), b = ring->half(x - y);
  inst.lhs = block_E_at(n, pos, mat2(ring, l * x, l * y, m * x, m * y));
  inst.rhs = place_block(n, ch_matrix(l, m, a, b), 1) * block_E_at(n, pos, mat2(ring, l * a, l * a, m * a, m * a)) *
             block_E_at(n, pos, mat2(ring, l * b, -(l * b), m * b, -(m * b)));
  inst.bindings = {{"lambda", l}, {"mu", m}, {"x", x}, {"y", y}};
  return inst;
}

IdentityInstance id_ch_conjugate(const Ring& ring, const Matrix& eps, const Elem& a, const Elem& b) {
  IdentityInstance inst;
  inst.name = "ch-conjugate";
  inst.n = 1;
  inst.lhs = ch_matrix(eps(0, 0), eps(1, 0), a, b);
  inst.rhs = eps * gen_corner(ring, 1, CornerKind::E12, 2 * (a * b)) * inverse_sl2(eps);
  inst.bindings = {{"a", a}, {"b", b}};
  return inst;
}

IdentityInstance id_ac_split(const Ring& ring, std::size_t n, std::size_t pos, const Elem& l, const Elem& m,
                             const Elem& a) {
  check_position(n, pos, 2);
  IdentityInstance inst;
  inst.name = "ac-split";
  inst.n = n;
  Elem x = ring->half(l * a + m * a), y = ring->half(l * a - m * a);
  inst.lhs = block_E_at(n, pos, mat2(ring, l * a, l * a, m * a, m * a));
  inst.rhs = gen_abcd(ring, n, Shape::A, pos, x) * gen_abcd(ring, n, Shape::C, pos, y) *
             gen_small(ring, n, Shape::C, pos, 2 * (x * y));
  inst.bindings = {{"lambda", l}, {"mu", m}, {"a", a}};
  return inst;
}

IdentityInstance id_bd_split(const Ring& ring, std::size_t n, std::size_t pos, const Elem& l, const Elem& m,
                             const Elem& b) {
  check_position(n, pos, 2);
  IdentityInstance inst;
  inst.name = "bd-split";
  inst.n = n;
  Elem x = ring->half(l * b + m * b), y = ring->half(m * b - l * b);
  inst.lhs = block_E_at(n, pos, mat2(ring, l * b, -(l * b), m * b, -(m * b)));
  inst.rhs = gen_abcd(ring, n, Shape::B, pos, x) * gen_abcd(ring, n, Shape::D, pos, y) *
             gen_small(ring, n, Shape::B, pos, 2 * (x * y));
  inst.bindings = {{"lambda", l}, {"mu", m}, {"b", b}};
  return inst;
}

IdentityInstance id_conj_block(const Ring& ring, std::size_t n, std::size_t pos, const Matrix& delta, const Elem& l,
                               const Elem& m, const Elem& x, const Elem& y) {
  check_position(n, pos, 2);
  IdentityInstance inst;
  inst.name = "conjugate-block";
  inst.n = n;
  Matrix d = place_block(n, delta, 1);
  inst.lhs = d * block_E_at(n, pos, mat2(ring, l * x, l * y, m * x, m * y)) * place_block(n, inverse_sl2(delta), 1);
  Elem l2 = delta(0, 0) * l + delta(0, 1) * m;
  Elem m2 = delta(1, 0) * l + delta(1, 1) * m;
  inst.rhs = block_E_at(n, pos, mat2(ring, l2 * x, l2 * y, m2 * x, m2 * y));
  inst.bindings = {{"lambda", l}, {"mu", m}, {"x", x}, {"y", y}};
  return inst;
}

Word sl2_conj_word(const Ring& ring, std::size_t n, const Matrix& delta, Shape shape, std::size_t i, const Elem& x0) {
  check_position(n, i, 2);
  Elem x = ring->embed(x0);
  Elem p = delta(0, 0), q = delta(0, 1), r = delta(1, 0), s = delta(1, 1);
  Elem px = p * x, qx = q * x, rx = r * x, sx = s * x;
  Word w(ring, n);
  switch (shape) {
    case Shape::A:
      w.push(Atom::block(i, mat2(ring, px, px, rx, rx)));
      w.push(Atom::block(i, mat2(ring, qx, qx, sx, sx)));
      w.push(Atom::unit(Shape::C, i, -(x * x)));
      break;
    case Shape::B:
      w.push(Atom::block(i, mat2(ring, px, -px, rx, -rx)));
      w.push(Atom::block(i, mat2(ring, qx, -qx, sx, -sx)));
      w.push(Atom::unit(Shape::B, i, x * x));
      break;
    case Shape::C:
      w.push(Atom::block(i, mat2(ring, px, px, rx, rx)));
      w.push(Atom::block(i, mat2(ring, -qx, -qx, -sx, -sx)));
      w.push(Atom::unit(Shape::C, i, x * x));
      break;
    case Shape::D:
      w.push(Atom::block(i, mat2(ring, -px, px, -rx, rx)));
      w.push(Atom::block(i, mat2(ring, qx, -qx, sx, -sx)));
      w.push(Atom::unit(Shape::B, i, -(x * x)));
      break;
  }
  return w;
}

IdentityInstance id_sl2_conj(const Ring& ring, std::size_t n, const Matrix& delta, Shape shape, std::size_t i,
                             const Elem& x) {
  if (!det2(delta).is_one()) throw Error(ErrorCode::NotInvertible, "delta must have determinant 1");
  IdentityInstance inst;
  inst.name = std::string("sl2-conjugate-") + shape_char(shape);
  inst.n = n;
  inst.lhs = place_block(n, delta, 1) * gen_abcd(ring, n, shape, i, x) * place_block(n, inverse_sl2(delta), 1);
  inst.rhs = eval(sl2_conj_word(ring, n, delta, shape, i, x));
  inst.bindings = {{"p", delta(0, 0)}, {"q", delta(0, 1)}, {"r", delta(1, 0)}, {"s", delta(1, 1)}, {"x", x}};
  return inst;
}

namespace {

// [x, y[z,w]] = [x,y] y [[x,z]z, [x,w]w] [w,z] y^{-1}, all as words.
Word composite(const Word& x, const Word& y, const Word& z, const Word& w) {
  Word out = commutator(x, y);
  out.append(y);
  Word xz = commutator(x, z).append(z);
  Word xw = commutator(x, w).append(w);
  out.append(commutator(xz, xw));
  out.append(commutator(w, z));
  out.append(inverse(y));
  return out;
}

Word single(const Ring& ring, std::size_t n, Atom a) { return Word(ring, n, {std::move(a)}); }

}  // namespace

Word composite_AD_word(const Ring& ring, std::size_t n, std::size_t i, const Elem& x, const Elem& y, const Elem& z) {
  check_position(n, i, 2);
  Elem t = 4 * (y * y * z);
  return composite(single(ring, n, Atom::abcd(Shape::A, i, x)), single(ring, n, Atom::unit(Shape::C, 1, -t)),
                   single(ring, n, Atom::abcd(Shape::C, i, y)), single(ring, n, Atom::unit(Shape::B, i, -z)));
}

Word composite_BC_word(const Ring& ring, std::size_t n, std::size_t i, const Elem& x, const Elem& y, const Elem& z) {
  check_position(n, i, 2);
  Elem t = 4 * (y * y * z);
  return composite(single(ring, n, Atom::abcd(Shape::B, i, x)), single(ring, n, Atom::unit(Shape::C, i, t)),
                   single(ring, n, Atom::abcd(Shape::A, i, y)), single(ring, n, Atom::unit(Shape::C, 1, -z)));
}

IdentityInstance id_composite_AD(const Ring& ring, std::size_t n, std::size_t i, const Elem& x, const Elem& y,
                                 const Elem& z) {
  IdentityInstance inst;
  inst.name = "composite-AD";
  inst.n = n;
  inst.lhs = bracket(gen_abcd(ring, n, Shape::A, i, x), gen_abcd(ring, n, Shape::D, i, 2 * (y * z)));
  inst.rhs = eval(composite_AD_word(ring, n, i, x, y, z));
  inst.bindings = {{"x", x}, {"y", y}, {"z", z}};
  return inst;
}

IdentityInstance id_composite_BC(const Ring& ring, std::size_t n, std::size_t i, const Elem& x, const Elem& y,
                                 const Elem& z) {
  IdentityInstance inst;
  inst.name = "composite-BC";
  inst.n = n;
  inst.lhs = bracket(gen_abcd(ring, n, Shape::B, i, x), gen_abcd(ring, n, Shape::C, i, 2 * (y * z)));
  inst.rhs = eval(composite_BC_word(ring, n, i, x, y, z));
  inst.bindings = {{"x", x}, {"y", y}, {"z", z}};
  return inst;
}

}  // namespace esp
