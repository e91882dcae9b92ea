#include "esp/localglobal.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <sstream>

#include "esp/identities.hpp"
#include "esp/text.hpp"

namespace esp {

namespace {

using K = BracketRule::Kind;

constexpr int idx(Shape s) { return static_cast<int>(s); }

// c * s^e with c in the base ring.
struct SPow {
  Elem c;
  int e = 0;
};

SPow operator*(const SPow& a, const SPow& b) { return {a.c * b.c, a.e + b.e}; }
SPow scaled(std::int64_t k, const SPow& a) { return {k * a.c, a.e}; }
SPow negated(const SPow& a) { return {-a.c, a.e}; }

struct RawTerm {
  bool unit = false;
  Shape shape = Shape::A;
  std::size_t pos = 2;
  SPow v;
};

RawTerm abcd_term(Shape s, std::size_t pos, SPow v) { return {false, s, pos, std::move(v)}; }
RawTerm unit_term(Shape s, std::size_t pos, SPow v) { return {true, s, pos, std::move(v)}; }

std::vector<RawTerm> inverse_terms(const std::vector<RawTerm>& t) {
  std::vector<RawTerm> out(t.rbegin(), t.rend());
  for (auto& x : out) x.v = negated(x.v);
  return out;
}

void append(std::vector<RawTerm>& a, const std::vector<RawTerm>& b) { a.insert(a.end(), b.begin(), b.end()); }

int bracket_case(std::size_t i, std::size_t j) { return i < j ? 0 : (i == j ? 1 : 2); }

// [E(X_i)(p), E(Z_j)(q)] for an entry bilinear in pq that is a unit or I.
std::vector<RawTerm> abcd_bracket(Shape X, std::size_t i, const SPow& p, Shape Z, std::size_t j, const SPow& q) {
  const BracketRule& r = corrected_tables().bracket[idx(X)][idx(Z)][bracket_case(i, j)];
  SPow pq = scaled(r.coef, p * q);
  switch (r.kind) {
    case K::Identity: return {};
    case K::UnitFirst: return {unit_term(r.shape, 1, pq)};
    case K::UnitAtI: return {unit_term(r.shape, i, pq)};
    default: break;
  }
  throw Error(ErrorCode::Unsupported, "bracket entry is not a unit");
}

// [E(X_i)(p), I_2 + W(q) at block pos].
std::vector<RawTerm> unit_bracket(Shape X, std::size_t i, const SPow& p, Shape W, std::size_t pos, const SPow& q) {
  int c = pos == 1 ? 0 : (pos == i ? 1 : 2);
  const UnitRule& r = corrected_tables().unit[idx(X)][W == Shape::B ? 0 : 1][c];
  if (r.identity) return {};
  return {unit_term(r.unit_shape, r.unit_at_first ? 1 : i, scaled(r.unit_coef, p * p * q)),
          abcd_term(r.e_shape, i, scaled(r.e_coef, p * q))};
}

int floor_half(int e) { return e >= 0 ? e / 2 : -((-e + 1) / 2); }

// Units as ABCD brackets, the exponent split evenly between the two entries:
// U_B(c)_1 = [A_r(c/4), B_r(1)], U_C(c)_1 = [C_r(c/4), D_r(1)],
// U_C(c)_i = [A_i(-c/4), C_i(1)], U_B(c)_i = [B_i(-c/4), D_i(1)].
std::vector<ValTerm> to_abcd(const Ring& base, const std::vector<RawTerm>& raw, std::size_t r) {
  std::vector<ValTerm> out;
  const Elem q = base->half(base->half(base->one()));
  for (const auto& t : raw) {
    if (!t.unit) {
      out.push_back({t.shape, t.pos, t.v.e, t.v.c});
      continue;
    }
    int e1 = floor_half(t.v.e), e2 = t.v.e - e1;
    Shape g, h;
    std::size_t pos = t.pos == 1 ? r : t.pos;
    Elem c = t.v.c * q;
    if (t.pos == 1) {
      g = t.shape == Shape::B ? Shape::A : Shape::C;
      h = t.shape == Shape::B ? Shape::B : Shape::D;
    } else {
      g = t.shape == Shape::C ? Shape::A : Shape::B;
      h = t.shape == Shape::C ? Shape::C : Shape::D;
      c = -c;
    }
    const Elem one = base->one();
    out.push_back({g, pos, e1, c});
    out.push_back({h, pos, e2, one});
    out.push_back({g, pos, e1, -c});
    out.push_back({h, pos, e2, -one});
  }
  return out;
}

bool is_special_pair(Shape X, Shape Y) {
  return corrected_tables().bracket[idx(X)][idx(Y)][1].kind == K::Special;
}

Elem s_power(const Ring& loc, int e) {
  if (e >= 0) return loc->pow(loc->embed(loc->s()), static_cast<std::uint64_t>(e));
  return frac(loc, loc->base()->one(), static_cast<std::uint32_t>(-e));
}

// Case 3 with i = j: E(Y_i)(beta) = y [z, w] with y, w units and z = E(Z_i)(u),
// then [x, y[z,w]] = [x,y] y [[x,z]z, [x,w]w] [w,z] y^{-1}.
std::vector<RawTerm> composite_terms(Shape X, std::size_t i, const SPow& alpha, Shape Y, const SPow& beta, int U,
                                     const Ring& base) {
  for (Shape Z : kShapes) {
    if (is_special_pair(X, Z)) continue;
    for (Shape W : {Shape::B, Shape::C})
      for (int c : {0, 1}) {
        const UnitRule& r = corrected_tables().unit[idx(Z)][W == Shape::B ? 0 : 1][c];
        if (r.identity || r.e_shape != Y) continue;
        // [z, w] = U'(c1 u^2 v) E(Y_i)(c2 u v)
        SPow u{base->one(), U};
        SPow v{beta.c * base->inverse(base->from_int(r.e_coef)), beta.e - U};
        std::size_t wpos = c == 0 ? 1 : i;
        std::size_t ypos = r.unit_at_first ? 1 : i;
        SPow yv = scaled(-r.unit_coef, u * u * v);
        RawTerm y = unit_term(r.unit_shape, ypos, yv);
        RawTerm z = abcd_term(Z, i, u);
        RawTerm w = unit_term(W, wpos, v);
        std::vector<RawTerm> xy = unit_bracket(X, i, alpha, r.unit_shape, ypos, yv);
        std::vector<RawTerm> P = abcd_bracket(X, i, alpha, Z, i, u);
        P.push_back(z);
        std::vector<RawTerm> Q = unit_bracket(X, i, alpha, W, wpos, v);
        Q.push_back(w);
        std::vector<RawTerm> zw = unit_bracket(Z, i, u, W, wpos, v);
        std::vector<RawTerm> out = xy;
        out.push_back(y);
        append(out, P);
        append(out, Q);
        append(out, inverse_terms(P));
        append(out, inverse_terms(Q));
        append(out, inverse_terms(zw));
        out.push_back(unit_term(y.shape, y.pos, negated(yv)));
        out.push_back(abcd_term(Y, i, beta));
        return out;
      }
  }
  throw Error(ErrorCode::NoRuleFound, "no unit relation produces E(" + std::string(1, shape_char(Y)) + ")");
}

}  // namespace

int ValuationTrace::min_exponent() const {
  int m = INT_MAX;
  for (const auto& t : terms) m = std::min(m, t.exp);
  return m;
}

Word terms_word(const Ring& loc, std::size_t n, const std::vector<ValTerm>& terms) {
  Word w(loc, n);
  for (const auto& t : terms) w.push(Atom::abcd(t.shape, t.pos, loc->embed(t.coeff) * s_power(loc, t.exp)));
  return w;
}

std::vector<ValTerm> merge_terms(const Elem& s, std::vector<ValTerm> terms) {
  const Ring& base = s.ring();
  const bool extract = !base->is_unit(s);
  auto normalize = [&](ValTerm& t) {
    if (!extract) return;
    std::uint32_t v = s_valuation(t.coeff, s, 64);
    if (v == 0) return;
    t.coeff = *base->try_divide(t.coeff, base->pow(s, v));
    t.exp += static_cast<int>(v);
  };
  std::vector<ValTerm> st;
  for (auto& t : terms) {
    if (t.coeff.is_zero()) continue;
    normalize(t);
    if (!st.empty() && st.back().shape == t.shape && st.back().pos == t.pos) {
      ValTerm& b = st.back();
      int e = std::min(b.exp, t.exp);
      b.coeff = b.coeff * base->pow(s, static_cast<std::uint64_t>(b.exp - e)) +
                t.coeff * base->pow(s, static_cast<std::uint64_t>(t.exp - e));
      b.exp = e;
      if (b.coeff.is_zero()) st.pop_back();
      else normalize(b);
      continue;
    }
    st.push_back(std::move(t));
  }
  return st;
}

ConjDecomposition conj_terms(const Ring& loc, std::size_t n, Shape X, std::size_t i, const Elem& a0, int k, Shape Y,
                             std::size_t j, int m, const Elem& x0) {
  if (loc->kind() != RingKind::Localization) throw Error(ErrorCode::RingMismatch, "conj_decompose needs a localization R_s");
  if (i < 2 || i > n || j < 2 || j > n) throw Error(ErrorCode::BadIndices, "positions must lie in 2..n");
  if (m <= k)
    throw Error(ErrorCode::ExponentTooSmall, "m = " + std::to_string(m) + " must exceed k = " + std::to_string(k));
  const Ring& base = loc->base();
  const Elem& s = loc->s();
  Elem a = base->embed(a0), x = base->embed(x0);
  ConjDecomposition out;
  out.trace.k = k;
  out.trace.m = m;
  const BracketRule& rule = corrected_tables().bracket[idx(X)][idx(Y)][bracket_case(i, j)];
  out.case_no = X == Y ? 1 : (is_special_pair(X, Y) ? 3 : 2);
  std::vector<ValTerm> terms;
  if (rule.kind == K::Identity) {
    terms = {{Y, j, m, x}};
  } else if (rule.kind != K::Special) {
    // The bracket depends on the product of the parameters only, so
    // a/s^k and s^m x may be traded for a s^p and s^q x with p + q = m - k.
    int p = (m - k) / 2, q = m - k - p;
    terms = {{X, i, p, a}, {Y, j, q, x}, {X, i, p, -a}, {Y, j, q, -x}, {Y, j, m, x}};
  } else {
    SPow alpha{a, -k}, beta{x, m};
    int best = INT_MIN;
    for (int U = 0; U <= m; ++U) {
      auto cand = merge_terms(s, to_abcd(base, composite_terms(X, i, alpha, Y, beta, U, base), i));
      ValuationTrace t{k, m, cand};
      int v = cand.empty() ? INT_MAX : t.min_exponent();
      if (v > best) best = v, terms = std::move(cand);
    }
  }
  out.trace.terms = merge_terms(s, std::move(terms));
  out.word = terms_word(loc, n, out.trace.terms);
  return out;
}

ConjDecomposition conj_decompose(const Ring& loc, std::size_t n, Shape X, std::size_t i, const Elem& a, int k, Shape Y,
                                 std::size_t j, int m, const Elem& x) {
  ConjDecomposition out = conj_terms(loc, n, X, i, a, k, Y, j, m, x);
  Elem al = loc->embed(a) * s_power(loc, -k);
  Elem be = loc->embed(x) * s_power(loc, m);
  Matrix target = gen_abcd(loc, n, X, i, al) * gen_abcd(loc, n, Y, j, be) * gen_abcd(loc, n, X, i, -al);
  if (eval(out.word) != target)
    throw Error(ErrorCode::StepVerificationFailed, "conjugation decomposition does not evaluate to the conjugate");
  return out;
}

Word group_identity_shuffle(const std::vector<std::pair<Word, Word>>& pairs) {
  if (pairs.empty()) throw Error(ErrorCode::DimensionMismatch, "group_identity_shuffle needs at least one pair");
  Word out(pairs.front().first.ring, pairs.front().first.n);
  Word r(out.ring, out.n);
  for (const auto& [a, b] : pairs) {
    r.append(a);
    out.append(r).append(b).append(inverse(r));
  }
  return out.append(r);
}

// ---------------------------------------------------------------------------
// Dilation.

namespace {

struct ConstPart {
  Shape shape;
  std::size_t pos;
  Elem num;  // in R[X], constant
  int k;
};

class Dilator {
 public:
  Dilator(const Ring& bs, std::size_t n, std::size_t fuel) : bs_(bs), n_(n), fuel_(fuel) {}

  void conj(const std::vector<ConstPart>& prefix, std::size_t len, const std::vector<bool>& integral,
            const ValTerm& t, std::vector<ValTerm>& out) {
    if (++used_ > fuel_) throw Error(ErrorCode::StepBudgetExceeded, "dilation produced too many terms");
    if (len == 0) {
      out.push_back(t);
      return;
    }
    const ConstPart& b = prefix[len - 1];
    const BracketRule& rule = corrected_tables().bracket[idx(b.shape)][idx(t.shape)][bracket_case(b.pos, t.pos)];
    if (b.num.is_zero() || rule.kind == K::Identity) {
      conj(prefix, len - 1, integral, t, out);
      return;
    }
    if (integral[len]) {
      // The whole prefix is integral: keep gamma t gamma^{-1} literally.
      for (std::size_t q = 0; q < len; ++q) out.push_back({prefix[q].shape, prefix[q].pos, 0, prefix[q].num});
      out.push_back(t);
      for (std::size_t q = len; q-- > 0;) out.push_back({prefix[q].shape, prefix[q].pos, 0, -prefix[q].num});
      used_ += 2 * len;
      return;
    }
    ConjDecomposition d = conj_terms(bs_, n_, b.shape, b.pos, b.num, b.k, t.shape, t.pos, t.exp, t.coeff);
    for (const auto& u : d.trace.terms) conj(prefix, len - 1, integral, u, out);
  }

 private:
  Ring bs_;
  std::size_t n_;
  std::size_t fuel_;
  std::size_t used_ = 0;
};

// Image of p in R_s[X] inside R[X]_s, with X replaced by s^m X.
Elem to_global_loc(const Elem& p, const Ring& bs, int m) {
  const Ring& rx = bs->base();
  const Elem X = uni_var(rx);
  const Elem& s = bs->s();
  Elem acc = bs->zero();
  for (std::size_t d = 0; d <= uni_degree(p); ++d) {
    Elem c = uni_coeff(p, d);
    if (c.is_zero()) continue;
    Elem num = rx->embed(loc_numerator(c)) * rx->pow(X, d) * rx->pow(s, static_cast<std::uint64_t>(m) * d);
    acc = acc + frac(bs, num, loc_exponent(c));
  }
  return acc;
}

}  // namespace

Dilation dilate(const Word& alpha, const DilateOptions& opt) {
  const Ring& L = alpha.ring;
  if (L->kind() != RingKind::UniPoly || L->base()->kind() != RingKind::Localization)
    throw Error(ErrorCode::RingMismatch, "dilate needs a word over R_s[X], got " + L->descriptor());
  const Ring& rs = L->base();
  const Ring& R = rs->base();
  const Elem s = rs->s();
  const std::size_t n = alpha.n;
  Ring rx = RingImpl::uni_poly(R, L->variable());
  Ring bs = RingImpl::localize(rx, rx->embed(s));
  const Elem s_rx = rx->embed(s);

  Word at0 = map_word(alpha, rs, [](const Elem& p) { return eval_at_zero(p); });
  if (!eval(at0).is_identity()) throw Error(ErrorCode::NotHomotopy, "alpha(0) is not the identity");

  std::vector<ConstPart> consts;
  std::vector<bool> integral{true};
  for (const auto& a : alpha.atoms) {
    if (!a.is_abcd()) throw Error(ErrorCode::AlphabetViolation, "dilate takes ABCD words, got '" + atom_text(a) + "'");
    Elem c0 = uni_coeff(a.param, 0);
    consts.push_back({a.shape, a.i, rx->embed(loc_numerator(c0)), static_cast<int>(loc_exponent(c0))});
    integral.push_back(integral.back() && (c0.is_zero() || loc_exponent(c0) == 0));
  }

  Word lhs_target(bs, n);
  Dilation out;
  for (int m = 0; m <= opt.max_m; ++m) {
    try {
      Dilator dil(bs, n, opt.fuel);
      std::vector<ValTerm> terms;
      for (std::size_t k = 0; k < alpha.atoms.size(); ++k) {
        // s^m X b'_k(s^m X) as coeff * s^E with coeff in R[X].
        const Elem& p = alpha.atoms[k].param;
        int E = INT_MAX;
        for (std::size_t d = 1; d <= uni_degree(p); ++d) {
          Elem c = uni_coeff(p, d);
          if (!c.is_zero()) E = std::min(E, m * static_cast<int>(d) - static_cast<int>(loc_exponent(c)));
        }
        // While gamma_k is integral, gamma_{k-1}^{-1} gamma_k = beta_k telescopes.
        if (integral[k + 1]) terms.push_back({consts[k].shape, consts[k].pos, 0, consts[k].num});
        else if (k > 0 && integral[k])
          for (std::size_t q = k; q-- > 0;) terms.push_back({consts[q].shape, consts[q].pos, 0, -consts[q].num});
        if (E == INT_MAX) continue;
        Elem coeff = rx->zero();
        for (std::size_t d = 1; d <= uni_degree(p); ++d) {
          Elem c = uni_coeff(p, d);
          if (c.is_zero()) continue;
          int e = m * static_cast<int>(d) - static_cast<int>(loc_exponent(c)) - E;
          coeff = coeff + rx->embed(loc_numerator(c)) * rx->pow(s_rx, e) * rx->pow(uni_var(rx), d);
        }
        if (integral[k + 1]) {
          terms.push_back({alpha.atoms[k].shape, alpha.atoms[k].i, E, coeff});
          continue;
        }
        dil.conj(consts, k + 1, integral, {alpha.atoms[k].shape, alpha.atoms[k].i, E, coeff}, terms);
      }
      if (integral.back())
        for (std::size_t q = consts.size(); q-- > 0;) terms.push_back({consts[q].shape, consts[q].pos, 0, -consts[q].num});
      terms = merge_terms(s_rx, std::move(terms));
      ValuationTrace vt{0, m, terms};
      if (!vt.integral()) {
        out.attempts.push_back("m=" + std::to_string(m) + ": exponent " + std::to_string(vt.min_exponent()));
        continue;
      }
      Word w(rx, n);
      for (const auto& t : terms) w.push(Atom::abcd(t.shape, t.pos, t.coeff * rx->pow(s_rx, t.exp)));
      Word lifted = lift_word(w, bs);
      Word target = map_word(alpha, bs, [&](const Elem& p) { return to_global_loc(p, bs, m); });
      if (eval(lifted) != eval(target))
        throw Error(ErrorCode::StepVerificationFailed, "dilated word does not match alpha(s^m X)");
      out.m = m;
      out.word = std::move(w);
      return out;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ExponentTooSmall) throw;
      out.attempts.push_back("m=" + std::to_string(m) + ": " + e.what());
    }
  }
  throw Error(ErrorCode::StepBudgetExceeded, "no m <= " + std::to_string(opt.max_m) + " clears the denominators");
}

// ---------------------------------------------------------------------------
// Covers and patching.

CoverData parse_cover(const Ring& ring, const std::string& text) {
  CoverData cover;
  auto lines = split(text, '\n');
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string line = trim(lines[ln]);
    if (auto h = line.find('#'); h != std::string::npos) line = trim(line.substr(0, h));
    if (line.empty()) continue;
    CoverElem e;
    bool seen[4] = {false, false, false, false};
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw Error(ErrorCode::ParseError, "cover line " + std::to_string(ln + 1) + ": expected key=value, got '" + tok + "'");
      std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      try {
        if (key == "s") e.s = parse_elem(ring, val), seen[0] = true;
        else if (key == "c") e.c = parse_elem(ring, val), seen[1] = true;
        else if (key == "b") e.b = parse_elem(ring, val), seen[2] = true;
        else if (key == "N") e.N = std::stoi(val), seen[3] = true;
        else throw Error(ErrorCode::ParseError, "unknown key '" + key + "'");
      } catch (const std::exception& ex) {
        throw Error(ErrorCode::ParseError, "cover line " + std::to_string(ln + 1) + ": " + ex.what());
      }
    }
    if (!(seen[0] && seen[1] && seen[2] && seen[3]))
      throw Error(ErrorCode::ParseError, "cover line " + std::to_string(ln + 1) + ": needs s, c, b and N");
    cover.elems.push_back(std::move(e));
  }
  return cover;
}

std::string cover_text(const CoverData& cover) {
  std::string out;
  for (const auto& e : cover.elems)
    out += "s=" + e.s.str() + " c=" + e.c.str() + " b=" + e.b.str() + " N=" + std::to_string(e.N) + "\n";
  return out;
}

void check_cover(const CoverData& cover) {
  if (cover.elems.empty()) throw Error(ErrorCode::CoverNotComaximal, "empty cover");
  const Ring& R = cover.elems.front().s.ring();
  Elem sum = R->zero();
  for (const auto& e : cover.elems) {
    if (e.N < 0) throw Error(ErrorCode::CoverExponentTooSmall, "N must be >= 0");
    if (!R->try_divide(e.b, R->pow(e.s, static_cast<std::uint64_t>(e.N))))
      throw Error(ErrorCode::CoverExponentTooSmall, "b=" + e.b.str() + " is not in (s^N) for s=" + e.s.str());
    sum = sum + e.c * e.b;
  }
  if (!sum.is_one()) throw Error(ErrorCode::CoverNotComaximal, "sum c_i b_i = " + sum.str() + ", not 1");
}

CoverData unit_cover(const Ring& R) {
  if (R->kind() != RingKind::IntegersMod) throw Error(ErrorCode::Unsupported, "unit_cover needs Z/m");
  const std::int64_t m = R->modulus();
  auto is_unit = [&](std::int64_t v) { return std::gcd(v, m) == 1; };
  for (std::int64_t s1 = 2; s1 < m; ++s1) {
    if (!is_unit(s1)) continue;
    for (std::int64_t s2 = s1 + 1; s2 < m; ++s2) {
      if (!is_unit(s2)) continue;
      for (std::int64_t c1 = 1; c1 < m; ++c1)
        for (std::int64_t c2 = 1; c2 < m; ++c2)
          if ((c1 * s1 + c2 * s2) % m == 1) {
            CoverData cover;
            cover.elems.push_back({R->from_int(s1), R->from_int(c1), R->from_int(s1), 1});
            cover.elems.push_back({R->from_int(s2), R->from_int(c2), R->from_int(s2), 1});
            return cover;
          }
    }
  }
  throw Error(ErrorCode::Unsupported, "no two-unit cover of " + R->descriptor());
}

namespace {

Elem identity_map(const Elem& c) { return c; }

}  // namespace

PatchResult patch(const Matrix& alpha, const CoverData& cover, const std::vector<Word>& locals,
                  const DilateOptions& opt) {
  check_cover(cover);
  const Ring& RX = alpha.ring();
  if (RX->kind() != RingKind::UniPoly) throw Error(ErrorCode::RingMismatch, "patch needs a matrix over R[X]");
  const Ring& R = RX->base();
  const std::size_t n = alpha.rows() / 2;
  if (locals.size() != cover.elems.size())
    throw Error(ErrorCode::LocalWordMismatch, "need one local word per cover element");
  if (!alpha.map(R, [](const Elem& p) { return eval_at_zero(p); }).is_identity())
    throw Error(ErrorCode::NotHomotopy, "alpha(0) is not the identity");
  const std::string var = RX->variable();
  const std::string yvar = var == "Y" ? "Z" : "Y";
  const Elem X = uni_var(RX);

  PatchResult out;
  out.word = Word(RX, n);
  const std::size_t k = cover.elems.size();
  for (std::size_t i = 0; i < k; ++i) {
    const CoverElem& ce = cover.elems[i];
    const Word& w = locals[i];
    const Ring& Li = w.ring;
    if (Li->kind() != RingKind::UniPoly || Li->base()->kind() != RingKind::Localization ||
        !same_ring(Li->base()->base(), R) || Li->base()->s() != ce.s)
      throw Error(ErrorCode::LocalWordMismatch, "local word " + std::to_string(i + 1) + " is not over R_s[X] for s=" + ce.s.str());
    Matrix alpha_i = alpha.map(Li, [&](const Elem& p) { return eval_hom(p, uni_var(Li), identity_map); });
    if (eval(w) != alpha_i)
      throw Error(ErrorCode::LocalWordMismatch, "local word " + std::to_string(i + 1) + " does not evaluate to alpha");

    // beta(X, Y) = w(X + Y) w(Y)^{-1} over R[Y]_s[X].
    Ring RY = RingImpl::uni_poly(R, yvar);
    Ring locY = RingImpl::localize(RY, RY->embed(ce.s));
    Ring L2 = RingImpl::uni_poly(locY, var);
    const Elem X2 = uni_var(L2), Y2 = L2->embed(locY->embed(uni_var(RY)));
    auto shifted = [&](const Elem& p, bool with_x) {
      Elem t = with_x ? X2 + Y2 : Y2;
      return eval_hom(p, t, [&](const Elem& c) { return frac(locY, RY->embed(loc_numerator(c)), loc_exponent(c)); });
    };
    Word beta = concat(map_word(w, L2, [&](const Elem& p) { return shifted(p, true); }),
                       inverse(map_word(w, L2, [&](const Elem& p) { return shifted(p, false); })));
    Dilation d = dilate(beta, opt);
    if (d.m > ce.N)
      throw Error(ErrorCode::CoverExponentTooSmall,
                  "dilation needs m=" + std::to_string(d.m) + " > N=" + std::to_string(ce.N) + " for s=" + ce.s.str());
    auto q = R->try_divide(ce.b, R->pow(ce.s, static_cast<std::uint64_t>(d.m)));
    if (!q) throw Error(ErrorCode::CoverExponentTooSmall, "b is not divisible by s^m");
    Elem factor = RX->embed(ce.c * *q);
    Elem T = RX->zero();
    for (std::size_t j = i + 1; j < k; ++j) T = T + RX->embed(cover.elems[j].c * cover.elems[j].b) * X;
    // beta(c_i b_i X, T_i) from beta(s^m X, Y).
    Word part = map_word(d.word, RX, [&](const Elem& p) {
      return eval_hom(p, factor * X, [&](const Elem& qd) { return eval_hom(qd, T, identity_map); });
    });
    out.word.append(part);
    out.m.push_back(d.m);
  }
  out.word = simplify(out.word);
  if (eval(out.word) != alpha) throw Error(ErrorCode::StepVerificationFailed, "patched word does not evaluate to alpha");
  return out;
}

std::vector<Word> conjugate_locals(const CoverData& cover, const Word& g, const Word& h) {
  const Ring& RT = h.ring;
  std::vector<Word> out;
  for (const auto& ce : cover.elems) {
    Ring Ls = RingImpl::uni_poly(RingImpl::localize(RT->base(), ce.s), RT->variable());
    Word gl = lift_word(g, Ls);
    Word hl = map_word(h, Ls, [&](const Elem& p) { return eval_hom(p, uni_var(Ls), identity_map); });
    out.push_back(concat(concat(gl, hl), inverse(gl)));
  }
  return out;
}

NormalityResult normality_demo(const Matrix& gamma, const Word& h, const CoverData& cover, const DilateOptions& opt) {
  const Ring& R = h.ring;
  const std::size_t n = h.n;
  if (!same_ring(gamma.ring(), R) || gamma.rows() != 2 * n)
    throw Error(ErrorCode::DimensionMismatch, "gamma and h must live in the same Sp_2n(R)");
  if (!is_symplectic(gamma)) throw Error(ErrorCode::Unsupported, "gamma is not symplectic");
  if (!is_abcd_only(h)) throw Error(ErrorCode::AlphabetViolation, "h must be an ABCD word");
  NormalityResult out;
  const Matrix target = gamma * eval(h) * symplectic_inverse(gamma);
  if (gamma.is_identity()) {
    out.word = h;
    out.verified = eval(h) == target;
    return out;
  }
  Ring RT = RingImpl::uni_poly(R, "T");
  const Elem T = uni_var(RT);
  Word hT = map_word(h, RT, [&](const Elem& p) { return RT->embed(p) * T; });
  Matrix gT = gamma.lift(RT);
  Matrix alpha = gT * eval(hT) * symplectic_inverse(gT);

  const Matrix delta = gamma.block(0, 0, 2, 2);
  std::vector<Word> locals;
  if (gamma == place_block(n, delta, 1)) {
    for (const auto& ce : cover.elems) {
      Ring Ls = RingImpl::uni_poly(RingImpl::localize(R, ce.s), "T");
      Word hl = map_word(hT, Ls, [&](const Elem& p) { return eval_hom(p, uni_var(Ls), identity_map); });
      locals.push_back(conjugate_by_corner(delta.lift(Ls), hl));
    }
  } else {
    out.g = decompose_full(factor_symplectic(gamma)).output;
    locals = conjugate_locals(cover, out.g, hT);
  }
  out.patch = patch(alpha, cover, locals, opt);
  out.word = simplify(map_word(out.patch.word, R, [&](const Elem& p) { return eval_at(p, R->one()); }));
  out.verified = is_abcd_only(out.word) && eval(out.word) == target;
  if (!out.verified) throw Error(ErrorCode::StepVerificationFailed, "normality word does not evaluate to gamma h gamma^-1");
  return out;
}

}  // namespace esp
