#include "esp/rewrite.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "esp/identities.hpp"
#include "esp/text.hpp"

namespace esp {

namespace {

void require(bool ok, const std::string& rule) {
  if (!ok) throw Error(ErrorCode::StepVerificationFailed, "rule '" + rule + "' changed the evaluation");
}

std::uint64_t atoms_digest(const Ring& ring, std::size_t n, const std::vector<Atom>& atoms) {
  return word_digest(Word(ring, n, atoms));
}

class Fuel {
 public:
  Fuel(std::size_t limit, std::string stage) : left_(limit), stage_(std::move(stage)) {}
  void burn() {
    if (left_ == 0) throw Error(ErrorCode::StepBudgetExceeded, stage_ + " ran out of fuel");
    --left_;
  }

 private:
  std::size_t left_;
  std::string stage_;
};

Elem quarter(const Elem& c) { return c.impl().half(c.impl().half(c)); }

}  // namespace

Word e2_word(const Ring& ring, std::vector<Atom> factors) { return Word(ring, 1, std::move(factors)); }

std::vector<Atom> unit_e2_factors(Shape shape, const Elem& y) {
  const Elem one = y.impl().one();
  if (shape == Shape::B) return {Atom::e21(one), Atom::e12(-y), Atom::e21(-one)};
  return {Atom::e21(-one), Atom::e12(y), Atom::e21(one)};
}

bool rank_one(const Atom& a, RankOne* out) {
  const Elem& p = a.param;
  if (!p.valid()) return false;
  const Elem one = p.impl().one(), zero = p.impl().zero();
  RankOne r;
  auto shaped = [&](Shape s, std::size_t pos) {
    r.pos = pos;
    switch (s) {
      case Shape::A: r.l = one, r.m = one, r.x = p, r.y = p, r.witness = {Atom::e21(one)}; break;
      case Shape::B: r.l = one, r.m = one, r.x = p, r.y = -p, r.witness = {Atom::e21(one)}; break;
      case Shape::C: r.l = one, r.m = -one, r.x = p, r.y = p, r.witness = {Atom::e21(-one)}; break;
      case Shape::D: r.l = one, r.m = -one, r.x = -p, r.y = p, r.witness = {Atom::e21(-one)}; break;
    }
  };
  switch (a.kind) {
    case AtomKind::ABCD: shaped(a.shape, a.i); break;
    case AtomKind::Placed:
      if (a.i != 1) return false;
      shaped(a.shape, a.j);
      break;
    case AtomKind::S: {
      if ((a.i != 1 && a.i != 2) || a.j < 3) return false;
      r.pos = (a.j + 1) / 2;
      if (a.i == 1) {
        r.l = one, r.m = zero;
      } else {
        r.l = zero, r.m = one;
        r.witness = {Atom::e12(-one), Atom::e21(one)};
      }
      r.x = (a.j % 2 == 1) ? p : zero;
      r.y = (a.j % 2 == 1) ? zero : p;
      break;
    }
    default: return false;
  }
  if (out) *out = std::move(r);
  return true;
}

BlockSplit split_block(const Ring& ring, std::size_t pos, const Elem& l, const Elem& m, const Elem& x, const Elem& y) {
  BlockSplit out;
  Elem a = ring->half(x + y), b = ring->half(x - y);
  out.ch = ch_matrix(l, m, a, b);
  out.ab = a * b;
  Elem x1 = ring->half((l + m) * a), y1 = ring->half((l - m) * a);
  Elem x2 = ring->half((l + m) * b), y2 = ring->half((m - l) * b);
  std::vector<Atom> atoms = {Atom::abcd(Shape::A, pos, x1),      Atom::abcd(Shape::C, pos, y1),
                             Atom::unit(Shape::C, pos, 2 * (x1 * y1)), Atom::abcd(Shape::B, pos, x2),
                             Atom::abcd(Shape::D, pos, y2),      Atom::unit(Shape::B, pos, 2 * (x2 * y2))};
  for (auto& at : atoms)
    if (!at.param.is_zero()) out.atoms.push_back(std::move(at));
  return out;
}

// ---------------------------------------------------------------------------
// Stage 1: fold corners into a leading E_2 factor.

InitialDecomposition decompose_initial(const Word& w, const RewriteOptions& opt) {
  const Ring& ring = w.ring;
  const std::size_t n = w.n;
  Fuel fuel(opt.fuel, "decompose_initial");
  std::deque<Atom> delta, body;
  Matrix rho = Matrix::identity(ring, 2);
  InitialDecomposition out;

  // Invariant: eval(suffix) = (rho ⊥ I) eval(body) and eval(delta) = rho. Each
  // step checks its own instance g (rho ⊥ I) = (rho' ⊥ I) R.
  for (auto it = w.atoms.rbegin(); it != w.atoms.rend(); ++it) {
    const Atom& g = *it;
    fuel.burn();
    check_atom(g, n);
    std::string rule;
    std::vector<Atom> factors, produced;
    Matrix next = rho;
    RankOne r1;
    if (g.kind == AtomKind::E12 || g.kind == AtomKind::E21) {
      rule = "absorb-corner";
      factors = {g};
    } else if (g.kind == AtomKind::Unit && g.i == 1) {
      rule = "absorb-unit-first";
      factors = unit_e2_factors(g.shape, g.param);
    } else if (g.kind == AtomKind::Unit) {
      rule = "unit-commutes-corner";
      produced = {g};
    } else if (rank_one(g, &r1)) {
      rule = "conj-split-block";
      Matrix rinv = inverse_sl2(rho);
      Elem l = rinv(0, 0) * r1.l + rinv(0, 1) * r1.m;
      Elem m = rinv(1, 0) * r1.l + rinv(1, 1) * r1.m;
      BlockSplit sp = split_block(ring, r1.pos, l, m, r1.x, r1.y);
      if (!sp.ab.is_zero()) {
        factors = r1.witness;
        factors.push_back(Atom::e12(2 * sp.ab));
        for (auto wi = r1.witness.rbegin(); wi != r1.witness.rend(); ++wi) factors.push_back(atom_inverse(*wi));
        require(eval(e2_word(ring, factors)) * rho == rho * sp.ch, "ch-conjugate");
      }
      produced = sp.atoms;
    } else {
      throw Error(ErrorCode::AlphabetViolation, "decompose_initial cannot take '" + atom_text(g) + "'");
    }
    if (!factors.empty()) next = eval(e2_word(ring, factors)) * rho;
    Matrix lhs = atom_matrix(g, ring, n) * place_block(n, rho, 1);
    Matrix rhs = place_block(n, next, 1) * eval(Word(ring, n, produced));
    require(lhs == rhs, rule);
    rho = std::move(next);
    for (auto f = factors.rbegin(); f != factors.rend(); ++f) delta.push_front(*f);
    for (auto p = produced.rbegin(); p != produced.rend(); ++p) body.push_front(*p);
    out.trace.push_back({rule, atoms_digest(ring, n, {g}), atoms_digest(ring, n, produced)});
  }
  out.delta = e2_word(ring, {delta.begin(), delta.end()});
  out.body = Word(ring, n, {body.begin(), body.end()});
  return out;
}

// ---------------------------------------------------------------------------
// Stage 2: move units to the left.

Matrix UnitDiag::matrix(const Ring& ring) const { return eval(word(ring)); }

Word UnitDiag::word(const Ring& ring) const {
  Word w(ring, n);
  for (const auto& fs : factors)
    for (const auto& u : fs) w.push(u);
  return w;
}

namespace {

int unit_case(std::size_t i, std::size_t j) { return j == 1 ? 0 : (j == i ? 1 : 2); }

class UnitPusher {
 public:
  UnitPusher(const Ring& ring, std::size_t n, const RewriteOptions& opt)
      : ring_(ring), n_(n), fuel_(opt.fuel, "push_units_left") {
    diag_.n = n;
    diag_.factors.resize(n);
  }

  void feed(const Atom& a) {
    if (a.kind == AtomKind::ABCD) {
      tail_.push_back(a);
    } else if (a.kind == AtomKind::Unit) {
      if (!a.param.is_zero()) move(a, tail_.size());
    } else {
      throw Error(ErrorCode::AlphabetViolation, "push_units_left cannot take '" + atom_text(a) + "'");
    }
  }

  UnitPush finish() {
    UnitPush out;
    out.diag = std::move(diag_);
    out.tail = Word(ring_, n_, std::move(tail_));
    out.trace = std::move(trace_);
    return out;
  }

 private:
  // u starts just before tail_[idx] and walks left. A crossing E u = u Z e
  // puts everything it creates to the right of u, so u visits each atom of
  // the original prefix once and every walk terminates. Z holds the spawned
  // unit, which sits at a block other than u's and commutes with it, as an
  // ABCD bracket, followed by the extra E(Z_i) of the table entry.
  void move(const Atom& u, std::size_t idx) {
    std::size_t t = idx;
    while (t > 0) {
      const Atom e = tail_[t - 1];
      const UnitRule& r =
          corrected_tables().unit[static_cast<int>(e.shape)][u.shape == Shape::B ? 0 : 1][unit_case(e.i, u.i)];
      if (r.identity) {
        --t;
        continue;
      }
      fuel_.burn();
      const Elem& x = e.param;
      const Elem& y = u.param;
      Atom spawn = Atom::unit(r.unit_shape, r.unit_at_first ? 1 : e.i, r.unit_coef * (x * x * y));
      Atom extra = Atom::abcd(r.e_shape, e.i, r.e_coef * (x * y));
      std::vector<Atom> created;
      if (!spawn.param.is_zero()) {
        Word sw = unit_to_abcd(ring_, n_, spawn.shape, spawn.i, spawn.param);
        created = sw.atoms;
      }
      if (!extra.param.is_zero()) created.push_back(extra);
      created.push_back(e);
      std::string rule = std::string("push-unit-") + shape_char(e.shape) + "U" + shape_char(u.shape);
      Word before(ring_, n_, {e, u});
      Word after(ring_, n_, {u});
      for (const auto& c : created) after.push(c);
      require(eval(before) == eval(after), rule);
      trace_.push_back({rule, word_digest(before), word_digest(after)});
      const std::size_t here = t - 1;
      tail_.erase(tail_.begin() + static_cast<std::ptrdiff_t>(here));
      tail_.insert(tail_.begin() + static_cast<std::ptrdiff_t>(here), created.begin(), created.end());
      t = here;
    }
    diag_.factors[u.i - 1].push_back(u);
  }

  Ring ring_;
  std::size_t n_;
  Fuel fuel_;
  UnitDiag diag_;
  std::vector<Atom> tail_;
  std::vector<TraceStep> trace_;
};

}  // namespace

UnitPush push_units_left(const Word& body, const RewriteOptions& opt) {
  UnitPusher p(body.ring, body.n, opt);
  for (const auto& a : body.atoms) p.feed(a);
  UnitPush out = p.finish();
  require(out.diag.matrix(body.ring) * eval(out.tail) == eval(body), "push-units-left");
  return out;
}

UnitPush units_in_place(const Word& body) {
  UnitPush out;
  out.diag.n = body.n;
  out.diag.factors.resize(body.n);
  out.tail = Word(body.ring, body.n);
  for (const auto& a : body.atoms) {
    if (a.kind == AtomKind::ABCD) {
      out.tail.push(a);
    } else if (a.kind == AtomKind::Unit && a.i >= 2) {
      Word w = unit_to_abcd(body.ring, body.n, a.shape, a.i, a.param);
      require(eval(w) == atom_matrix(a, body.ring, body.n), "unit-as-bracket");
      out.trace.push_back({"unit-as-bracket", atoms_digest(body.ring, body.n, {a}), word_digest(w)});
      out.tail.append(w);
    } else {
      throw Error(ErrorCode::AlphabetViolation, "units_in_place cannot take '" + atom_text(a) + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage 3 and 4: units and corners as ABCD words.

Word unit_to_abcd(const Ring& ring, std::size_t n, Shape shape, std::size_t pos, const Elem& c, std::size_t r) {
  const Elem one = ring->one();
  Word g(ring, n), h(ring, n);
  if (pos == 1) {
    if (shape == Shape::B) {
      g.push(Atom::abcd(Shape::A, r, quarter(c)));
      h.push(Atom::abcd(Shape::B, r, one));
    } else {
      g.push(Atom::abcd(Shape::C, r, quarter(c)));
      h.push(Atom::abcd(Shape::D, r, one));
    }
  } else if (shape == Shape::C) {
    g.push(Atom::abcd(Shape::A, pos, -quarter(c)));
    h.push(Atom::abcd(Shape::C, pos, one));
  } else {
    g.push(Atom::abcd(Shape::B, pos, -quarter(c)));
    h.push(Atom::abcd(Shape::D, pos, one));
  }
  return commutator(g, h);
}

Word units_to_abcd(const Ring& ring, const UnitDiag& diag) {
  if (!diag.factors.empty() && !diag.factors[0].empty())
    throw Error(ErrorCode::UnsupportedBlock, "units_to_abcd needs an identity first block");
  Word out(ring, diag.n);
  for (std::size_t p = 2; p <= diag.n; ++p)
    for (const auto& u : diag.factors[p - 1]) out.append(unit_to_abcd(ring, diag.n, u.shape, p, u.param));
  return out;
}

Word conjugate_by_corner(const Matrix& delta, const Word& h) {
  const Ring& ring = h.ring;
  Matrix d = delta.lift(ring);
  Word out(ring, h.n);
  for (const auto& a : h.atoms) {
    if (!a.is_abcd()) throw Error(ErrorCode::AlphabetViolation, "conjugate_by_corner takes ABCD atoms only");
    RankOne r;
    rank_one(a, &r);
    Elem l = d(0, 0) * r.l + d(0, 1) * r.m;
    Elem m = d(1, 0) * r.l + d(1, 1) * r.m;
    BlockSplit sp = split_block(ring, r.pos, l, m, r.x, r.y);
    require(sp.ab.is_zero(), "conj-abcd-by-corner");
    for (const auto& b : sp.atoms) {
      if (b.kind == AtomKind::Unit) out.append(unit_to_abcd(ring, h.n, b.shape, b.i, b.param));
      else out.push(b);
    }
  }
  return simplify(out);
}

namespace {

bool is_corner(const Atom& a, AtomKind k, const Elem& v) { return a.kind == k && a.param == v; }

}  // namespace

Word corner_units(const Word& delta) {
  const Ring& ring = delta.ring;
  const Elem one = ring->one();
  const Elem h = ring->half(one);
  const auto& d = delta.atoms;
  std::vector<Atom> units;
  auto unit = [&](Shape s, const Elem& y) { units.push_back(Atom::unit(s, 1, y)); };
  for (std::size_t k = 0; k < d.size();) {
    const Atom& f = d[k];
    if (f.kind != AtomKind::E12 && f.kind != AtomKind::E21)
      throw Error(ErrorCode::NotE2Witnessed, "corner factor '" + atom_text(f) + "' is not E12/E21");
    // Conjugated transvections E21(+-1) E12(c) E21(-+1) are single units.
    if (k + 2 < d.size() && d[k + 1].kind == AtomKind::E12 && is_corner(f, AtomKind::E21, one) &&
        is_corner(d[k + 2], AtomKind::E21, -one)) {
      unit(Shape::B, -d[k + 1].param);
      k += 3;
      continue;
    }
    if (k + 2 < d.size() && d[k + 1].kind == AtomKind::E12 && is_corner(f, AtomKind::E21, -one) &&
        is_corner(d[k + 2], AtomKind::E21, one)) {
      unit(Shape::C, d[k + 1].param);
      k += 3;
      continue;
    }
    // E21(d) = U_C(-1/2) U_B(d/4) U_C(1/2), E12(d) = U_C(1/2) U_B(-d/4) U_C(-1/2).
    if (f.kind == AtomKind::E21) {
      unit(Shape::C, -h), unit(Shape::B, quarter(f.param)), unit(Shape::C, h);
    } else {
      unit(Shape::C, h), unit(Shape::B, -quarter(f.param)), unit(Shape::C, -h);
    }
    ++k;
  }
  Word out = simplify(Word(ring, 1, std::move(units)));
  Matrix m = Matrix::identity(ring, 2);
  for (const auto& u : out.atoms) m = m * unit_block(u.shape, u.param);
  require(m == eval(delta), "corner-as-units");
  return out;
}

Word corner_to_abcd(const Word& delta, std::size_t n) {
  const Ring& ring = delta.ring;
  if (n < 2) throw Error(ErrorCode::BadIndices, "corner_to_abcd needs n >= 2");
  Word out(ring, n);
  for (const auto& u : corner_units(delta).atoms) out.append(unit_to_abcd(ring, n, u.shape, 1, u.param));
  return simplify(out);
}

namespace {

bool additive_pair(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case AtomKind::E12:
    case AtomKind::E21: return true;
    case AtomKind::S: return a.i == b.i && a.j == b.j;
    case AtomKind::ABCD:
    case AtomKind::Unit: return a.shape == b.shape && a.i == b.i;
    default: return false;
  }
}

}  // namespace

Word simplify(const Word& w) {
  std::vector<Atom> st;
  for (const auto& a : w.atoms) {
    bool trivial = a.param.valid() && a.param.is_zero();
    if (trivial) continue;
    if (!st.empty() && additive_pair(st.back(), a)) {
      st.back().param += a.param;
      if (st.back().param.is_zero()) st.pop_back();
      continue;
    }
    st.push_back(a);
  }
  return Word(w.ring, w.n, std::move(st));
}

// ---------------------------------------------------------------------------
// Row-1/row-2 reduction.

namespace {

Atom alias_row12(const Atom& a) {
  // S_ij(l) = S_{pi(j) pi(i)}(-(-1)^{i+j} l)
  int sign = ((a.i + a.j) % 2 == 0) ? -1 : 1;
  return Atom::s(pi_index(a.j), pi_index(a.i), sign * a.param);
}

bool find_rule(std::size_t i, std::size_t j, Row12Rule* out) {
  std::size_t n = std::max((i + 1) / 2, (j + 1) / 2);
  Ring q = ring_make("poly:q:x");
  Elem x = parse_elem(q, "x"), one = q->one();
  Matrix target = gen_S(q, n, i, j, x);
  for (std::size_t k : {1, 2}) {
    if (k == pi_index(i) || j == pi_index(k)) continue;
    for (int a : {1, -1})
      for (int b : {1, -1}) {
        if (bracket(gen_S(q, n, i, k, a * x), gen_S(q, n, k, j, b * one)) == target) {
          *out = {i, j, k, a, b};
          return true;
        }
      }
  }
  return false;
}

std::mutex& rules_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<std::size_t, std::size_t>, Row12Rule>& rules_cache() {
  static std::map<std::pair<std::size_t, std::size_t>, Row12Rule> c;
  return c;
}

Row12Rule rule_for(std::size_t i, std::size_t j) {
  std::lock_guard<std::mutex> lock(rules_mutex());
  auto& cache = rules_cache();
  if (auto it = cache.find({i, j}); it != cache.end()) return it->second;
  Row12Rule r;
  if (!find_rule(i, j, &r))
    throw Error(ErrorCode::NoRuleFound, "no verified relation reduces S(" + std::to_string(i) + "," + std::to_string(j) + ")");
  cache[{i, j}] = r;
  return r;
}

}  // namespace

std::vector<Row12Rule> discover_row12_rules(std::size_t nmax) {
  std::vector<Row12Rule> out;
  for (std::size_t i = 3; i <= 2 * nmax; ++i)
    for (std::size_t j = 3; j <= 2 * nmax; ++j) {
      if (i == j || j == pi_index(i)) continue;
      out.push_back(rule_for(i, j));
    }
  return out;
}

const std::vector<Row12Rule>& row12_rules() {
  static const std::vector<Row12Rule> rules = discover_row12_rules(6);
  return rules;
}

std::string row12_rules_text(const std::vector<Row12Rule>& rules) {
  std::ostringstream os;
  os << "# S(i,j)(x) = [S(i,k)(a*x), S(k,j)(b)], each checked symbolically over Q[x]\n";
  os << "# i j k a b\n";
  for (const auto& r : rules) os << r.i << " " << r.j << " " << r.k << " " << r.a << " " << r.b << "\n";
  return os.str();
}

std::vector<Row12Rule> parse_row12_rules(const std::string& text) {
  std::vector<Row12Rule> out;
  auto lines = split(text, '\n');
  for (std::size_t k = 0; k < lines.size(); ++k) {
    std::string line = trim(lines[k]);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    Row12Rule r;
    if (!(is >> r.i >> r.j >> r.k >> r.a >> r.b))
      throw Error(ErrorCode::ParseError, "rules line " + std::to_string(k + 1) + ": expected 'i j k a b'");
    out.push_back(r);
  }
  return out;
}

Word reduce_to_row12(const Word& w) {
  Word out(w.ring, w.n);
  const Elem one = w.ring->one();
  for (const auto& a : w.atoms) {
    check_atom(a, w.n);
    if (a.kind != AtomKind::S || a.i <= 2) {
      out.push(a);
      continue;
    }
    if (a.j <= 2) {
      out.push(alias_row12(a));
      continue;
    }
    Row12Rule r = rule_for(a.i, a.j);
    Word g(w.ring, w.n, {alias_row12(Atom::s(a.i, r.k, r.a * a.param))});
    Word h(w.ring, w.n, {Atom::s(r.k, a.j, r.b * one)});
    Word rep = commutator(g, h);
    require(eval(rep) == atom_matrix(a, w.ring, w.n), "row12-commutator");
    out.append(rep);
  }
  return out;
}

// ---------------------------------------------------------------------------

DecompositionCertificate decompose_full(const Word& w, const RewriteOptions& opt) {
  if (w.n < 2) throw Error(ErrorCode::BadIndices, "decompose_full needs n >= 2");
  DecompositionCertificate cert;
  cert.input = w;
  const Ring& ring = w.ring;
  const std::size_t n = w.n;
  Matrix target = eval(w);
  auto stage = [&](const std::string& name, const Word& before, const Word& after) {
    cert.trace.push_back({"stage:" + name, word_digest(before), word_digest(after)});
  };

  Word reduced = reduce_to_row12(w);
  require(eval(reduced) == target, "reduce-row12");
  stage("reduce-row12", w, reduced);

  InitialDecomposition init = decompose_initial(reduced, opt);
  cert.trace.insert(cert.trace.end(), init.trace.begin(), init.trace.end());
  stage("decompose-initial", reduced, concat(lift_word(Word(ring, n), ring), init.body));

  const bool pushing = opt.units == UnitStrategy::Push;
  UnitPush push = pushing ? push_units_left(init.body, opt) : units_in_place(init.body);
  cert.trace.insert(cert.trace.end(), push.trace.begin(), push.trace.end());
  stage(pushing ? "push-units-left" : "units-in-place", init.body, concat(push.diag.word(ring), push.tail));

  Word delta = init.delta;
  for (const auto& u : push.diag.factors[0])
    for (const auto& f : unit_e2_factors(u.shape, u.param)) delta.push(f);
  delta = simplify(delta);
  UnitDiag rest = push.diag;
  rest.factors[0].clear();
  Word units = units_to_abcd(ring, rest);
  require(eval(units) == rest.matrix(ring), "units-to-abcd");
  stage("units-to-abcd", rest.word(ring), units);

  Word corner = corner_to_abcd(delta, n);
  require(eval(corner) == place_block(n, eval(delta), 1), "corner-to-abcd");
  stage("corner-to-abcd", delta, corner);

  Word out = simplify(concat(concat(corner, units), push.tail));
  cert.output = out;
  cert.verified = is_abcd_only(out) && eval(out) == target;
  stage("assemble", w, out);
  if (!cert.verified) throw Error(ErrorCode::StepVerificationFailed, "assembled word does not match the input");
  return cert;
}

std::string trace_text(const std::vector<TraceStep>& trace) {
  std::string out;
  for (const auto& s : trace) out += s.rule + " " + hex64(s.before) + " " + hex64(s.after) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Elementary factorization.

Word long_root(const Ring& ring, std::size_t n, std::size_t k, bool upper, const Elem& c) {
  if (k == 1) return Word(ring, n, {upper ? Atom::e12(c) : Atom::e21(c)});
  const Elem one = ring->one();
  Word g(ring, n), h(ring, n);
  if (upper) {
    g.push(Atom::s(2 * k - 1, 1, ring->half(c)));
    h.push(Atom::s(1, 2 * k, one));
  } else {
    g.push(Atom::s(2 * k, 1, ring->half(c)));
    h.push(Atom::s(1, 2 * k - 1, one));
  }
  return commutator(g, h);
}

namespace {

// Gaussian elimination over a local ring or a field: every unimodular column
// has a unit entry and unit + non-unit is a unit.
Word factor_local(const Matrix& g) {
  const Ring& ring = g.ring();
  const std::size_t n = g.rows() / 2;
  Matrix m = g;
  std::vector<Word> applied;
  auto apply = [&](Word w) {
    m = eval(w) * m;
    applied.push_back(std::move(w));
  };
  auto S = [&](std::size_t i, std::size_t j, const Elem& l) { return Word(ring, n, {Atom::s(i, j, l)}); };
  const Elem one = ring->one();
  for (std::size_t b = 1; b <= n; ++b) {
    const std::size_t p = 2 * b - 2;  // 0-based first row of block b
    if (!ring->is_unit(m(p, p))) {
      std::size_t r = p;
      while (r < 2 * n && !ring->is_unit(m(r, p))) ++r;
      if (r == 2 * n) throw Error(ErrorCode::Unsupported, "column " + std::to_string(p + 1) + " has no unit entry");
      if (r == p + 1) apply(long_root(ring, n, b, true, one));
      else apply(S(p + 1, r + 1, one));
    }
    for (std::size_t r = p + 2; r < 2 * n; ++r) {
      if (m(r, p).is_zero()) continue;
      apply(S(r + 1, p + 1, -(m(r, p) * ring->inverse(m(p, p)))));
    }
    if (!m(p + 1, p).is_zero()) apply(long_root(ring, n, b, false, -(m(p + 1, p) * ring->inverse(m(p, p)))));
    Elem u = m(p, p);
    if (!u.is_one()) {
      Elem a = (one - u) * ring->inverse(u);
      apply(long_root(ring, n, b, false, a));
      apply(long_root(ring, n, b, true, one));
      apply(long_root(ring, n, b, false, -(one - u)));
    }
    for (std::size_t r = p + 2; r < 2 * n; ++r) {
      if (m(r, p + 1).is_zero()) continue;
      apply(S(r + 1, p + 2, -m(r, p + 1)));
    }
    if (!m(p, p + 1).is_zero()) apply(long_root(ring, n, b, true, -m(p, p + 1)));
  }
  if (!m.is_identity()) throw Error(ErrorCode::StepVerificationFailed, "elimination did not reach the identity");
  Word out(ring, n);
  for (const auto& w : applied) out.append(inverse(w));
  return out;
}

std::vector<std::int64_t> prime_power_factors(std::int64_t m) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 3; p * p <= m; p += 2) {
    if (m % p) continue;
    std::int64_t q = 1;
    while (m % p == 0) m /= p, q *= p;
    out.push_back(q);
  }
  if (m > 1) out.push_back(m);
  return out;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = a % m;
  while (a1) {
    std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  return ((x % m) + m) % m;
}

}  // namespace

Word factor_symplectic(const Matrix& g) {
  if (g.rows() != g.cols() || g.rows() % 2) throw Error(ErrorCode::DimensionMismatch, "factor_symplectic needs 2n x 2n");
  if (!is_symplectic(g)) throw Error(ErrorCode::Unsupported, "matrix is not symplectic");
  const Ring& ring = g.ring();
  if (ring->kind() == RingKind::Rationals) return factor_local(g);
  if (ring->kind() != RingKind::IntegersMod) throw Error(ErrorCode::Unsupported, "factorization needs Z/m or Q");
  const std::int64_t m = ring->modulus();
  auto parts = prime_power_factors(m);
  if (parts.size() == 1) return factor_local(g);
  Word out(ring, g.rows() / 2);
  for (std::int64_t q : parts) {
    Ring rq = RingImpl::integers_mod(q);
    Matrix gq = g.map(rq, [&](const Elem& e) { return rq->from_int(e.residue()); });
    std::int64_t rest = m / q;
    std::int64_t idem = (rest * mod_inverse(rest % q, q)) % m;  // 1 mod q, 0 mod m/q
    Word wq = factor_local(gq);
    for (const auto& a : wq.atoms) {
      Atom b = a;
      b.param = ring->from_int((a.param.residue() * idem) % m);
      out.push(b);
    }
  }
  require(eval(out) == g, "crt-factorization");
  return out;
}

}  // namespace esp
