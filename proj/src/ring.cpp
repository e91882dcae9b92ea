#include "esp/ring.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <sstream>

namespace esp {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EvenModulus: return "EvenModulus";
    case ErrorCode::NilpotentS: return "NilpotentS";
    case ErrorCode::ZeroDivisorS: return "ZeroDivisorS";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadIndices: return "BadIndices";
    case ErrorCode::NonZeroDet: return "NonZeroDet";
    case ErrorCode::RowConditionFailed: return "RowConditionFailed";
    case ErrorCode::AlphabetViolation: return "AlphabetViolation";
    case ErrorCode::StepVerificationFailed: return "StepVerificationFailed";
    case ErrorCode::StepBudgetExceeded: return "StepBudgetExceeded";
    case ErrorCode::UnsupportedBlock: return "UnsupportedBlock";
    case ErrorCode::NotE2Witnessed: return "NotE2Witnessed";
    case ErrorCode::NoRuleFound: return "NoRuleFound";
    case ErrorCode::ExponentTooSmall: return "ExponentTooSmall";
    case ErrorCode::NotHomotopy: return "NotHomotopy";
    case ErrorCode::CoverNotComaximal: return "CoverNotComaximal";
    case ErrorCode::CoverExponentTooSmall: return "CoverExponentTooSmall";
    case ErrorCode::LocalWordMismatch: return "LocalWordMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

namespace {

std::int64_t mod_norm(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

// Returns x with a*x == g (mod m), g = gcd(a, m).
std::pair<std::int64_t, std::int64_t> ext_gcd_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  return {old_r, mod_norm(old_s, m)};
}

bool grlex_greater(const Monomial& a, const Monomial& b) {
  std::uint64_t da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  std::uint64_t db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
  if (da != db) return da > db;
  return a > b;
}

struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_greater(a, b); }
};

bool divides(const Monomial& d, const Monomial& m) {
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > m[i]) return false;
  return true;
}

bool is_constant_monomial(const Monomial& m) {
  return std::all_of(m.begin(), m.end(), [](std::uint32_t e) { return e == 0; });
}

std::vector<std::int64_t> prime_factors(std::int64_t m) {
  std::vector<std::int64_t> ps;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      ps.push_back(p);
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) ps.push_back(m);
  return ps;
}

// Leaf coefficients (in Z/m or Q) of an element of a tower.
void collect_leaves(const Elem& a, std::vector<Elem>& out) {
  switch (a.impl().kind()) {
    case RingKind::IntegersMod:
    case RingKind::Rationals: out.push_back(a); return;
    case RingKind::MultiPoly:
      for (const auto& [mono, c] : a.mpoly().terms) collect_leaves(c, out);
      return;
    case RingKind::UniPoly:
      for (const auto& c : a.upoly().coeffs) collect_leaves(c, out);
      return;
    case RingKind::Localization: collect_leaves(a.loc().numerator, out); return;
  }
}

const RingImpl& leaf_ring(const RingImpl& r) {
  const RingImpl* p = &r;
  while (p->base()) p = p->base().get();
  return *p;
}

enum class DivisorStatus { Nilpotent, ZeroDivisor, Regular };

// McCoy: a polynomial is a zero divisor iff a single nonzero constant kills
// it; over Z/m that means some prime of m divides every leaf coefficient.
DivisorStatus divisor_status(const Elem& a) {
  if (a.is_zero()) return DivisorStatus::Nilpotent;
  std::vector<Elem> leaves;
  collect_leaves(a, leaves);
  const RingImpl& leaf = leaf_ring(a.impl());
  if (leaf.kind() == RingKind::Rationals) return DivisorStatus::Regular;
  auto primes = prime_factors(leaf.modulus());
  bool all_primes = true, some_prime = false;
  for (auto p : primes) {
    bool kills = std::all_of(leaves.begin(), leaves.end(),
                             [p](const Elem& c) { return c.residue() % p == 0; });
    all_primes = all_primes && kills;
    some_prime = some_prime || kills;
  }
  if (all_primes) return DivisorStatus::Nilpotent;
  if (some_prime) return DivisorStatus::ZeroDivisor;
  return DivisorStatus::Regular;
}

}  // namespace

bool same_ring(const Ring& a, const Ring& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->descriptor() == b->descriptor();
}

// ---------------------------------------------------------------------------
// Elem

bool Elem::is_zero() const { return ring_->is_zero(*this); }
bool Elem::is_one() const { return ring_->eq(*this, ring_->one()); }
std::string Elem::str() const { return ring_->to_string(*this); }

Elem Elem::operator-() const { return ring_->neg(*this); }
Elem& Elem::operator+=(const Elem& o) { return *this = ring_->add(*this, o); }
Elem& Elem::operator-=(const Elem& o) { return *this = ring_->sub(*this, o); }
Elem& Elem::operator*=(const Elem& o) { return *this = ring_->mul(*this, o); }
Elem operator*(std::int64_t c, const Elem& b) { return b.ring_->scale(c, b); }
bool operator==(const Elem& a, const Elem& b) { return a.ring_->eq(a, b); }

// ---------------------------------------------------------------------------
// Construction

Ring RingImpl::integers_mod(std::int64_t m) {
  if (m < 3) throw Error(ErrorCode::EvenModulus, "modulus must be odd and at least 3, got " + std::to_string(m));
  if (m % 2 == 0) throw Error(ErrorCode::EvenModulus, "2 is not invertible modulo " + std::to_string(m));
  auto r = std::make_shared<RingImpl>(Private{}, RingKind::IntegersMod);
  r->modulus_ = m;
  r->descriptor_ = "zmod:" + std::to_string(m);
  r->finish();
  return r;
}

Ring RingImpl::rationals() {
  static const Ring q = [] {
    auto r = std::make_shared<RingImpl>(Private{}, RingKind::Rationals);
    r->descriptor_ = "q";
    r->finish();
    return Ring(r);
  }();
  return q;
}

Ring RingImpl::multi_poly(Ring base, std::vector<std::string> vars) {
  if (vars.empty()) throw Error(ErrorCode::ParseError, "polynomial ring needs at least one variable");
  auto r = std::make_shared<RingImpl>(Private{}, RingKind::MultiPoly);
  r->base_ = std::move(base);
  r->vars_ = std::move(vars);
  std::string vs;
  for (std::size_t i = 0; i < r->vars_.size(); ++i) vs += (i ? "," : "") + r->vars_[i];
  r->descriptor_ = "poly:" + r->base_->descriptor() + ":" + vs;
  r->finish();
  return r;
}

Ring RingImpl::uni_poly(Ring base, std::string var) {
  auto r = std::make_shared<RingImpl>(Private{}, RingKind::UniPoly);
  r->base_ = std::move(base);
  r->vars_ = {std::move(var)};
  r->descriptor_ = "upoly:" + r->base_->descriptor() + ":" + r->vars_.front();
  r->finish();
  return r;
}

Ring RingImpl::localize(Ring base, Elem s) {
  s = base->embed(s);
  switch (divisor_status(s)) {
    case DivisorStatus::Nilpotent:
      throw Error(ErrorCode::NilpotentS, "localization element " + s.str() + " is nilpotent");
    case DivisorStatus::ZeroDivisor:
      throw Error(ErrorCode::ZeroDivisorS, "localization element " + s.str() + " is a zero divisor");
    case DivisorStatus::Regular: break;
  }
  auto r = std::make_shared<RingImpl>(Private{}, RingKind::Localization);
  r->base_ = std::move(base);
  r->s_ = s;
  r->descriptor_ = "loc:" + r->base_->descriptor() + ":s=" + s.str();
  r->finish();
  return r;
}

void RingImpl::finish() {
  Ring self = std::const_pointer_cast<const RingImpl>(shared_from_this());
  switch (kind_) {
    case RingKind::IntegersMod:
      zero_ = Elem(self, std::int64_t{0});
      one_ = Elem(self, std::int64_t{1});
      inv2_ = Elem(self, (modulus_ + 1) / 2);
      return;
    case RingKind::Rationals:
      zero_ = Elem(self, mpq_class(0));
      one_ = Elem(self, mpq_class(1));
      inv2_ = Elem(self, mpq_class(1, 2));
      return;
    case RingKind::MultiPoly:
      zero_ = make_mpoly({});
      one_ = make_mpoly({{Monomial(vars_.size(), 0), base_->one()}});
      inv2_ = embed(base_->inverse_of_two());
      return;
    case RingKind::UniPoly:
      zero_ = make_upoly({});
      one_ = make_upoly({base_->one()});
      inv2_ = embed(base_->inverse_of_two());
      return;
    case RingKind::Localization:
      zero_ = Elem(self, std::make_shared<const LocRep>(LocRep{base_->zero(), 0}));
      one_ = Elem(self, std::make_shared<const LocRep>(LocRep{base_->one(), 0}));
      inv2_ = embed(base_->inverse_of_two());
      return;
  }
}

Elem RingImpl::make_mpoly(std::vector<std::pair<Monomial, Elem>> terms) const {
  return Elem(handle(), std::make_shared<const MPolyRep>(MPolyRep{std::move(terms)}));
}

Elem RingImpl::make_upoly(std::vector<Elem> coeffs) const {
  while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
  return Elem(handle(), std::make_shared<const UPolyRep>(UPolyRep{std::move(coeffs)}));
}

Elem RingImpl::canon_loc(Elem num, std::uint32_t k) const {
  if (num.is_zero()) return zero_;
  while (k > 0) {
    auto q = base_->try_divide(num, s_);
    if (!q) break;
    num = *q;
    --k;
  }
  return Elem(handle(), std::make_shared<const LocRep>(LocRep{std::move(num), k}));
}

Elem RingImpl::zero() const { return zero_; }
Elem RingImpl::one() const { return one_; }

Elem RingImpl::from_int(std::int64_t v) const {
  switch (kind_) {
    case RingKind::IntegersMod: return Elem(handle(), mod_norm(v, modulus_));
    case RingKind::Rationals: return Elem(handle(), mpq_class(static_cast<long>(v)));
    default: return embed(base_->from_int(v));
  }
}

Elem RingImpl::from_rational(const mpq_class& q0) const {
  mpq_class q = q0;
  q.canonicalize();
  switch (kind_) {
    case RingKind::Rationals: return Elem(handle(), q);
    case RingKind::IntegersMod: {
      mpz_class m(static_cast<long>(modulus_));
      mpz_class num = q.get_num() % m, den = q.get_den() % m;
      Elem d = from_int(den.get_si());
      return mul(from_int(num.get_si()), inverse(d));
    }
    default: return embed(base_->from_rational(q));
  }
}

Elem RingImpl::embed(const Elem& a) const {
  if (same_ring(a.ring(), handle())) return a;
  if (!base_) throw Error(ErrorCode::RingMismatch, "cannot embed " + a.impl().descriptor() + " into " + descriptor_);
  Elem b = base_->embed(a);
  switch (kind_) {
    case RingKind::MultiPoly:
      if (b.is_zero()) return zero_;
      return make_mpoly({{Monomial(vars_.size(), 0), b}});
    case RingKind::UniPoly: return make_upoly({b});
    case RingKind::Localization: return Elem(handle(), std::make_shared<const LocRep>(LocRep{b, 0}));
    default: break;
  }
  throw Error(ErrorCode::RingMismatch, "cannot embed into " + descriptor_);
}

std::optional<Elem> RingImpl::variable_elem(const std::string& name) const {
  if (kind_ == RingKind::MultiPoly) {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) {
        Monomial m(vars_.size(), 0);
        m[i] = 1;
        return make_mpoly({{m, base_->one()}});
      }
    }
  }
  if (kind_ == RingKind::UniPoly && vars_.front() == name) return make_upoly({base_->zero(), base_->one()});
  if (base_) {
    if (auto v = base_->variable_elem(name)) return embed(*v);
  }
  if (kind_ == RingKind::Localization && name == "s") return embed(s_);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Arithmetic

Elem RingImpl::add(const Elem& a0, const Elem& b0) const {
  Elem a = embed(a0), b = embed(b0);
  switch (kind_) {
    case RingKind::IntegersMod: {
      std::int64_t v = a.residue() + b.residue();
      return Elem(handle(), v >= modulus_ ? v - modulus_ : v);
    }
    case RingKind::Rationals: return Elem(handle(), mpq_class(a.rational() + b.rational()));
    case RingKind::MultiPoly: {
      const auto& x = a.mpoly().terms;
      const auto& y = b.mpoly().terms;
      std::vector<std::pair<Monomial, Elem>> out;
      out.reserve(x.size() + y.size());
      std::size_t i = 0, j = 0;
      while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && grlex_greater(x[i].first, y[j].first))) {
          out.push_back(x[i++]);
        } else if (i == x.size() || grlex_greater(y[j].first, x[i].first)) {
          out.push_back(y[j++]);
        } else {
          Elem c = x[i].second + y[j].second;
          if (!c.is_zero()) out.emplace_back(x[i].first, std::move(c));
          ++i;
          ++j;
        }
      }
      return make_mpoly(std::move(out));
    }
    case RingKind::UniPoly: {
      const auto& x = a.upoly().coeffs;
      const auto& y = b.upoly().coeffs;
      std::vector<Elem> out(std::max(x.size(), y.size()), base_->zero());
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
      for (std::size_t i = 0; i < y.size(); ++i) out[i] = out[i] + y[i];
      return make_upoly(std::move(out));
    }
    case RingKind::Localization: {
      const auto& x = a.loc();
      const auto& y = b.loc();
      std::uint32_t k = std::max(x.k, y.k);
      Elem num = base_->add(base_->mul(x.numerator, base_->pow(s_, k - x.k)),
                            base_->mul(y.numerator, base_->pow(s_, k - y.k)));
      return canon_loc(std::move(num), k);
    }
  }
  return zero_;
}

Elem RingImpl::neg(const Elem& a0) const {
  Elem a = embed(a0);
  switch (kind_) {
    case RingKind::IntegersMod: return Elem(handle(), a.residue() == 0 ? 0 : modulus_ - a.residue());
    case RingKind::Rationals: return Elem(handle(), mpq_class(-a.rational()));
    case RingKind::MultiPoly: {
      auto terms = a.mpoly().terms;
      for (auto& t : terms) t.second = -t.second;
      return make_mpoly(std::move(terms));
    }
    case RingKind::UniPoly: {
      auto cs = a.upoly().coeffs;
      for (auto& c : cs) c = -c;
      return make_upoly(std::move(cs));
    }
    case RingKind::Localization:
      return Elem(handle(), std::make_shared<const LocRep>(LocRep{-a.loc().numerator, a.loc().k}));
  }
  return zero_;
}

Elem RingImpl::sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

Elem RingImpl::mul(const Elem& a0, const Elem& b0) const {
  Elem a = embed(a0), b = embed(b0);
  switch (kind_) {
    case RingKind::IntegersMod: return Elem(handle(), mod_mul(a.residue(), b.residue(), modulus_));
    case RingKind::Rationals: return Elem(handle(), mpq_class(a.rational() * b.rational()));
    case RingKind::MultiPoly: {
      const auto& x = a.mpoly().terms;
      const auto& y = b.mpoly().terms;
      if (x.empty() || y.empty()) return zero_;
      const std::size_t nv = vars_.size();
      std::vector<std::pair<Monomial, std::size_t>> prods;
      prods.reserve(x.size() * y.size());
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) {
          Monomial m(nv);
          for (std::size_t v = 0; v < nv; ++v) m[v] = x[i].first[v] + y[j].first[v];
          prods.emplace_back(std::move(m), i * y.size() + j);
        }
      std::stable_sort(prods.begin(), prods.end(),
                       [](const auto& p, const auto& q) { return grlex_greater(p.first, q.first); });
      std::vector<std::pair<Monomial, Elem>> out;
      const bool rational = base_->kind() == RingKind::Rationals;
      for (std::size_t k = 0; k < prods.size();) {
        std::size_t e = k;
        while (e < prods.size() && prods[e].first == prods[k].first) ++e;
        Elem c;
        if (rational) {
          mpq_class q = 0;
          for (std::size_t t = k; t < e; ++t) {
            std::size_t i = prods[t].second / y.size(), j = prods[t].second % y.size();
            q += x[i].second.rational() * y[j].second.rational();
          }
          if (q != 0) c = base_->from_rational(q);
        } else {
          c = base_->zero();
          for (std::size_t t = k; t < e; ++t) {
            std::size_t i = prods[t].second / y.size(), j = prods[t].second % y.size();
            c += x[i].second * y[j].second;
          }
        }
        if (c.valid() && !c.is_zero()) out.emplace_back(std::move(prods[k].first), std::move(c));
        k = e;
      }
      return make_mpoly(std::move(out));
    }
    case RingKind::UniPoly: {
      const auto& x = a.upoly().coeffs;
      const auto& y = b.upoly().coeffs;
      if (x.empty() || y.empty()) return zero_;
      std::vector<Elem> out(x.size() + y.size() - 1, base_->zero());
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) out[i + j] = out[i + j] + x[i] * y[j];
      return make_upoly(std::move(out));
    }
    case RingKind::Localization:
      return canon_loc(base_->mul(a.loc().numerator, b.loc().numerator), a.loc().k + b.loc().k);
  }
  return zero_;
}

Elem RingImpl::scale(std::int64_t c, const Elem& a) const { return mul(from_int(c), a); }

Elem RingImpl::pow(const Elem& a0, std::uint64_t e) const {
  Elem a = embed(a0);
  Elem result = one_;
  while (e > 0) {
    if (e & 1U) result = mul(result, a);
    e >>= 1U;
    if (e) a = mul(a, a);
  }
  return result;
}

bool RingImpl::is_zero(const Elem& a) const {
  switch (a.impl().kind()) {
    case RingKind::IntegersMod: return a.residue() == 0;
    case RingKind::Rationals: return a.rational() == 0;
    case RingKind::MultiPoly: return a.mpoly().terms.empty();
    case RingKind::UniPoly: return a.upoly().coeffs.empty();
    case RingKind::Localization: return a.loc().numerator.is_zero();
  }
  return false;
}

bool RingImpl::eq(const Elem& a0, const Elem& b0) const {
  Elem a = embed(a0), b = embed(b0);
  switch (kind_) {
    case RingKind::IntegersMod: return a.residue() == b.residue();
    case RingKind::Rationals: return a.rational() == b.rational();
    case RingKind::MultiPoly: {
      const auto& x = a.mpoly().terms;
      const auto& y = b.mpoly().terms;
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i].first != y[i].first || !(x[i].second == y[i].second)) return false;
      return true;
    }
    case RingKind::UniPoly: {
      const auto& x = a.upoly().coeffs;
      const auto& y = b.upoly().coeffs;
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i] == y[i])) return false;
      return true;
    }
    case RingKind::Localization: {
      const auto& x = a.loc();
      const auto& y = b.loc();
      if (x.k == y.k) return x.numerator == y.numerator;
      // s is a non-zero-divisor, so a/s^k = b/s^l iff a s^l = b s^k.
      return base_->mul(x.numerator, base_->pow(s_, y.k)) == base_->mul(y.numerator, base_->pow(s_, x.k));
    }
  }
  return false;
}

std::optional<Elem> RingImpl::try_divide(const Elem& a0, const Elem& b0) const {
  Elem a = embed(a0), b = embed(b0);
  if (b.is_zero()) return a.is_zero() ? std::optional<Elem>(zero_) : std::nullopt;
  if (a.is_zero()) return zero_;
  switch (kind_) {
    case RingKind::IntegersMod: {
      auto [g, x] = ext_gcd_mod(b.residue(), modulus_);
      if (a.residue() % g != 0) return std::nullopt;
      std::int64_t mg = modulus_ / g;
      // b*x == g (mod m), so b * (x * a/g) == a (mod m).
      std::int64_t q = mod_mul(mod_norm(x, mg), (a.residue() / g) % mg, mg);
      return Elem(handle(), q);
    }
    case RingKind::Rationals: return Elem(handle(), mpq_class(a.rational() / b.rational()));
    case RingKind::MultiPoly: {
      const auto& bt = b.mpoly().terms;
      if (bt.size() == 1 && is_constant_monomial(bt.front().first)) {
        std::vector<std::pair<Monomial, Elem>> out;
        for (const auto& [mono, c] : a.mpoly().terms) {
          auto q = base_->try_divide(c, bt.front().second);
          if (!q) return std::nullopt;
          if (!q->is_zero()) out.emplace_back(mono, *q);
        }
        return make_mpoly(std::move(out));
      }
      auto lc_inv = base_->try_inverse(bt.front().second);
      if (!lc_inv) return std::nullopt;
      const Monomial& lm = bt.front().first;
      Elem r = a, q = zero_;
      while (!r.is_zero()) {
        const auto& [rm, rc] = r.mpoly().terms.front();
        if (!divides(lm, rm)) return std::nullopt;
        Monomial tm(rm.size());
        for (std::size_t v = 0; v < tm.size(); ++v) tm[v] = rm[v] - lm[v];
        Elem t = make_mpoly({{tm, rc * *lc_inv}});
        q = add(q, t);
        r = sub(r, mul(t, b));
      }
      return q;
    }
    case RingKind::UniPoly: {
      const auto& bc = b.upoly().coeffs;
      if (bc.size() == 1) {
        std::vector<Elem> out;
        for (const auto& c : a.upoly().coeffs) {
          auto q = base_->try_divide(c, bc.front());
          if (!q) return std::nullopt;
          out.push_back(*q);
        }
        return make_upoly(std::move(out));
      }
      auto lc_inv = base_->try_inverse(bc.back());
      if (!lc_inv) return std::nullopt;
      std::vector<Elem> r = a.upoly().coeffs;
      if (r.size() < bc.size()) return std::nullopt;
      std::vector<Elem> q(r.size() - bc.size() + 1, base_->zero());
      for (std::size_t d = r.size(); d-- >= bc.size();) {
        Elem c = r[d] * *lc_inv;
        std::size_t shift = d - (bc.size() - 1);
        q[shift] = c;
        for (std::size_t i = 0; i < bc.size(); ++i) r[shift + i] = r[shift + i] - c * bc[i];
        if (d == bc.size() - 1) break;
      }
      for (const auto& c : r)
        if (!c.is_zero()) return std::nullopt;
      return make_upoly(std::move(q));
    }
    case RingKind::Localization: {
      const auto& x = a.loc();
      const auto& y = b.loc();
      for (std::uint32_t j = 0; j <= 16; ++j) {
        auto q = base_->try_divide(base_->mul(x.numerator, base_->pow(s_, y.k + j)), y.numerator);
        if (q) return canon_loc(*q, x.k + j);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<Elem> RingImpl::try_inverse(const Elem& a0) const {
  Elem a = embed(a0);
  if (kind_ == RingKind::IntegersMod) {
    auto [g, x] = ext_gcd_mod(a.residue(), modulus_);
    if (g != 1) return std::nullopt;
    return Elem(handle(), x);
  }
  if (kind_ == RingKind::Rationals && a.rational() == 0) return std::nullopt;
  return try_divide(one_, a);
}

Elem RingImpl::inverse(const Elem& a) const {
  auto inv = try_inverse(a);
  if (!inv) throw Error(ErrorCode::NotInvertible, a.str() + " is not a unit in " + descriptor_);
  return *inv;
}

std::optional<std::int64_t> RingImpl::finite_size() const {
  if (kind_ == RingKind::IntegersMod) return modulus_;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_atomic_text(const std::string& s) {
  if (s.empty()) return true;
  std::size_t start = (s[0] == '-') ? 1 : 0;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

std::string paren(const std::string& s) { return is_atomic_text(s) ? s : "(" + s + ")"; }

std::string join_terms(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  std::string out = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) {
    const std::string& t = terms[i];
    if (!t.empty() && t[0] == '-') out += " - " + t.substr(1);
    else out += " + " + t;
  }
  return out;
}

std::string term_text(const Elem& c, const std::string& mono) {
  if (mono.empty()) return c.str();
  if (c.is_one()) return mono;
  if ((-c).is_one()) return "-" + mono;
  std::string cs = c.str();
  // Negative atomic coefficients keep their sign outside the product.
  if (cs.size() > 1 && cs[0] == '-' && is_atomic_text(cs)) return "-" + cs.substr(1) + "*" + mono;
  if (cs.find('/') != std::string::npos && cs.find(' ') == std::string::npos && cs[0] != '(') {
    // Rational literal like 1/2 or -3/4.
    return cs + "*" + mono;
  }
  return paren(cs) + "*" + mono;
}

}  // namespace

std::string RingImpl::to_string(const Elem& a0) const {
  Elem a = embed(a0);
  switch (kind_) {
    case RingKind::IntegersMod: return std::to_string(a.residue());
    case RingKind::Rationals: return a.rational().get_str();
    case RingKind::MultiPoly: {
      std::vector<std::string> parts;
      for (const auto& [mono, c] : a.mpoly().terms) {
        std::string m;
        for (std::size_t v = 0; v < mono.size(); ++v) {
          if (mono[v] == 0) continue;
          if (!m.empty()) m += "*";
          m += vars_[v];
          if (mono[v] > 1) m += "^" + std::to_string(mono[v]);
        }
        parts.push_back(term_text(c, m));
      }
      return join_terms(parts);
    }
    case RingKind::UniPoly: {
      std::vector<std::string> parts;
      const auto& cs = a.upoly().coeffs;
      for (std::size_t d = cs.size(); d-- > 0;) {
        if (cs[d].is_zero()) continue;
        std::string m;
        if (d >= 1) m = vars_.front();
        if (d > 1) m += "^" + std::to_string(d);
        parts.push_back(term_text(cs[d], m));
      }
      return join_terms(parts);
    }
    case RingKind::Localization: {
      const auto& l = a.loc();
      std::string num = l.numerator.str();
      if (l.k == 0) return num;
      std::string ss = paren(s_.str());
      return "(" + num + ")/" + ss + (l.k > 1 ? "^" + std::to_string(l.k) : "");
    }
  }
  return "?";
}

std::string canonical_text(const Elem& a) { return a.str(); }

// ---------------------------------------------------------------------------
// Polynomial and localization helpers

Elem eval_hom(const Elem& p, const Elem& x_image, const std::function<Elem(const Elem&)>& coeff_map) {
  if (p.impl().kind() != RingKind::UniPoly) throw Error(ErrorCode::RingMismatch, "eval_hom needs a univariate polynomial");
  const auto& cs = p.upoly().coeffs;
  const Ring& target = x_image.ring();
  Elem acc = target->zero();
  for (std::size_t d = cs.size(); d-- > 0;) acc = acc * x_image + target->embed(coeff_map(cs[d]));
  return acc;
}

Elem eval_at(const Elem& p, const Elem& r) {
  const Ring& base = p.impl().base();
  return eval_hom(p, base->embed(r), [](const Elem& c) { return c; });
}

Elem eval_at_zero(const Elem& p) {
  const auto& cs = p.upoly().coeffs;
  return cs.empty() ? p.impl().base()->zero() : cs.front();
}

Elem substitute_scaled(const Elem& p, const Elem& b0) {
  const RingImpl& r = p.impl();
  Elem b = r.base()->embed(b0);
  std::vector<Elem> cs = p.upoly().coeffs;
  Elem power = r.base()->one();
  for (auto& c : cs) {
    c = c * power;
    power = power * b;
  }
  return uni_from_coeffs(p.ring(), std::move(cs));
}

Elem uni_coeff(const Elem& p, std::size_t i) {
  const auto& cs = p.upoly().coeffs;
  return i < cs.size() ? cs[i] : p.impl().base()->zero();
}

std::size_t uni_degree(const Elem& p) {
  const auto& cs = p.upoly().coeffs;
  return cs.empty() ? 0 : cs.size() - 1;
}

Elem uni_from_coeffs(const Ring& r, std::vector<Elem> coeffs) {
  if (r->kind() != RingKind::UniPoly) throw Error(ErrorCode::RingMismatch, "not a univariate ring");
  for (auto& c : coeffs) c = r->base()->embed(c);
  Elem acc = r->zero();
  Elem x = uni_var(r);
  for (std::size_t d = coeffs.size(); d-- > 0;) acc = acc * x + r->embed(coeffs[d]);
  return acc;
}

Elem uni_var(const Ring& r) { return *r->variable_elem(r->variable()); }

Elem frac(const Ring& loc, const Elem& a, std::uint32_t k) {
  if (loc->kind() != RingKind::Localization) throw Error(ErrorCode::RingMismatch, "frac needs a localization");
  return loc->mul(loc->embed(a), loc->inverse(loc->pow(loc->embed(loc->s()), k)));
}

Elem loc_numerator(const Elem& e) { return e.loc().numerator; }
std::uint32_t loc_exponent(const Elem& e) { return e.loc().k; }

std::uint32_t s_valuation(const Elem& a, const Elem& s, std::uint32_t cap) {
  if (a.is_zero()) return cap;
  Elem cur = a;
  std::uint32_t v = 0;
  while (v < cap) {
    auto q = a.impl().try_divide(cur, s);
    if (!q) break;
    cur = *q;
    ++v;
  }
  return v;
}

}  // namespace esp
