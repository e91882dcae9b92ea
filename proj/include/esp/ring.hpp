#pragma once

// Commutative rings with 1 in which 2 is a unit, with exact canonical
// arithmetic. Rings are immutable handles; elements are cheap value types that
// share their (immutable) representation.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "esp/error.hpp"

namespace esp {

enum class RingKind { IntegersMod, Rationals, MultiPoly, Localization, UniPoly };

class RingImpl;
using Ring = std::shared_ptr<const RingImpl>;

struct MPolyRep;
struct LocRep;
struct UPolyRep;

using Monomial = std::vector<std::uint32_t>;

class Elem {
 public:
  using Rep = std::variant<std::int64_t, mpq_class, std::shared_ptr<const MPolyRep>,
                           std::shared_ptr<const LocRep>, std::shared_ptr<const UPolyRep>>;

  Elem() = default;
  Elem(Ring ring, Rep rep) : ring_(std::move(ring)), rep_(std::move(rep)) {}

  const Ring& ring() const { return ring_; }
  const RingImpl& impl() const { return *ring_; }
  bool valid() const { return static_cast<bool>(ring_); }

  bool is_zero() const;
  bool is_one() const;
  std::string str() const;

  Elem operator-() const;
  Elem& operator+=(const Elem& o);
  Elem& operator-=(const Elem& o);
  Elem& operator*=(const Elem& o);

  friend Elem operator+(Elem a, const Elem& b) { return a += b; }
  friend Elem operator-(Elem a, const Elem& b) { return a -= b; }
  friend Elem operator*(Elem a, const Elem& b) { return a *= b; }
  friend Elem operator*(std::int64_t c, const Elem& b);
  friend Elem operator*(const Elem& b, std::int64_t c) { return c * b; }
  friend bool operator==(const Elem& a, const Elem& b);
  friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }

  // Representation access; callers must check the ring kind first.
  std::int64_t residue() const { return std::get<std::int64_t>(rep_); }
  const mpq_class& rational() const { return std::get<mpq_class>(rep_); }
  const MPolyRep& mpoly() const { return *std::get<std::shared_ptr<const MPolyRep>>(rep_); }
  const LocRep& loc() const { return *std::get<std::shared_ptr<const LocRep>>(rep_); }
  const UPolyRep& upoly() const { return *std::get<std::shared_ptr<const UPolyRep>>(rep_); }
  const Rep& rep() const { return rep_; }

 private:
  Ring ring_;
  Rep rep_;
};

/// Sparse polynomial, terms sorted by descending graded-lex order of the
/// monomial; no zero coefficients.
struct MPolyRep {
  std::vector<std::pair<Monomial, Elem>> terms;
};

/// numerator / s^k with k as small as exact division by s allows.
struct LocRep {
  Elem numerator;
  std::uint32_t k = 0;
};

/// Dense coefficients c_0..c_d; empty means zero, otherwise c_d != 0.
struct UPolyRep {
  std::vector<Elem> coeffs;
};

class RingImpl : public std::enable_shared_from_this<RingImpl> {
 public:
  struct Private {};

  RingImpl(Private, RingKind kind) : kind_(kind) {}

  RingKind kind() const { return kind_; }
  std::int64_t modulus() const { return modulus_; }
  const Ring& base() const { return base_; }
  const std::vector<std::string>& variables() const { return vars_; }
  const std::string& variable() const { return vars_.front(); }
  const Elem& s() const { return s_; }
  const std::string& descriptor() const { return descriptor_; }

  Ring handle() const { return shared_from_this(); }

  Elem zero() const;
  Elem one() const;
  Elem from_int(std::int64_t v) const;
  Elem from_rational(const mpq_class& q) const;
  /// Image of an element of base() (or of any ring further down the tower).
  Elem embed(const Elem& a) const;
  /// Generator named `name` (a polynomial variable, or `s` in a localization),
  /// searched through the whole tower.
  std::optional<Elem> variable_elem(const std::string& name) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem scale(std::int64_t c, const Elem& a) const;
  Elem pow(const Elem& a, std::uint64_t e) const;
  bool eq(const Elem& a, const Elem& b) const;
  bool is_zero(const Elem& a) const;

  Elem half(const Elem& a) const { return mul(a, inv2_); }
  const Elem& inverse_of_two() const { return inv2_; }
  std::optional<Elem> try_inverse(const Elem& a) const;
  Elem inverse(const Elem& a) const;
  /// Some q with b*q == a, when the ring can find one.
  std::optional<Elem> try_divide(const Elem& a, const Elem& b) const;
  bool is_unit(const Elem& a) const { return try_inverse(a).has_value(); }

  std::string to_string(const Elem& a) const;

  /// Finite rings only: number of elements, when it fits.
  std::optional<std::int64_t> finite_size() const;

  // Factories.
  static Ring integers_mod(std::int64_t m);
  static Ring rationals();
  static Ring multi_poly(Ring base, std::vector<std::string> vars);
  static Ring uni_poly(Ring base, std::string var);
  /// R_s. `s` must be a non-zero-divisor; nilpotence and zero-divisors are
  /// detected where decidable (finite coefficient rings, domains).
  static Ring localize(Ring base, Elem s);

 private:
  void finish();
  Elem canon_loc(Elem num, std::uint32_t k) const;
  Elem make_mpoly(std::vector<std::pair<Monomial, Elem>> terms) const;
  Elem make_upoly(std::vector<Elem> coeffs) const;

  RingKind kind_;
  std::int64_t modulus_ = 0;
  Ring base_;
  std::vector<std::string> vars_;
  Elem s_;
  Elem inv2_;
  std::string descriptor_;
  Elem zero_;
  Elem one_;

  friend class Elem;
};

bool same_ring(const Ring& a, const Ring& b);

// Polynomial helpers.

/// Univariate: p(r) for r in the base ring (or any ring the coefficients embed
/// into via `target`).
Elem eval_at(const Elem& p, const Elem& r);
Elem eval_at_zero(const Elem& p);
/// p(b*X) for b in the base ring.
Elem substitute_scaled(const Elem& p, const Elem& b);
/// Ring homomorphism R[X] -> T given the coefficient map R -> T and the image
/// of X in T.
Elem eval_hom(const Elem& p, const Elem& x_image, const std::function<Elem(const Elem&)>& coeff_map);
Elem uni_coeff(const Elem& p, std::size_t i);
std::size_t uni_degree(const Elem& p);  // 0 for the zero polynomial
Elem uni_from_coeffs(const Ring& r, std::vector<Elem> coeffs);
Elem uni_var(const Ring& r);

/// Localization helpers: a/s^k and the pieces of the canonical form.
Elem frac(const Ring& loc, const Elem& a, std::uint32_t k);
Elem loc_numerator(const Elem& e);
std::uint32_t loc_exponent(const Elem& e);

/// Largest v <= cap with s^v | a (cap when a == 0).
std::uint32_t s_valuation(const Elem& a, const Elem& s, std::uint32_t cap = 64);

/// Stable text used for hashing and golden files.
std::string canonical_text(const Elem& a);

}  // namespace esp
