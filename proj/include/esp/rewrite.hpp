#pragma once

// Self-checking rewriting of elementary symplectic words into the subgroup H
// generated by the ABCD atoms. Every rule application is checked against the
// matrix semantics; a mismatch aborts with StepVerificationFailed.

#include <cstdint>
#include <string>
#include <vector>

#include "esp/word.hpp"

namespace esp {

struct TraceStep {
  std::string rule;
  std::uint64_t before = 0;
  std::uint64_t after = 0;
};

/// How decompose_full disposes of the unit atoms of the body. Push moves
/// them into a block diagonal factor with the unit commutator table; its output
/// grows exponentially with the number of units. InPlace replaces each unit by
/// its ABCD bracket where it stands.
enum class UnitStrategy { InPlace, Push };

struct RewriteOptions {
  std::size_t fuel = 10000;  // rule applications per stage
  UnitStrategy units = UnitStrategy::InPlace;
};

/// A word over E12/E21 atoms with n = 1, i.e. an explicit element of E_2(R).
Word e2_word(const Ring& ring, std::vector<Atom> factors = {});
/// E_2 factorization of I_2 + B(y) or I_2 + C(y).
std::vector<Atom> unit_e2_factors(Shape shape, const Elem& y);

/// The rank-one E-block E^pos[[l x, l y], [m x, m y]] behind an ABCD atom, a
/// row-1/row-2 S atom or a Placed atom starting at block 1, with an E_2 word
/// w whose first column is (l, m).
struct RankOne {
  std::size_t pos = 2;
  Elem l, m, x, y;
  std::vector<Atom> witness;
};
bool rank_one(const Atom& a, RankOne* out);

/// E^pos[[lx,ly],[mx,my]] = (Ch ⊥ I) * atoms, atoms over {ABCD, Unit at pos}.
struct BlockSplit {
  Matrix ch;
  Elem ab;  // Ch = eps E12(2ab) eps^{-1}
  std::vector<Atom> atoms;
};
BlockSplit split_block(const Ring& ring, std::size_t pos, const Elem& l, const Elem& m, const Elem& x, const Elem& y);

struct InitialDecomposition {
  Word delta;  // E12/E21 word, n = 1
  Word body;   // ABCD and Unit (positions >= 2) atoms
  std::vector<TraceStep> trace;
};
/// eval(w) = (eval(delta) ⊥ I) * eval(body).
InitialDecomposition decompose_initial(const Word& w, const RewriteOptions& opt = {});

/// I_2 + B / I_2 + C factors per block position, in multiplication order.
struct UnitDiag {
  std::size_t n = 2;
  std::vector<std::vector<Atom>> factors;  // factors[p - 1] holds Unit atoms at p
  Matrix matrix(const Ring& ring) const;
  Word word(const Ring& ring) const;
};

struct UnitPush {
  UnitDiag diag;
  Word tail;  // ABCD atoms only
  std::vector<TraceStep> trace;
};
/// eval(body) = eval(diag) * eval(tail). Units are taken left to right; each
/// walks over the ABCD atoms to its left once, leaving what the crossings
/// create on its right.
UnitPush push_units_left(const Word& body, const RewriteOptions& opt = {});
/// Same contract with an identity diag: units at blocks >= 2 become brackets.
UnitPush units_in_place(const Word& body);

/// ABCD words for single units: I_2 + C(c) or I_2 + B(c) at block pos, using
/// the bracket at block r when pos = 1.
Word unit_to_abcd(const Ring& ring, std::size_t n, Shape shape, std::size_t pos, const Elem& c, std::size_t r = 2);
/// Block 1 of diag must be empty.
Word units_to_abcd(const Ring& ring, const UnitDiag& diag);

/// (delta ⊥ I) h (delta ⊥ I)^{-1} as an ABCD word, for det delta = 1 and h an
/// ABCD word.
Word conjugate_by_corner(const Matrix& delta, const Word& h);

/// Rewrites an E12/E21 word as a product of I_2+B / I_2+C units (n = 1 word
/// of Unit atoms at block 1). Throws NotE2Witnessed on other atoms.
Word corner_units(const Word& delta);
/// delta must be an E12/E21 word (NotE2Witnessed otherwise); returns an ABCD
/// word for delta ⊥ I in Sp_{2n}.
Word corner_to_abcd(const Word& delta, std::size_t n);

/// One admitted relation S_ij(x) = [S_ik(a x), S_kj(b)].
struct Row12Rule {
  std::size_t i = 0, j = 0, k = 0;
  int a = 1, b = 1;
};
/// Candidate relations for i, j in 3..2*nmax, each admitted only after the
/// matrix oracle confirms it symbolically.
std::vector<Row12Rule> discover_row12_rules(std::size_t nmax);
const std::vector<Row12Rule>& row12_rules();
std::string row12_rules_text(const std::vector<Row12Rule>& rules);
std::vector<Row12Rule> parse_row12_rules(const std::string& text);

/// Rewrites S(i, j) atoms with i, j >= 3 (and the aliases S(i, 1), S(i, 2))
/// into the row-1/row-2 alphabet. Throws NoRuleFound when no rule applies.
Word reduce_to_row12(const Word& w);

struct DecompositionCertificate {
  Word input;
  Word output;
  std::vector<TraceStep> trace;
  bool verified = false;
};

/// Chains reduce_to_row12, decompose_initial, push_units_left, units_to_abcd
/// and corner_to_abcd; the output is ABCD-only.
DecompositionCertificate decompose_full(const Word& w, const RewriteOptions& opt = {});

/// Merges adjacent atoms of one additive family (ABCD or unit of equal shape
/// and position, S of equal indices, E12, E21) and drops zero-parameter atoms.
Word simplify(const Word& w);

std::string trace_text(const std::vector<TraceStep>& trace);

// Elementary factorization over Z/m (m odd) and Q.

/// Long-root transvections I + c e_{2k-1,2k} (upper) and I + c e_{2k,2k-1} as
/// words; for k = 1 these are E12(c) and E21(c).
Word long_root(const Ring& ring, std::size_t n, std::size_t k, bool upper, const Elem& c);
/// A word over S/E12/E21 atoms evaluating to the symplectic matrix g. Works over
/// fields and Z/m; throws Unsupported for other rings.
Word factor_symplectic(const Matrix& g);

}  // namespace esp
