#pragma once

// Conjugation decompositions over a localization R_s, dilation of homotopies,
// patching over a comaximal cover, and the normality demonstration.

#include <string>
#include <utility>
#include <vector>

#include "esp/rewrite.hpp"

namespace esp {

/// E(shape_pos)(coeff * s^exp) with coeff in the base ring of the localization.
struct ValTerm {
  Shape shape = Shape::A;
  std::size_t pos = 2;
  int exp = 0;
  Elem coeff;
};

struct ValuationTrace {
  int k = 0;
  int m = 0;
  std::vector<ValTerm> terms;

  int min_exponent() const;
  /// Every exponent is >= 0, i.e. every parameter lies in R.
  bool integral() const { return terms.empty() || min_exponent() >= 0; }
};

struct ConjDecomposition {
  int case_no = 1;  // 1 equal shapes, 2 bracket bilinear in xy, 3 the (A,D)-type pairs
  Word word;        // over the localization
  ValuationTrace trace;
};

/// Terms for E(X_i)(a/s^k) E(Y_j)(s^m x) E(X_i)(a/s^k)^{-1}, a and x in the base
/// of `loc` = R_s. Throws ExponentTooSmall when m <= k. No matrix check.
ConjDecomposition conj_terms(const Ring& loc, std::size_t n, Shape X, std::size_t i, const Elem& a, int k, Shape Y,
                             std::size_t j, int m, const Elem& x);
/// conj_terms plus the evaluation check in ESp_{2n}(R_s).
ConjDecomposition conj_decompose(const Ring& loc, std::size_t n, Shape X, std::size_t i, const Elem& a, int k, Shape Y,
                                 std::size_t j, int m, const Elem& x);

/// The word of ABCD atoms E(shape_pos)(coeff s^exp) over `loc`.
Word terms_word(const Ring& loc, std::size_t n, const std::vector<ValTerm>& terms);
/// Merges adjacent terms of equal shape and position and moves s-factors of
/// the coefficients into the exponent.
std::vector<ValTerm> merge_terms(const Elem& s, std::vector<ValTerm> terms);

/// prod r_i b_i r_i^{-1} * prod a_i with r_i = a_1 ... a_i.
Word group_identity_shuffle(const std::vector<std::pair<Word, Word>>& pairs);

struct DilateOptions {
  int max_m = 16;
  std::size_t fuel = 200000;  // terms produced per attempt
};

struct Dilation {
  int m = 0;
  Word word;                         // over R[X]; evaluates to alpha_s(s^m X)
  std::vector<std::string> attempts;  // one line per rejected m
};

/// alpha is an ABCD word over R_s[X] (ring upoly(loc(R, s), X)) with
/// alpha(0) = I. Searches m = 0, 1, ... for an ABCD word over R[X] equal to
/// alpha(s^m X). Throws NotHomotopy, AlphabetViolation, StepBudgetExceeded.
Dilation dilate(const Word& alpha, const DilateOptions& opt = {});

struct CoverElem {
  Elem s, c, b;
  int N = 1;
};
/// sum c_i b_i = 1 with b_i in (s_i^N).
struct CoverData {
  std::vector<CoverElem> elems;
};

/// Lines `s=<elem> c=<elem> b=<elem> N=<int>`; '#' starts a comment.
CoverData parse_cover(const Ring& ring, const std::string& text);
std::string cover_text(const CoverData& cover);
/// Throws CoverNotComaximal or CoverExponentTooSmall (b_i not in (s_i^N)).
void check_cover(const CoverData& cover);
/// A two-element cover of Z/m by units, found by search.
CoverData unit_cover(const Ring& zmod);

struct PatchResult {
  Word word;               // over R[X]
  std::vector<int> m;      // dilation exponent per cover element
};

/// alpha is a matrix over R[X] with alpha(0) = I; locals[i] is an ABCD word
/// over R_{s_i}[X] evaluating to alpha. Returns an ABCD word over R[X] equal to
/// alpha, assembled from the dilated beta_i(X, Y) = w_i(X + Y) w_i(Y)^{-1}.
PatchResult patch(const Matrix& alpha, const CoverData& cover, const std::vector<Word>& locals,
                  const DilateOptions& opt = {});

/// Local words for alpha = g h g^{-1} over each R_{s_i}[X] from a word g.
std::vector<Word> conjugate_locals(const CoverData& cover, const Word& g, const Word& h);

struct NormalityResult {
  Word word;        // over R, evaluates to gamma h gamma^{-1}
  Word g;           // ABCD word for gamma (empty when gamma is a corner)
  PatchResult patch;
  bool verified = false;
};

/// gamma symplectic over R = Z/m or Q, h an ABCD word. Uses the homotopy h(T)
/// with parameters scaled by T, patches gamma h(T) gamma^{-1} over the cover
/// and evaluates at T = 1.
NormalityResult normality_demo(const Matrix& gamma, const Word& h, const CoverData& cover,
                               const DilateOptions& opt = {});

}  // namespace esp
