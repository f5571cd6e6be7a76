#pragma once

#include "nclab/models.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nclab {

// One tensor term of a chain: a coefficient and one generator word per slot.
struct ChainTerm {
  Complex coefficient;
  std::vector<std::string> factors;
};

// Formal linear combination of (degree+1)-fold elementary tensors over the
// generator algebra.  Words stay symbolic; all equality checks happen at the
// matrix level after resolution against a concrete model, so truncation
// artifacts remain visible instead of being normalized away.
class HochschildChain {
 public:
  HochschildChain(int degree, std::vector<ChainTerm> terms);

  int degree() const { return degree_; }
  const std::vector<ChainTerm>& terms() const { return terms_; }

  HochschildChain operator+(const HochschildChain& o) const;
  HochschildChain operator*(Complex c) const;

 private:
  int degree_;
  std::vector<ChainTerm> terms_;
};

// Product of generator words; "1" is the empty word.
std::string word_product(const std::string& a, const std::string& b);

// Boundary: leading contraction, alternating interior contractions, and the
// (-1)^degree wrap-around term.  Degree zero has no boundary.
HochschildChain boundary(const HochschildChain& c);

// Data of a functional phi(a0,...,an) = trace(a0 d1(a1) ... dn(an) right).
// The pieces are kept explicit because the derivation lemma and the
// contraction (cup) machinery act on them, not on an opaque closure.
struct ProductShape {
  std::function<Complex(const ModeOperator&)> trace;
  std::vector<std::function<ModeOperator(const ModeOperator&)>> derivations;
  ModeOperator right;
  // Set when every slot carries the same derivation; contraction powers are
  // only meaningful in that case.
  bool uniform = true;

  int degree() const { return static_cast<int>(derivations.size()); }
  // a0 d1(a1) ... dn(an), without the right factor.
  ModeOperator word(const std::vector<ModeOperator>& args) const;
  // Evaluation of an already-assembled element: trace(omega * right).
  Complex operator()(const ModeOperator& omega) const;
};

// Multilinear functional of fixed degree on tuples of resolved operators.
// Functionals built from a ProductShape remember it; the contraction power
// counts how many times the degree-raising contraction has been applied.
class CochainFunctional {
 public:
  using Evaluator = std::function<Complex(const std::vector<ModeOperator>&)>;

  CochainFunctional(int degree, Evaluator eval);
  explicit CochainFunctional(ProductShape shape);

  int degree() const { return degree_; }
  bool has_shape() const { return shape_.has_value(); }
  const ProductShape& shape() const;
  int contraction_power() const { return power_; }

  Complex operator()(const std::vector<ModeOperator>& args) const;

  friend CochainFunctional cup_sigma(const CochainFunctional& phi);

 private:
  int degree_;
  Evaluator eval_;
  std::optional<ProductShape> shape_;
  int power_ = 0;
};

// Coboundary: first-slot product, alternating interior products, and the
// (-1)^(n+1) wrap-around term.
CochainFunctional coboundary(const CochainFunctional& phi);

// Sum over terms of coefficient * phi(resolved factors).
Complex pair(const SpectralTripleModel& model, const CochainFunctional& phi,
             const HochschildChain& c);

// Largest relative residual of the boundary under deterministic multilinear
// probes, with every slot compressed to modes at distance >= the chain degree
// from the cutoff (non-wrapping shifts violate relations only at the edge).
double cycle_residual(const SpectralTripleModel& model, const HochschildChain& c,
                      int probes = 8);
bool is_cycle(const SpectralTripleModel& model, const HochschildChain& c, double tol,
              int probes = 8);

// Degree-raising contraction: the new functional sums, over each adjacent
// pair of derivation slots, the word with that pair multiplied out plain.
// Requires a shape with a uniform derivation.
CochainFunctional cup_sigma(const CochainFunctional& phi);
CochainFunctional contraction_power(const CochainFunctional& phi, int i);

// The word-level contraction operator: power 0 is the elementary word
// a0 d(a1)...d(an); short argument lists vanish; higher powers expand through
// the binomial recursion over split positions.  This is a second, independent
// evaluation path for the iterated contraction.
ModeOperator shat(int power, const std::vector<ModeOperator>& args,
                  const SpectralTripleModel& model);

// |contraction_power(phi, i)(args) - phi.shape()(shat(i, args))| after
// resolving the words; the two sides use unrelated recursions.
double s_power_consistency(const SpectralTripleModel& model,
                           const CochainFunctional& phi, int i,
                           const std::vector<std::string>& words);

}  // namespace nclab
