#pragma once

#include "nclab/mode_operator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nclab {

struct Generator {
  std::string symbol;
  ModeOperator op;
};

// Finite truncation of a spectral triple: mode lattice, Dirac operator as an
// offset-zero block operator, distinguished algebra generators acting by
// lattice shifts, optional grading for even triples.
class SpectralTripleModel {
 public:
  SpectralTripleModel(std::string name, int truncation, int summability,
                      std::shared_ptr<const ModeSpace> space, ModeOperator dirac,
                      std::optional<ModeOperator> grading,
                      std::vector<Generator> generators, double mass = 0.0,
                      std::optional<ModeOperator> unit = {});

  const std::string& name() const { return name_; }
  int truncation() const { return truncation_; }
  int summability() const { return summability_; }
  bool even() const { return grading_.has_value(); }
  bool invertible_dirac() const { return invertible_; }
  double mass() const { return mass_; }

  const std::shared_ptr<const ModeSpace>& space() const { return space_; }
  const ModeOperator& dirac() const { return dirac_; }
  const ModeOperator& abs_dirac() const { return abs_dirac_; }
  const std::optional<ModeOperator>& grading() const { return grading_; }
  const ModeOperator& grading_or_identity() const { return grading_id_; }
  const std::vector<Generator>& generators() const { return generators_; }
  // Image of the algebra unit.  The full identity for base models; doubled
  // representations are non-unital and send 1 to the upper-block projection.
  const ModeOperator& unit() const { return unit_; }

  // F = D|D|^{-1}; requires an invertible Dirac (spectral gap), which base
  // models with a kernel mode do not have -- double them first.
  const ModeOperator& sign_dirac() const;
  const ModeOperator& dirac_inverse() const;
  double spectral_gap() const { return gap_; }
  double max_dirac_eigenvalue() const { return lambda_max_; }

  // Pre-Fredholm phase D(1+D^2)^{-1/2}; defined for every model.
  ModeOperator pre_sign() const;

  // f applied to D and to |D| through the fiberwise spectral calculus.
  ModeOperator function_of_dirac(const std::function<double(double)>& f) const;
  ModeOperator function_of_abs_dirac(const std::function<double(double)>& f) const;

  ModeOperator d(const ModeOperator& a) const { return commutator(dirac_, a); }
  // delta = [|D|, .], iterated k times; the smooth-regularity derivation.
  ModeOperator delta(const ModeOperator& a) const { return commutator(abs_dirac_, a); }
  ModeOperator delta_k(const ModeOperator& a, int k) const;

  // Product of generator tokens, e.g. "u*v*" or "1".  Tokens are a generator
  // symbol optionally followed by '*'.
  ModeOperator resolve(const std::string& word) const;

  ModeOperator identity() const { return ModeOperator::identity(space_); }

 private:
  std::string name_;
  int truncation_;
  int summability_;
  std::shared_ptr<const ModeSpace> space_;
  ModeOperator dirac_;
  ModeOperator abs_dirac_;
  std::optional<ModeOperator> grading_;
  ModeOperator grading_id_;
  ModeOperator unit_;
  std::vector<Generator> generators_;
  double mass_;
  bool invertible_ = false;
  double gap_ = 0.0;
  double lambda_max_ = 0.0;
  std::optional<ModeOperator> sign_;
  std::optional<ModeOperator> inverse_;
};

// Rotation algebra generator on the line of modes |n| <= N with D e_n = n e_n
// and the non-wrapping shift u e_n = e_{n+1}; summability exponent 1, odd.
// Requires N >= 8 so that asymptotic windows exist.
SpectralTripleModel build_circle(int n);

// Two-torus with a two dimensional spinor fiber over modes |n|,|m| <= N,
// per-mode Dirac [[0, n-im],[n+im, 0]], grading diag(1,-1), shifts u (first
// axis) and v (second axis); summability exponent 2, even.  Requires N >= 4.
SpectralTripleModel build_torus2(int n);

// Registered families, buildable by name for the command line and reports.
std::vector<std::string> model_names();
SpectralTripleModel build_model(const std::string& name, int truncation);

struct DoubledTriple {
  SpectralTripleModel triple;  // doubled model, Dirac spectral gap >= mass
  double mass;
  std::string base_name;
};

// Mass doubling: H (+) H with Dirac [[D, m],[m, -D]], algebra embedded as
// a -> diag(a, 0), grading diag(G, -G) when the base triple is even.
DoubledTriple make_double(const SpectralTripleModel& base, double mass);

}  // namespace nclab
