#pragma once

#include "nclab/models.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nclab {

// Dense-coefficient polynomial, ascending powers.
class Polynomial {
 public:
  explicit Polynomial(std::vector<double> coeffs);

  double operator()(double x) const;
  Polynomial derivative() const;
  Polynomial times_x() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(double c) const;
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

struct OddTail {
  double matching_point;  // k > 0; the glued branch starts at x = -k
  int smoothness;         // l; derivatives 0..l match at -k
  Polynomial q;           // f(x) = q(x) exp(-x^2) for x <= -k
  double condition;       // condition number of the matching linear system
};

// Gaussian cutoff family f_p: f_p(0) = 1, f_p'(x) = -c_p x^{p-1} e^{-x^2}
// with c_p = p / Gamma(p/2 + 1), decaying at +inf.  Even p admits a global
// polynomial-times-Gaussian closed form; odd p decays only like x^{-p} at
// -inf, so a rapid-decay tail q(x) e^{-x^2} is glued on x <= -k with C^l
// matching.  The right half line (all that spectral arguments |D| >= 0 ever
// use) is closed form for every p.
class Regulator {
 public:
  explicit Regulator(int p);              // odd p gets the default tail k=2, l=4
  Regulator(int p, double tail_k, int tail_l);

  int exponent() const { return p_; }
  // c_p \int_0^x r^{p-1} e^{-r^2} dr for x >= 0; increases from 0 to 1.
  double erf_power(double x) const;
  double value(double x) const;       // f_p on the whole line
  double derivative(double x) const;  // f_p'
  double sqrt_value(double x) const;  // sqrt(f_p) for x >= 0
  const std::optional<OddTail>& tail() const { return tail_; }
  double normalization() const { return c_; }  // c_p

 private:
  double closed_form_right(double x) const;  // f_p(x) for x >= 0
  void build_tail(double k, int l);

  int p_;
  double c_;
  std::optional<OddTail> tail_;
};

inline Regulator make_regulator(int p) { return Regulator(p); }

// Least squares fit q ~ A t^e on log-log axes.
struct PowerFit {
  double exponent;
  double log_amplitude;
  double max_residual;  // max |log q - fit| over the grid
};
PowerFit fit_power_law(const std::vector<double>& t, const std::vector<double>& q);

std::vector<double> log_grid(double lo, double hi, int points);

enum class RegulatorKind { value, derivative, sqrt_value };

// f_p(t|D|), f_p'(t|D|) or sqrt(f_p)(t|D|) through the fiberwise calculus.
// Requires t > 0 and a spectrally gapped (doubled) Dirac operator.
ModeOperator apply_regulator(const SpectralTripleModel& model, const Regulator& reg,
                             double t, RegulatorKind kind);

enum class ScalingQuantity {
  trace_norm,         // ||f_p(t|D|)||_1                      ~ t^{-p}
  commutator,         // ||[f_p(t|D|), a]||_1                 ~ t^{-p+1}
  chain_rule_defect,  // ||[f_p,a] - (1/2){f_p' , t[|D|,a]}||_1 ~ t^{-p+2}
};

struct ScalingSeries {
  std::vector<double> t;
  std::vector<double> q;
  PowerFit fit;
};

ScalingSeries scaling_series(const SpectralTripleModel& model, const Regulator& reg,
                             ScalingQuantity what, const std::string& word,
                             const std::vector<double>& t_grid);

}  // namespace nclab
