#pragma once

#include "nclab/models.hpp"

#include <map>
#include <string>
#include <vector>

namespace nclab {

// Function sampled on a strictly increasing grid, the common currency of the
// averaging transforms below.
struct SampledFunction {
  std::vector<double> t;
  std::vector<double> v;
};

// Logarithmic mean M(g)(t) = (1/log t) int_1^t g(s) ds/s, trapezoid in log s
// on the sample grid.  Points with t <= 1 are dropped; the stretch between 1
// and the first kept sample is filled by constant extension of that sample.
SampledFunction cesaro(const SampledFunction& g);

// s -> g(a s) and s -> g(s^a), as exact regrids of the samples.
SampledFunction dilation(const SampledFunction& g, double a);
SampledFunction power(const SampledFunction& g, double a);

// Averaging window on the integrated-singular-value axis.  The defaults
// couple to the space dimension: [max(16, 0.02 dim), 0.5 dim]; beyond the
// upper end the finite spectrum is exhausted and the mean turns downward.
struct TraceWindow {
  double lo = 0.0;
  double hi = 0.0;
  int curve_points = 257;
};
TraceWindow default_window(double dim);

// A normalized non-negative weighting over the log-spaced window samples.
// The standard family (flat, ramp, bump, cesaro_flat) stands in for a choice
// of limiting state: an estimate is trustworthy exactly when it does not
// depend on the member used.
struct WeightProfile {
  std::string name;
  bool on_cesaro = false;  // weight the log-mean transform instead of g itself
  std::function<double(double)> shape;  // weight density over normalized [0,1]
};
const std::vector<WeightProfile>& standard_profiles();

// Singular trace estimate.  Each profile reports the intercept of its
// weighted fit of the mean function against {1, 1/log(1+t)}: the second
// regressor is the exact signature of a trace-class perturbation, so the
// intercept isolates the scale-invariant part (and sends trace-class
// operators to zero).  value is the mean of the per-profile values; spread
// is the maximal pairwise distance between them.
struct DixmierEstimate {
  Complex value;
  std::map<std::string, Complex> per_profile;
  double spread = 0.0;
  TraceWindow window;
  std::string method;

  double relative_spread() const;
};

// t -> int_0^t mu, everything the direct estimator needs from an operator.
using CumulativeFn = std::function<double(double)>;

DixmierEstimate dixmier_direct(const SingularValueProfile& mu, const TraceWindow& w);
DixmierEstimate dixmier_direct(const SingularValueProfile& mu);
DixmierEstimate dixmier_direct(const CumulativeFn& cumulative, const TraceWindow& w);
// Offset-zero band operator, extended by linearity through the Cartesian
// decomposition T = (H+ - H-) + i(K+ - K-) of hermitian positive parts.
DixmierEstimate dixmier_direct(const ModeOperator& t, const TraceWindow& w);
DixmierEstimate dixmier_direct(const ModeOperator& t);

// tau(A e^{-t^2 D^2}), real part (exact for A and D both hermitian).
struct HeatTraceSeries {
  std::vector<double> t;
  std::vector<double> value;
  int p = 0;
};
HeatTraceSeries heat_trace(const SpectralTripleModel& model, const ModeOperator& a,
                           const std::vector<double>& t_grid);

// Small-t window for the heat route; couples to the largest Dirac eigenvalue
// (below 8/lambda_max the truncated spectrum no longer fills the Gaussian).
struct HeatWindow {
  double t_lo = 0.0;
  double t_hi = 0.2;
  int curve_points = 65;
};
HeatWindow default_heat_window(const SpectralTripleModel& model);

// Heat-kernel estimator: the t -> 0 limit of t^p tau(A e^{-t^2 D^2}) over
// Gamma(p/2+1), profile-averaged in s = 1/t with intercept fits against
// {1, t^2} (the leading truncation-free correction).
DixmierEstimate dixmier_heat(const SpectralTripleModel& model, const ModeOperator& a,
                             const HeatWindow& w);
DixmierEstimate dixmier_heat(const SpectralTripleModel& model, const ModeOperator& a);

// Spread across profiles x windows x a dilation of the sample axis,
// normalized by the value magnitude.  measurable is spread <= tolerance.
struct MeasurabilityReport {
  std::vector<DixmierEstimate> estimates;
  double spread = 0.0;
  double tolerance = 0.0;
  bool measurable = false;
};
MeasurabilityReport measurability_probe(const CumulativeFn& cumulative, double dim,
                                        double tolerance);
MeasurabilityReport measurability_probe(const ModeOperator& t, double tolerance);

// Synthetic witnesses with closed-form cumulative integrals: the first has
// mean function identically 1 (exactly measurable), the second oscillates in
// log log t forever and no averaging can settle it.
CumulativeFn measurable_witness();
CumulativeFn oscillating_witness();

// Trace property of a -> tau_omega(a (1+D^2)^{-p/2}): compares the estimate
// on (ab)W against (ba)W.  Words that agree exactly as matrices short-cut to
// residual zero.
struct HypertraceCheck {
  Complex forward;
  Complex backward;
  double residual = 0.0;
  bool exact = false;
};
HypertraceCheck hypertrace_check(const SpectralTripleModel& model, const std::string& a,
                                 const std::string& b);

// Least squares slope of partial sums sum_{j<K} mu_j against log K over
// K in [k_lo, k_hi]; the logarithm-count growth rate of the profile.
double log_growth_slope(const SingularValueProfile& mu, std::size_t k_lo,
                        std::size_t k_hi, int points = 33);

}  // namespace nclab
