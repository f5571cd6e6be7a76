#include "nclab/singular_trace.hpp"

#include <algorithm>
#include <cmath>

namespace nclab {

namespace {

std::vector<double> log_spaced(double lo, double hi, int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i)
    out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  return out;
}

// Weighted least squares of y against {1, regressors...}; returns the
// intercept, i.e. the scale-invariant component of the curve.
double weighted_intercept(const std::vector<std::vector<double>>& regressors,
                          const std::vector<double>& y, const std::vector<double>& w) {
  const auto rows = static_cast<Eigen::Index>(y.size());
  const auto cols = static_cast<Eigen::Index>(regressors.size() + 1);
  if (rows < 2 * cols) throw numeric_error("degenerate window for the trace fit");
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto n = static_cast<std::size_t>(i);
    const double sq = std::sqrt(w[n]);
    a(i, 0) = sq;
    for (Eigen::Index j = 1; j < cols; ++j)
      a(i, j) = sq * regressors[static_cast<std::size_t>(j - 1)][n];
    b(i) = sq * y[n];
  }
  const Eigen::VectorXd coeff = a.colPivHouseholderQr().solve(b);
  if (!coeff.allFinite()) throw numeric_error("trace fit did not resolve");
  return coeff(0);
}

// Shared fold: sample curve g over s (log axis), optional log-mean transform,
// then per profile a weighted intercept fit against the regressor x.
std::map<std::string, double> profile_intercepts(const std::vector<double>& s,
                                                 const std::vector<double>& g,
                                                 const std::vector<double>& x,
                                                 std::size_t lo, std::size_t hi) {
  if (hi - lo < 8) throw std::domain_error("averaging window has too few samples");
  const SampledFunction mean = cesaro(SampledFunction{s, g});
  // The log mean is linear and fixes constants, so the fit model for the
  // transformed curve uses the transformed regressor.
  const SampledFunction mean_x = cesaro(SampledFunction{s, x});
  // cesaro may drop leading samples; align by index from the back.
  const std::size_t dropped = s.size() - mean.t.size();

  const double span = std::log(s[hi - 1]) - std::log(s[lo]);
  std::map<std::string, double> out;
  for (const WeightProfile& prof : standard_profiles()) {
    std::vector<double> xs, xm, ys, ws;
    xs.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      const double pos = span > 0 ? (std::log(s[i]) - std::log(s[lo])) / span : 0.0;
      const double weight = prof.shape(pos);
      if (weight <= 0.0) continue;
      if (prof.on_cesaro) {
        if (i < dropped) continue;
        xs.push_back(mean_x.v[i - dropped]);
        // The log mean remembers the stretch before the window as a constant
        // over log t; absorb it with a dedicated nuisance regressor.
        xm.push_back(1.0 / std::log(s[i]));
        ys.push_back(mean.v[i - dropped]);
      } else {
        xs.push_back(x[i]);
        ys.push_back(g[i]);
      }
      ws.push_back(weight);
    }
    out[prof.name] = prof.on_cesaro ? weighted_intercept({xs, xm}, ys, ws)
                                    : weighted_intercept({xs}, ys, ws);
  }
  return out;
}

// The window variable t is mapped to the read point s = scale * t^power
// before the mean function is formed.  Exponentiation advances the phase of
// log log oscillations by log(power), dilation shifts the scale by a factor;
// both act trivially on data with a genuine logarithmic density.
std::map<std::string, double> direct_intercepts(const CumulativeFn& c,
                                                const TraceWindow& w,
                                                double axis_power = 1.0,
                                                double axis_scale = 1.0) {
  if (!(w.lo > 1.0) || !(w.hi > w.lo))
    throw std::domain_error("direct trace window must satisfy 1 < lo < hi");
  const std::vector<double> t = log_spaced(1.0, w.hi, w.curve_points);
  std::vector<double> g(t.size()), x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double s = axis_scale * std::pow(t[i], axis_power);
    x[i] = 1.0 / std::log1p(s);
    g[i] = c(s) * x[i];
    if (!std::isfinite(g[i])) throw numeric_error("non-finite trace mean sample");
  }
  std::size_t lo = 0;
  while (lo < t.size() && t[lo] < w.lo) ++lo;
  return profile_intercepts(t, g, x, lo, t.size());
}

// Complex estimates assemble per profile from signed cumulative sources,
// the finite-dimensional form of the decomposition into four positive parts.
struct SignedSource {
  CumulativeFn cumulative;
  Complex coefficient;
};

DixmierEstimate assemble(const std::vector<SignedSource>& sources, const TraceWindow& w,
                         std::string method, double axis_power = 1.0,
                         double axis_scale = 1.0) {
  std::map<std::string, Complex> per;
  for (const WeightProfile& prof : standard_profiles()) per[prof.name] = Complex(0, 0);
  for (const SignedSource& src : sources) {
    const auto vals = direct_intercepts(src.cumulative, w, axis_power, axis_scale);
    for (const auto& [name, v] : vals) per[name] += src.coefficient * v;
  }
  DixmierEstimate est;
  est.per_profile = std::move(per);
  est.window = w;
  est.method = std::move(method);
  Complex sum(0, 0);
  for (const auto& [name, v] : est.per_profile) sum += v;
  est.value = sum / static_cast<double>(est.per_profile.size());
  for (const auto& [na, va] : est.per_profile)
    for (const auto& [nb, vb] : est.per_profile)
      est.spread = std::max(est.spread, std::abs(va - vb));
  return est;
}

CumulativeFn cumulative_of(SingularValueProfile mu) {
  return [mu = std::move(mu)](double t) { return mu.partial_integral(t); };
}

std::vector<SignedSource> mode_operator_sources(const ModeOperator& t) {
  if (!t.diagonal_only())
    throw std::domain_error("direct trace estimation needs an offset-zero operator");
  std::vector<SignedSource> sources;
  const auto add_split = [&sources](const ModeOperator& h, Complex coeff) {
    if (h.is_zero(0.0)) return;
    auto [pos, neg] = hermitian_spectral_split(h);
    sources.push_back({cumulative_of(std::move(pos)), coeff});
    sources.push_back({cumulative_of(std::move(neg)), -coeff});
  };
  add_split(t.hermitian_part(), Complex(1, 0));
  add_split(t.imaginary_part(), Complex(0, 1));
  return sources;
}

}  // namespace

SampledFunction cesaro(const SampledFunction& g) {
  SampledFunction out;
  std::size_t first = 0;
  while (first < g.t.size() && g.t[first] <= 1.0) ++first;
  if (first == g.t.size()) return out;
  out.t.assign(g.t.begin() + static_cast<std::ptrdiff_t>(first), g.t.end());
  out.v.resize(out.t.size());
  // Constant extension over (1, t_first]: the first sample stands in for the
  // unsampled stretch of the log integral.
  double acc = g.v[first] * std::log(g.t[first]);
  out.v[0] = g.v[first];
  for (std::size_t i = first + 1; i < g.t.size(); ++i) {
    acc += 0.5 * (g.v[i] + g.v[i - 1]) * (std::log(g.t[i]) - std::log(g.t[i - 1]));
    out.v[i - first] = acc / std::log(g.t[i]);
  }
  return out;
}

SampledFunction dilation(const SampledFunction& g, double a) {
  if (!(a > 0.0)) throw std::domain_error("dilation needs a > 0");
  SampledFunction out;
  out.t.reserve(g.t.size());
  out.v = g.v;
  for (double t : g.t) out.t.push_back(t / a);
  return out;
}

SampledFunction power(const SampledFunction& g, double a) {
  if (!(a > 0.0)) throw std::domain_error("power map needs a > 0");
  SampledFunction out;
  out.t.reserve(g.t.size());
  out.v = g.v;
  for (double t : g.t) out.t.push_back(std::pow(t, 1.0 / a));
  return out;
}

TraceWindow default_window(double dim) {
  TraceWindow w;
  w.lo = std::max(16.0, 0.02 * dim);
  w.hi = 0.5 * dim;
  if (!(w.hi > w.lo)) throw std::domain_error("space too small for a trace window");
  return w;
}

const std::vector<WeightProfile>& standard_profiles() {
  static const std::vector<WeightProfile> profiles = {
      {"flat", false, [](double) { return 1.0; }},
      {"ramp", false, [](double x) { return x; }},
      {"bump", false,
       [](double x) {
         const double s = std::sin(M_PI * x);
         return s * s;
       }},
      {"cesaro_flat", true, [](double) { return 1.0; }},
  };
  return profiles;
}

double DixmierEstimate::relative_spread() const {
  return spread / std::max(std::abs(value), 1e-30);
}

DixmierEstimate dixmier_direct(const SingularValueProfile& mu, const TraceWindow& w) {
  return assemble({{cumulative_of(mu), Complex(1, 0)}}, w, "direct");
}

DixmierEstimate dixmier_direct(const SingularValueProfile& mu) {
  return dixmier_direct(mu, default_window(static_cast<double>(mu.size())));
}

DixmierEstimate dixmier_direct(const CumulativeFn& cumulative, const TraceWindow& w) {
  return assemble({{cumulative, Complex(1, 0)}}, w, "direct");
}

DixmierEstimate dixmier_direct(const ModeOperator& t, const TraceWindow& w) {
  return assemble(mode_operator_sources(t), w, "direct");
}

DixmierEstimate dixmier_direct(const ModeOperator& t) {
  return dixmier_direct(t, default_window(static_cast<double>(t.space()->dim())));
}

HeatTraceSeries heat_trace(const SpectralTripleModel& model, const ModeOperator& a,
                           const std::vector<double>& t_grid) {
  HeatTraceSeries series;
  series.p = model.summability();
  series.t = t_grid;
  series.value.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t > 0.0)) throw std::domain_error("heat trace needs t > 0");
    const ModeOperator e =
        model.function_of_dirac([t](double x) { return std::exp(-t * t * x * x); });
    series.value.push_back((a * e).trace().real());
  }
  return series;
}

HeatWindow default_heat_window(const SpectralTripleModel& model) {
  HeatWindow w;
  w.t_lo = 8.0 / model.max_dirac_eigenvalue();
  if (!(w.t_lo < w.t_hi))
    throw std::domain_error("truncation too coarse for a heat window");
  return w;
}

DixmierEstimate dixmier_heat(const SpectralTripleModel& model, const ModeOperator& a,
                             const HeatWindow& w) {
  if (!(w.t_lo > 0.0) || !(w.t_hi > w.t_lo))
    throw std::domain_error("heat window must satisfy 0 < t_lo < t_hi");
  const int p = model.summability();
  const double norm = std::tgamma(0.5 * p + 1.0);
  std::vector<double> t_grid = log_spaced(w.t_lo, w.t_hi, w.curve_points);
  const HeatTraceSeries series = heat_trace(model, a, t_grid);

  // Re-run the averaging machinery in s = 1/t so that the t -> 0 limit sits
  // at the top of the window; the leading correction is t^2.
  const std::size_t n = t_grid.size();
  std::vector<double> s(n), g(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t_grid[n - 1 - i];
    s[i] = 1.0 / t;
    g[i] = std::pow(t, p) * series.value[n - 1 - i] / norm;
    x[i] = t * t;
  }
  const auto per = profile_intercepts(s, g, x, 0, n);

  DixmierEstimate est;
  for (const auto& [name, v] : per) est.per_profile[name] = Complex(v, 0);
  est.window = TraceWindow{1.0 / w.t_hi, 1.0 / w.t_lo, w.curve_points};
  est.method = "heat";
  Complex sum(0, 0);
  for (const auto& [name, v] : est.per_profile) sum += v;
  est.value = sum / static_cast<double>(est.per_profile.size());
  for (const auto& [na, va] : est.per_profile)
    for (const auto& [nb, vb] : est.per_profile)
      est.spread = std::max(est.spread, std::abs(va - vb));
  return est;
}

DixmierEstimate dixmier_heat(const SpectralTripleModel& model, const ModeOperator& a) {
  return dixmier_heat(model, a, default_heat_window(model));
}

namespace {

MeasurabilityReport probe_sources(const std::vector<SignedSource>& sources, double dim,
                                  double tolerance) {
  MeasurabilityReport report;
  report.tolerance = tolerance;

  // A slowly oscillating log mean looks locally constant, so measurability
  // can only be probed across exponentially separated scales: a deep second
  // window below the default one, plus power-map variants whose axis
  // exponent sweeps the whole range of log log scales through one window.
  const TraceWindow w1 = default_window(dim);
  TraceWindow w2;
  w2.lo = std::min(16.0, w1.lo);
  w2.hi = w1.lo;
  if (!(w2.hi > 4.0 * w2.lo)) w2 = w1;

  // Dilated variants compare avg(g(2s)) with avg(g) over the same window,
  // shrunk at the top so the data is never read beyond its validity.
  const auto halve_top = [](TraceWindow w) {
    w.hi = w.hi / 2.0;
    return w;
  };
  const auto root = [](double lo, double hi) {
    TraceWindow w;
    w.lo = std::max(std::sqrt(lo), 2.0);
    w.hi = std::sqrt(hi);
    return w;
  };

  report.estimates.push_back(assemble(sources, w1, "direct"));
  report.estimates.push_back(assemble(sources, w2, "direct"));
  report.estimates.push_back(assemble(sources, halve_top(w1), "direct/dilated", 1.0, 2.0));
  report.estimates.push_back(assemble(sources, halve_top(w2), "direct/dilated", 1.0, 2.0));
  report.estimates.push_back(assemble(sources, root(w2.lo, w1.hi), "direct/powered", 2.0));
  report.estimates.push_back(assemble(sources, root(w1.lo, w1.hi), "direct/powered", 2.0));

  std::vector<Complex> values;
  for (const DixmierEstimate& e : report.estimates)
    for (const auto& [name, v] : e.per_profile) values.push_back(v);
  double gap = 0.0;
  for (const Complex& a : values)
    for (const Complex& b : values) gap = std::max(gap, std::abs(a - b));
  const double scale = std::abs(report.estimates.front().value);
  report.spread = gap / std::max(scale, 1e-30);
  report.measurable = report.spread <= tolerance;
  return report;
}

}  // namespace

MeasurabilityReport measurability_probe(const CumulativeFn& cumulative, double dim,
                                        double tolerance) {
  return probe_sources({{cumulative, Complex(1, 0)}}, dim, tolerance);
}

MeasurabilityReport measurability_probe(const ModeOperator& t, double tolerance) {
  return probe_sources(mode_operator_sources(t),
                       static_cast<double>(t.space()->dim()), tolerance);
}

CumulativeFn measurable_witness() {
  return [](double t) { return std::log1p(t); };
}

CumulativeFn oscillating_witness() {
  // mu_s = (2 + sin(log log s))/s beyond s = e, constant before: positive and
  // nonincreasing, but its log mean circles 2 + sin(log log t - pi/4)/sqrt(2)
  // forever.  The cumulative integral is closed form.
  return [](double t) {
    const double e = std::exp(1.0);
    if (t <= e) return 2.0 * t / e;
    const double x = std::log(t);
    const double lx = std::log(x);
    return 2.0 + 2.0 * (x - 1.0) + 0.5 * (x * (std::sin(lx) - std::cos(lx)) + 1.0);
  };
}

HypertraceCheck hypertrace_check(const SpectralTripleModel& model, const std::string& a,
                                 const std::string& b) {
  const int p = model.summability();
  const ModeOperator weight = model.function_of_dirac(
      [p](double x) { return std::pow(1.0 + x * x, -0.5 * p); });
  const ModeOperator ab = model.resolve(a) * model.resolve(b) * weight;
  const ModeOperator ba = model.resolve(b) * model.resolve(a) * weight;

  HypertraceCheck check;
  if ((ab - ba).max_abs() <= 1e-14) {
    check.exact = true;
    if (ab.diagonal_only()) {
      check.forward = dixmier_direct(ab).value;
      check.backward = check.forward;
    }
    return check;
  }
  const DixmierEstimate fwd = dixmier_direct(ab);
  const DixmierEstimate bwd = dixmier_direct(ba);
  check.forward = fwd.value;
  check.backward = bwd.value;
  const double base = dixmier_direct(weight).value.real();
  const double scale =
      std::max({std::abs(check.forward), std::abs(check.backward), 0.1 * base, 1e-30});
  check.residual = std::abs(check.forward - check.backward) / scale;
  return check;
}

double log_growth_slope(const SingularValueProfile& mu, std::size_t k_lo,
                        std::size_t k_hi, int points) {
  if (k_lo < 1 || k_hi <= k_lo || k_hi > mu.size())
    throw std::domain_error("log growth fit needs 1 <= k_lo < k_hi <= size");
  std::vector<double> xs, ys;
  const double a = std::log(static_cast<double>(k_lo));
  const double b = std::log(static_cast<double>(k_hi));
  std::size_t prev = 0;
  for (int i = 0; i < points; ++i) {
    const auto k = static_cast<std::size_t>(std::llround(std::exp(a + (b - a) * i / (points - 1))));
    if (k == prev) continue;
    prev = k;
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(mu.partial_integral(static_cast<double>(k)));
  }
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = n * sxx - sx * sx;
  if (!(std::abs(det) > 1e-12)) throw std::domain_error("degenerate log growth grid");
  return (n * sxy - sx * sy) / det;
}

}  // namespace nclab
