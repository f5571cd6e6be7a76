#include "doctest.h"
#include "nclab/singular_trace.hpp"

#include <cmath>

using namespace nclab;

namespace {

SampledFunction sample(double lo, double hi, int n,
                       const std::function<double(double)>& f) {
  SampledFunction g;
  g.t.resize(static_cast<std::size_t>(n));
  g.v.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = lo * std::pow(hi / lo, double(i) / (n - 1));
    g.t[static_cast<std::size_t>(i)] = t;
    g.v[static_cast<std::size_t>(i)] = f(t);
  }
  return g;
}

}  // namespace

TEST_SUITE("singular_trace") {

TEST_CASE("logarithmic mean fixes constants and halves log slopes") {
  const auto c = sample(0.5, 1e6, 4001, [](double) { return 3.25; });
  const auto mc = cesaro(c);
  REQUIRE(mc.t.size() > 0);
  CHECK(mc.t.front() > 1.0);
  for (double v : mc.v) CHECK(v == doctest::Approx(3.25).epsilon(1e-12));

  // M(log s)(t) = (log t)/2 exactly; the trapezoid in log s is exact for a
  // linear integrand, only the stretch below the first sample contributes.
  const auto lin = sample(1.0001, 1e4, 20001, [](double s) { return std::log(s); });
  const auto ml = cesaro(lin);
  CHECK(ml.v.back() == doctest::Approx(0.5 * std::log(lin.t.back())).epsilon(1e-6));

  // Compactly supported data is averaged away like log(10)/log(t).
  const auto comp = sample(1.0001, 1e6, 8001,
                           [](double s) { return s <= 10.0 ? 1.0 : 0.0; });
  const auto mcomp = cesaro(comp);
  CHECK(mcomp.v.back() == doctest::Approx(std::log(10.0) / std::log(1e6)).epsilon(1e-2));
  CHECK(mcomp.v.back() < 0.2);
}

TEST_CASE("dilation and power act on the sample axis") {
  const auto g = sample(1.0, 100.0, 11, [](double s) { return s; });
  const auto d = dilation(g, 2.0);
  const auto p = power(g, 2.0);
  for (std::size_t i = 0; i < g.t.size(); ++i) {
    CHECK(d.t[i] == doctest::Approx(g.t[i] / 2.0));
    CHECK(d.v[i] == g.v[i]);
    CHECK(p.t[i] == doctest::Approx(std::sqrt(g.t[i])));
  }
  CHECK_THROWS_AS(dilation(g, 0.0), std::domain_error);
  CHECK_THROWS_AS(power(g, -1.0), std::domain_error);
}

TEST_CASE("default window tracks the dimension") {
  const TraceWindow w = default_window(4096.0);
  CHECK(w.lo == doctest::Approx(81.92));
  CHECK(w.hi == doctest::Approx(2048.0));
  CHECK(default_window(200.0).lo == doctest::Approx(16.0));
  CHECK_THROWS_AS(default_window(20.0), std::domain_error);
}

TEST_CASE("harmonic profile evaluates to one") {
  std::vector<double> mu(4096);
  for (std::size_t k = 0; k < mu.size(); ++k) mu[k] = 1.0 / double(k + 1);
  const DixmierEstimate est = dixmier_direct(SingularValueProfile(mu));
  CHECK(est.value.real() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(est.value.imag() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(est.relative_spread() < 0.01);
  CHECK(est.per_profile.size() == 4);
}

TEST_CASE("trace class input is sent near zero") {
  // Rank 8 with singular value 1/64: cumulative saturates at 1/8 and the
  // 1/log(1+t) regressor absorbs it.
  std::vector<double> mu(4096, 0.0);
  for (std::size_t k = 0; k < 8; ++k) mu[k] = 1.0 / 64.0;
  const DixmierEstimate small = dixmier_direct(SingularValueProfile(mu));
  CHECK(std::abs(small.value) < 0.03);

  // The saturated cumulative is proportional to the fitted regressor, so the
  // suppression is structural, not a numerical accident of the window.
  const CumulativeFn c = [](double t) { return std::min(t, 8.0) / 64.0; };
  CHECK(std::abs(dixmier_direct(c, default_window(4096.0)).value) < 1e-10);
  CHECK(std::abs(dixmier_direct(c, default_window(65536.0)).value) < 1e-10);
}

TEST_CASE("witness with mean one is measurable, oscillating witness is not") {
  const auto good = measurability_probe(measurable_witness(), 1e6, 0.02);
  CHECK(good.measurable);
  CHECK(good.spread < 0.005);
  CHECK(good.estimates.size() == 6);
  CHECK(good.estimates.front().value.real() == doctest::Approx(1.0).epsilon(0.005));

  // mu_s = (2 + sin(log log s))/s: positive, nonincreasing, weak-l1, yet its
  // log mean never settles; the probe must flag the profile dependence.
  const auto bad = measurability_probe(oscillating_witness(), 1e6, 0.02);
  CHECK_FALSE(bad.measurable);
  CHECK(bad.spread > 0.05);
  CHECK(bad.estimates.front().value.real() == doctest::Approx(2.0).epsilon(0.35));
}

TEST_CASE("oscillating witness cumulative is continuous and concave-safe") {
  const auto c = oscillating_witness();
  const double e = std::exp(1.0);
  CHECK(c(e * (1 - 1e-9)) == doctest::Approx(c(e * (1 + 1e-9))).epsilon(1e-6));
  // Increments of the cumulative are the local mu: positive and decreasing.
  double prev = 1e9;
  for (double t = 10.0; t < 1e8; t *= 3.0) {
    const double inc = (c(t * 1.001) - c(t)) / (0.001 * t);
    CHECK(inc > 0.0);
    CHECK(inc < prev);
    prev = inc;
  }
}

TEST_CASE("circle trace of the resolvent weight is two") {
  const SpectralTripleModel circle = build_circle(512);
  const ModeOperator w = circle.function_of_dirac(
      [](double x) { return 1.0 / std::sqrt(1.0 + x * x); });
  const DixmierEstimate est = dixmier_direct(w);
  CHECK(est.value.real() == doctest::Approx(2.0).epsilon(0.05));
  CHECK(est.relative_spread() < 0.02);
  CHECK(est.method == "direct");

  // Stability under refinement of the truncation.
  const SpectralTripleModel half = build_circle(256);
  const ModeOperator wh = half.function_of_dirac(
      [](double x) { return 1.0 / std::sqrt(1.0 + x * x); });
  const double drift = std::abs(dixmier_direct(wh).value - est.value);
  CHECK(drift / std::abs(est.value) < 0.02);
}

TEST_CASE("estimate is linear and respects complex coefficients") {
  const SpectralTripleModel circle = build_circle(256);
  const ModeOperator w = circle.function_of_dirac(
      [](double x) { return 1.0 / std::sqrt(1.0 + x * x); });
  const DixmierEstimate base = dixmier_direct(w);
  const DixmierEstimate scaled = dixmier_direct(w * Complex(1.0, 1.0));
  CHECK(scaled.value.real() == doctest::Approx(base.value.real()).epsilon(1e-9));
  CHECK(scaled.value.imag() == doctest::Approx(base.value.real()).epsilon(1e-9));

  // Keeping every other mode halves the logarithmic density.
  const ModeOperator pw = ModeOperator::diagonal(circle.space(), [](const ModeCoord& c) {
    Block b = Block::Zero(1, 1);
    if (c[0] % 2 == 0) b(0, 0) = 1.0;
    return b;
  }) * w;
  CHECK(dixmier_direct(pw).value.real() ==
        doctest::Approx(0.5 * base.value.real()).epsilon(0.07));
}

TEST_CASE("band operators with off-diagonal offsets are rejected") {
  const SpectralTripleModel circle = build_circle(64);
  CHECK_THROWS_AS(dixmier_direct(circle.resolve("u")), std::domain_error);
  CHECK_THROWS_AS(measurability_probe(circle.resolve("u"), 0.02), std::domain_error);
}

TEST_CASE("heat series matches the theta oracle and the direct estimate") {
  const SpectralTripleModel circle = build_circle(100);
  const HeatTraceSeries series =
      heat_trace(circle, ModeOperator::identity(circle.space()), {0.1, 0.2});
  REQUIRE(series.value.size() == 2);
  CHECK(series.p == 1);
  CHECK(series.value[0] == doctest::Approx(17.7245385090552).epsilon(1e-6));
  CHECK(series.value[1] < series.value[0]);

  // Doubled circle at mass one: the heat route and the direct profile route
  // must agree on tau_omega(|D|^{-1}) = 4.
  const DoubledTriple doubled = make_double(build_circle(512), 1.0);
  const ModeOperator inv_abs = doubled.triple.function_of_dirac(
      [](double x) { return 1.0 / std::sqrt(x * x); });
  const DixmierEstimate direct = dixmier_direct(inv_abs);
  const DixmierEstimate heat =
      dixmier_heat(doubled.triple, ModeOperator::identity(doubled.triple.space()));
  CHECK(direct.value.real() == doctest::Approx(4.0).epsilon(0.05));
  CHECK(heat.value.real() == doctest::Approx(direct.value.real()).epsilon(0.05));
  CHECK(heat.method == "heat");
}

TEST_CASE("hypertrace residuals") {
  const SpectralTripleModel circle = build_circle(512);
  SUBCASE("identical words short-circuit exactly") {
    const auto check = hypertrace_check(circle, "u", "u");
    CHECK(check.exact);
    CHECK(check.residual == 0.0);
  }
  SUBCASE("shift against its adjoint differs by edge defects only") {
    const auto check = hypertrace_check(circle, "u", "u*");
    CHECK_FALSE(check.exact);
    CHECK(check.forward.real() == doctest::Approx(2.0).epsilon(0.1));
    CHECK(check.residual < 0.02);
  }
  SUBCASE("commuting torus generators are exact") {
    const SpectralTripleModel torus = build_torus2(16);
    const auto check = hypertrace_check(torus, "u", "v");
    CHECK(check.exact);
    CHECK(check.residual == 0.0);
  }
}

TEST_CASE("log growth slopes recover spectral dimension prefactors") {
  const SpectralTripleModel circle = build_circle(1024);
  const auto mu_c = circle.function_of_dirac(
      [](double x) { return 1.0 / std::sqrt(1.0 + x * x); }).mu();
  CHECK(log_growth_slope(mu_c, 32, 900) == doctest::Approx(2.0).epsilon(0.03));

  // Torus resolvent: lattice point count inside a disc gives slope 2 pi.
  const SpectralTripleModel torus = build_torus2(32);
  const auto mu_t = torus.function_of_dirac(
      [](double x) { return 1.0 / (1.0 + x * x); }).mu();
  CHECK(log_growth_slope(mu_t, 100, 3000) == doctest::Approx(2.0 * M_PI).epsilon(0.05));

  CHECK_THROWS_AS(log_growth_slope(mu_c, 0, 10), std::domain_error);
  CHECK_THROWS_AS(log_growth_slope(mu_c, 10, 10), std::domain_error);
}

TEST_CASE("window misuse is reported") {
  std::vector<double> mu(64, 1.0);
  const SingularValueProfile prof(mu);
  TraceWindow w;
  w.lo = 0.5;
  w.hi = 32.0;
  CHECK_THROWS_AS(dixmier_direct(prof, w), std::domain_error);
  w.lo = 40.0;
  CHECK_THROWS_AS(dixmier_direct(prof, w), std::domain_error);
}

}
