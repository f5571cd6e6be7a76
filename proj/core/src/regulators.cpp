#include "nclab/regulators.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace nclab {

namespace {

double c_of(int p) { return p / std::tgamma(0.5 * p + 1.0); }

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return Polynomial({0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    d[i - 1] = coeffs_[i] * static_cast<double>(i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::times_x() const {
  std::vector<double> d(coeffs_.size() + 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) d[i + 1] = coeffs_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<double> d(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) d[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) d[i] += o.coeffs_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator*(double c) const {
  std::vector<double> d = coeffs_;
  for (double& v : d) v *= c;
  return Polynomial(std::move(d));
}

Regulator::Regulator(int p) : Regulator(p, 2.0, 4) {}

Regulator::Regulator(int p, double tail_k, int tail_l) : p_(p), c_(0.0) {
  if (p < 1) throw std::domain_error("regulator exponent must be >= 1");
  c_ = c_of(p);
  if (p_ % 2 == 1) build_tail(tail_k, tail_l);
}

double Regulator::erf_power(double x) const {
  if (x < 0.0) throw std::domain_error("erf_power is defined on x >= 0");
  return 1.0 - closed_form_right(x);
}

// f_p(x) = sum_i (c_{p-2i}/2) x^{p-2-2i} e^{-x^2}  (+ erfc(x) for odd p),
// the telescoping antiderivative of -c_p x^{p-1} e^{-x^2}.
double Regulator::closed_form_right(double x) const {
  const double g = std::exp(-x * x);
  double acc = 0.0;
  for (int q = p_; q >= 2; q -= 2) acc += 0.5 * c_of(q) * std::pow(x, q - 2) * g;
  if (p_ % 2 == 1) acc += std::erfc(x);
  return acc;
}

double Regulator::value(double x) const {
  if (x >= 0.0) return closed_form_right(x);
  if (p_ % 2 == 0) return closed_form_right(-x);
  const double k = tail_ ? tail_->matching_point : 2.0;
  if (x >= -k) return 1.0 + erf_power(-x);
  return tail_->q(x) * std::exp(-x * x);
}

double Regulator::derivative(double x) const {
  if (p_ % 2 == 1 && tail_ && x < -tail_->matching_point) {
    const Polynomial dq = tail_->q.derivative() + tail_->q.times_x() * (-2.0);
    return dq(x) * std::exp(-x * x);
  }
  return -c_ * std::pow(x, p_ - 1) * std::exp(-x * x);
}

double Regulator::sqrt_value(double x) const {
  if (x < 0.0) throw std::domain_error("sqrt regulator is used on x >= 0 only");
  const double v = value(x);
  return std::sqrt(std::max(v, 0.0));
}

// Glue q(x) e^{-x^2} to 1 + erf_p(-x) at x = -k with matched derivatives
// 0..l.  Row j of the linear system evaluates the j-th derivative of each
// monomial-times-Gaussian at -k; the right-hand side evaluates the branch
// derivatives through the polynomial-times-Gaussian representation of f_p'.
void Regulator::build_tail(double k, int l) {
  if (!(k > 0.0)) throw std::domain_error("tail matching point must be positive");
  if (l < 0) throw std::domain_error("tail smoothness must be >= 0");
  const int n = l + 1;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);

  // derivative of P(x) e^{-x^2} as polynomial: P' - 2 x P
  const auto gauss_derivative = [](const Polynomial& p) {
    return p.derivative() + p.times_x() * (-2.0);
  };

  for (int s = 0; s < n; ++s) {
    std::vector<double> mono(static_cast<std::size_t>(s) + 1, 0.0);
    mono.back() = 1.0;
    Polynomial col(std::move(mono));
    for (int j = 0; j < n; ++j) {
      a(j, s) = col(-k) * std::exp(-k * k);
      col = gauss_derivative(col);
    }
  }

  b(0) = 1.0 + erf_power(k);
  if (n > 1) {
    // h'(x) = -c_p x^{p-1} e^{-x^2} on the branch (p odd makes the power even)
    std::vector<double> mono(static_cast<std::size_t>(p_), 0.0);
    mono.back() = -c_;
    Polynomial h1(std::move(mono));
    for (int j = 1; j < n; ++j) {
      b(j) = h1(-k) * std::exp(-k * k);
      h1 = gauss_derivative(h1);
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smin > smax * 1e-14))
    throw numeric_error("odd tail matching system is numerically singular");
  Eigen::VectorXd qc = svd.solve(b);
  tail_ = OddTail{k, l, Polynomial(std::vector<double>(qc.data(), qc.data() + n)),
                  smax / smin};
}

PowerFit fit_power_law(const std::vector<double>& t, const std::vector<double>& q) {
  if (t.size() != q.size()) throw std::invalid_argument("mismatched fit arrays");
  if (t.size() < 2) throw std::domain_error("power-law fit needs at least two points");
  std::vector<double> x(t.size()), y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(q[i] > 0.0))
      throw std::domain_error("power-law fit needs positive samples");
    x[i] = std::log(t[i]);
    y[i] = std::log(q[i]);
  }
  const double n = static_cast<double>(t.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (!(std::abs(det) > 1e-12 * std::max(1.0, n * sxx)))
    throw std::domain_error("degenerate grid for power-law fit");
  PowerFit fit{};
  fit.exponent = (n * sxy - sx * sy) / det;
  fit.log_amplitude = (sy - fit.exponent * sx) / n;
  fit.max_residual = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    fit.max_residual =
        std::max(fit.max_residual,
                 std::abs(y[i] - (fit.log_amplitude + fit.exponent * x[i])));
  return fit;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::domain_error("log grid needs 0 < lo < hi");
  if (points < 2) throw std::domain_error("log grid needs at least two points");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double step = (std::log(hi) - std::log(lo)) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + step * i);
  return out;
}

ModeOperator apply_regulator(const SpectralTripleModel& model, const Regulator& reg,
                             double t, RegulatorKind kind) {
  if (!(t > 0.0)) throw std::domain_error("regulator scale t must be positive");
  if (!model.invertible_dirac())
    throw std::domain_error("regulator calculus expects a gapped (doubled) model");
  switch (kind) {
    case RegulatorKind::value:
      return model.function_of_abs_dirac([&](double x) { return reg.value(t * x); });
    case RegulatorKind::derivative:
      return model.function_of_abs_dirac([&](double x) { return reg.derivative(t * x); });
    case RegulatorKind::sqrt_value:
      return model.function_of_abs_dirac([&](double x) { return reg.sqrt_value(t * x); });
  }
  throw std::invalid_argument("unknown regulator kind");
}

ScalingSeries scaling_series(const SpectralTripleModel& model, const Regulator& reg,
                             ScalingQuantity what, const std::string& word,
                             const std::vector<double>& t_grid) {
  ScalingSeries s;
  s.t = t_grid;
  s.q.reserve(t_grid.size());
  const ModeOperator a = model.resolve(word);
  const ModeOperator da = model.delta(a);
  for (double t : t_grid) {
    const ModeOperator f = apply_regulator(model, reg, t, RegulatorKind::value);
    double q = 0.0;
    switch (what) {
      case ScalingQuantity::trace_norm:
        q = f.trace_norm();
        break;
      case ScalingQuantity::commutator:
        q = commutator(f, a).trace_norm();
        break;
      case ScalingQuantity::chain_rule_defect: {
        const ModeOperator fp = apply_regulator(model, reg, t, RegulatorKind::derivative);
        const ModeOperator defect =
            commutator(f, a) - anticommutator(fp, da) * Complex(0.5 * t, 0.0);
        q = defect.trace_norm();
        break;
      }
    }
    s.q.push_back(q);
  }
  s.fit = fit_power_law(s.t, s.q);
  return s;
}

}  // namespace nclab
