#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nclab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Thrown when a factorization or iteration fails to converge; distinct from
// argument/domain errors so callers can map it to a separate exit code.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense square operator on a finite dimensional Hilbert space.  The hermitian
// flag is a checked promise: construction rejects matrices that violate it
// beyond 1e-12 relative to the largest entry.
class Operator {
 public:
  explicit Operator(Matrix a, bool hermitian = false);

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& mat() const { return mat_; }
  bool hermitian() const { return hermitian_; }

  Complex trace() const { return mat_.trace(); }
  Operator adjoint() const { return Operator(mat_.adjoint(), hermitian_); }

  Operator operator+(const Operator& o) const;
  Operator operator-(const Operator& o) const;
  Operator operator*(const Operator& o) const;
  Operator operator*(Complex c) const;

 private:
  Matrix mat_;
  bool hermitian_ = false;
};

Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);

// Nonincreasing list of singular values together with prefix sums, viewed as
// the right-continuous step function t -> mu_t on [0, dim).
class SingularValueProfile {
 public:
  explicit SingularValueProfile(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double value(std::size_t k) const { return values_.at(k); }
  const std::vector<double>& values() const { return values_; }

  // \int_0^t mu_s ds of the step function, exact per segment.
  double partial_integral(double t) const;
  double total() const { return prefix_.back(); }

 private:
  std::vector<double> values_;
  std::vector<double> prefix_;  // prefix_[k] = sum of first k values
};

// Generalized singular value profile of T (descending singular values).
SingularValueProfile singular_values(const Operator& t);

// tau(|T|^p)^(1/p) for real p >= 1.
double schatten_norm(const SingularValueProfile& mu, double p);
double schatten_norm(const Operator& t, double p);

// sup_{t>0} (1/w(t)) \int_0^t mu_s ds with w = log(1+t) for p = 1 and
// w = psi_p (t below 1, t^{1-1/p} above) for p > 1.  The sup is located per
// segment: closed form where the weight is a pure power, golden section on
// the logarithmic segments, both to 1e-8 relative accuracy.
double weak_ideal_norm(const SingularValueProfile& mu, double p);
double weak_ideal_norm(const Operator& t, double p);

// (1/p) \int_0^inf t^{1/p} mu_t dt/t, evaluated in closed form per segment:
// sum_k mu_{k-1} (k^{1/p} - (k-1)^{1/p}).
double lorentz_p1_norm(const SingularValueProfile& mu, double p);
double lorentz_p1_norm(const Operator& t, double p);

// Hardy-Littlewood submajorization: all partial sums of the left profile are
// bounded by those of the right profile up to tol.  Profiles must have equal
// length (same space).
bool submajorized(const SingularValueProfile& a, const SingularValueProfile& b,
                  double tol = 0.0);
bool submajorized(const Operator& a, const Operator& b, double tol = 0.0);

// Spectral calculus f(T) for hermitian T: symmetrize, eigendecompose, map the
// (real) spectrum through f.  Result is hermitian when f is real valued.
Operator apply_spectral_function(const Operator& t,
                                 const std::function<double(double)>& f);

double operator_norm(const Operator& t);
double trace_norm(const Operator& t);

}  // namespace nclab
