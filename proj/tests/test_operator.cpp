#include "doctest.h"
#include "nclab/operator.hpp"

#include <cmath>
#include <random>

using namespace nclab;

namespace {

std::mt19937_64 rng(20240517);

Matrix random_matrix(Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

Matrix random_unitary(Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n));
  Matrix q = qr.householderQ();
  return q;
}

Operator random_hermitian(Eigen::Index n) {
  Matrix a = random_matrix(n);
  return Operator((a + a.adjoint()) / 2.0, true);
}

// Brute-force sup of (\int_0^t mu)/w(t) on a dense log grid plus the integer
// breakpoints; a lower bound for the true sup, tight for smooth maxima.
double grid_sup(const SingularValueProfile& mu, double p) {
  const auto w = [&](double t) {
    if (p == 1.0) return std::log1p(t);
    return t <= 1.0 ? t : std::pow(t, 1.0 - 1.0 / p);
  };
  const double n = static_cast<double>(mu.size());
  double best = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double t = std::exp(std::log(1e-6) + (std::log(n) - std::log(1e-6)) * i / 20000.0);
    best = std::max(best, mu.partial_integral(t) / w(t));
  }
  for (std::size_t k = 1; k <= mu.size(); ++k)
    best = std::max(best, mu.partial_integral(static_cast<double>(k)) / w(static_cast<double>(k)));
  return best;
}

}  // namespace

TEST_SUITE("operator_core") {

TEST_CASE("construction validates shape, finiteness and hermitian promise") {
  CHECK_THROWS_AS(Operator{Matrix::Zero(2, 3)}, std::invalid_argument);

  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(Operator{bad}, std::invalid_argument);

  Matrix nonherm = Matrix::Zero(2, 2);
  nonherm(0, 1) = 1.0;
  CHECK_THROWS_AS(Operator(nonherm, true), std::invalid_argument);
  CHECK_NOTHROW(Operator(nonherm, false));
}

TEST_CASE("singular values of the unipotent 2x2 match the hand computation") {
  // T = [[1,1],[0,1]]: T*T has eigenvalues (3 +- sqrt 5)/2, so the singular
  // values are the golden ratio and its reciprocal.
  Matrix t(2, 2);
  t << 1, 1, 0, 1;
  const auto mu = singular_values(Operator(t));
  const double phi = (std::sqrt(5.0) + 1.0) / 2.0;
  CHECK(mu.value(0) == doctest::Approx(phi).epsilon(1e-12));
  CHECK(mu.value(1) == doctest::Approx(1.0 / phi).epsilon(1e-12));
}

TEST_CASE("singular values are invariant under left and right unitaries") {
  const Eigen::Index n = 12;
  const Operator t(random_matrix(n));
  const Matrix u = random_unitary(n);
  const Matrix v = random_unitary(n);
  const auto a = singular_values(t);
  const auto b = singular_values(Operator(u * t.mat() * v));
  for (std::size_t k = 0; k < a.size(); ++k)
    CHECK(a.value(k) == doctest::Approx(b.value(k)).epsilon(1e-10));
}

TEST_CASE("schatten norm against an eigenvalue oracle") {
  // H = V diag(d) V* with a hand-picked spectrum: the 3-norm is known
  // before any SVD runs.
  const Eigen::Index n = 6;
  Eigen::VectorXd d(n);
  d << 3.0, -2.5, 1.0, -1.0, 0.5, 0.0;
  const Matrix v = random_unitary(n);
  const Operator h(v * d.asDiagonal().toDenseMatrix().cast<Complex>() * v.adjoint(), true);

  double p3 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) p3 += std::pow(std::abs(d(i)), 3.0);
  CHECK(schatten_norm(h, 3.0) == doctest::Approx(std::cbrt(p3)).epsilon(1e-10));
  CHECK(trace_norm(h) == doctest::Approx(d.cwiseAbs().sum()).epsilon(1e-10));
  CHECK(operator_norm(h) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("weak ideal norm frozen values") {
  // Rank one, sigma = 1, p = 1: sup min(t,1)/log(1+t) is attained at t = 1.
  SingularValueProfile rank1({1.0, 0.0, 0.0, 0.0});
  CHECK(weak_ideal_norm(rank1, 1.0) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-8));

  // Two unit singular values, p = 2: sup of the partial integral over
  // psi_2 climbs to sqrt(2) at t = 2 and decays after.
  SingularValueProfile pair({1.0, 1.0, 0.0, 0.0});
  CHECK(weak_ideal_norm(pair, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("weak ideal norm agrees with a dense grid sup") {
  for (double p : {1.0, 2.0, 3.0}) {
    for (int rep = 0; rep < 4; ++rep) {
      const auto mu = singular_values(Operator(random_matrix(24)));
      const double exact = weak_ideal_norm(mu, p);
      const double grid = grid_sup(mu, p);
      CHECK(exact >= grid * (1.0 - 1e-9));
      CHECK(exact == doctest::Approx(grid).epsilon(1e-5));
    }
  }
}

TEST_CASE("lorentz norm closed form on flat profiles") {
  // mu identically 1 on n slots telescopes to n^{1/p}.
  const std::size_t n = 17;
  SingularValueProfile flat(std::vector<double>(n, 1.0));
  for (double p : {1.0, 2.0, 3.0})
    CHECK(lorentz_p1_norm(flat, p) ==
          doctest::Approx(std::pow(static_cast<double>(n), 1.0 / p)).epsilon(1e-12));

  SingularValueProfile spike({2.5, 0.0, 0.0});
  CHECK(lorentz_p1_norm(spike, 2.0) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("holder inequality for schatten norms") {
  for (auto [p, q] : {std::pair{2.0, 2.0}, std::pair{3.0, 1.5}}) {
    const Operator a(random_matrix(10));
    const Operator b(random_matrix(10));
    const double lhs = std::abs((a * b).trace());
    CHECK(lhs <= schatten_norm(a, p) * schatten_norm(b, q) * (1.0 + 1e-12));
  }
}

TEST_CASE("submajorization orders averaged profiles below their source") {
  SingularValueProfile b({3.0, 1.0, 0.0});
  SingularValueProfile a({2.0, 1.5, 0.5});
  CHECK(submajorized(a, b));
  CHECK_FALSE(submajorized(b, a));
  CHECK(submajorized(b, b));

  // |tr| of any product with a contraction is submajorized-compatible:
  // partial sums of UTV* match T exactly.
  const Operator t(random_matrix(8));
  const Matrix u = random_unitary(8);
  CHECK(submajorized(Operator(u * t.mat()), t, 1e-10));
}

TEST_CASE("partial integral is exact across segment boundaries") {
  SingularValueProfile mu({4.0, 2.0, 1.0});
  CHECK(mu.partial_integral(0.5) == doctest::Approx(2.0));
  CHECK(mu.partial_integral(1.0) == doctest::Approx(4.0));
  CHECK(mu.partial_integral(2.5) == doctest::Approx(6.5));
  CHECK(mu.partial_integral(10.0) == doctest::Approx(7.0));
  CHECK(mu.total() == doctest::Approx(7.0));
}

TEST_CASE("spectral calculus reproduces the eigen decomposition route") {
  const Eigen::Index n = 8;
  Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(n, -2.0, 3.0);
  const Matrix v = random_unitary(n);
  const Operator h(v * d.asDiagonal().toDenseMatrix().cast<Complex>() * v.adjoint(), true);

  const Operator e = apply_spectral_function(h, [](double x) { return std::exp(-x * x); });
  Eigen::VectorXcd fd(n);
  for (Eigen::Index i = 0; i < n; ++i) fd(i) = std::exp(-d(i) * d(i));
  const Matrix want = v * fd.asDiagonal() * v.adjoint();
  CHECK((e.mat() - want).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(e.hermitian());
}

TEST_CASE("spectral calculus rejects bad inputs") {
  Matrix nonherm = Matrix::Zero(2, 2);
  nonherm(0, 1) = 1.0;
  CHECK_THROWS_AS(apply_spectral_function(Operator(nonherm), [](double x) { return x; }),
                  std::domain_error);

  const Operator h = random_hermitian(4);
  CHECK_THROWS_AS(apply_spectral_function(h, [](double) { return std::nan(""); }),
                  numeric_error);
}

TEST_CASE("algebra helpers compose as expected") {
  const Operator a(random_matrix(6));
  const Operator b(random_matrix(6));
  const Matrix expect = a.mat() * b.mat() - b.mat() * a.mat();
  CHECK((commutator(a, b).mat() - expect).cwiseAbs().maxCoeff() < 1e-12);
  const Matrix anti = a.mat() * b.mat() + b.mat() * a.mat();
  CHECK((anticommutator(a, b).mat() - anti).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(((a * Complex(0.0, 2.0)).mat() - 2.0 * Complex(0, 1) * a.mat()).cwiseAbs().maxCoeff() <
        1e-12);
}

}  // TEST_SUITE
