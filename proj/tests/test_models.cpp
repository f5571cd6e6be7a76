#include "doctest.h"
#include "nclab/models.hpp"

#include <cmath>

using namespace nclab;

namespace {

double dense_gap(const ModeOperator& a, const ModeOperator& b) {
  return (a - b).max_abs();
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("circle truncation carries the expected Dirac and shift") {
  const auto m = build_circle(8);
  CHECK(m.name() == "circle");
  CHECK(m.summability() == 1);
  CHECK_FALSE(m.even());
  CHECK(m.space()->dim() == 17);
  CHECK(m.max_dirac_eigenvalue() == doctest::Approx(8.0));

  // D e_n = n e_n read back through the dense image.
  const Matrix d = m.dirac().dense().mat();
  for (int n = -8; n <= 8; ++n) {
    const int j = m.space()->index({n, 0});
    CHECK(std::abs(d(j, j) - Complex(n)) < 1e-15);
  }

  // The zero mode kills the gap; phase and inverse must refuse.
  CHECK_FALSE(m.invertible_dirac());
  CHECK_THROWS_AS(m.sign_dirac(), std::domain_error);
  CHECK_THROWS_AS(m.dirac_inverse(), std::domain_error);

  CHECK_THROWS_AS(build_circle(2), std::invalid_argument);
}

TEST_CASE("circle shift is one sided unitary with edge defect") {
  const auto m = build_circle(8);
  const ModeOperator u = m.resolve("u");
  const ModeOperator defect = m.identity() - u.adjoint() * u;
  // u*u = 1 - projection onto the top mode.
  CHECK(std::abs(defect.trace() - Complex(1.0)) < 1e-14);
  CHECK(defect.operator_norm() == doctest::Approx(1.0));

  // [|D|, u] e_n = (|n+1| - |n|) e_{n+1}: entries of modulus <= 1, and the
  // norm is exactly 1 already at this size.
  const ModeOperator du = m.delta(u);
  CHECK(du.operator_norm() == doctest::Approx(1.0));
  CHECK(du.max_abs() == doctest::Approx(1.0));

  // Second application squares the one sided differences: every surviving
  // entry is (|n+1| - |n|)^2 = 1, so the norm stays 1 at any truncation.
  const ModeOperator ddu = m.delta_k(u, 2);
  CHECK(ddu.operator_norm() == doctest::Approx(1.0));
  for (int n = -8; n <= 7; ++n) {
    const Block* b = ddu.block({1, 0}, m.space()->index({n, 0}));
    REQUIRE(b != nullptr);
    const double w = std::abs(n + 1) - std::abs(n);
    CHECK(std::abs((*b)(0, 0) - Complex(w * w)) < 1e-14);
  }
}

TEST_CASE("torus truncation: spinor Dirac, grading, commuting shifts") {
  const auto m = build_torus2(4);
  CHECK(m.summability() == 2);
  CHECK(m.even());
  CHECK(m.space()->dim() == 81 * 2);
  CHECK(m.max_dirac_eigenvalue() == doctest::Approx(std::sqrt(32.0)));

  // |D| has the per mode eigenvalue sqrt(n^2 + k^2) twice.
  const ModeOperator absd = m.abs_dirac();
  const Block* b = absd.block({0, 0}, m.space()->index({3, -2}));
  REQUIRE(b != nullptr);
  CHECK(std::abs((*b)(0, 0) - Complex(std::sqrt(13.0))) < 1e-12);
  CHECK(std::abs((*b)(1, 1) - Complex(std::sqrt(13.0))) < 1e-12);

  // Grading squares to 1 and anticommutes with D.
  const ModeOperator g = *m.grading();
  CHECK(dense_gap(g * g, m.identity()) < 1e-14);
  CHECK(anticommutator(g, m.dirac()).is_zero(1e-14));

  // The two shifts commute exactly even in the truncation.
  const ModeOperator u = m.resolve("u");
  const ModeOperator v = m.resolve("v");
  CHECK(commutator(u, v).is_zero(0.0));
  CHECK(dense_gap(m.resolve("uv"), u * v) < 1e-15);

  CHECK_THROWS_AS(build_torus2(2), std::invalid_argument);
}

TEST_CASE("word resolution parses stars and rejects unknown symbols") {
  const auto m = build_torus2(4);
  const ModeOperator u = m.resolve("u");
  CHECK(dense_gap(m.resolve("u*"), u.adjoint()) < 1e-15);
  CHECK(dense_gap(m.resolve("u*u"), u.adjoint() * u) < 1e-15);
  CHECK(dense_gap(m.resolve("1"), m.identity()) < 1e-15);
  CHECK_THROWS_AS(m.resolve("w"), std::invalid_argument);
  CHECK_THROWS_AS(m.resolve(""), std::invalid_argument);
}

TEST_CASE("doubling opens a spectral gap equal to the mass") {
  const auto base = build_circle(8);
  const auto dbl = make_double(base, 0.5);
  const auto& m = dbl.triple;
  CHECK(m.space()->dim() == 34);
  CHECK(m.invertible_dirac());
  CHECK(m.spectral_gap() == doctest::Approx(0.5));
  CHECK(m.mass() == doctest::Approx(0.5));

  // |D_m| eigenvalues are sqrt(n^2 + m^2), each twice.
  const Block* b = m.abs_dirac().block({0, 0}, m.space()->index({3, 0}));
  REQUIRE(b != nullptr);
  CHECK(std::abs((*b)(0, 0) - Complex(std::sqrt(9.25))) < 1e-12);
  CHECK(std::abs((*b)(1, 1) - Complex(std::sqrt(9.25))) < 1e-12);

  // The phase squares to the identity once the gap exists.
  const ModeOperator f = m.sign_dirac();
  CHECK(dense_gap(f * f, m.identity()) < 1e-12);
  CHECK(dense_gap(f, f.adjoint()) < 1e-12);

  // D^{-1} really inverts.
  CHECK(dense_gap(m.dirac_inverse() * m.dirac(), m.identity()) < 1e-12);

  // Algebra sits in the upper left corner: compressing by the doubling
  // projection reproduces the base generator.
  const ModeOperator u = m.resolve("u");
  CHECK(std::abs(u.trace()) < 1e-14);
  CHECK(u.operator_norm() == doctest::Approx(base.resolve("u").operator_norm()));
}

TEST_CASE("doubling an even triple extends the grading") {
  const auto base = build_torus2(4);
  const auto dbl = make_double(base, 1.0);
  const auto& m = dbl.triple;
  CHECK(m.even());
  CHECK(m.invertible_dirac());
  CHECK(m.spectral_gap() == doctest::Approx(1.0));
  const ModeOperator g = *m.grading();
  CHECK(dense_gap(g * g, m.identity()) < 1e-14);
  CHECK(anticommutator(g, m.dirac()).is_zero(1e-13));
}

TEST_CASE("heat trace of the circle matches the theta function value") {
  // sum_n exp(-t^2 n^2) at t = 0.1 over |n| <= 100 equals sqrt(pi)/t to
  // machine precision by Poisson summation; the truncation tail is
  // exp(-100) small.
  const auto m = build_circle(100);
  const ModeOperator h = m.function_of_dirac([](double x) { return std::exp(-0.01 * x * x); });
  CHECK(std::abs(h.trace().real() - 17.7245385090552) < 1e-4);
  CHECK(std::abs(h.trace().imag()) < 1e-14);
}

TEST_CASE("derivation towers stay uniformly bounded on the circle") {
  const auto m = build_circle(32);
  const ModeOperator u = m.resolve("u");
  for (int k = 1; k <= 4; ++k) {
    CHECK(m.delta_k(u, k).operator_norm() <= 1.0 + 1e-12);
  }
}

}  // TEST_SUITE
