#include "doctest.h"
#include "nclab/hochschild.hpp"
#include "nclab/models.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace nclab;

namespace {

// Non-tracial linear functional x -> tr(x r). Nothing in this suite may
// lean on cyclicity of the plain trace, so every functional gets a twist.
std::function<Complex(const ModeOperator&)> against(const ModeOperator& r) {
  return [r](const ModeOperator& x) { return (x * r).trace(); };
}

// Mode-diagonal twist with no symmetry left: traces of shift words survive
// only when the word offsets cancel, so the twist must carry offset zero; it
// must not be even in the mode coordinate or edge terms pair off; and its
// fiber blocks must be full, or words with an odd number of Dirac
// commutators (fiber off-diagonal on the torus) are invisibly traceless.
ModeOperator skew_diagonal(const std::shared_ptr<const ModeSpace>& space) {
  const int f = space->fiber();
  return ModeOperator::diagonal(space, [f](const ModeCoord& m) {
    const double base = 1.0 + 0.3 * std::tanh(0.4 * m[0] + 0.1) +
                        0.2 * std::tanh(0.3 * m[1] - 0.2);
    Block b(f, f);
    for (int j = 0; j < f; ++j)
      for (int k = 0; k < f; ++k)
        b(j, k) = base * (1.0 + 0.15 * j + 0.35 * k) +
                  Complex(0.0, 0.1) * static_cast<double>(j - k);
    return b;
  });
}

HochschildChain random_chain(int degree, int terms, unsigned seed) {
  const std::vector<std::string> pool{"u", "v", "u*", "v*", "uv", "u*v*", "1"};
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<ChainTerm> out;
  for (int t = 0; t < terms; ++t) {
    ChainTerm term;
    term.coefficient = Complex(unif(rng), unif(rng));
    for (int s = 0; s <= degree; ++s) term.factors.push_back(pool[pick(rng)]);
    out.push_back(std::move(term));
  }
  return HochschildChain(degree, std::move(out));
}

}  // namespace

TEST_SUITE("hochschild") {

TEST_CASE("boundary lists the face maps with alternating signs") {
  const HochschildChain c1(1, {{1.0, {"u", "v"}}});
  const auto b1 = boundary(c1);
  CHECK(b1.degree() == 0);
  REQUIRE(b1.terms().size() == 2);
  CHECK(b1.terms()[0].factors == std::vector<std::string>{"uv"});
  CHECK(b1.terms()[0].coefficient == Complex(1.0));
  CHECK(b1.terms()[1].factors == std::vector<std::string>{"vu"});
  CHECK(b1.terms()[1].coefficient == Complex(-1.0));

  const HochschildChain c2(2, {{2.0, {"u", "v", "u*"}}});
  const auto b2 = boundary(c2);
  CHECK(b2.degree() == 1);
  REQUIRE(b2.terms().size() == 3);
  CHECK(b2.terms()[0].factors == std::vector<std::string>{"uv", "u*"});
  CHECK(b2.terms()[0].coefficient == Complex(2.0));
  CHECK(b2.terms()[1].factors == std::vector<std::string>{"u", "vu*"});
  CHECK(b2.terms()[1].coefficient == Complex(-2.0));
  CHECK(b2.terms()[2].factors == std::vector<std::string>{"u*u", "v"});
  CHECK(b2.terms()[2].coefficient == Complex(2.0));

  // "1" is the empty word and must act as the unit for concatenation.
  CHECK(word_product("1", "u") == "u");
  CHECK(word_product("u", "1") == "u");
  CHECK(word_product("1", "1") == "1");
}

TEST_CASE("boundary squared vanishes on random chains") {
  const auto model = build_torus2(4);
  for (unsigned seed : {11u, 23u, 47u}) {
    const auto c = random_chain(3, 5, seed);
    CHECK(cycle_residual(model, boundary(c)) < 1e-12);
  }
}

TEST_CASE("shift cycles close up away from the truncation edge") {
  const auto circle = build_circle(16);
  CHECK(is_cycle(circle, HochschildChain(1, {{1.0, {"u*", "u"}}}), 1e-12));

  const auto torus = build_torus2(8);
  const HochschildChain winding(
      2, {{1.0, {"u*v*", "u", "v"}}, {-1.0, {"u*v*", "v", "u"}}});
  CHECK(is_cycle(torus, winding, 1e-12));

  // Dropping the antisymmetrisation leaves a visible defect.
  const HochschildChain half(2, {{1.0, {"u*v*", "u", "v"}}});
  CHECK(cycle_residual(torus, half) > 0.1);
}

TEST_CASE("coboundary follows the merge and wrap display") {
  const auto m = build_torus2(6);
  const auto t = m.function_of_dirac([](double x) { return 1.0 / (1.0 + x * x); });
  const auto r = skew_diagonal(m.space());
  const auto a0 = m.resolve("u");
  const auto a1 = m.resolve("u*");

  // Degree zero needs a non-commuting pair; the truncated shifts fail to
  // commute exactly on the edge rings, which the skew twist can see.
  const CochainFunctional phi0(ProductShape{against(r), {}, t});
  const Complex lhs0 = coboundary(phi0)({a0, a1});
  const Complex rhs0 = phi0({a0 * a1}) - phi0({a1 * a0});
  CHECK(std::abs(lhs0 - rhs0) < 1e-12 * std::max(1.0, std::abs(lhs0)));
  CHECK(std::abs(lhs0) > 1e-8);

  const auto delta = [&m](const ModeOperator& a) { return m.delta(a); };
  const CochainFunctional phi1(ProductShape{against(r), {delta}, t});
  const auto b0 = m.resolve("v");
  const auto b1 = m.resolve("u*v*");
  const Complex lhs1 = coboundary(phi1)({a0, b0, b1});
  const Complex rhs1 =
      phi1({a0 * b0, b1}) - phi1({a0, b0 * b1}) + phi1({b1 * a0, b0});
  CHECK(std::abs(lhs1 - rhs1) < 1e-12 * std::max(1.0, std::abs(lhs1)));
  CHECK(std::abs(lhs1) > 1e-8);
}

TEST_CASE("coboundary is the transpose of the boundary under the pairing") {
  const auto m = build_torus2(4);
  const auto t = m.function_of_dirac([](double x) { return 1.0 / (1.0 + x * x); });
  const auto dd = [&m](const ModeOperator& a) { return m.d(a); };
  const auto delta = [&m](const ModeOperator& a) { return m.delta(a); };
  const CochainFunctional phi(
      ProductShape{against(skew_diagonal(m.space())), {dd, delta}, t, false});
  for (unsigned seed : {5u, 9u}) {
    // Two balanced-offset terms guarantee a nonzero pairing; the random
    // tail exercises the sign bookkeeping on arbitrary words.
    const HochschildChain structured(3, {{Complex(0.7, -0.2), {"u", "u*", "v", "v*"}},
                                         {Complex(-0.4, 0.9), {"v", "u", "u*v*", "1"}}});
    const auto c = structured + random_chain(3, 3, seed);
    const Complex left = nclab::pair(m, coboundary(phi), c);
    const Complex right = nclab::pair(m, phi, boundary(c));
    CHECK(std::abs(left) > 1e-8);
    CHECK(std::abs(left - right) < 1e-12 * std::max(1.0, std::abs(left)));
  }
}

TEST_CASE("derivation word functionals have two term coboundaries") {
  const auto m = build_torus2(6);
  const auto t = m.function_of_dirac([](double x) { return 1.0 / (1.0 + x * x); });
  const auto tr_r = against(skew_diagonal(m.space()));
  const auto dd = [&m](const ModeOperator& a) { return m.d(a); };
  const auto delta = [&m](const ModeOperator& a) { return m.delta(a); };
  const auto u = m.resolve("u");
  const auto v = m.resolve("v");
  const auto us = m.resolve("u*");
  const auto vs = m.resolve("v*");
  const auto uvs = m.resolve("u*v*");

  // One derivation slot: b phi~ collapses to minus the two boundary words.
  const ProductShape s1{tr_r, {delta}, t};
  const Complex lhs1 = coboundary(CochainFunctional(s1))({u, v, uvs});
  const ModeOperator w1 = s1.word({u, v});
  const Complex rhs1 = -(tr_r(w1 * uvs * t) - tr_r(uvs * w1 * t));
  CHECK(std::abs(lhs1 - rhs1) < 1e-12 * std::max(1.0, std::abs(lhs1)));
  CHECK(std::abs(lhs1) > 1e-10);

  // Two mixed derivation slots flip the sign back.
  const ProductShape s2{tr_r, {dd, delta}, t, false};
  const Complex lhs2 = coboundary(CochainFunctional(s2))({u, v, us, vs});
  const ModeOperator w2 = s2.word({u, v, us});
  const Complex rhs2 = tr_r(w2 * vs * t) - tr_r(vs * w2 * t);
  CHECK(std::abs(lhs2 - rhs2) < 1e-12 * std::max(1.0, std::abs(lhs2)));
  CHECK(std::abs(lhs2) > 1e-10);
}

TEST_CASE("contraction of a functional merges adjacent arguments") {
  const auto m = build_torus2(6);
  const auto t = m.function_of_dirac([](double x) { return 1.0 / (1.0 + x * x); });
  const auto dd = [&m](const ModeOperator& a) { return m.d(a); };
  const auto u = m.resolve("u");
  const auto v = m.resolve("v");
  const auto us = m.resolve("u*");
  const auto vs = m.resolve("v*");

  const auto uvs = m.resolve("u*v*");
  const ProductShape s0{against(skew_diagonal(m.space())), {}, t};
  const CochainFunctional phi0(s0);
  const auto cup0 = cup_sigma(phi0);
  CHECK(cup0.degree() == 2);
  CHECK(cup0.contraction_power() == 1);
  const Complex want0 = s0(u * v * uvs);
  CHECK(std::abs(want0) > 1e-8);
  CHECK(std::abs(cup0({u, v, uvs}) - want0) < 1e-12 * std::max(1.0, std::abs(want0)));

  // On commuting scalar-block words a single Dirac commutator cancels
  // between the two merge positions, so slot two gets a full-block operator.
  const auto q = skew_diagonal(m.space());
  const ProductShape s1{against(skew_diagonal(m.space())), {dd}, t};
  const auto cup1 = cup_sigma(CochainFunctional(s1));
  CHECK(cup1.degree() == 3);
  const Complex want1 = s1(u * (v * q) * m.d(uvs)) + s1(u * m.d(v) * (q * uvs));
  CHECK(std::abs(want1) > 1e-8);
  CHECK(std::abs(cup1({u, v, q, uvs}) - want1) <
        1e-12 * std::max(1.0, std::abs(want1)));

  // Second power on a degree zero shape: only the fully merged pattern
  // survives and it is counted twice.
  const auto cup00 = contraction_power(phi0, 2);
  CHECK(cup00.degree() == 4);
  CHECK(cup00.contraction_power() == 2);
  const auto one = m.resolve("1");
  const Complex want00 = 2.0 * s0(u * (us * v) * (vs * one));
  CHECK(std::abs(want00) > 1e-8);
  CHECK(std::abs(cup00({u, us, v, vs, one}) - want00) <
        1e-12 * std::max(1.0, std::abs(want00)));
}

TEST_CASE("argument contraction matches the operator contraction") {
  const auto m = build_torus2(6);
  const auto t = m.function_of_dirac([](double x) { return 1.0 / (1.0 + x * x); });
  const auto dd = [&m](const ModeOperator& a) { return m.d(a); };
  const ProductShape s0{against(skew_diagonal(m.space())), {}, t};
  const ProductShape s1{against(skew_diagonal(m.space())), {dd}, t};
  const CochainFunctional phi0(s0);
  const CochainFunctional phi1(s1);

  CHECK(s_power_consistency(m, phi0, 0, {"u*u"}) < 1e-13);
  CHECK(s_power_consistency(m, phi0, 1, {"u", "v", "u*v*"}) < 1e-12);
  CHECK(s_power_consistency(m, phi0, 2, {"u", "u*", "v", "v*", "1"}) < 1e-11);
  CHECK(s_power_consistency(m, phi1, 0, {"u", "u*"}) < 1e-13);
  CHECK(s_power_consistency(m, phi1, 1, {"u", "v", "u*", "v*"}) < 1e-12);
  CHECK(s_power_consistency(m, phi1, 2, {"u", "v", "u*", "v*", "uv", "u*v*"}) < 1e-11);

  // The agreement is between two genuinely nonzero numbers.
  const std::vector<ModeOperator> probe{m.resolve("u"), m.resolve("u*"),
                                        m.resolve("v"), m.resolve("v*"),
                                        m.resolve("1")};
  CHECK(std::abs(contraction_power(phi0, 2)(probe)) > 1e-6);
}

TEST_CASE("appending a derivation shifts the contraction by a correction") {
  const auto m = build_torus2(6);
  std::vector<ModeOperator> a;
  for (const char* w : {"u", "v", "u*", "v*", "uv", "vu"}) a.push_back(m.resolve(w));

  // Power one with five arguments.
  {
    const std::vector<ModeOperator> head(a.begin(), a.begin() + 4);
    const std::vector<ModeOperator> full(a.begin(), a.begin() + 5);
    const std::vector<ModeOperator> stem(a.begin(), a.begin() + 3);
    const ModeOperator lhs = shat(1, head, m) * m.d(a[4]);
    const ModeOperator rhs = shat(1, full, m) + shat(0, stem, m) * (a[3] * a[4]) * Complex(-1.0);
    CHECK((lhs - rhs).max_abs() < 1e-11);
  }

  // Power two with six arguments picks up the factor of two.
  {
    const std::vector<ModeOperator> head(a.begin(), a.begin() + 5);
    const std::vector<ModeOperator> stem(a.begin(), a.begin() + 4);
    const ModeOperator lhs = shat(2, head, m) * m.d(a[5]);
    const ModeOperator rhs = shat(2, a, m) + shat(1, stem, m) * (a[4] * a[5]) * Complex(-2.0);
    CHECK((lhs - rhs).max_abs() < 1e-11);
    CHECK(shat(2, a, m).max_abs() > 1e-6);
  }
}

TEST_CASE("contraction operators vanish below the argument threshold") {
  const auto m = build_torus2(4);
  const auto u = m.resolve("u");
  const auto v = m.resolve("v");
  const auto us = m.resolve("u*");
  const auto vs = m.resolve("v*");

  CHECK(shat(1, {u}, m).is_zero());
  CHECK(shat(1, {u, v}, m).is_zero());
  CHECK(shat(2, {u, v, us, vs}, m).is_zero());
  CHECK(shat(3, {u, v, us, vs, u, v}, m).is_zero());
  CHECK((shat(1, {u, v, us}, m) - u * v * us).max_abs() < 1e-14);

  // First contraction against the direct sum over merge positions.
  const std::vector<ModeOperator> args{u, v, us, vs, u};
  const ModeOperator direct = u * (v * us) * m.d(vs) * m.d(args[4]) +
                              u * m.d(v) * (us * vs) * m.d(args[4]) +
                              u * m.d(v) * m.d(us) * (vs * args[4]);
  CHECK((shat(1, args, m) - direct).max_abs() < 1e-12);
}

TEST_CASE("degree mismatches and malformed inputs are rejected") {
  const auto m = build_torus2(4);
  const auto u = m.resolve("u");

  CHECK_THROWS_AS(HochschildChain(1, {{1.0, {"u"}}}), std::invalid_argument);
  CHECK_THROWS_AS(HochschildChain(-1, {}), std::invalid_argument);
  CHECK_THROWS_AS(boundary(HochschildChain(0, {{1.0, {"u"}}})), std::domain_error);
  const HochschildChain c1(1, {{1.0, {"u", "v"}}});
  const HochschildChain c2(2, {{1.0, {"u", "v", "u*"}}});
  CHECK_THROWS_AS(c1 + c2, std::invalid_argument);

  const CochainFunctional plain(1, [](const std::vector<ModeOperator>& args) {
    return args[0].trace() + args[1].trace();
  });
  CHECK_THROWS_AS(plain({u}), std::invalid_argument);
  CHECK_THROWS_AS(plain.shape(), std::domain_error);
  CHECK_THROWS_AS(cup_sigma(plain), std::invalid_argument);
  CHECK_THROWS_AS(contraction_power(plain, -1), std::invalid_argument);
  CHECK_THROWS_AS(CochainFunctional(0, nullptr), std::invalid_argument);
  CHECK_THROWS_AS(nclab::pair(m, plain, c2), std::invalid_argument);

  const auto dd = [&m](const ModeOperator& a) { return m.d(a); };
  const auto delta = [&m](const ModeOperator& a) { return m.delta(a); };
  const auto t = ModeOperator::identity(m.space());
  const CochainFunctional mixed(
      ProductShape{against(u), {dd, delta}, t, false});
  CHECK_THROWS_AS(cup_sigma(mixed), std::invalid_argument);

  CHECK_THROWS_AS(shat(-1, {u}, m), std::invalid_argument);
  CHECK_THROWS_AS(shat(1, {}, m), std::invalid_argument);
  const ProductShape lone{against(u), {dd}, t};
  CHECK_THROWS_AS(lone.word({u}), std::invalid_argument);
}

}
