#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nagumo/energy.hpp"
#include "nagumo/flow.hpp"
#include "oracles.hpp"

using namespace nagumo;

namespace {
const IntegratorSettings kTol{};  // rel 1e-10 / abs 1e-12
}

TEST_CASE("field values") {
  const auto params = fixtures::constant_params(20.0);
  const PhaseState d1 = rhs(0.0, {0.6, 0.0}, params);
  CHECK(d1.x == 0.0);
  CHECK(d1.y == doctest::Approx(0.06).epsilon(1e-14));  // g*a - n*f(a) = 0.06

  const PhaseState d2 = rhs(0.0, {0.6, 0.3}, params);
  CHECK(d2.x == 0.3);
  CHECK(d2.y == doctest::Approx(0.06).epsilon(1e-14));

  const double a_n = oracles::cubic_center(0.6, 0.1, 20.0);
  const PhaseState d3 = rhs(0.0, {a_n, 0.0}, params);
  CHECK(d3.x == 0.0);
  CHECK(std::abs(d3.y) < 1e-12);
}

TEST_CASE("settings validation") {
  IntegratorSettings bad;
  bad.rel_tol = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_NOTHROW(IntegratorSettings{}.validate());
}

TEST_CASE("equilibrium stays put under a constant weight") {
  const auto params = fixtures::constant_params(20.0);
  const double a_n = oracles::cubic_center(0.6, 0.1, 20.0);
  const Trajectory traj = integrate({a_n, 0.0}, 0.0, 5.0, params, kTol);
  for (double t : {0.7, 2.3, 5.0}) {
    CHECK(traj.state_at(t).x == doctest::Approx(a_n).epsilon(1e-8));
    CHECK(std::abs(traj.state_at(t).y) < 1e-8);
  }
}

TEST_CASE("flow semigroup property") {
  const auto params = fixtures::two_step_params(20.0, 1.0, 0.8);
  const PhaseState z0{0.65, 0.1};
  const double beta = params.weight.beta();
  const PhaseState one = integrate(z0, 0.0, beta, params, kTol).back();
  const PhaseState two_piecewise = integrate(one, beta, 2 * beta, params, kTol).back();
  const PhaseState two_direct = integrate(z0, 0.0, 2 * beta, params, kTol).back();
  CHECK(distance(two_piecewise, two_direct) < 10.0 * (kTol.rel_tol + kTol.abs_tol));
}

TEST_CASE("dense output agrees with the harmonic closed form") {
  const auto circle = [](double, PhaseState z) { return PhaseState{z.y, -z.x}; };
  const Trajectory traj = integrate_rhs(circle, {1.0, 0.0}, 0.0, 6.0, kTol);
  for (int i = 0; i <= 60; ++i) {
    const double t = 0.1 * i;
    const PhaseState z = traj.state_at(t);
    CHECK(z.x == doctest::Approx(std::cos(t)).epsilon(1e-8));
    CHECK(z.y == doctest::Approx(-std::sin(t)).epsilon(1e-8));
  }
}

TEST_CASE("energy is conserved along a constant-weight trajectory") {
  const auto params = fixtures::constant_params(20.0);
  const AutonomousSystem aut = autonomous_from(params);
  const PhaseState z0{0.65, 0.0};
  const double e0 = energy(z0, aut);
  const Trajectory traj = integrate(z0, 0.0, 20.0, params, kTol);
  for (int i = 1; i <= 40; ++i) {
    const double t = 0.5 * i;
    CHECK(energy(traj.state_at(t), aut) ==
          doctest::Approx(e0).epsilon(100.0 * kTol.rel_tol));
  }
}

TEST_CASE("integration failure carries the last good time") {
  // a field that blows up in finite time: x' = 1 + x^2 diverges at pi/2
  const auto blowup = [](double, PhaseState z) {
    return PhaseState{1.0 + z.x * z.x, 0.0};
  };
  try {
    integrate_rhs(blowup, {0.0, 0.0}, 0.0, 3.0, kTol);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.last_good_time > 1.0);
    CHECK(e.last_good_time < 1.7);
  }
}

TEST_CASE("period map basics") {
  const auto params = fixtures::constant_params(20.0);
  const double a_n = oracles::cubic_center(0.6, 0.1, 20.0);

  // fixed point of the period map under a constant weight
  const PhaseState fixed = poincare_map({a_n, 0.0}, 1, params, kTol);
  CHECK(distance(fixed, {a_n, 0.0}) < 1e-9);

  // iterate composition
  const PhaseState z0{0.7, 0.05};
  const PhaseState once = poincare_map(z0, 1, params, kTol);
  const PhaseState twice_composed = poincare_map(once, 1, params, kTol);
  const PhaseState twice = poincare_map(z0, 2, params, kTol);
  CHECK(distance(twice_composed, twice) < 1e-9);
}

TEST_CASE("free-particle period-map Jacobian is the shear") {
  // x'' = 0: over time T the flow matrix is [[1, T], [0, 1]]
  const auto free = [](double, PhaseState z) { return PhaseState{z.y, 0.0}; };
  for (int m : {1, 3}) {
    const double T = static_cast<double>(m);
    const Mat2 j = fd_jacobian(
        [&](PhaseState z) { return integrate_rhs_final(free, z, 0.0, T, kTol); },
        {0.3, -0.2}, 1e-6);
    CHECK(j.a11 == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(j.a12 == doctest::Approx(T).epsilon(1e-7));
    CHECK(std::abs(j.a21) < 1e-7);
    CHECK(j.a22 == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("period-map Jacobian at the center matches the linearized flow") {
  const double nbar = 20.0;
  const auto params = fixtures::constant_params(nbar);
  const double a_n = oracles::cubic_center(0.6, 0.1, nbar);
  const double slope = fixtures::cubic().deriv(a_n);
  const double omega = std::sqrt(nbar * slope - 0.1);
  for (int m : {1, 2}) {
    const Mat2 j = poincare_jacobian({a_n, 0.0}, m, params,
                                     IntegratorSettings{1e-12, 1e-13, 0.25});
    const Mat2 exact = oracles::center_flow_matrix(omega, m * 1.0);
    CHECK(j.a11 == doctest::Approx(exact.a11).epsilon(5e-5));
    CHECK(j.a12 == doctest::Approx(exact.a12).epsilon(5e-5));
    CHECK(j.a21 == doctest::Approx(exact.a21).epsilon(5e-5));
    CHECK(j.a22 == doctest::Approx(exact.a22).epsilon(5e-5));
  }
}

TEST_CASE("area preservation") {
  const auto constant = fixtures::constant_params(20.0);
  const auto stepped = fixtures::two_step_params(20.0, 1.0, 0.8);
  const IntegratorSettings tight{1e-12, 1e-13, 0.25};
  for (const auto* params : {&constant, &stepped}) {
    for (PhaseState z0 : {PhaseState{0.3, 0.2}, PhaseState{0.7, -0.4}}) {
      const double det = poincare_jacobian(z0, 1, *params, tight).det();
      CHECK(det == doctest::Approx(1.0).epsilon(1e-4));
    }
  }
}

TEST_CASE("nearby starts obey the Lipschitz growth bound") {
  const auto params = fixtures::two_step_params(20.0, 1.0, 0.8);
  const int m = 2;
  const double span = m * params.weight.beta();
  // integral of g + n(t) L0 over [0, span]
  const double a_int =
      (params.g + 0.0) * span +
      params.f0.lipschitz() * m * params.weight.period_integral();
  const double d0 = 1e-7;
  const PhaseState z0{0.55, 0.1};
  const PhaseState z1{0.55 + d0, 0.1};
  const PhaseState w0 = poincare_map(z0, m, params, kTol);
  const PhaseState w1 = poincare_map(z1, m, params, kTol);
  CHECK(distance(w0, w1) <= d0 * std::exp(a_int) * 1.01 + 1e-11);
}

TEST_CASE("sampled weights integrate with kink restarts") {
  // triangular profile around the plateau; kinks become restart points
  const Weight w = split_weight(
      Weight::sampled(1.0, {0.0, 0.25, 0.5, 0.75, 1.0},
                      {18.0, 22.0, 18.0, 22.0, 18.0}),
      SplitStrategy::Mean);
  CHECK(w.nbar() == doctest::Approx(20.0).epsilon(1e-12));
  const SystemParams params{0.1, w, fixtures::modified()};
  const PhaseState z0{0.65, 0.05};
  const Trajectory traj = integrate(z0, 0.0, 2.0, params, kTol);
  bool saw_quarter = false;
  for (const auto& s : traj.steps())
    if (s.t == 0.25 || s.t == 1.25) saw_quarter = true;
  CHECK(saw_quarter);
  // semigroup still holds across the kinks
  const PhaseState mid = integrate(z0, 0.0, 0.6, params, kTol).back();
  const PhaseState glued = integrate(mid, 0.6, 2.0, params, kTol).back();
  CHECK(distance(glued, traj.back()) < 10.0 * (kTol.rel_tol + kTol.abs_tol));
}

TEST_CASE("dense output is continuous across accepted steps") {
  const auto params = fixtures::two_step_params(20.0, 1.0, 0.8);
  const Trajectory traj = integrate({0.62, 0.05}, 0.0, 3.0, params, kTol);
  const auto& steps = traj.steps();
  REQUIRE(steps.size() > 4);
  for (size_t i = 0; i + 1 < steps.size(); ++i) {
    // each interpolant reproduces its own endpoints to integrator accuracy
    const double t_end = steps[i].t + steps[i].h;
    CHECK(distance(steps[i].eval(steps[i].t), steps[i].r1) < 1e-14);
    CHECK(distance(steps[i].eval(t_end), steps[i + 1].r1) <
          10.0 * (kTol.rel_tol + kTol.abs_tol));
    CHECK(steps[i + 1].t == t_end);
  }
}

TEST_CASE("steps land exactly on weight breakpoints") {
  const auto params = fixtures::two_step_params(20.0, 1.0, 0.8);
  const Trajectory traj = integrate({0.6, 0.1}, 0.0, 2.0, params, kTol);
  bool saw_alpha = false, saw_beta = false;
  for (const auto& s : traj.steps()) {
    if (s.t == 0.8) saw_alpha = true;
    if (s.t == 1.0) saw_beta = true;
  }
  CHECK(saw_alpha);
  CHECK(saw_beta);
}
