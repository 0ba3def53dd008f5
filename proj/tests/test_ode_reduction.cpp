#include "solitonforge/ode_reduction.hpp"

#include "solitonforge/soliton_core.hpp"

#include <doctest.h>

#include <cmath>

using namespace solitonforge;

namespace {

// RK4 for the *published* m=1 equation f'' = k f f' + rho f, used only to
// show that it fails re-substitution into the reduced system.
OdeTrajectory integrate_published_m1(OdeState init, double k, double rho, double x_end,
                                     double step) {
  OdeTrajectory traj;
  traj.step = step;
  init.h1p = k * init.f;
  traj.samples.push_back(init);
  const long n = std::llround((x_end - init.x1) / step);
  struct P {
    double f, fp;
  };
  auto rhs = [k, rho](const P& s) { return P{s.fp, k * s.f * s.fp + rho * s.f}; };
  for (long i = 0; i < n; ++i) {
    const OdeState& s = traj.samples.back();
    const P y{s.f, s.fp};
    const P k1 = rhs(y);
    const P k2 = rhs({y.f + 0.5 * step * k1.f, y.fp + 0.5 * step * k1.fp});
    const P k3 = rhs({y.f + 0.5 * step * k2.f, y.fp + 0.5 * step * k2.fp});
    const P k4 = rhs({y.f + step * k3.f, y.fp + step * k3.fp});
    OdeState next;
    next.x1 = init.x1 + (i + 1) * step;
    next.f = y.f + step / 6.0 * (k1.f + 2 * k2.f + 2 * k3.f + k4.f);
    next.fp = y.fp + step / 6.0 * (k1.fp + 2 * k2.fp + 2 * k3.fp + k4.fp);
    next.h1p = k * next.f;
    traj.samples.push_back(next);
  }
  return traj;
}

}  // namespace

TEST_SUITE("ode_reduction") {

TEST_CASE("rhs_reduced: solved-for forms") {
  {
    OdeParams p{2, -2.0, -4.0, 0.0};
    const StateDerivative d = rhs_reduced(OdeState{0.0, 2.0, 0.0, 0.0}, p);
    CHECK(d.fpp == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d.h1pp == doctest::Approx(0.0).epsilon(1e-15));
  }
  {
    // Product equilibrium: f constant, lambda_f = rho c^2, h1'' = rho.
    const double c = 1.5;
    const double rho = 2.0;
    OdeParams p{3, rho, rho * c * c, 0.0};
    const StateDerivative d = rhs_reduced(OdeState{0.0, c, 0.0, 0.0}, p);
    CHECK(d.fpp == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(d.h1pp == doctest::Approx(rho).epsilon(1e-15));
  }
  {
    // Steady linear profile has f'' = 0.
    OdeParams p{3, 0.0, 2.0, 0.0};
    const StateDerivative d = rhs_reduced(OdeState{0.0, 1.0, 1.0, 0.0}, p);
    CHECK(d.fpp == doctest::Approx(0.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(rhs_reduced(OdeState{0.0, 1e-9, 0.0, 0.0}, OdeParams{2, 0.0, 0.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("integrate_reduced: expanding closed form at x = 1") {
  OdeParams p{2, -2.0, -4.0, 0.0};
  const OdeTrajectory traj = integrate_reduced(OdeState{0.0, 2.0, 0.0, 0.0}, p, 1.0, 1e-3);
  REQUIRE(traj.halt == HaltReason::ReachedEnd);
  REQUIRE(traj.samples.size() == 1001);
  const OdeState& last = traj.samples.back();
  CHECK(last.x1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(last.f - 3.0861612696304874) <= 1e-8);
  CHECK(std::abs(last.h1p) <= 1e-10);
}

TEST_CASE("integrate_reduced: steady linear profile is exact") {
  OdeParams p{3, 0.0, 2.0, 0.0};
  const OdeTrajectory traj = integrate_reduced(OdeState{0.0, 1.0, 1.0, 0.0}, p, 1.0, 1e-2);
  REQUIRE(traj.halt == HaltReason::ReachedEnd);
  for (const OdeState& s : traj.samples) {
    CHECK(std::abs(s.f - (1.0 + s.x1)) <= 1e-12);
  }
}

TEST_CASE("integrate_reduced: shrinking closed form at x = 1") {
  OdeParams p{2, 2.0, 1.0, 0.0};
  const OdeTrajectory traj = integrate_reduced(OdeState{0.0, 1.0, 0.0, 0.0}, p, 1.0, 1e-3);
  REQUIRE(traj.halt == HaltReason::ReachedEnd);
  CHECK(std::abs(traj.samples.back().f - 0.5403023058681398) <= 1e-8);
}

TEST_CASE("integrate_reduced: argument validation") {
  OdeParams p{2, -2.0, -4.0, 0.0};
  const OdeState init{0.0, 2.0, 0.0, 0.0};
  CHECK_THROWS_AS(integrate_reduced(init, p, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_reduced(init, p, 1.0, -1e-3), std::invalid_argument);
  CHECK_THROWS_AS(integrate_reduced(init, p, -1.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(integrate_reduced(OdeState{0.0, 1e-12, 0.0, 0.0}, p, 1.0, 1e-3),
                  std::domain_error);
}

TEST_CASE("integrate_reduced: fourth-order convergence against the closed form") {
  OdeParams p{2, -2.0, -4.0, 0.0};
  const OdeState init{0.0, 2.0, 0.0, 0.0};
  const double exact = 3.0861612696304874;
  auto endpoint_error = [&](double step) {
    const OdeTrajectory traj = integrate_reduced(init, p, 1.0, step);
    REQUIRE(traj.halt == HaltReason::ReachedEnd);
    return std::abs(traj.samples.back().f - exact);
  };
  const double e1 = endpoint_error(0.1);
  const double e2 = endpoint_error(0.05);
  const double ratio = e1 / e2;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("integrate_reduced: FD re-substitution error scales with step^2") {
  OdeParams p{2, -2.0, -4.0, 0.0};
  const OdeState init{0.0, 2.0, 0.0, 0.0};
  for (double step : {1e-2, 5e-3}) {
    const OdeTrajectory traj = integrate_reduced(init, p, 1.0, step);
    CHECK(check_trajectory(traj, p) <= 10.0 * step * step);
  }
}

TEST_CASE("integrate_reduced: halts when f reaches the threshold") {
  OdeParams p{2, 2.0, 1.0, 0.0};  // f = cos(x1), zero at pi/2
  const OdeTrajectory traj = integrate_reduced(OdeState{0.0, 1.0, 0.0, 0.0}, p, 3.0, 1e-3);
  CHECK(traj.halt == HaltReason::FTooSmall);
  for (const OdeState& s : traj.samples) {
    CHECK(s.f > 0.0);
  }
  CHECK(traj.samples.back().x1 < 1.58);
}

TEST_CASE("integrate_reduced: overflow guard halts runaway growth") {
  OdeParams p{2, -2.0, 0.0, 0.0};  // f = e^x solves the system with lambda_f = 0
  const OdeTrajectory traj = integrate_reduced(OdeState{0.0, 1.0, 1.0, 0.0}, p, 40.0, 1e-2);
  CHECK(traj.halt == HaltReason::BlowUp);
  CHECK(traj.samples.back().x1 < 30.0);
}

TEST_CASE("integrate_m1: constant equilibrium") {
  OdeParams p{1, 0.0, 0.0, 1.0};
  const OdeTrajectory traj =
      integrate_m1(OdeState{0.0, 1.0, 0.0, 1.0}, p, 1.0, 1e-2);
  REQUIRE(traj.halt == HaltReason::ReachedEnd);
  for (const OdeState& s : traj.samples) {
    CHECK(s.f == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.fp == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("integrate_m1: re-substitution certificate stays small") {
  for (double rho : {0.0, -1.0}) {
    OdeParams p{1, rho, 0.0, 1.0};
    const OdeTrajectory traj =
        integrate_m1(OdeState{0.0, 1.0, 0.5, 1.0}, p, 0.5, 1e-3);
    REQUIRE(traj.halt == HaltReason::ReachedEnd);
    CHECK(check_trajectory(traj, p) <= 1e-7);
  }
}

TEST_CASE("integrate_m1: the algebraic constraint h1' = k f is exact") {
  OdeParams p{1, -1.0, 0.0, 2.0};
  const OdeTrajectory traj =
      integrate_m1(OdeState{0.0, 0.8, 0.3, 1.6}, p, 0.5, 1e-3);
  for (const OdeState& s : traj.samples) {
    CHECK(std::abs(s.h1p - p.k * s.f) <= 1e-10);
  }
}

TEST_CASE("integrate_m1: parameter validation") {
  CHECK_THROWS_AS(integrate_m1(OdeState{0.0, 1.0, 0.0, 1.0},
                               OdeParams{1, 0.0, 0.5, 1.0}, 1.0, 1e-2),
                  std::invalid_argument);  // lambda_f != 0
  CHECK_THROWS_AS(integrate_m1(OdeState{0.0, 1.0, 0.0, 1.0},
                               OdeParams{2, 0.0, 0.0, 1.0}, 1.0, 1e-2),
                  std::invalid_argument);  // m != 1
  CHECK_THROWS_AS(integrate_m1(OdeState{0.0, 1.0, 0.0, 1.0},
                               OdeParams{1, 0.0, 0.0, 0.0}, 1.0, 1e-2),
                  std::invalid_argument);  // k = 0
  CHECK_THROWS_AS(integrate_m1(OdeState{0.0, 1.0, 0.0, 0.2},
                               OdeParams{1, 0.0, 0.0, 1.0}, 1.0, 1e-2),
                  std::invalid_argument);  // h1p != k f
}

TEST_CASE("check_trajectory: detects a corrupted sample via second differences") {
  OdeParams p{2, -2.0, -4.0, 0.0};
  const double step = 1e-2;
  OdeTrajectory traj = integrate_reduced(OdeState{0.0, 2.0, 0.0, 0.0}, p, 1.0, step);
  const double clean = check_trajectory(traj, p);
  traj.samples[traj.samples.size() / 2].f += 0.1;
  const double corrupted = check_trajectory(traj, p);
  CHECK(corrupted >= 0.01 / (step * step));
  CHECK(corrupted >= 1e4 * clean);
}

TEST_CASE("check_trajectory: constant product trajectories are exact") {
  {
    OdeParams p{2, 0.0, 0.0, 0.0};
    const OdeTrajectory traj = integrate_reduced(OdeState{0.0, 1.0, 0.0, 0.0}, p, 1.0, 1e-2);
    CHECK(check_trajectory(traj, p) <= 1e-12);
  }
  {
    // f constant with rho != 0: h1' grows linearly, which central differences
    // reproduce exactly.
    const double c = 2.0;
    const double rho = 1.5;
    OdeParams p{3, rho, rho * c * c, 0.0};
    const OdeTrajectory traj = integrate_reduced(OdeState{0.0, c, 0.0, 0.0}, p, 1.0, 1e-2);
    CHECK(check_trajectory(traj, p) <= 1e-12);
  }
}

TEST_CASE("check_trajectory: needs at least five samples") {
  OdeParams p{2, -2.0, -4.0, 0.0};
  const OdeTrajectory traj = integrate_reduced(OdeState{0.0, 2.0, 0.0, 0.0}, p, 0.03, 1e-2);
  CHECK(traj.samples.size() == 4);
  CHECK_THROWS_AS(check_trajectory(traj, p), std::invalid_argument);
}

TEST_CASE("published m=1 sign fails re-substitution while the derived form passes") {
  const double k = 1.0;
  const double rho = -1.0;
  OdeParams p{1, rho, 0.0, k};
  const OdeState init{0.0, 1.0, 0.5, k * 1.0};

  const OdeTrajectory derived = integrate_m1(init, p, 0.5, 1e-3);
  CHECK(check_trajectory(derived, p) <= 1e-6);

  const OdeTrajectory published = integrate_published_m1(init, k, rho, 0.5, 1e-3);
  CHECK(check_trajectory(published, p) > 1e-2);
}

}  // TEST_SUITE
