#include "solitonforge/invariance.hpp"

#include "solitonforge/closed_forms.hpp"
#include "solitonforge/sampling.hpp"

#include <doctest.h>

#include <cmath>

using namespace solitonforge;

namespace {

ScalarField exp_linear(int n, const Vector& a) {
  return ScalarField::analytic(
      n, [a](const Vector& x) { return std::exp(a.dot(x)); },
      [a](const Vector& x) -> Vector { return std::exp(a.dot(x)) * a; },
      [a](const Vector& x) -> Matrix {
        return std::exp(a.dot(x)) * (a * a.transpose());
      });
}

ScalarField radial(int n) {
  return ScalarField::analytic(
      n, [](const Vector& x) { return x.squaredNorm(); },
      [](const Vector& x) -> Vector { return 2.0 * x; },
      [n](const Vector&) -> Matrix { return 2.0 * Matrix::Identity(n, n); });
}

GridSpec unit_grid(int n, int count) {
  return GridSpec(std::vector<AxisRange>(static_cast<std::size_t>(n), {-1.0, 1.0}),
                  std::vector<int>(static_cast<std::size_t>(n), count));
}

double angle_between(const Vector& a, const Vector& b) {
  const Vector ua = a.normalized();
  const Vector ub = b.normalized();
  const double dot = std::abs(ua.dot(ub));
  const Vector folded = ua.dot(ub) < 0.0 ? Vector(-ua) : ua;
  return std::asin(std::min(1.0, (folded - dot * ub).norm()));
}

}  // namespace

TEST_SUITE("invariance") {

TEST_CASE("detect: diagonal exponential is invariant along (1,1)") {
  Vector a = Vector::Ones(2);
  const InvarianceFit fit =
      detect_translation_invariance(exp_linear(2, a), unit_grid(2, 5), kAngleTolAnalytic);
  CHECK(fit.verdict == InvarianceVerdict::Invariant);
  CHECK(fit.max_angular_residual <= 1e-10);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(fit.direction[0] == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(fit.direction[1] == doctest::Approx(inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("detect: radial field is not invariant") {
  const InvarianceFit fit =
      detect_translation_invariance(radial(2), unit_grid(2, 5), kAngleTolAnalytic);
  CHECK(fit.verdict == InvarianceVerdict::NotInvariant);
  CHECK(fit.max_angular_residual > 0.5);  // gradient directions span >= pi/2
}

TEST_CASE("detect: exp translation family in three dimensions") {
  ExpTranslationParams p;
  p.m = 2;
  SolitonBundle bundle = family_exp_translation(3, p);
  const InvarianceFit fit =
      detect_translation_invariance(bundle.f, unit_grid(3, 5), kAngleTolAnalytic);
  CHECK(fit.verdict == InvarianceVerdict::Invariant);
  const Vector expected = Vector::Ones(3).normalized();
  CHECK(angle_between(fit.direction, expected) <= 1e-10);
}

TEST_CASE("detect: constant field is degenerate") {
  ScalarField c = ScalarField::analytic(
      2, [](const Vector&) { return 3.0; },
      [](const Vector&) -> Vector { return Vector::Zero(2); },
      [](const Vector&) -> Matrix { return Matrix::Zero(2, 2); });
  const InvarianceFit fit =
      detect_translation_invariance(c, unit_grid(2, 4), kAngleTolAnalytic);
  CHECK(fit.verdict == InvarianceVerdict::Degenerate);
  CHECK(fit.usable_points == 0);
}

TEST_CASE("detect: empty gradient set is an error") {
  CHECK_THROWS_AS(fit_gradient_directions({}, kAngleTolAnalytic), std::invalid_argument);
}

TEST_CASE("soundness: lifted profiles are detected with the construction direction") {
  UniformSampler sampler(29);
  const char* profile_names[] = {"exp", "sin", "poly"};
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 2;
    Vector a(n);
    for (int i = 0; i < n; ++i) a[i] = sampler.in(-1.0, 1.0);
    if (a.norm() < 0.3) a[0] += 1.0;

    const std::string which = profile_names[trial % 3];
    const Profile prof =
        which == "exp" ? Profile::analytic([](double t) { return std::exp(t); },
                                           [](double t) { return std::exp(t); },
                                           [](double t) { return std::exp(t); })
        : which == "sin" ? Profile::analytic([](double t) { return std::sin(t); },
                                             [](double t) { return std::cos(t); },
                                             [](double t) { return -std::sin(t); })
                         : Profile::analytic([](double t) { return t * t * t + t; },
                                             [](double t) { return 3.0 * t * t + 1.0; },
                                             [](double t) { return 6.0 * t; });
    ScalarField f = lift_profile(prof, a, sampler.in(-0.5, 0.5));
    const InvarianceFit fit =
        detect_translation_invariance(f, unit_grid(n, 5), kAngleTolAnalytic);
    CHECK(fit.verdict == InvarianceVerdict::Invariant);
    CHECK(std::abs(fit.direction.dot(a.normalized())) >= 1.0 - 1e-10);
  }
}

TEST_CASE("scale invariance: alpha f keeps the verdict and direction") {
  Vector a(2);
  a << 1.0, 2.0;
  ScalarField f = exp_linear(2, a);
  const InvarianceFit base =
      detect_translation_invariance(f, unit_grid(2, 5), kAngleTolAnalytic);
  for (double alpha : {2.0, -3.0, 1e-6}) {
    ScalarField scaled = ScalarField::analytic(
        2, [f, alpha](const Vector& x) { return alpha * f.value(x); },
        [f, alpha](const Vector& x) -> Vector { return alpha * f.gradient(x); },
        [f, alpha](const Vector& x) -> Matrix { return alpha * f.hessian(x); });
    const InvarianceFit fit =
        detect_translation_invariance(scaled, unit_grid(2, 5), kAngleTolAnalytic);
    CHECK(fit.verdict == base.verdict);
    CHECK((fit.direction - base.direction).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("proportionality: constants, reciprocity, and inconsistency") {
  {
    Vector a(2);
    a << 1.0, 2.0;
    const ProportionalityFit fit =
        proportionality_constants(exp_linear(2, a), unit_grid(2, 5));
    CHECK(fit.c(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.c(1, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.residual(0, 1) <= 1e-12);
  }
  {
    Vector a = Vector::Ones(2);
    const ProportionalityFit fit =
        proportionality_constants(exp_linear(2, a), unit_grid(2, 5));
    CHECK(fit.c(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.c(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    const ProportionalityFit fit = proportionality_constants(radial(2), unit_grid(2, 5));
    // Per-point ratios x1/x2 vary across the grid; the least-squares misfit
    // must be far above the invariant-field tolerance.
    CHECK(fit.residual(0, 1) > 1e-3);
  }
}

TEST_CASE("proportionality: undefined pairs are reported as NaN") {
  // Field depending on x1 only: f,2 == 0 everywhere, so c_12 is undefined.
  Vector a(2);
  a << 1.0, 0.0;
  const ProportionalityFit fit = proportionality_constants(exp_linear(2, a), unit_grid(2, 4));
  CHECK(std::isnan(fit.c(0, 1)));
  CHECK(fit.c(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("reciprocity on invariant verdicts: c_ij c_ji = 1") {
  UniformSampler sampler(31);
  for (int trial = 0; trial < 10; ++trial) {
    Vector a(3);
    for (int i = 0; i < 3; ++i) a[i] = sampler.in(0.2, 1.5);
    const InvarianceFit fit =
        detect_translation_invariance(exp_linear(3, a), unit_grid(3, 4), kAngleTolAnalytic);
    REQUIRE(fit.verdict == InvarianceVerdict::Invariant);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        CHECK(std::abs(fit.proportionality(i, j) * fit.proportionality(j, i) - 1.0) <= 1e-8);
      }
    }
  }
}

TEST_CASE("consistency: a_i = c_ij a_j for the fitted direction") {
  Vector a(3);
  a << 0.5, 1.0, 2.0;
  const InvarianceFit fit =
      detect_translation_invariance(exp_linear(3, a), unit_grid(3, 4), kAngleTolAnalytic);
  REQUIRE(fit.verdict == InvarianceVerdict::Invariant);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      CHECK(std::abs(fit.direction[i] - fit.proportionality(i, j) * fit.direction[j]) <=
            1e-10);
    }
  }
}

TEST_CASE("grid_sample_gradients: interior central differences") {
  GridSpec grid({{0.0, 1.0}, {0.0, 1.0}}, {5, 5});
  std::vector<double> values;
  for (long i = 0; i < grid.point_count(); ++i) {
    const Vector x = grid.point(i);
    values.push_back(2.0 * x[0] - 3.0 * x[1]);
  }
  const GridGradients gg = grid_sample_gradients(grid, values);
  CHECK(gg.points.size() == 9);  // 3 x 3 interior
  for (const Vector& g : gg.gradients) {
    CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(-3.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(grid_sample_gradients(grid, std::vector<double>(3, 0.0)),
                  std::invalid_argument);
}

}  // TEST_SUITE
