#include "solitonforge/closed_forms.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace solitonforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector zero_or_sized(const Vector& v, int n, const char* what) {
  if (v.size() == 0) return Vector::Zero(n);
  if (v.size() != n) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) +
                                " entries, got " + std::to_string(v.size()));
  }
  return v;
}

std::vector<double> zero_or_sized(std::vector<double> v, std::size_t len, const char* what) {
  if (v.empty()) return std::vector<double>(len, 0.0);
  if (v.size() != len) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(len) +
                                " entries, got " + std::to_string(v.size()));
  }
  return v;
}

void require_nonzero_pair(double c1, double c2, const char* what) {
  if (c1 == 0.0 && c2 == 0.0) {
    throw std::invalid_argument(std::string(what) + ": (c1, c2) must not both be zero");
  }
}

void require_fiber_dim(int m, const char* what) {
  if (m < 1) {
    throw std::invalid_argument(std::string(what) + ": fiber dimension m must be >= 1");
  }
}

}  // namespace

void validate(const WarpedSolitonSpec& spec) {
  if (spec.n < 2) {
    throw std::invalid_argument("WarpedSolitonSpec: base dimension n must be >= 2");
  }
  if (spec.m < 1) {
    throw std::invalid_argument("WarpedSolitonSpec: fiber dimension m must be >= 1");
  }
  if (!std::isfinite(spec.rho) || !std::isfinite(spec.lambda_f)) {
    throw std::invalid_argument("WarpedSolitonSpec: rho and lambda_f must be finite");
  }
}

ScalarField gaussian_potential(const GaussianParams& p, int n) {
  if (n < 2) {
    throw std::invalid_argument("gaussian_potential: n must be >= 2");
  }
  const double A = p.A;
  const double C = p.C;
  const Vector B = zero_or_sized(p.B, n, "gaussian_potential: B");
  return ScalarField::analytic(
      n,
      [A, B, C](const Vector& x) { return 0.5 * A * x.squaredNorm() + B.dot(x) + C; },
      [A, B](const Vector& x) -> Vector { return A * x + B; },
      [A, n](const Vector&) -> Matrix { return A * Matrix::Identity(n, n); });
}

SolitonBundle family_gaussian(const GaussianParams& p, int n, int m) {
  require_fiber_dim(m, "family_gaussian");
  ScalarField h = gaussian_potential(p, n);
  ScalarField one = ScalarField::analytic(
      n, [](const Vector&) { return 1.0; },
      [n](const Vector&) -> Vector { return Vector::Zero(n); },
      [n](const Vector&) -> Matrix { return Matrix::Zero(n, n); });
  WarpedSolitonSpec spec{n, m, p.A, p.A};
  validate(spec);
  return SolitonBundle{"gaussian", std::move(one), std::move(h), spec,
                       std::vector<AxisRange>(n, AxisRange{-1.0, 1.0})};
}

SolitonBundle family_exp_translation(int n, const ExpTranslationParams& p) {
  if (n < 2) {
    throw std::invalid_argument("family_exp_translation: n must be >= 2");
  }
  if (!(p.a > 0.0)) {
    throw std::invalid_argument("family_exp_translation: a must be > 0");
  }
  if (p.a1 == 0.0 && p.a2 == 0.0) {
    throw std::invalid_argument("family_exp_translation: a1 and a2 must not both be zero");
  }
  require_fiber_dim(p.m, "family_exp_translation");
  const Vector c = zero_or_sized(p.c, n, "family_exp_translation: c");
  const double csum = c.sum();
  if (std::abs(csum) > 1e-12 * std::max(1.0, c.cwiseAbs().sum())) {
    throw std::invalid_argument("family_exp_translation: coefficients c must sum to 0");
  }

  const double mu = std::sqrt(p.a / p.m);
  const double a1 = p.a1;
  const double a2 = p.a2;
  ScalarField f = ScalarField::analytic(
      n,
      [a1, a2, mu](const Vector& x) {
        const double xi = x.sum();
        return a1 * std::exp(mu * xi) + a2 * std::exp(-mu * xi);
      },
      [a1, a2, mu, n](const Vector& x) -> Vector {
        const double xi = x.sum();
        const double slope = mu * (a1 * std::exp(mu * xi) - a2 * std::exp(-mu * xi));
        return Vector::Constant(n, slope);
      },
      [a1, a2, mu, n](const Vector& x) -> Matrix {
        const double xi = x.sum();
        const double curv = mu * mu * (a1 * std::exp(mu * xi) + a2 * std::exp(-mu * xi));
        return Matrix::Constant(n, n, curv);
      });

  const double a = p.a;
  const double b = p.b;
  ScalarField h = ScalarField::analytic(
      n,
      [a, b, c, n](const Vector& x) {
        double quad = 0.0;
        double cross = 0.0;
        for (int k = 0; k < n; ++k) {
          quad += x[k] * x[k];
          for (int l = k + 1; l < n; ++l) cross += x[k] * x[l];
        }
        return -0.5 * (n - 1) * a * quad + a * cross + c.dot(x) + b;
      },
      [a, c, n](const Vector& x) -> Vector {
        const double s = x.sum();
        return Vector::Constant(n, a * s) - n * a * x + c;
      },
      [a, n](const Vector&) -> Matrix {
        return a * (Matrix::Constant(n, n, 1.0) - n * Matrix::Identity(n, n));
      });

  WarpedSolitonSpec spec;
  spec.n = n;
  spec.m = p.m;
  spec.rho = -static_cast<double>(n) * a;
  spec.lambda_f = 4.0 * a1 * a2 * spec.rho * (p.m - 1) / p.m;
  validate(spec);
  return SolitonBundle{"exp_translation", std::move(f), std::move(h), spec,
                       std::vector<AxisRange>(n, AxisRange{-1.0, 1.0})};
}

ProfileFamily family_ode_expanding(const OdeFamilyParams& p) {
  require_fiber_dim(p.m, "family_ode_expanding");
  require_nonzero_pair(p.c1, p.c2, "family_ode_expanding");
  if (!(p.rho < 0.0)) {
    throw std::invalid_argument("family_ode_expanding: rho must be < 0");
  }
  const double mu = std::sqrt(-p.rho / p.m);
  const double c1 = p.c1;
  const double c2 = p.c2;
  Profile f = Profile::analytic(
      [c1, c2, mu](double x) { return c1 * std::exp(mu * x) + c2 * std::exp(-mu * x); },
      [c1, c2, mu](double x) {
        return mu * (c1 * std::exp(mu * x) - c2 * std::exp(-mu * x));
      },
      [c1, c2, mu](double x) {
        return mu * mu * (c1 * std::exp(mu * x) + c2 * std::exp(-mu * x));
      });

  Interval positivity{-kInf, kInf};
  if (c1 > 0.0 && c2 < 0.0) {
    positivity = {std::log(-c2 / c1) / (2.0 * mu), kInf};
  } else if (c1 < 0.0 && c2 > 0.0) {
    positivity = {-kInf, std::log(-c2 / c1) / (2.0 * mu)};
  } else if (c1 <= 0.0 && c2 <= 0.0) {
    throw std::domain_error("family_ode_expanding: empty positivity domain");
  }

  const double lambda_f = 4.0 * c1 * c2 * (p.m - 1) * p.rho / p.m;
  return ProfileFamily{std::move(f), p.m, p.rho, lambda_f, positivity};
}

ProfileFamily family_ode_steady(const OdeFamilyParams& p) {
  require_fiber_dim(p.m, "family_ode_steady");
  require_nonzero_pair(p.c1, p.c2, "family_ode_steady");
  const double c1 = p.c1;
  const double c2 = p.c2;
  Profile f = Profile::analytic([c1, c2](double x) { return c1 + c2 * x; },
                                [c2](double) { return c2; }, [](double) { return 0.0; });

  Interval positivity{-kInf, kInf};
  if (c2 > 0.0) {
    positivity = {-c1 / c2, kInf};
  } else if (c2 < 0.0) {
    positivity = {-kInf, -c1 / c2};
  } else if (c1 <= 0.0) {
    throw std::domain_error("family_ode_steady: empty positivity domain");
  }

  const double lambda_f = (p.m - 1) * c2 * c2;
  return ProfileFamily{std::move(f), p.m, 0.0, lambda_f, positivity};
}

ProfileFamily family_ode_shrinking(const OdeFamilyParams& p) {
  require_fiber_dim(p.m, "family_ode_shrinking");
  require_nonzero_pair(p.c1, p.c2, "family_ode_shrinking");
  if (!(p.rho > 0.0)) {
    throw std::invalid_argument("family_ode_shrinking: rho must be > 0");
  }
  const double mu = std::sqrt(p.rho / p.m);
  const double c1 = p.c1;
  const double c2 = p.c2;
  Profile f = Profile::analytic(
      [c1, c2, mu](double x) { return c1 * std::sin(mu * x) + c2 * std::cos(mu * x); },
      [c1, c2, mu](double x) {
        return mu * (c1 * std::cos(mu * x) - c2 * std::sin(mu * x));
      },
      [c1, c2, mu](double x) {
        return -mu * mu * (c1 * std::sin(mu * x) + c2 * std::cos(mu * x));
      });

  // f = R cos(mu x - phi); positive on the component around its maximum.
  const double phi = std::atan2(c1, c2);
  const double half = std::numbers::pi / 2.0;
  Interval positivity{(phi - half) / mu, (phi + half) / mu};

  const double lambda_f = (p.m - 1) * (c1 * c1 + c2 * c2) * p.rho / p.m;
  return ProfileFamily{std::move(f), p.m, p.rho, lambda_f, positivity};
}

ScalarField lift_profile(const Profile& p, const Vector& a, double b) {
  if (a.size() < 2) {
    throw std::invalid_argument("lift_profile: direction must have dimension >= 2");
  }
  if (a.isZero(0.0)) {
    throw std::invalid_argument("lift_profile: direction must be nonzero");
  }
  const int n = static_cast<int>(a.size());
  const Vector dir = a;
  return ScalarField::analytic(
      n, [p, dir, b](const Vector& x) { return p.value(dir.dot(x) + b); },
      [p, dir, b](const Vector& x) -> Vector {
        return p.derivative(dir.dot(x) + b) * dir;
      },
      [p, dir, b](const Vector& x) -> Matrix {
        return p.second_derivative(dir.dot(x) + b) * (dir * dir.transpose());
      });
}

ScalarField reduced_potential(const Profile& h1, double rho,
                              const std::vector<double>& a_coeffs,
                              const std::vector<double>& b_coeffs, int n) {
  if (n < 2) {
    throw std::invalid_argument("reduced_potential: n must be >= 2");
  }
  const auto tail = static_cast<std::size_t>(n - 1);
  const std::vector<double> ak = zero_or_sized(a_coeffs, tail, "reduced_potential: a_coeffs");
  const std::vector<double> bk = zero_or_sized(b_coeffs, tail, "reduced_potential: b_coeffs");
  return ScalarField::analytic(
      n,
      [h1, rho, ak, bk](const Vector& x) {
        double acc = h1.value(x[0]);
        for (Eigen::Index k = 1; k < x.size(); ++k) {
          acc += 0.5 * rho * x[k] * x[k] + ak[k - 1] * x[k] + bk[k - 1];
        }
        return acc;
      },
      [h1, rho, ak](const Vector& x) -> Vector {
        Vector g(x.size());
        g[0] = h1.derivative(x[0]);
        for (Eigen::Index k = 1; k < x.size(); ++k) {
          g[k] = rho * x[k] + ak[k - 1];
        }
        return g;
      },
      [h1, rho](const Vector& x) -> Matrix {
        Matrix h = rho * Matrix::Identity(x.size(), x.size());
        h(0, 0) = h1.second_derivative(x[0]);
        return h;
      });
}

SolitonBundle lift_ode_family(const ProfileFamily& family, int n, AxisRange x1_range,
                              double h1_const, std::vector<double> a_coeffs,
                              std::vector<double> b_coeffs) {
  if (n < 2) {
    throw std::invalid_argument("lift_ode_family: n must be >= 2");
  }
  if (!(x1_range.lo >= family.positivity.lo && x1_range.hi <= family.positivity.hi)) {
    throw std::invalid_argument("lift_ode_family: x1 range must lie in the positivity interval");
  }
  Vector e1 = Vector::Zero(n);
  e1[0] = 1.0;
  ScalarField f = lift_profile(family.f, e1, 0.0);
  Profile h1 = Profile::analytic([h1_const](double) { return h1_const; },
                                 [](double) { return 0.0; }, [](double) { return 0.0; });
  ScalarField h = reduced_potential(h1, family.rho, a_coeffs, b_coeffs, n);
  WarpedSolitonSpec spec{n, family.m, family.rho, family.lambda_f};
  validate(spec);
  std::vector<AxisRange> box(n, AxisRange{-1.0, 1.0});
  box[0] = x1_range;
  return SolitonBundle{"ode_family", std::move(f), std::move(h), spec, std::move(box)};
}

std::vector<SolitonBundle> catalog() {
  std::vector<SolitonBundle> out;

  {
    GaussianParams g;
    g.A = -1.0;
    g.B = Vector(2);
    g.B << 0.5, -0.25;
    g.C = 0.7;
    out.push_back(family_gaussian(g, 2, 2));
    out.back().name = "gaussian_expanding";
  }
  {
    GaussianParams g;
    g.A = 0.0;
    g.B = Vector(2);
    g.B << 1.0, 2.0;
    out.push_back(family_gaussian(g, 2, 1));
    out.back().name = "gaussian_steady";
  }
  {
    GaussianParams g;
    g.A = 1.0;
    g.C = -2.0;
    out.push_back(family_gaussian(g, 3, 2));
    out.back().name = "gaussian_shrinking";
  }

  {
    ExpTranslationParams p;
    p.m = 2;
    out.push_back(family_exp_translation(2, p));
    out.back().name = "exp_translation_base";
  }
  {
    ExpTranslationParams p;
    p.a = 0.5;
    p.a1 = 2.0;
    p.a2 = 0.5;
    p.c = Vector(3);
    p.c << 0.3, -0.5, 0.2;
    p.b = 1.5;
    p.m = 2;
    out.push_back(family_exp_translation(3, p));
    out.back().name = "exp_translation_general";
  }
  {
    ExpTranslationParams p;
    p.a1 = 0.0;
    p.a2 = 2.0;
    p.c = Vector(2);
    p.c << 0.25, -0.25;
    p.b = -1.0;
    p.m = 1;
    out.push_back(family_exp_translation(2, p));
    out.back().name = "exp_translation_m1";
  }

  {
    OdeFamilyParams p{1.0, 1.0, 2, -2.0};
    out.push_back(lift_ode_family(family_ode_expanding(p), 2, {-1.0, 1.0}, 0.5, {0.25}, {-1.0}));
    out.back().name = "ode_expanding_lifted";
  }
  {
    OdeFamilyParams p{1.0, 1.0, 3, 0.0};
    out.push_back(lift_ode_family(family_ode_steady(p), 2, {-0.5, 1.0}));
    out.back().name = "ode_steady_lifted";
  }
  {
    OdeFamilyParams p{0.0, 1.0, 2, 2.0};
    out.push_back(lift_ode_family(family_ode_shrinking(p), 2, {-1.0, 1.0}));
    out.back().name = "ode_shrinking_lifted";
  }
  {
    OdeFamilyParams p{1.0, 2.0, 3, 3.0};
    out.push_back(lift_ode_family(family_ode_shrinking(p), 3, {-0.8, 1.7}, -0.5, {0.1, 0.0}, {0.0, 2.0}));
    out.back().name = "ode_shrinking_lifted_3d";
  }

  return out;
}

}  // namespace solitonforge
