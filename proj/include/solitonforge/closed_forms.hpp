#pragma once

#include "solitonforge/fields.hpp"

#include <string>
#include <vector>

namespace solitonforge {

/// Dimensions and constants of a warped-product soliton problem: Euclidean
/// base R^n, fiber of dimension m with Einstein constant lambda_f, and the
/// soliton constant rho.
struct WarpedSolitonSpec {
  int n = 2;
  int m = 1;
  double rho = 0.0;
  double lambda_f = 0.0;
};

/// Throws std::invalid_argument unless n >= 2, m >= 1 and the constants are
/// finite.
void validate(const WarpedSolitonSpec& spec);

/// A ready-to-verify (f, h) pair with its spec and a sampling box on which
/// f stays positive.
struct SolitonBundle {
  std::string name;
  ScalarField f;
  ScalarField h;
  WarpedSolitonSpec spec;
  std::vector<AxisRange> box;
};

struct GaussianParams {
  double A = 0.0;
  Vector B;  // empty means zero
  double C = 0.0;
};

/// Quadratic potential h(x) = A|x|^2/2 + <B,x> + C with analytic derivatives
/// (gradient Ax+B, Hessian A*I).
ScalarField gaussian_potential(const GaussianParams& p, int n);

/// The trivial product soliton: f == 1, h the quadratic potential with A=rho,
/// lambda_f = rho.
SolitonBundle family_gaussian(const GaussianParams& p, int n, int m);

/// Parameters of the exponential translation-invariant family:
/// f = a1 e^{sqrt(a/m) xi} + a2 e^{-sqrt(a/m) xi} with xi = sum_k x_k.
struct ExpTranslationParams {
  double a = 1.0;
  double a1 = 1.0;
  double a2 = 1.0;
  Vector c;  // linear coefficients of h, must sum to 0; empty means zero
  double b = 0.0;
  int m = 1;  // fiber dimension
};

/// Builds the expanding family with rho = -n a and
/// lambda_f = 4 a1 a2 rho (m-1)/m, all derivatives analytic.
/// f > 0 holds globally when a1 >= 0 and a2 >= 0 (not both zero); for mixed
/// signs the caller must keep evaluation inside the positivity region.
SolitonBundle family_exp_translation(int n, const ExpTranslationParams& p);

struct OdeFamilyParams {
  double c1 = 0.0;
  double c2 = 0.0;
  int m = 1;
  double rho = 0.0;
};

/// Open interval, possibly unbounded.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A one-variable warping profile together with the constants that make it a
/// soliton and the interval where it is positive.
struct ProfileFamily {
  Profile f;
  int m = 1;
  double rho = 0.0;
  double lambda_f = 0.0;
  Interval positivity;
};

/// rho < 0: f = c1 e^{mu x} + c2 e^{-mu x}, mu = sqrt(-rho/m),
/// lambda_f = 4 c1 c2 (m-1) rho / m (fixed by re-substitution into the
/// reduced system; the published closed form disagrees and fails the
/// residual check — see the regression tests).
ProfileFamily family_ode_expanding(const OdeFamilyParams& p);

/// rho = 0: f = c1 + c2 x, lambda_f = (m-1) c2^2. p.rho is ignored.
ProfileFamily family_ode_steady(const OdeFamilyParams& p);

/// rho > 0: f = c1 sin(mu x) + c2 cos(mu x), mu = sqrt(rho/m),
/// lambda_f = (m-1)(c1^2+c2^2) rho / m. The reported positivity interval is
/// the component around the profile's maximum.
ProfileFamily family_ode_shrinking(const OdeFamilyParams& p);

/// x -> P(<a,x> + b) with chain-rule derivatives grad = P' a,
/// Hess = P'' a a^T. Requires a != 0 and a.size() >= 2.
ScalarField lift_profile(const Profile& p, const Vector& a, double b);

/// Canonical reduced potential
///   h(x) = h1(x_1) + sum_{k=2..n} (rho/2 x_k^2 + a_k x_k + b_k).
/// a_coeffs and b_coeffs list the k = 2..n coefficients (n-1 entries each;
/// empty means zero).
ScalarField reduced_potential(const Profile& h1, double rho,
                              const std::vector<double>& a_coeffs,
                              const std::vector<double>& b_coeffs, int n);

/// Lifts a one-variable family to an n-dimensional bundle: f depends on x_1
/// only and h is the canonical reduced potential with constant h1. The x_1
/// range must lie inside the family's positivity interval.
SolitonBundle lift_ode_family(const ProfileFamily& family, int n, AxisRange x1_range,
                              double h1_const = 0.0,
                              std::vector<double> a_coeffs = {},
                              std::vector<double> b_coeffs = {});

/// Representative instances of every closed-form family, with analytic
/// derivatives and boxes on which f > 0. Used by the verification tests.
std::vector<SolitonBundle> catalog();

}  // namespace solitonforge
