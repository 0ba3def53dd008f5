#pragma once

#include <string_view>
#include <vector>

namespace solitonforge {

/// Constants of the reduced one-variable system. `k` is only meaningful for
/// the m = 1 path, where h1' = k f and lambda_f must be 0.
struct OdeParams {
  int m = 1;
  double rho = 0.0;
  double lambda_f = 0.0;
  double k = 0.0;
};

struct OdeState {
  double x1 = 0.0;
  double f = 0.0;
  double fp = 0.0;   // f'
  double h1p = 0.0;  // h1'
};

enum class HaltReason { ReachedEnd, FTooSmall, BlowUp };

std::string_view to_string(HaltReason r);

/// Uniformly sampled integration output. x1 is strictly increasing with
/// consecutive samples exactly `step` apart; every sample has f > 0.
struct OdeTrajectory {
  std::vector<OdeState> samples;
  double step = 0.0;
  HaltReason halt = HaltReason::ReachedEnd;
};

struct StateDerivative {
  double fp = 0.0;
  double fpp = 0.0;
  double h1pp = 0.0;
};

/// Derivative of (f, f', h1') under the reduced system, with the
/// second-order equation solved for f'':
///   f''  = [lambda_f - (m-1)(f')^2 + f f' h1' - rho f^2] / f
///   h1'' = m f'' / f + rho
/// Solving for f'' (rather than h1') keeps critical points of f regular.
/// Throws std::domain_error when f <= kFMin.
StateDerivative rhs_reduced(const OdeState& s, const OdeParams& p);

/// Integration halts when |f| + |f'| exceeds this bound.
inline constexpr double kOdeOverflowGuard = 1e12;

/// Classical fixed-step RK4 on (f, f', h1'). The span [init.x1, x_end] is
/// covered by round((x_end - init.x1)/step) >= 1 steps of exactly `step`.
/// Halts early (with the reason recorded) if the warping function reaches
/// the f_min threshold or the overflow guard trips; no sample with f <= 0
/// is ever emitted.
OdeTrajectory integrate_reduced(const OdeState& init, const OdeParams& p,
                                double x_end, double step);

/// m = 1 path: integrates f'' = k f f' - rho f (the form obtained by
/// substituting h1' = k f back into the system; the published equation
/// carries the opposite sign on the rho term and fails re-substitution) and
/// maintains h1' = k f algebraically along the trajectory. Requires m = 1,
/// lambda_f = 0, k != 0, and an init consistent with h1p = k f.
OdeTrajectory integrate_m1(const OdeState& init, const OdeParams& p, double x_end,
                           double step);

/// Re-substitution certificate: differentiates the sampled trajectory with
/// 5-point central stencils (f'' from the f column, h1'' from the h1'
/// column) and returns the max residual of both system equations over
/// interior samples, scaled by max(1, |rho| f^2, |lambda_f|). Requires >= 5
/// samples.
double check_trajectory(const OdeTrajectory& t, const OdeParams& p);

}  // namespace solitonforge
