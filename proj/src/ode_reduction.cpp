#include "solitonforge/ode_reduction.hpp"

#include "solitonforge/soliton_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace solitonforge {

namespace {

void check_params(const OdeParams& p, const char* what) {
  if (p.m < 1) {
    throw std::invalid_argument(std::string(what) + ": fiber dimension m must be >= 1");
  }
  if (!std::isfinite(p.rho) || !std::isfinite(p.lambda_f) || !std::isfinite(p.k)) {
    throw std::invalid_argument(std::string(what) + ": parameters must be finite");
  }
  if (p.m == 1 && p.lambda_f != 0.0) {
    throw std::invalid_argument(std::string(what) +
                                ": a one-dimensional fiber forces lambda_f = 0");
  }
}

void check_step_span(double x1, double x_end, double step, const char* what) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument(std::string(what) + ": step must be finite and > 0");
  }
  if (!(x_end > x1)) {
    throw std::invalid_argument(std::string(what) + ": x_end must exceed init.x1");
  }
}

long step_count(double x1, double x_end, double step) {
  const long n = std::llround((x_end - x1) / step);
  return n < 1 ? 1 : n;
}

bool state_ok(double f, double fp) {
  return std::isfinite(f) && std::isfinite(fp) && std::abs(f) + std::abs(fp) <= kOdeOverflowGuard;
}

}  // namespace

std::string_view to_string(HaltReason r) {
  switch (r) {
    case HaltReason::ReachedEnd: return "reached_end";
    case HaltReason::FTooSmall: return "f_too_small";
    case HaltReason::BlowUp: return "blow_up";
  }
  return "unknown";
}

StateDerivative rhs_reduced(const OdeState& s, const OdeParams& p) {
  check_params(p, "rhs_reduced");
  if (!(s.f > kFMin)) {
    throw std::domain_error("rhs_reduced: f at or below the f_min threshold");
  }
  const double fpp =
      (p.lambda_f - (p.m - 1) * s.fp * s.fp + s.f * s.fp * s.h1p - p.rho * s.f * s.f) / s.f;
  const double h1pp = p.m * fpp / s.f + p.rho;
  return StateDerivative{s.fp, fpp, h1pp};
}

OdeTrajectory integrate_reduced(const OdeState& init, const OdeParams& p, double x_end,
                                double step) {
  check_params(p, "integrate_reduced");
  check_step_span(init.x1, x_end, step, "integrate_reduced");
  if (!(init.f > kFMin)) {
    throw std::domain_error("integrate_reduced: initial f at or below the f_min threshold");
  }

  OdeTrajectory traj;
  traj.step = step;
  traj.samples.push_back(init);

  // Stage evaluation that reports singular/overflowing intermediate states
  // instead of throwing, so the step can be rejected and the halt recorded.
  enum class StageStatus { Ok, Singular, Overflow };
  auto stage = [&p](const OdeState& s, StateDerivative& d) {
    if (!state_ok(s.f, s.fp)) return StageStatus::Overflow;
    if (!(s.f > kFMin)) return StageStatus::Singular;
    d = rhs_reduced(s, p);
    return StageStatus::Ok;
  };

  const long n_steps = step_count(init.x1, x_end, step);
  for (long i = 0; i < n_steps; ++i) {
    const OdeState& s = traj.samples.back();
    StateDerivative k1{}, k2{}, k3{}, k4{};
    StageStatus st = stage(s, k1);
    auto advance = [&](const StateDerivative& d, double frac) {
      return OdeState{s.x1 + frac * step, s.f + frac * step * d.fp,
                      s.fp + frac * step * d.fpp, s.h1p + frac * step * d.h1pp};
    };
    if (st == StageStatus::Ok) st = stage(advance(k1, 0.5), k2);
    if (st == StageStatus::Ok) st = stage(advance(k2, 0.5), k3);
    if (st == StageStatus::Ok) st = stage(advance(k3, 1.0), k4);
    if (st != StageStatus::Ok) {
      traj.halt = st == StageStatus::Singular ? HaltReason::FTooSmall : HaltReason::BlowUp;
      return traj;
    }

    OdeState next;
    next.x1 = init.x1 + (i + 1) * step;
    next.f = s.f + step / 6.0 * (k1.fp + 2.0 * k2.fp + 2.0 * k3.fp + k4.fp);
    next.fp = s.fp + step / 6.0 * (k1.fpp + 2.0 * k2.fpp + 2.0 * k3.fpp + k4.fpp);
    next.h1p = s.h1p + step / 6.0 * (k1.h1pp + 2.0 * k2.h1pp + 2.0 * k3.h1pp + k4.h1pp);

    if (!state_ok(next.f, next.fp) || !std::isfinite(next.h1p)) {
      traj.halt = HaltReason::BlowUp;
      return traj;
    }
    if (!(next.f > kFMin)) {
      if (next.f > 0.0) traj.samples.push_back(next);
      traj.halt = HaltReason::FTooSmall;
      return traj;
    }
    traj.samples.push_back(next);
  }
  traj.halt = HaltReason::ReachedEnd;
  return traj;
}

OdeTrajectory integrate_m1(const OdeState& init, const OdeParams& p, double x_end,
                           double step) {
  check_params(p, "integrate_m1");
  if (p.m != 1) {
    throw std::invalid_argument("integrate_m1: requires m = 1");
  }
  if (p.lambda_f != 0.0) {
    throw std::invalid_argument("integrate_m1: requires lambda_f = 0");
  }
  if (p.k == 0.0) {
    throw std::invalid_argument("integrate_m1: requires k != 0");
  }
  check_step_span(init.x1, x_end, step, "integrate_m1");
  if (!(init.f > kFMin)) {
    throw std::domain_error("integrate_m1: initial f at or below the f_min threshold");
  }
  if (std::abs(init.h1p - p.k * init.f) > 1e-9 * std::max(1.0, std::abs(p.k * init.f))) {
    throw std::invalid_argument("integrate_m1: init must satisfy h1p = k * f");
  }

  OdeTrajectory traj;
  traj.step = step;
  traj.samples.push_back(OdeState{init.x1, init.f, init.fp, p.k * init.f});

  struct Pair {
    double f, fp;
  };
  auto rhs = [&p](const Pair& s) {
    return Pair{s.fp, p.k * s.f * s.fp - p.rho * s.f};
  };

  const long n_steps = step_count(init.x1, x_end, step);
  for (long i = 0; i < n_steps; ++i) {
    const OdeState& s = traj.samples.back();
    const Pair y{s.f, s.fp};
    bool bad = false;
    auto guarded = [&bad](const Pair& q) {
      if (!state_ok(q.f, q.fp)) bad = true;
      return q;
    };
    const Pair k1 = rhs(guarded(y));
    const Pair k2 = rhs(guarded({y.f + 0.5 * step * k1.f, y.fp + 0.5 * step * k1.fp}));
    const Pair k3 = rhs(guarded({y.f + 0.5 * step * k2.f, y.fp + 0.5 * step * k2.fp}));
    const Pair k4 = rhs(guarded({y.f + step * k3.f, y.fp + step * k3.fp}));
    if (bad) {
      traj.halt = HaltReason::BlowUp;
      return traj;
    }

    OdeState next;
    next.x1 = init.x1 + (i + 1) * step;
    next.f = y.f + step / 6.0 * (k1.f + 2.0 * k2.f + 2.0 * k3.f + k4.f);
    next.fp = y.fp + step / 6.0 * (k1.fp + 2.0 * k2.fp + 2.0 * k3.fp + k4.fp);
    next.h1p = p.k * next.f;

    if (!state_ok(next.f, next.fp)) {
      traj.halt = HaltReason::BlowUp;
      return traj;
    }
    if (!(next.f > kFMin)) {
      if (next.f > 0.0) traj.samples.push_back(next);
      traj.halt = HaltReason::FTooSmall;
      return traj;
    }
    traj.samples.push_back(next);
  }
  traj.halt = HaltReason::ReachedEnd;
  return traj;
}

double check_trajectory(const OdeTrajectory& t, const OdeParams& p) {
  check_params(p, "check_trajectory");
  if (t.samples.size() < 5) {
    throw std::invalid_argument("check_trajectory: need at least 5 samples");
  }
  if (!(t.step > 0.0)) {
    throw std::invalid_argument("check_trajectory: trajectory step must be > 0");
  }

  const double h = t.step;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < t.samples.size(); ++i) {
    const OdeState& s = t.samples[i];
    const double fm2 = t.samples[i - 2].f;
    const double fm1 = t.samples[i - 1].f;
    const double fp1 = t.samples[i + 1].f;
    const double fp2 = t.samples[i + 2].f;
    const double fpp =
        (-fp2 + 16.0 * fp1 - 30.0 * s.f + 16.0 * fm1 - fm2) / (12.0 * h * h);
    const double h1pp = (t.samples[i - 2].h1p - 8.0 * t.samples[i - 1].h1p +
                         8.0 * t.samples[i + 1].h1p - t.samples[i + 2].h1p) /
                        (12.0 * h);
    const double eq1 = p.lambda_f - s.f * fpp - (p.m - 1) * s.fp * s.fp +
                       s.f * s.fp * s.h1p - p.rho * s.f * s.f;
    const double eq2 = s.f * h1pp - p.m * fpp - p.rho * s.f;
    const double scale =
        std::max({1.0, std::abs(p.rho) * s.f * s.f, std::abs(p.lambda_f)});
    worst = std::max(worst, std::max(std::abs(eq1), std::abs(eq2)) / scale);
  }
  return worst;
}

}  // namespace solitonforge
