#include "nagumo/rotation.hpp"

#include <cmath>
#include <numbers>

#include "nagumo/numerics.hpp"

namespace nagumo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

double principal(double d) {
  while (d > kPi) d -= 2.0 * kPi;
  while (d <= -kPi) d += 2.0 * kPi;
  return d;
}

struct Unwrapper {
  const std::function<PhaseState(double)>& pos;
  PhaseState q0;
  double rho_floor;
  AngleRecord rec;

  double raw_angle(PhaseState z, double t) {
    const PhaseState d = z - q0;
    const double rho = d.norm();
    if (rho < rho_floor)
      throw AngleUndefinedError(
          "trajectory hits the reference point (distance below the angular floor)",
          t);
    rec.rho_min = std::min(rec.rho_min, rho);
    return std::atan2(d.y, d.x);
  }

  // appends nodes in (ta, tb] so that every increment is below pi/2
  void refine(double ta, double th_a, double raw_a, double tb, int depth) {
    const double raw_b = raw_angle(pos(tb), tb);
    const double delta = principal(raw_b - raw_a);
    if (std::abs(delta) < kHalfPi || depth <= 0) {
      if (depth <= 0 && std::abs(delta) >= kHalfPi)
        throw AngleUndefinedError(
            "angle refinement exhausted; trajectory passes too close to the reference point",
            tb);
      rec.t.push_back(tb);
      rec.theta.push_back(th_a + delta);
      return;
    }
    const double tm = 0.5 * (ta + tb);
    refine(ta, th_a, raw_a, tm, depth - 1);
    refine(tm, rec.theta.back(), raw_angle(pos(tm), tm), tb, depth - 1);
  }
};

}  // namespace

double AngleRecord::max_increment() const {
  double m = 0.0;
  for (size_t i = 1; i < theta.size(); ++i)
    m = std::max(m, std::abs(theta[i] - theta[i - 1]));
  return m;
}

AngleRecord unwrap_path(const std::function<PhaseState(double)>& pos, double t0,
                        double t1, PhaseState q0, double rho_floor) {
  // initial node count keeps typical increments well under pi/2 already;
  // the recursive refinement guarantees the bound
  const int n0 = 64;
  Unwrapper u{pos, q0, rho_floor, {}};
  u.rec.q0 = q0;
  u.rec.rho_min = std::numeric_limits<double>::infinity();
  double th = u.raw_angle(pos(t0), t0);
  u.rec.t.push_back(t0);
  u.rec.theta.push_back(th);
  for (int i = 0; i < n0; ++i) {
    const double ta = t0 + (t1 - t0) * i / n0;
    const double tb = t0 + (t1 - t0) * (i + 1) / n0;
    const double raw_a = std::remainder(u.rec.theta.back(), 2.0 * kPi);
    u.refine(ta, u.rec.theta.back(), raw_a, tb, 48);
  }
  return std::move(u.rec);
}

AngleRecord unwrap_angle(const Trajectory& traj, PhaseState q0,
                         double rho_floor) {
  // base nodes at accepted step boundaries keep the refinement shallow
  const std::function<PhaseState(double)> f = [&traj](double t) {
    return traj.state_at(t);
  };
  Unwrapper w{f, q0, rho_floor, {}};
  w.rec.q0 = q0;
  w.rec.rho_min = std::numeric_limits<double>::infinity();
  const double t0 = traj.t_begin();
  w.rec.t.push_back(t0);
  w.rec.theta.push_back(w.raw_angle(traj.state_at(t0), t0));
  double prev_t = t0;
  for (const auto& step : traj.steps()) {
    const double tb = step.t + step.h;
    const double raw_a = std::remainder(w.rec.theta.back(), 2.0 * kPi);
    w.refine(prev_t, w.rec.theta.back(), raw_a, tb, 48);
    prev_t = tb;
  }
  if (prev_t < traj.t_end()) {
    const double raw_a = std::remainder(w.rec.theta.back(), 2.0 * kPi);
    w.refine(prev_t, w.rec.theta.back(), raw_a, traj.t_end(), 48);
  }
  return std::move(w.rec);
}

double rot_m(PhaseState z0, PhaseState q0, int m, const SystemParams& p,
             const IntegratorSettings& s) {
  if (m < 1) throw Error("rot_m: m must be >= 1");
  const Trajectory traj = integrate(z0, 0.0, m * p.weight.beta(), p, s);
  return unwrap_angle(traj, q0).rot();
}

double rot_integral(PhaseState z0, PhaseState q0, int m, const SystemParams& p,
                    const IntegratorSettings& s) {
  if (m < 1) throw Error("rot_integral: m must be >= 1");
  const Trajectory traj = integrate(z0, 0.0, m * p.weight.beta(), p, s);
  const auto integrand = [&](double t) {
    const PhaseState z = traj.state_at(t);
    const double num = z.y * z.y + z.x * hval(p, t, z.x);
    const double dx = z.x - q0.x, dy = z.y - q0.y;
    const double rho2 = dx * dx + dy * dy;
    if (rho2 < kRhoFloor * kRhoFloor)
      throw AngleUndefinedError("rot_integral: trajectory hits the reference point", t);
    return num / rho2;
  };
  // quadrature per accepted step: the integrand is smooth inside each step
  // because steps never straddle weight breakpoints
  double acc = 0.0;
  for (const auto& step : traj.steps())
    acc += gl_integrate(integrand, step.t, step.t + step.h, 12);
  return acc / (2.0 * kPi);
}

double trajectory_min_distance(const Trajectory& traj, PhaseState q0) {
  double best = std::numeric_limits<double>::infinity();
  double best_t = traj.t_begin();
  for (const auto& step : traj.steps()) {
    for (int i = 0; i <= 8; ++i) {
      const double t = step.t + step.h * i / 8.0;
      const double d = distance(step.eval(t), q0);
      if (d < best) {
        best = d;
        best_t = t;
      }
    }
  }
  best = std::min(best, distance(traj.back(), q0));
  // local golden refinement around the sampled minimum
  const double h = 0.2;
  const double lo = std::max(traj.t_begin(), best_t - h);
  const double hi = std::min(traj.t_end(), best_t + h);
  const double t_ref = golden_max(
      [&](double t) { return -distance(traj.state_at(t), q0); }, lo, hi, 1e-12);
  return std::min(best, distance(traj.state_at(t_ref), q0));
}

std::pair<double, int> circle_max_rot(double radius, PhaseState q0, int m,
                                      const SystemParams& p,
                                      const IntegratorSettings& s,
                                      int n_samples, int max_samples) {
  int n = n_samples;
  while (true) {
    std::vector<double> rots(n);
    std::vector<char> failed(n, 0);
    parallel_for(n, [&](int i) {
      const double ang = 2.0 * kPi * i / n;
      const PhaseState z{radius * std::cos(ang), radius * std::sin(ang)};
      try {
        rots[i] = rot_m(z, q0, m, p, s);
      } catch (const AngleUndefinedError&) {
        failed[i] = 1;
      }
    });
    double mx = -std::numeric_limits<double>::infinity();
    bool any_fail = false;
    double max_gap = 0.0;
    for (int i = 0; i < n; ++i) {
      if (failed[i]) {
        any_fail = true;
        continue;
      }
      mx = std::max(mx, rots[i]);
      const int j = (i + 1) % n;
      if (!failed[j]) max_gap = std::max(max_gap, std::abs(rots[j] - rots[i]));
    }
    if (any_fail) return {std::numeric_limits<double>::infinity(), n};
    if (max_gap <= 0.25 || 2 * n > max_samples) return {mx, n};
    n *= 2;
  }
}

OuterRadiusResult outer_radius_search(PhaseState q0, int m,
                                      const SystemParams& p,
                                      const IntegratorSettings& s,
                                      const OuterRadiusOptions& opt) {
  if (q0.norm() > 1.0)
    throw HypothesisError("outer_radius_search: reference point must satisfy |q0| <= 1");
  if (m < 1) throw Error("outer_radius_search: m must be >= 1");
  double r = opt.r_init;
  while (r <= opt.r_max) {
    const auto [mx, n] = circle_max_rot(r, q0, m, p, s, opt.n_samples, opt.max_samples);
    if (mx < opt.margin) return {r, mx, n};
    r *= 2.0;
  }
  throw SearchError("outer_radius_search: slow-rotation radius not found below r_max");
}

}  // namespace nagumo
