#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "nagumo/errors.hpp"
#include "nagumo/model.hpp"

namespace nagumo {

/// Point of the phase plane: x is the state variable, y its derivative.
struct PhaseState {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  friend PhaseState operator+(PhaseState a, PhaseState b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend PhaseState operator-(PhaseState a, PhaseState b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend PhaseState operator*(double c, PhaseState a) {
    return {c * a.x, c * a.y};
  }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(PhaseState a, PhaseState b) { return (a - b).norm(); }

struct IntegratorSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.25;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2) || !(abs_tol > 0.0 && abs_tol <= 1e-2))
      throw ConfigError("integrator tolerances must lie in (0, 1e-2]");
    if (!(max_step > 0.0)) throw ConfigError("max_step must be positive");
  }

  IntegratorSettings tightened(double factor) const {
    return {rel_tol / factor, abs_tol / factor, max_step};
  }
};

/// Dense solution path on [t0, t1]: accepted steps with quartic interpolation
/// coefficients, evaluable anywhere in between.
class Trajectory {
 public:
  struct Step {
    double t, h;
    PhaseState r1, r2, r3, r4, r5;  // continuous-extension coefficients

    PhaseState eval(double tq) const {
      const double th = (tq - t) / h;
      const double th1 = 1.0 - th;
      return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
  };

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  PhaseState front() const { return steps_.empty() ? y_end_ : steps_.front().r1; }
  PhaseState back() const { return y_end_; }
  const std::vector<Step>& steps() const { return steps_; }

  PhaseState state_at(double t) const {
    if (steps_.empty()) return y_end_;
    if (t >= t_end_) return y_end_;
    if (t <= t_begin_) return steps_.front().r1;
    // last step with step.t <= t
    auto it = std::upper_bound(
        steps_.begin(), steps_.end(), t,
        [](double v, const Step& s) { return v < s.t; });
    if (it != steps_.begin()) --it;
    return it->eval(t);
  }

  /// Accepted step endpoints, (t, state) in increasing time.
  std::vector<std::pair<double, PhaseState>> samples() const {
    std::vector<std::pair<double, PhaseState>> out;
    out.reserve(steps_.size() + 1);
    for (const auto& s : steps_) out.emplace_back(s.t, s.r1);
    out.emplace_back(t_end_, y_end_);
    return out;
  }

  Trajectory() = default;
  Trajectory(double t_begin, double t_end, std::vector<Step> steps,
             PhaseState y_end)
      : t_begin_(t_begin), t_end_(t_end), steps_(std::move(steps)), y_end_(y_end) {}

 private:
  double t_begin_ = 0.0, t_end_ = 0.0;
  std::vector<Step> steps_;
  PhaseState y_end_;
};

namespace detail {

// Dormand-Prince 5(4) pair with the classic continuous extension. One smooth
// segment; appends steps to `out` when it is non-null.
template <class F>
PhaseState dopri5_segment(F&& f, PhaseState y, double ta, double tb,
                          const IntegratorSettings& s,
                          std::vector<Trajectory::Step>* out) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;

  const double span = tb - ta;
  double t = ta;
  PhaseState k1 = f(t, y);
  if (!k1.finite() || !y.finite())
    throw IntegrationError("integration failed: non-finite state", t);
  double h = std::min({s.max_step, 0.1 * span,
                       std::pow(s.rel_tol, 0.2) /
                           std::max(1.0, k1.norm() / std::max(1.0, y.norm()))});
  h = std::max(h, 1e-12 * span);
  bool last = false;
  while (!last) {
    if (t + h >= tb - 1e-14 * std::max(1.0, std::abs(tb))) {
      h = tb - t;
      last = true;
    }
    if (h <= std::abs(t) * 4.0 * std::numeric_limits<double>::epsilon() &&
        h <= 1e-14 * span)
      throw IntegrationError("integration failed: step size underflow", t);

    const PhaseState k2 = f(t + h / 5.0, y + (h * a21) * k1);
    const PhaseState k3 = f(t + 3.0 * h / 10.0, y + h * (a31 * k1 + a32 * k2));
    const PhaseState k4 =
        f(t + 4.0 * h / 5.0, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const PhaseState k5 = f(
        t + 8.0 * h / 9.0, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const PhaseState k6 =
        f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const PhaseState ynew =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const PhaseState k7 = f(t + h, ynew);
    const PhaseState errv =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    if (!ynew.finite())
      throw IntegrationError("integration failed: non-finite state", t);

    const double scx = s.abs_tol + s.rel_tol * std::max(std::abs(y.x), std::abs(ynew.x));
    const double scy = s.abs_tol + s.rel_tol * std::max(std::abs(y.y), std::abs(ynew.y));
    const double err = std::sqrt(0.5 * ((errv.x / scx) * (errv.x / scx) +
                                        (errv.y / scy) * (errv.y / scy)));

    if (err <= 1.0) {
      if (out) {
        Trajectory::Step st;
        st.t = t;
        st.h = h;
        const PhaseState ydiff = ynew - y;
        const PhaseState bspl = h * k1 - ydiff;
        st.r1 = y;
        st.r2 = ydiff;
        st.r3 = bspl;
        st.r4 = ydiff - h * k7 - bspl;
        st.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        out->push_back(st);
      }
      t += h;
      y = ynew;
      k1 = k7;  // first-same-as-last
      const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::min(h * fac, s.max_step);
    } else {
      last = false;
      const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
      h *= fac;
    }
  }
  return y;
}

template <class F, class Sink>
PhaseState integrate_core(F&& rhs, PhaseState z0, double t0, double t1,
                          const IntegratorSettings& s,
                          std::span<const double> restarts, Sink* out) {
  s.validate();
  if (!(t1 > t0)) throw Error("integrate: final time must exceed initial time");
  PhaseState y = z0;
  double ta = t0;
  for (double tb : restarts) {
    if (tb <= ta || tb >= t1) continue;
    y = dopri5_segment(rhs, y, ta, tb, s, out);
    ta = tb;
  }
  return dopri5_segment(rhs, y, ta, t1, s, out);
}

}  // namespace detail

/// Integrates an arbitrary planar field over [t0, t1] with dense output,
/// restarting at the supplied interior times (sorted ascending).
template <class F>
Trajectory integrate_rhs(F&& rhs, PhaseState z0, double t0, double t1,
                         const IntegratorSettings& s,
                         std::span<const double> restarts = {}) {
  std::vector<Trajectory::Step> steps;
  const PhaseState y_end =
      detail::integrate_core(rhs, z0, t0, t1, s, restarts, &steps);
  return Trajectory(t0, t1, std::move(steps), y_end);
}

/// Same integration without storing the path; returns only the final state.
template <class F>
PhaseState integrate_rhs_final(F&& rhs, PhaseState z0, double t0, double t1,
                               const IntegratorSettings& s,
                               std::span<const double> restarts = {}) {
  std::vector<Trajectory::Step>* none = nullptr;
  return detail::integrate_core(rhs, z0, t0, t1, s, restarts, none);
}

/// Field of the model system: (x', y') = (y, g x - n(t) f0(x)).
struct NagumoField {
  const SystemParams* p;
  PhaseState operator()(double t, PhaseState z) const {
    return {z.y, p->g * z.x - p->weight(t) * p->f0(z.x)};
  }
};

/// Right-hand side of the model system at one point.
PhaseState rhs(double t, PhaseState z, const SystemParams& p);

/// Integrates the model system; steps never straddle a weight breakpoint.
Trajectory integrate(PhaseState z0, double t0, double t1, const SystemParams& p,
                     const IntegratorSettings& s);

/// State after time m*beta starting from z0 at time 0 (the m-th iterate of
/// the period map).
PhaseState poincare_map(PhaseState z0, int m, const SystemParams& p,
                        const IntegratorSettings& s);

struct Mat2 {
  double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
  double det() const { return a11 * a22 - a12 * a21; }
};

/// Central finite-difference Jacobian of any planar map.
template <class Map>
Mat2 fd_jacobian(Map&& map, PhaseState z0, double step) {
  const PhaseState xp = map(PhaseState{z0.x + step, z0.y});
  const PhaseState xm = map(PhaseState{z0.x - step, z0.y});
  const PhaseState yp = map(PhaseState{z0.x, z0.y + step});
  const PhaseState ym = map(PhaseState{z0.x, z0.y - step});
  Mat2 j;
  j.a11 = (xp.x - xm.x) / (2.0 * step);
  j.a21 = (xp.y - xm.y) / (2.0 * step);
  j.a12 = (yp.x - ym.x) / (2.0 * step);
  j.a22 = (yp.y - ym.y) / (2.0 * step);
  return j;
}

/// Finite-difference Jacobian of the m-th period-map iterate; the step is
/// fd_scale * max(1, |z0|).
Mat2 poincare_jacobian(PhaseState z0, int m, const SystemParams& p,
                       const IntegratorSettings& s, double fd_scale = 1e-6);

}  // namespace nagumo
