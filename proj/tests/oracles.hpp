// Independent reference computations used by the tests. Everything here
// deliberately avoids the library's own solution paths: plain bisection on
// reduced equations, brute-force scans and closed forms only.

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "nagumo/flow.hpp"

namespace oracles {

// Root of f by plain bisection on a known bracket.
inline double bisect_root(const std::function<double(double)>& f, double lo,
                          double hi, double tol = 1e-13) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Center abscissa of the cubic model from the reduced equation
// (1 - s)(s - a) = g / nbar, smaller root in ]a, 1[.
inline double cubic_center(double a, double g, double nbar) {
  const auto f = [&](double s) { return (1.0 - s) * (s - a) - g / nbar; };
  // the reduced parabola peaks at (a+1)/2; the smaller root sits left of it
  return bisect_root(f, a, 0.5 * (a + 1.0));
}

// Max of |f| over [lo, hi] by dense scan plus local ternary refinement.
inline double scan_max_abs(const std::function<double(double)>& f, double lo,
                           double hi, int grid = 20000) {
  double best = 0.0, best_x = lo;
  for (int i = 0; i <= grid; ++i) {
    const double x = lo + (hi - lo) * i / grid;
    const double v = std::abs(f(x));
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  double a = std::max(lo, best_x - (hi - lo) / grid);
  double b = std::min(hi, best_x + (hi - lo) / grid);
  for (int i = 0; i < 200; ++i) {
    const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (std::abs(f(m1)) < std::abs(f(m2)))
      a = m1;
    else
      b = m2;
  }
  return std::abs(f(0.5 * (a + b)));
}

inline double scan_argmax_abs(const std::function<double(double)>& f, double lo,
                              double hi, int grid = 20000) {
  double best = 0.0, best_x = lo;
  for (int i = 0; i <= grid; ++i) {
    const double x = lo + (hi - lo) * i / grid;
    const double v = std::abs(f(x));
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

// Flow matrix over time T of the constant-coefficient oscillator
// v'' = -(omega^2) v, i.e. the linearization at a center.
inline nagumo::Mat2 center_flow_matrix(double omega, double T) {
  nagumo::Mat2 m;
  m.a11 = std::cos(omega * T);
  m.a12 = std::sin(omega * T) / omega;
  m.a21 = -omega * std::sin(omega * T);
  m.a22 = std::cos(omega * T);
  return m;
}

// Brute-force fixed-point localization: exhaustive displacement-norm scan on
// a polar grid over the annulus, local minima kept and refined by a 3x3
// pattern search that shrinks only when no neighbor improves
// (derivative-free; independent of the Newton path).
struct GridOracleOptions {
  int n_ang = 96;
  int n_rad = 48;
  double accept = 1e-9;   // displacement norm accepted as a fixed point
  int refine_rounds = 200;
};

template <class Disp, class InRegion>
std::vector<nagumo::PhaseState> grid_fixed_points(
    Disp&& disp, InRegion&& in_region, nagumo::PhaseState center, double r_lo,
    double r_hi, const GridOracleOptions& opt = {}) {
  using nagumo::PhaseState;
  const double two_pi = 2.0 * 3.14159265358979323846;
  std::vector<std::vector<double>> norms(
      opt.n_ang, std::vector<double>(opt.n_rad,
                                     std::numeric_limits<double>::infinity()));
  const auto point = [&](int i, double jf) {
    const double ang = two_pi * i / opt.n_ang;
    const double r = r_lo * std::pow(r_hi / r_lo, jf / (opt.n_rad - 1));
    return center + PhaseState{r * std::cos(ang), r * std::sin(ang)};
  };
  for (int i = 0; i < opt.n_ang; ++i)
    for (int j = 0; j < opt.n_rad; ++j) {
      const PhaseState z = point(i, j);
      if (!in_region(z)) continue;
      norms[i][j] = disp(z).norm();
    }
  std::vector<PhaseState> found;
  for (int i = 0; i < opt.n_ang; ++i) {
    for (int j = 0; j < opt.n_rad; ++j) {
      const double v = norms[i][j];
      if (!std::isfinite(v)) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = (i + di + opt.n_ang) % opt.n_ang;
          const int jj = j + dj;
          if (jj < 0 || jj >= opt.n_rad) continue;
          if (norms[ii][jj] < v) {
            is_min = false;
            break;
          }
        }
      if (!is_min) continue;
      // pattern search around the candidate: walk at fixed resolution while
      // a neighboring probe improves, shrink only when stuck
      PhaseState c = point(i, j);
      double half = 0.6 * std::max(
          (point(i + 1, j) - c).norm(),
          (point(i, std::min(j + 1, opt.n_rad - 1)) - point(i, j)).norm());
      half = std::max(half, 1e-4);
      double best = v;
      for (int round = 0; round < opt.refine_rounds; ++round) {
        PhaseState arg = c;
        for (int a = -1; a <= 1; ++a)
          for (int b = -1; b <= 1; ++b) {
            if (a == 0 && b == 0) continue;
            const PhaseState z{c.x + half * a, c.y + half * b};
            const double n = disp(z).norm();
            if (n < best) {
              best = n;
              arg = z;
            }
          }
        if (arg.x == c.x && arg.y == c.y)
          half *= 0.5;
        else
          c = arg;
        if (half < 1e-14 || best < 0.02 * opt.accept) break;
      }
      if (best < opt.accept && in_region(c)) found.push_back(c);
    }
  }
  // collapse duplicates found from adjacent cells
  std::vector<PhaseState> dedup;
  for (const auto& z : found) {
    bool seen = false;
    for (const auto& w : dedup)
      if (nagumo::distance(z, w) < 1e-6) seen = true;
    if (!seen) dedup.push_back(z);
  }
  return dedup;
}

}  // namespace oracles
