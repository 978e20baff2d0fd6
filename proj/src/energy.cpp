#include "nagumo/energy.hpp"

#include <cmath>
#include <numbers>

#include "nagumo/errors.hpp"
#include "nagumo/numerics.hpp"

namespace nagumo {

namespace {
constexpr double kPi = std::numbers::pi;
}

AutonomousSystem autonomous_from(const SystemParams& p) {
  return {p.g, p.weight.nbar(), p.f0};
}

double energy(PhaseState z, const AutonomousSystem& sys) {
  return 0.5 * z.y * z.y - 0.5 * sys.g * z.x * z.x +
         sys.nbar * sys.f0.primitive(z.x);
}

double potential(double x, const AutonomousSystem& sys) {
  return -0.5 * sys.g * x * x + sys.nbar * sys.f0.primitive(x);
}

double equilibrium(const AutonomousSystem& sys) {
  const double a = sys.f0.a();
  const auto f = [&](double s) { return sys.g * s - sys.nbar * sys.f0(s); };
  const auto [lo, hi] = first_sign_change(f, a, 1.0, 4096);
  if (lo > hi)
    throw HypothesisError(
        "equilibrium: no crossing of g*s and nbar*f0(s) in ]a,1[ (nbar too small)");
  if (lo == hi) return lo;
  return bisect(f, lo, hi, 1e-12);
}

Band choose_band(const AutonomousSystem& sys) {
  const double a = sys.f0.a();
  const double slope_a = sys.f0.deriv(a);
  if (slope_a <= 0.0)
    throw HypothesisError("choose_band: reaction slope at the middle zero must be positive");
  const double floor = 0.5 * slope_a;
  // largest b with f0' >= floor on all of [a, b]
  const int grid = 4096;
  double b = 1.0;
  for (int i = 1; i <= grid; ++i) {
    const double s = a + (1.0 - a) * i / grid;
    if (sys.f0.deriv(s) < floor) {
      const double lo = a + (1.0 - a) * (i - 1) / grid;
      b = bisect([&](double u) { return sys.f0.deriv(u) - floor; }, lo, s, 1e-12);
      break;
    }
  }
  // slope minimum over the band
  double d0 = -grid_max([&](double s) { return -sys.f0.deriv(s); }, a, b, 2048, 1e-12);
  d0 = std::min(d0, std::min(sys.f0.deriv(a), sys.f0.deriv(b)));
  if (!(d0 > 0.0)) throw HypothesisError("choose_band: slope floor is not positive");
  Band band{a, b, d0, sys.g / d0};
  if (sys.nbar > band.mu0) {
    const double eq = equilibrium(sys);
    if (!(eq > a && eq < b))
      throw HypothesisError("choose_band: equilibrium does not fall inside the band");
  }
  return band;
}

double LevelCurve::max_radius() const {
  double m = 0.0;
  for (double r : radii) m = std::max(m, r);
  return m;
}

double LevelCurve::radius_at_angle(double angle) const {
  // boundary[j] sits at angle -2*pi*j/M; fold the query into [0, 2*pi)
  const int M = static_cast<int>(radii.size());
  double pos = -angle / (2.0 * kPi) * M;  // j-coordinate
  pos = std::fmod(pos, static_cast<double>(M));
  if (pos < 0.0) pos += M;
  const int j = static_cast<int>(pos) % M;
  const double w = pos - std::floor(pos);
  return radii[j] * (1.0 - w) + radii[(j + 1) % M] * w;
}

LevelCurve level_curve(const AutonomousSystem& sys, const Band& band,
                       LevelSpec spec, int boundary_points) {
  if (!(sys.nbar > band.mu0))
    throw HypothesisError("level_curve: nbar must exceed mu0 = g/d0");
  const double a_nbar = equilibrium(sys);
  const double e_center = potential(a_nbar, sys);
  const double c_max = std::min(potential(band.a, sys), potential(band.b, sys));
  if (!(c_max > e_center))
    throw HypothesisError("level_curve: no admissible level above the center energy");
  double c = c_max;
  if (spec.rule == LevelSpec::Rule::Fraction) {
    if (!(spec.lambda > 0.0 && spec.lambda <= 1.0))
      throw HypothesisError("level_curve: level fraction must lie in ]0,1]");
    c = e_center + spec.lambda * (c_max - e_center);
  }

  LevelCurve lc;
  lc.nbar = sys.nbar;
  lc.c = c;
  lc.a_nbar = a_nbar;
  // crossings of the potential with the level on each side of the center
  const auto pot_minus_c = [&](double x) { return potential(x, sys) - c; };
  lc.b_minus = (pot_minus_c(band.a) <= 0.0)
                   ? band.a
                   : bisect(pot_minus_c, band.a, a_nbar, 1e-14);
  lc.b_plus = (pot_minus_c(band.b) <= 0.0)
                  ? band.b
                  : bisect(pot_minus_c, a_nbar, band.b, 1e-14);

  // star-shaped trace: along each ray from the center the energy increases,
  // so a radial bisection pins the boundary
  lc.boundary.resize(boundary_points);
  lc.radii.resize(boundary_points);
  const double r_guess =
      std::max({lc.b_plus - a_nbar, a_nbar - lc.b_minus,
                std::sqrt(2.0 * (c - e_center))});
  for (int j = 0; j < boundary_points; ++j) {
    const double ang = -2.0 * kPi * j / boundary_points;
    const double cx = std::cos(ang), sy = std::sin(ang);
    const auto e_on_ray = [&](double r) {
      return energy({a_nbar + r * cx, r * sy}, sys) - c;
    };
    double hi = r_guess;
    int guard = 0;
    while (e_on_ray(hi) < 0.0 && guard++ < 60) hi *= 1.5;
    const double r = bisect(e_on_ray, 0.0, hi, 1e-14);
    lc.boundary[j] = {a_nbar + r * cx, r * sy};
    lc.radii[j] = r;
  }
  return lc;
}

double time_map(const AutonomousSystem& sys, const LevelCurve& lc) {
  // With u = a_nbar + span*sin(phi) the deficit c - E(u, 0) equals the slope
  // of E(., 0) averaged over [u, endpoint] times the oriented gap, and the
  // square-root endpoint factor cancels against cos(phi) in half-angle form:
  //     integrand = sqrt(2|span|) * cos((pi/2 - phi)/2) / sqrt(|avg slope|).
  // Everything stays analytic and, crucially, the gap is formed in the phase
  // variable, so no cancellation of near-equal energies or abscissas occurs
  // however small the oval is. The 8-point slope average is exact for
  // polynomial reaction terms.
  const auto& [gx, gw] = gauss_legendre(8);
  const auto slope = [&](double x) { return -sys.g * x + sys.nbar * sys.f0(x); };
  const auto branch = [&](double endpoint) {
    const double span = endpoint - lc.a_nbar;  // signed
    const double sgn = span > 0 ? 1.0 : -1.0;
    const auto integrand = [&](double phi) {
      const double half_rest = 0.5 * (kPi / 2.0 - phi);
      const double c2 = std::cos(half_rest);
      const double s2 = std::sin(half_rest);
      const double gap = 2.0 * s2 * s2;  // = 1 - sin(phi), cancellation-free
      double avg = 0.0;
      for (size_t j = 0; j < gx.size(); ++j) {
        const double t = 0.5 * (1.0 - gx[j]);  // in (0, 1)
        avg += 0.5 * gw[j] * slope(endpoint - span * gap * t);
      }
      avg *= sgn;
      if (avg <= 0.0) return 0.0;  // inadmissible level; guarded upstream
      return std::sqrt(2.0 * std::abs(span)) * c2 / std::sqrt(avg);
    };
    double prev = 0.0;
    for (int n = 128; n <= 4096; n *= 2) {
      const double val = gl_integrate(integrand, 0.0, kPi / 2.0, n);
      if (n > 128 && std::abs(val - prev) < 1e-9) return val;
      prev = val;
    }
    throw NumericalError("time_map: quadrature did not settle (estimate " +
                         std::to_string(std::sqrt(2.0) * prev) + ")");
  };
  return std::sqrt(2.0) * (branch(lc.b_minus) + branch(lc.b_plus));
}

double period_bound(const AutonomousSystem& sys, const Band& band) {
  const double under = sys.nbar * band.d0 - sys.g;
  if (!(under > 0.0))
    throw HypothesisError("period_bound: requires nbar * d0 > g");
  return 2.0 * kPi / std::sqrt(under);
}

int rot_floor(double tau, int m, double beta) {
  if (!(tau > 0.0)) throw Error("rot_floor: period must be positive");
  return static_cast<int>(std::floor(m * beta / tau));
}

}  // namespace nagumo
