#pragma once

#include <vector>

#include "nagumo/flow.hpp"
#include "nagumo/model.hpp"

namespace nagumo {

/// The autonomous comparison system x'' - g x + nbar f0(x) = 0.
struct AutonomousSystem {
  double g = 0.0;
  double nbar = 0.0;
  ModifiedNonlinearity f0;
};

/// Builds the comparison system from full model parameters; the weight must
/// already carry its split.
AutonomousSystem autonomous_from(const SystemParams& p);

/// Conserved energy E(x, y) = y^2/2 - g x^2/2 + nbar * F0(x) with F0 the
/// antiderivative of the modified reaction term.
double energy(PhaseState z, const AutonomousSystem& sys);

/// E(x, 0), the potential part.
double potential(double x, const AutonomousSystem& sys);

/// The equilibrium abscissa in ]a, 1[ solving g s = nbar f0(s); the system
/// has a center there. Throws HypothesisError when nbar is too small for the
/// graphs to intersect.
double equilibrium(const AutonomousSystem& sys);

/// Interval [a, b] to the right of the middle zero where the reaction slope
/// stays above a floor d0, together with mu0 = g / d0 (the center exists for
/// every nbar > mu0).
struct Band {
  double a = 0.0;
  double b = 0.0;
  double d0 = 0.0;
  double mu0 = 0.0;
};

/// Picks b as the largest abscissa with f0' >= f0'(a)/2 throughout [a, b],
/// sets d0 to the slope minimum over the band, and checks that the
/// equilibrium falls inside.
Band choose_band(const AutonomousSystem& sys);

/// Energy level selection: the largest admissible value, or a fraction
/// lambda in ]0, 1] of the gap above the center energy.
struct LevelSpec {
  enum class Rule { MaxAllowed, Fraction } rule = Rule::MaxAllowed;
  double lambda = 1.0;
  static LevelSpec max_allowed() { return {Rule::MaxAllowed, 1.0}; }
  static LevelSpec fraction(double lambda) { return {Rule::Fraction, lambda}; }
};

/// Closed level curve of the comparison system around the center, traced
/// star-shaped: boundary[j] sits at angle -2*pi*j/M from (a_nbar, 0).
struct LevelCurve {
  double nbar = 0.0;
  double c = 0.0;        ///< energy level
  double a_nbar = 0.0;   ///< center abscissa
  double b_minus = 0.0;  ///< left crossing of E(., 0) = c
  double b_plus = 0.0;   ///< right crossing
  std::vector<PhaseState> boundary;  ///< clockwise, starting at (b_plus, 0)
  std::vector<double> radii;         ///< |boundary[j] - center|

  PhaseState center() const { return {a_nbar, 0.0}; }
  double max_radius() const;
  /// Star-shaped hole radius at a given angle (linear interpolation).
  double radius_at_angle(double angle) const;
};

LevelCurve level_curve(const AutonomousSystem& sys, const Band& band,
                       LevelSpec spec = LevelSpec::max_allowed(),
                       int boundary_points = 256);

/// Fundamental period of the closed orbit on the level curve, computed from
/// the time-map integral sqrt(2) * int du / sqrt(c - E(u, 0)) over both
/// half-branches. A sine substitution per branch removes the inverse
/// square-root endpoint singularity; the rule order is doubled until the
/// result settles below 1e-9.
double time_map(const AutonomousSystem& sys, const LevelCurve& lc);

/// Closed-form period bound 2*pi / sqrt(nbar * d0 - g).
double period_bound(const AutonomousSystem& sys, const Band& band);

/// Guaranteed whole turns over [0, m*beta] for an orbit of period tau.
int rot_floor(double tau, int m, double beta);

}  // namespace nagumo
