#pragma once

#include <functional>
#include <numbers>
#include <vector>

#include "nagumo/flow.hpp"

namespace nagumo {

inline constexpr double kRhoFloor = 1e-8;

/// Continuous winding angle of a path around a reference point, sampled
/// densely enough that no increment exceeds pi/2. Clockwise motion decreases
/// theta; rotations are counted positive clockwise.
struct AngleRecord {
  PhaseState q0;
  std::vector<double> t;
  std::vector<double> theta;  // unwrapped, theta[0] in (-pi, pi]
  double rho_min = 0.0;

  /// Normalized clockwise angular displacement over the whole record.
  double rot() const { return (theta.front() - theta.back()) / (2.0 * std::numbers::pi); }
  double max_increment() const;
};

/// Unwraps the angle of an arbitrary position path (a callable t -> point)
/// over [t0, t1]; throws AngleUndefinedError if the path comes within
/// rho_floor of q0.
AngleRecord unwrap_path(const std::function<PhaseState(double)>& pos, double t0,
                        double t1, PhaseState q0, double rho_floor = kRhoFloor);

/// Unwraps the angle along an integrated trajectory.
AngleRecord unwrap_angle(const Trajectory& traj, PhaseState q0,
                         double rho_floor = kRhoFloor);

/// Rotation number of the solution from z0 around q0 over [0, m*beta]:
/// (theta(0) - theta(m*beta)) / 2*pi, positive for clockwise turns.
double rot_m(PhaseState z0, PhaseState q0, int m, const SystemParams& p,
             const IntegratorSettings& s);

/// Line-integral form of the rotation number, evaluated by quadrature along
/// the trajectory:
///   (1/2pi) * integral of (y^2 + x h(t,x)) / |z - q0|^2 dt.
/// The numerator matches the angular-displacement definition only for
/// q0 = (0, 0); for other reference points the value is reported as a
/// diagnostic and generally differs from rot_m.
double rot_integral(PhaseState z0, PhaseState q0, int m, const SystemParams& p,
                    const IntegratorSettings& s);

/// Minimum distance of a trajectory to a point (dense sampling with local
/// refinement).
double trajectory_min_distance(const Trajectory& traj, PhaseState q0);

struct OuterRadiusOptions {
  int n_samples = 64;       ///< circle samples; doubled adaptively up to max
  int max_samples = 1024;
  double margin = 0.75;     ///< accept the radius when max sampled rot < margin
  double r_init = 2.0;
  double r_max = 1e6;
};

struct OuterRadiusResult {
  double radius = 0.0;
  double max_rot = 0.0;     ///< maximum sampled rotation number at `radius`
  int samples = 0;          ///< circle samples actually used
};

/// Doubles the radius of an origin-centered circle until every sampled start
/// point on it makes fewer than `margin` turns around q0 over [0, m*beta].
/// Requires |q0| <= 1. Throws SearchError past r_max.
OuterRadiusResult outer_radius_search(PhaseState q0, int m,
                                      const SystemParams& p,
                                      const IntegratorSettings& s,
                                      const OuterRadiusOptions& opt = {});

/// Maximum rotation number over sampled points of the circle |z| = radius,
/// with adaptive sample doubling where neighbors disagree by more than 0.25.
/// Shared by the radius search and the twist verification.
std::pair<double, int> circle_max_rot(double radius, PhaseState q0, int m,
                                      const SystemParams& p,
                                      const IntegratorSettings& s,
                                      int n_samples, int max_samples);

}  // namespace nagumo
