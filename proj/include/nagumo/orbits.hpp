#pragma once

#include <vector>

#include "nagumo/energy.hpp"
#include "nagumo/flow.hpp"
#include "nagumo/rotation.hpp"

namespace nagumo {

/// Search annulus: the inner hole is bounded by a level curve of the
/// comparison system, the outer boundary is the origin-centered circle found
/// by the slow-rotation radius search.
struct Annulus {
  LevelCurve inner;
  double outer_radius = 0.0;
  PhaseState q0;  ///< the center (a_nbar, 0)

  /// True when z lies in the closed annulus (outside or on the hole, inside
  /// or on the outer circle).
  bool contains(PhaseState z, double geom_tol = 1e-9) const;
};

Annulus build_annulus(const LevelCurve& lc, int m, const SystemParams& p,
                      const IntegratorSettings& s,
                      const OuterRadiusOptions& opt = {});

/// Measured twist data over the annulus boundaries for the m-th iterate of
/// the period map. Valid iff the inner boundary turns more than N times, the
/// outer one less than once, and no sampled trajectory from the hole
/// boundary meets q0.
struct TwistCertificate {
  int m = 0;
  int N = 0;
  double inner_min_rot = 0.0;
  double outer_max_rot = 0.0;
  bool nonq_ok = false;

  bool valid() const {
    return nonq_ok && inner_min_rot > static_cast<double>(N) && outer_max_rot < 1.0;
  }
  /// Largest N the measured rotations support (0 when none).
  int max_certified() const;
};

struct TwistOptions {
  int inner_samples = 64;    ///< start points on the hole boundary
  int outer_samples = 64;
  int max_samples = 1024;    ///< adaptive cap for either boundary
};

TwistCertificate verify_twist(const Annulus& ann, int m, int N,
                              const SystemParams& p, const IntegratorSettings& s,
                              const TwistOptions& opt = {});

/// A fixed point of the m-th period-map iterate together with the data that
/// classifies the periodic solution through it.
struct PeriodicOrbit {
  PhaseState z0;
  int m = 1;
  int rot_k = 0;            ///< rotation number around q0 (integer for fixed points)
  int zero_crossings = 0;   ///< sign changes of x(t) - q0.x over one full period
  double residual = 0.0;    ///< |phi^m(z0) - z0|
  double x_min = 0.0, x_max = 0.0;
  bool minimal_period_certified = false;
  int class_id = -1;        ///< index of the periodicity class among the results
  bool continuum = false;   ///< representative of a cluster of fixed points
};

struct FinderOptions {
  int seeds_angular = 48;
  int seeds_radial = 24;
  double fp_tol = 1e-9;            ///< accepted displacement residual
  double dedup_tol = 1e-6;         ///< phase-space distance identifying roots
  double class_tol = 1e-6;         ///< shift-match tolerance for classes
  double min_displacement = 1e-4;  ///< minimal-period displacement threshold
  double fd_scale = 1e-6;          ///< Jacobian step scale
  int max_newton_iters = 50;
  int max_halvings = 20;
  int target_classes_per_k = 2;    ///< densify while any k in 1..target_N lacks these
  int target_N = 0;                ///< 0 disables targeted densification
  double continuum_link = 0.05;    ///< cluster linkage radius (autonomous case)
};

/// Seeds a polar grid over the closed annulus, runs damped Newton iteration
/// on the displacement of the m-th period-map iterate from every seed, keeps
/// converged in-annulus roots, deduplicates them, and classifies each
/// resulting orbit. When target_N > 0 and some rotation number k in
/// 1..target_N has fewer than the requested periodicity classes, the search
/// adds seeds along the measured rot = k circle and then densifies the grid
/// once. The trivial rest state at the origin is excluded. An empty result
/// is legal and left to the caller to interpret against the certificate.
std::vector<PeriodicOrbit> find_fixed_points(const Annulus& ann, int m,
                                             const SystemParams& p,
                                             const IntegratorSettings& s,
                                             const FinderOptions& opt = {});

/// True when o2 starts on the same solution as o1 shifted by a whole number
/// of weight periods.
bool same_periodicity_class(const PeriodicOrbit& o1, const PeriodicOrbit& o2,
                            const SystemParams& p, const IntegratorSettings& s,
                            double class_tol = 1e-6);

/// Certifies a minimal period of m*beta: the rotation number must be
/// co-prime with m and every intermediate iterate must displace z0 by more
/// than the threshold.
bool minimal_period_check(const PeriodicOrbit& o, const SystemParams& p,
                          const IntegratorSettings& s,
                          double min_displacement = 1e-4);

/// The first K positive integers co-prime with m (m >= 2).
std::vector<int> coprime_rotation_set(int m, int K);

}  // namespace nagumo
