#include "nagumo/flow.hpp"

namespace nagumo {

PhaseState rhs(double t, PhaseState z, const SystemParams& p) {
  return NagumoField{&p}(t, z);
}

Trajectory integrate(PhaseState z0, double t0, double t1, const SystemParams& p,
                     const IntegratorSettings& s) {
  const auto restarts = p.weight.restart_times(t0, t1);
  return integrate_rhs(NagumoField{&p}, z0, t0, t1, s, restarts);
}

PhaseState poincare_map(PhaseState z0, int m, const SystemParams& p,
                        const IntegratorSettings& s) {
  if (m < 1) throw Error("poincare_map: m must be >= 1");
  const double t1 = m * p.weight.beta();
  const auto restarts = p.weight.restart_times(0.0, t1);
  return integrate_rhs_final(NagumoField{&p}, z0, 0.0, t1, s, restarts);
}

Mat2 poincare_jacobian(PhaseState z0, int m, const SystemParams& p,
                       const IntegratorSettings& s, double fd_scale) {
  const double step = fd_scale * std::max(1.0, z0.norm());
  return fd_jacobian(
      [&](PhaseState z) { return poincare_map(z, m, p, s); }, z0, step);
}

}  // namespace nagumo
