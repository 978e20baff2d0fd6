#include "nagumo/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nagumo/numerics.hpp"

namespace nagumo {

namespace {
constexpr double kPi = std::numbers::pi;
}

bool Annulus::contains(PhaseState z, double geom_tol) const {
  if (z.norm() > outer_radius * (1.0 + geom_tol)) return false;
  const PhaseState d = z - q0;
  const double r = d.norm();
  const double hole = inner.radius_at_angle(std::atan2(d.y, d.x));
  return r >= hole * (1.0 - geom_tol) - geom_tol;
}

Annulus build_annulus(const LevelCurve& lc, int m, const SystemParams& p,
                      const IntegratorSettings& s,
                      const OuterRadiusOptions& opt) {
  Annulus ann;
  ann.inner = lc;
  ann.q0 = lc.center();
  OuterRadiusOptions o = opt;
  // the hole must sit strictly inside both the q0-ball and the origin circle
  const double hole_extent = lc.max_radius() + ann.q0.norm();
  o.r_init = std::max(o.r_init, 2.0 * hole_extent);
  ann.outer_radius = outer_radius_search(ann.q0, m, p, s, o).radius;
  for (const auto& pt : lc.boundary) {
    if (distance(pt, ann.q0) >= ann.outer_radius)
      throw HypothesisError("build_annulus: level curve not contained in the outer ball");
  }
  return ann;
}

int TwistCertificate::max_certified() const {
  if (!nonq_ok || !(outer_max_rot < 1.0)) return 0;
  const int n = static_cast<int>(std::ceil(inner_min_rot)) - 1;
  return std::max(0, n);
}

TwistCertificate verify_twist(const Annulus& ann, int m, int N,
                              const SystemParams& p, const IntegratorSettings& s,
                              const TwistOptions& opt) {
  TwistCertificate cert;
  cert.m = m;
  cert.N = N;
  const double beta = p.weight.beta();
  const double t_end = m * beta;

  // inner boundary: rotation minimum with adaptive refinement on the traced
  // polygon (indices bisect between disagreeing neighbors)
  const auto& boundary = ann.inner.boundary;
  const int M = static_cast<int>(boundary.size());
  const int base = std::min(opt.inner_samples, M);
  std::vector<int> idx;
  for (int i = 0; i < base; ++i) idx.push_back(i * M / base);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

  bool nonq_ok = true;
  std::vector<double> rots(idx.size());
  std::vector<char> fail(idx.size(), 0);
  parallel_for(static_cast<int>(idx.size()), [&](int i) {
    try {
      rots[i] = rot_m(boundary[idx[i]], ann.q0, m, p, s);
    } catch (const AngleUndefinedError&) {
      fail[i] = 1;
    }
  });
  for (int round = 0; round < 4; ++round) {
    std::vector<int> extra;
    const size_t n = idx.size();
    for (size_t i = 0; i < n; ++i) {
      const size_t j = (i + 1) % n;
      if (fail[i] || fail[j]) continue;
      if (std::abs(rots[j] - rots[i]) > 0.25) {
        const int lo = idx[i];
        const int hi = (j == 0) ? idx[0] + M : idx[j];
        const int mid = ((lo + hi) / 2) % M;
        if (mid != lo && mid != idx[j]) extra.push_back(mid);
      }
    }
    if (extra.empty() || idx.size() + extra.size() > static_cast<size_t>(opt.max_samples))
      break;
    std::vector<double> extra_rot(extra.size());
    std::vector<char> extra_fail(extra.size(), 0);
    parallel_for(static_cast<int>(extra.size()), [&](int i) {
      try {
        extra_rot[i] = rot_m(boundary[extra[i]], ann.q0, m, p, s);
      } catch (const AngleUndefinedError&) {
        extra_fail[i] = 1;
      }
    });
    for (size_t i = 0; i < extra.size(); ++i) {
      idx.push_back(extra[i]);
      rots.push_back(extra_rot[i]);
      fail.push_back(extra_fail[i]);
    }
    // keep neighbor relations meaningful
    std::vector<size_t> order(idx.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return idx[a] < idx[b]; });
    std::vector<int> idx2;
    std::vector<double> rots2;
    std::vector<char> fail2;
    for (size_t k : order) {
      idx2.push_back(idx[k]);
      rots2.push_back(rots[k]);
      fail2.push_back(fail[k]);
    }
    idx.swap(idx2);
    rots.swap(rots2);
    fail.swap(fail2);
  }
  double inner_min = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < idx.size(); ++i) {
    if (fail[i]) {
      nonq_ok = false;
      continue;
    }
    inner_min = std::min(inner_min, rots[i]);
  }
  cert.inner_min_rot = std::isfinite(inner_min) ? inner_min : 0.0;

  // reference-avoidance check: trajectories launched anywhere on the hole
  // boundary, restarted at every weight discontinuity time, must keep away
  // from q0 until the final time
  if (nonq_ok) {
    std::vector<double> t0s{0.0};
    for (double t : p.weight.restart_times(0.0, t_end)) t0s.push_back(t);
    const int stride = std::max<size_t>(1, idx.size() / 32);
    std::vector<std::pair<int, double>> jobs;
    for (size_t i = 0; i < idx.size(); i += stride)
      for (double t0 : t0s) jobs.emplace_back(idx[i], t0);
    std::vector<char> hit(jobs.size(), 0);
    parallel_for(static_cast<int>(jobs.size()), [&](int i) {
      const auto [bi, t0] = jobs[i];
      if (t_end - t0 < 1e-12) return;
      const Trajectory traj = integrate(boundary[bi], t0, t_end, p, s);
      if (trajectory_min_distance(traj, ann.q0) < kRhoFloor) hit[i] = 1;
    });
    for (char h : hit)
      if (h) nonq_ok = false;
  }
  cert.nonq_ok = nonq_ok;

  const auto [outer_max, used] = circle_max_rot(
      ann.outer_radius, ann.q0, m, p, s, opt.outer_samples, opt.max_samples);
  cert.outer_max_rot = outer_max;
  return cert;
}

namespace {

struct NewtonOutcome {
  bool ok = false;
  PhaseState z;
  double residual = 0.0;
};

NewtonOutcome newton_displacement(PhaseState z, int m, const SystemParams& p,
                                  const IntegratorSettings& s,
                                  const Annulus& ann, const FinderOptions& opt) {
  const auto disp = [&](PhaseState w) -> PhaseState {
    return poincare_map(w, m, p, s) - w;
  };
  NewtonOutcome out;
  PhaseState cur = z;
  PhaseState d;
  try {
    d = disp(cur);
  } catch (const NumericalError&) {
    return out;
  }
  double res = d.norm();
  PhaseState best = cur;
  double best_res = res;
  // damped Gauss-Newton: the displacement Jacobian degenerates on invariant
  // circles (exactly autonomous case) and near thin resonance islands, so a
  // Levenberg-Marquardt shift replaces plain step halving
  double mu = 1e-10;
  for (int it = 0; it < opt.max_newton_iters; ++it) {
    if (!std::isfinite(res)) return out;
    if (res < 1e-13) break;  // machine-level displacement, stop polishing
    Mat2 j;
    try {
      const double h = opt.fd_scale * std::max(1.0, cur.norm());
      j = fd_jacobian(disp, cur, h);
    } catch (const NumericalError&) {
      break;
    }
    const double a = j.a11 * j.a11 + j.a21 * j.a21;
    const double b = j.a11 * j.a12 + j.a21 * j.a22;
    const double c = j.a12 * j.a12 + j.a22 * j.a22;
    const double g1 = j.a11 * d.x + j.a21 * d.y;
    const double g2 = j.a12 * d.x + j.a22 * d.y;
    const double scale = a + c;
    if (!std::isfinite(scale) || scale <= 0.0) break;
    bool advanced = false;
    for (int attempt = 0; attempt <= opt.max_halvings; ++attempt) {
      const double lam = mu * scale;
      const double det = (a + lam) * (c + lam) - b * b;
      if (!(det > 0.0)) {
        mu = std::max(mu * 10.0, 1e-12);
        continue;
      }
      const PhaseState step{((c + lam) * g1 - b * g2) / det,
                            ((a + lam) * g2 - b * g1) / det};
      const PhaseState trial = cur - step;
      PhaseState dt_;
      try {
        dt_ = disp(trial);
      } catch (const NumericalError&) {
        mu = std::max(mu * 10.0, 1e-12);
        continue;
      }
      const double rt = dt_.norm();
      if (rt < res) {
        cur = trial;
        d = dt_;
        res = rt;
        advanced = true;
        if (res < best_res) {
          best = cur;
          best_res = res;
        }
        mu = std::max(mu / 3.0, 1e-12);
        break;
      }
      mu = std::max(mu * 10.0, 1e-12);
    }
    if (!advanced) break;
  }
  if (best_res < opt.fp_tol && ann.contains(best, 1e-7)) {
    out.ok = true;
    out.z = best;
    out.residual = best_res;
  }
  return out;
}

struct OrbitScan {
  int crossings = 0;
  double x_min = 0.0, x_max = 0.0;
  double rot = 0.0;
};

OrbitScan scan_orbit(PhaseState z0, int m, PhaseState q0, const SystemParams& p,
                     const IntegratorSettings& s) {
  const double t_end = m * p.weight.beta();
  const Trajectory traj = integrate(z0, 0.0, t_end, p, s);
  OrbitScan scan;
  scan.rot = unwrap_angle(traj, q0).rot();
  const int n = std::max(2000, 400 * m);
  double prev = traj.state_at(0.0).x - q0.x;
  scan.x_min = scan.x_max = traj.state_at(0.0).x;
  int flips = 0;
  // cyclic sign-change count over [0, m*beta[; the wrap pair closes the loop
  double first = prev;
  for (int i = 1; i < n; ++i) {
    const double t = t_end * i / n;
    const PhaseState zz = traj.state_at(t);
    scan.x_min = std::min(scan.x_min, zz.x);
    scan.x_max = std::max(scan.x_max, zz.x);
    const double v = zz.x - q0.x;
    if ((v > 0) != (prev > 0)) ++flips;
    prev = v;
  }
  if ((first > 0) != (prev > 0)) ++flips;
  scan.crossings = flips;
  return scan;
}

}  // namespace

std::vector<PeriodicOrbit> find_fixed_points(const Annulus& ann, int m,
                                             const SystemParams& p,
                                             const IntegratorSettings& s,
                                             const FinderOptions& opt) {
  const double beta = p.weight.beta();
  std::vector<PhaseState> roots;
  std::vector<double> residuals;

  const auto absorb = [&](const std::vector<NewtonOutcome>& outs) {
    for (const auto& o : outs) {
      if (!o.ok) continue;
      bool dup = false;
      for (size_t i = 0; i < roots.size(); ++i) {
        if (distance(roots[i], o.z) < opt.dedup_tol) {
          dup = true;
          if (o.residual < residuals[i]) {
            roots[i] = o.z;
            residuals[i] = o.residual;
          }
          break;
        }
      }
      if (!dup) {
        roots.push_back(o.z);
        residuals.push_back(o.residual);
      }
    }
  };

  const auto run_seeds = [&](const std::vector<PhaseState>& seeds) {
    std::vector<NewtonOutcome> outs(seeds.size());
    parallel_for(static_cast<int>(seeds.size()), [&](int i) {
      outs[i] = newton_displacement(seeds[i], m, p, s, ann, opt);
    });
    absorb(outs);
  };

  const auto polar_seeds = [&](int n_ang, int n_rad) {
    std::vector<PhaseState> seeds;
    seeds.reserve(static_cast<size_t>(n_ang) * n_rad);
    for (int i = 0; i < n_ang; ++i) {
      const double ang = 2.0 * kPi * i / n_ang;
      const double hole = ann.inner.radius_at_angle(ang);
      // outer circle is origin-centered; cap the ray where it leaves the disk
      double r_hi = ann.outer_radius - ann.q0.norm();
      if (r_hi <= hole * 1.01) continue;
      const double r_lo = hole * 1.000001;
      for (int j = 0; j < n_rad; ++j) {
        const double f = static_cast<double>(j) / std::max(1, n_rad - 1);
        const double r = r_lo * std::pow(r_hi / r_lo, f);
        seeds.push_back(ann.q0 + PhaseState{r * std::cos(ang), r * std::sin(ang)});
      }
    }
    return seeds;
  };

  run_seeds(polar_seeds(opt.seeds_angular, opt.seeds_radial));

  const auto classes_for_k = [&](int k) {
    // count distinct periodicity classes among current roots with rotation k;
    // cheap proxy during the search: orbits are classified fully afterwards
    std::vector<PhaseState> with_k;
    for (size_t i = 0; i < roots.size(); ++i) {
      if (roots[i].norm() < 1e-6) continue;  // trivial rest state
      try {
        const double r = rot_m(roots[i], ann.q0, m, p, s);
        if (std::abs(r - k) < 0.2) with_k.push_back(roots[i]);
      } catch (const NumericalError&) {
      }
    }
    // collapse period-shifts
    int classes = 0;
    std::vector<char> used(with_k.size(), 0);
    for (size_t i = 0; i < with_k.size(); ++i) {
      if (used[i]) continue;
      ++classes;
      for (size_t j = i + 1; j < with_k.size(); ++j) {
        if (used[j]) continue;
        for (int sh = 0; sh < m; ++sh) {
          const PhaseState shifted =
              sh == 0 ? with_k[i]
                      : integrate_rhs_final(NagumoField{&p}, with_k[i], 0.0,
                                            sh * beta, s,
                                            p.weight.restart_times(0.0, sh * beta));
          if (distance(shifted, with_k[j]) < opt.class_tol) {
            used[j] = 1;
            break;
          }
        }
      }
    }
    return classes;
  };

  if (opt.target_N > 0) {
    // resonance-guided pass for every underpopulated rotation number: locate
    // the rot = k radius along many rays and seed Newton on that circle
    bool densified = false;
    for (int round = 0; round < 2; ++round) {
      std::vector<int> missing;
      for (int k = 1; k <= opt.target_N; ++k)
        if (classes_for_k(k) < opt.target_classes_per_k) missing.push_back(k);
      if (missing.empty()) break;
      std::vector<PhaseState> seeds;
      const int rays = 64;
      for (int k : missing) {
        std::vector<PhaseState> ray_seeds(rays);
        std::vector<char> ok(rays, 0);
        parallel_for(rays, [&](int i) {
          const double ang = 2.0 * kPi * i / rays;
          const PhaseState dir{std::cos(ang), std::sin(ang)};
          const double hole = ann.inner.radius_at_angle(ang);
          const double r_hi = ann.outer_radius - ann.q0.norm();
          const auto rot_at = [&](double r) -> double {
            try {
              return rot_m(ann.q0 + r * dir, ann.q0, m, p, s) - k;
            } catch (const NumericalError&) {
              return -k;  // treat as slow rotation
            }
          };
          // scan for a bracket, then bisect the resonance radius
          const int scan_n = 48;
          const double r_lo = hole * 1.000001;
          double prev_r = r_lo;
          double prev_v = rot_at(prev_r);
          for (int jj = 1; jj <= scan_n; ++jj) {
            const double rr =
                r_lo * std::pow(r_hi / r_lo, static_cast<double>(jj) / scan_n);
            const double v = rot_at(rr);
            if ((v > 0) != (prev_v > 0)) {
              const double r_star = bisect(
                  [&](double q) { return rot_at(q); }, prev_r, rr, 1e-10);
              ray_seeds[i] = ann.q0 + r_star * dir;
              ok[i] = 1;
              break;
            }
            prev_r = rr;
            prev_v = v;
          }
        });
        for (int i = 0; i < rays; ++i)
          if (ok[i]) seeds.push_back(ray_seeds[i]);
      }
      if (!seeds.empty()) run_seeds(seeds);
      if (round == 0 && !densified) {
        std::vector<int> still;
        for (int k : missing)
          if (classes_for_k(k) < opt.target_classes_per_k) still.push_back(k);
        if (still.empty()) break;
        densified = true;
        run_seeds(polar_seeds(2 * opt.seeds_angular, 2 * opt.seeds_radial));
      }
    }
  }

  // collapse continua of fixed points: without genuine time dependence the
  // fixed points fill whole curves, so keep one representative per linked
  // cluster
  std::vector<char> from_cluster(roots.size(), 0);
  if (p.weight.has_split() && p.weight.ntilde_l1() == 0.0 && roots.size() > 1) {
    std::vector<int> comp(roots.size());
    for (size_t i = 0; i < comp.size(); ++i) comp[i] = static_cast<int>(i);
    const std::function<int(int)> find = [&](int v) {
      while (comp[v] != v) v = comp[v] = comp[comp[v]];
      return v;
    };
    for (size_t i = 0; i < roots.size(); ++i)
      for (size_t j = i + 1; j < roots.size(); ++j)
        if (distance(roots[i], roots[j]) < opt.continuum_link)
          comp[find(static_cast<int>(i))] = find(static_cast<int>(j));
    std::vector<PhaseState> kept;
    std::vector<double> kept_res;
    std::vector<char> kept_cluster;
    std::vector<char> taken(roots.size(), 0);
    for (size_t i = 0; i < roots.size(); ++i) {
      const int r = find(static_cast<int>(i));
      if (taken[r]) continue;
      size_t best = i;
      int size = 0;
      for (size_t j = 0; j < roots.size(); ++j) {
        if (find(static_cast<int>(j)) != r) continue;
        ++size;
        if (residuals[j] < residuals[best]) best = j;
      }
      kept.push_back(roots[best]);
      kept_res.push_back(residuals[best]);
      kept_cluster.push_back(size > 1);
      taken[r] = 1;
    }
    roots.swap(kept);
    residuals.swap(kept_res);
    from_cluster.swap(kept_cluster);
  }

  // assemble orbit records
  std::vector<PeriodicOrbit> orbits;
  for (size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].norm() < 1e-6) continue;  // trivial rest state v == 0
    PeriodicOrbit o;
    o.z0 = roots[i];
    o.m = m;
    o.residual = residuals[i];
    o.continuum = from_cluster[i] != 0;
    const OrbitScan scan = scan_orbit(o.z0, m, ann.q0, p, s);
    o.rot_k = static_cast<int>(std::lround(scan.rot));
    o.zero_crossings = scan.crossings;
    o.x_min = scan.x_min;
    o.x_max = scan.x_max;
    orbits.push_back(o);
  }

  // periodicity classes and minimal periods
  for (size_t i = 0; i < orbits.size(); ++i) {
    if (orbits[i].class_id >= 0) continue;
    const int id = static_cast<int>(i);
    orbits[i].class_id = id;
    for (size_t j = i + 1; j < orbits.size(); ++j) {
      if (orbits[j].class_id >= 0) continue;
      if (orbits[i].rot_k == orbits[j].rot_k &&
          same_periodicity_class(orbits[i], orbits[j], p, s, opt.class_tol))
        orbits[j].class_id = id;
    }
  }
  for (auto& o : orbits)
    o.minimal_period_certified = minimal_period_check(o, p, s, opt.min_displacement);

  std::sort(orbits.begin(), orbits.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
    if (a.rot_k != b.rot_k) return a.rot_k < b.rot_k;
    if (a.z0.x != b.z0.x) return a.z0.x < b.z0.x;
    return a.z0.y < b.z0.y;
  });
  return orbits;
}

bool same_periodicity_class(const PeriodicOrbit& o1, const PeriodicOrbit& o2,
                            const SystemParams& p, const IntegratorSettings& s,
                            double class_tol) {
  if (o1.m != o2.m) throw Error("same_periodicity_class: orbits must share m");
  const double beta = p.weight.beta();
  for (int j = 0; j < o1.m; ++j) {
    const PhaseState shifted =
        j == 0 ? o1.z0
               : integrate_rhs_final(NagumoField{&p}, o1.z0, 0.0, j * beta, s,
                                     p.weight.restart_times(0.0, j * beta));
    if (distance(shifted, o2.z0) < class_tol) return true;
  }
  return false;
}

bool minimal_period_check(const PeriodicOrbit& o, const SystemParams& p,
                          const IntegratorSettings& s, double min_displacement) {
  if (o.m == 1) return true;
  if (gcd_int(o.m, o.rot_k) != 1) return false;
  for (int i = 1; i < o.m; ++i) {
    const PhaseState zi = poincare_map(o.z0, i, p, s);
    if (distance(zi, o.z0) <= min_displacement) return false;
  }
  return true;
}

std::vector<int> coprime_rotation_set(int m, int K) {
  if (m < 2) throw Error("coprime_rotation_set: m must be >= 2");
  if (K < 1) throw Error("coprime_rotation_set: K must be >= 1");
  std::vector<int> out;
  for (int l = 1; static_cast<int>(out.size()) < K; ++l)
    if (gcd_int(l, m) == 1) out.push_back(l);
  return out;
}

}  // namespace nagumo
