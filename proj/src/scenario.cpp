#include "nagumo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "nagumo/numerics.hpp"
#include "nagumo/rotation.hpp"

namespace nagumo {

namespace fs = std::filesystem;

std::string task_name(Task t) {
  switch (t) {
    case Task::Portrait: return "portrait";
    case Task::TimeMap: return "timemap";
    case Task::Rotation: return "rotation";
    case Task::OuterRadius: return "outer-radius";
    case Task::FindOrbits: return "find-orbits";
    case Task::Subharmonics: return "subharmonics";
    case Task::Sweep: return "sweep";
  }
  return "?";
}

Task task_from_name(const std::string& name) {
  for (Task t : {Task::Portrait, Task::TimeMap, Task::Rotation, Task::OuterRadius,
                 Task::FindOrbits, Task::Subharmonics, Task::Sweep})
    if (task_name(t) == name) return t;
  throw ConfigError("config: unknown task '" + name + "'");
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "task", "g", "a", "beta", "k0",
      "weight.kind", "weight.value", "weight.segments", "weight.samples",
      "split.strategy", "split.nbar",
      "tol.rel", "tol.abs", "tol.max-step",
      "level.rule", "level.fraction",
      "m", "n", "k",
      "portrait.x0", "portrait.t", "dt-out",
      "rotation.points", "rotation.q0",
      "outer.samples", "outer.r-init", "outer.r-max",
      "orbits.seeds-angular", "orbits.seeds-radial", "orbits.fp-tol",
      "orbits.dedup-tol", "orbits.class-tol", "orbits.min-displacement",
      "orbits.fd-scale",
      "sweep.nbar", "sweep.alpha", "sweep.m", "sweep.n0",
      "out", "emit-orbits", "quiet",
  };
  return keys;
}

std::string csv_num(double v) { return format_number(v); }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

}  // namespace

Scenario Scenario::from_config(const Config& cfg) {
  for (const auto& key : cfg.keys()) {
    if (!known_keys().count(key))
      throw ConfigError("config: unknown field '" + key + "'");
  }
  Scenario sc;
  sc.task = task_from_name(cfg.word("task"));
  sc.g = cfg.number_or("g", 0.1);
  sc.a = cfg.number_or("a", 0.6);
  sc.beta = cfg.number_or("beta", 1.0);
  if (cfg.has("k0")) {
    const std::string v = cfg.word("k0");
    if (v != "c0") sc.k0 = cfg.number("k0");
  }
  const std::string kind = cfg.word_or("weight.kind", "constant");
  if (kind == "constant") {
    sc.weight_kind = WeightKind::Constant;
    sc.weight_value = cfg.number_or("weight.value", 20.0);
  } else if (kind == "piecewise") {
    sc.weight_kind = WeightKind::Piecewise;
    for (auto [t_end, value] : cfg.pair_list("weight.segments"))
      sc.weight_segments.push_back({t_end, value});
  } else if (kind == "sampled") {
    sc.weight_kind = WeightKind::Sampled;
    sc.weight_samples = cfg.pair_list("weight.samples");
  } else {
    throw ConfigError("config: weight.kind must be constant, piecewise or sampled");
  }
  const std::string split = cfg.word_or("split.strategy", "mean");
  if (split == "mean") {
    sc.split = SplitStrategy::Mean;
  } else if (split == "plateau-value") {
    sc.split = SplitStrategy::PlateauValue;
  } else if (split == "explicit") {
    sc.split = SplitStrategy::Explicit;
    sc.split_nbar = cfg.number("split.nbar");
  } else {
    throw ConfigError("config: split.strategy must be mean, plateau-value or explicit");
  }
  sc.tol.rel_tol = cfg.number_or("tol.rel", 1e-10);
  sc.tol.abs_tol = cfg.number_or("tol.abs", 1e-12);
  sc.tol.max_step = cfg.number_or("tol.max-step", 0.25);
  const std::string rule = cfg.word_or("level.rule", "max-allowed");
  if (rule == "max-allowed") {
    sc.level = LevelSpec::max_allowed();
  } else if (rule == "fraction") {
    sc.level = LevelSpec::fraction(cfg.number("level.fraction"));
  } else {
    throw ConfigError("config: level.rule must be max-allowed or fraction");
  }
  sc.m = cfg.integer_or("m", 1);
  sc.N = cfg.integer_or("n", 1);
  sc.K = cfg.integer_or("k", 1);
  if (sc.m < 1) throw ConfigError("config: m must be >= 1");
  if (sc.N < 1) throw ConfigError("config: n must be >= 1");
  if (sc.K < 1) throw ConfigError("config: k must be >= 1");
  if (cfg.has("portrait.x0")) sc.portrait_x0 = cfg.list("portrait.x0");
  sc.portrait_t = cfg.number_or("portrait.t", 10.0);
  sc.dt_out = cfg.number_or("dt-out", 0.01);
  if (cfg.has("rotation.points")) sc.rotation_points = cfg.pair_list("rotation.points");
  if (cfg.has("rotation.q0")) {
    const auto q = cfg.pair_list("rotation.q0");
    if (q.size() != 1)
      throw ConfigError("config: rotation.q0 must hold exactly one (x, y) pair");
    sc.rotation_q0 = q.front();
  }
  sc.outer.n_samples = cfg.integer_or("outer.samples", 64);
  sc.outer.r_init = cfg.number_or("outer.r-init", 2.0);
  sc.outer.r_max = cfg.number_or("outer.r-max", 1e6);
  sc.finder.seeds_angular = cfg.integer_or("orbits.seeds-angular", 48);
  sc.finder.seeds_radial = cfg.integer_or("orbits.seeds-radial", 24);
  sc.finder.fp_tol = cfg.number_or("orbits.fp-tol", 1e-9);
  sc.finder.dedup_tol = cfg.number_or("orbits.dedup-tol", 1e-6);
  sc.finder.class_tol = cfg.number_or("orbits.class-tol", 1e-6);
  sc.finder.min_displacement = cfg.number_or("orbits.min-displacement", 1e-4);
  sc.finder.fd_scale = cfg.number_or("orbits.fd-scale", 1e-6);
  if (cfg.has("sweep.nbar")) sc.sweep_nbar = cfg.list("sweep.nbar");
  if (cfg.has("sweep.alpha")) sc.sweep_alpha = cfg.list("sweep.alpha");
  if (cfg.has("sweep.m"))
    for (double v : cfg.list("sweep.m")) sc.sweep_m.push_back(static_cast<int>(v));
  sc.sweep_n0 = cfg.number_or("sweep.n0", 1.0);
  sc.out_dir = cfg.word_or("out", ".");
  sc.emit_orbits_dir = cfg.word_or("emit-orbits", "");
  sc.quiet = cfg.integer_or("quiet", 0) != 0;

  // task-specific required fields
  switch (sc.task) {
    case Task::Rotation:
      if (sc.rotation_points.empty())
        throw ConfigError("config: task rotation requires rotation.points");
      break;
    case Task::Sweep:
      if (sc.sweep_nbar.empty() || sc.sweep_alpha.empty() || sc.sweep_m.empty())
        throw ConfigError("config: task sweep requires sweep.nbar, sweep.alpha and sweep.m");
      if (sc.weight_kind != WeightKind::Constant)
        throw ConfigError("config: task sweep builds its own weights; leave weight.kind at constant");
      break;
    case Task::Subharmonics:
      if (sc.m < 2) throw ConfigError("config: task subharmonics requires m >= 2");
      break;
    default:
      break;
  }
  if (sc.weight_kind == WeightKind::Sampled && sc.split == SplitStrategy::PlateauValue)
    throw ConfigError("config: plateau-value split requires a piecewise weight");
  return sc;
}

Config Scenario::to_config() const {
  Config cfg;
  cfg.set_word("task", task_name(task));
  cfg.set_number("g", g);
  cfg.set_number("a", a);
  cfg.set_number("beta", beta);
  if (k0)
    cfg.set_number("k0", *k0);
  else
    cfg.set_word("k0", "c0");
  switch (weight_kind) {
    case WeightKind::Constant:
      cfg.set_word("weight.kind", "constant");
      cfg.set_number("weight.value", weight_value);
      break;
    case WeightKind::Piecewise: {
      cfg.set_word("weight.kind", "piecewise");
      std::vector<std::pair<double, double>> segs;
      for (const auto& s : weight_segments) segs.emplace_back(s.t_end, s.value);
      cfg.set_pair_list("weight.segments", segs);
      break;
    }
    case WeightKind::Sampled:
      cfg.set_word("weight.kind", "sampled");
      cfg.set_pair_list("weight.samples", weight_samples);
      break;
  }
  switch (split) {
    case SplitStrategy::Mean: cfg.set_word("split.strategy", "mean"); break;
    case SplitStrategy::PlateauValue:
      cfg.set_word("split.strategy", "plateau-value");
      break;
    case SplitStrategy::Explicit:
      cfg.set_word("split.strategy", "explicit");
      cfg.set_number("split.nbar", split_nbar);
      break;
  }
  cfg.set_number("tol.rel", tol.rel_tol);
  cfg.set_number("tol.abs", tol.abs_tol);
  cfg.set_number("tol.max-step", tol.max_step);
  if (level.rule == LevelSpec::Rule::MaxAllowed) {
    cfg.set_word("level.rule", "max-allowed");
  } else {
    cfg.set_word("level.rule", "fraction");
    cfg.set_number("level.fraction", level.lambda);
  }
  cfg.set_integer("m", m);
  cfg.set_integer("n", N);
  cfg.set_integer("k", K);
  if (!portrait_x0.empty()) cfg.set_list("portrait.x0", portrait_x0);
  cfg.set_number("portrait.t", portrait_t);
  cfg.set_number("dt-out", dt_out);
  if (!rotation_points.empty()) cfg.set_pair_list("rotation.points", rotation_points);
  if (rotation_q0) cfg.set_pair_list("rotation.q0", {*rotation_q0});
  cfg.set_integer("outer.samples", outer.n_samples);
  cfg.set_number("outer.r-init", outer.r_init);
  cfg.set_number("outer.r-max", outer.r_max);
  cfg.set_integer("orbits.seeds-angular", finder.seeds_angular);
  cfg.set_integer("orbits.seeds-radial", finder.seeds_radial);
  cfg.set_number("orbits.fp-tol", finder.fp_tol);
  cfg.set_number("orbits.dedup-tol", finder.dedup_tol);
  cfg.set_number("orbits.class-tol", finder.class_tol);
  cfg.set_number("orbits.min-displacement", finder.min_displacement);
  cfg.set_number("orbits.fd-scale", finder.fd_scale);
  if (!sweep_nbar.empty()) cfg.set_list("sweep.nbar", sweep_nbar);
  if (!sweep_alpha.empty()) cfg.set_list("sweep.alpha", sweep_alpha);
  if (!sweep_m.empty()) {
    std::vector<double> ms(sweep_m.begin(), sweep_m.end());
    cfg.set_list("sweep.m", ms);
  }
  cfg.set_number("sweep.n0", sweep_n0);
  cfg.set_word("out", out_dir);
  if (!emit_orbits_dir.empty()) cfg.set_word("emit-orbits", emit_orbits_dir);
  cfg.set_integer("quiet", quiet ? 1 : 0);
  return cfg;
}

SystemParams Scenario::build_params() const {
  if (!(g > 0.0)) throw ConfigError("config: g must be positive");
  const Nonlinearity f = Nonlinearity::cubic(a);
  const ModifiedNonlinearity f0 = k0 ? build_modified(f, *k0) : build_modified(f);
  const Weight w = [&] {
    switch (weight_kind) {
      case WeightKind::Piecewise:
        return Weight::piecewise_constant(beta, weight_segments);
      case WeightKind::Sampled: {
        std::vector<double> ts, vs;
        for (auto [t, v] : weight_samples) {
          ts.push_back(t);
          vs.push_back(v);
        }
        return Weight::sampled(beta, ts, vs);
      }
      case WeightKind::Constant:
        break;
    }
    return Weight::constant(beta, weight_value);
  }();
  return SystemParams{g, split_weight(w, split, split_nbar), f0};
}

Pipeline build_pipeline(const SystemParams& params, int m, int N,
                        const IntegratorSettings& tol, LevelSpec level,
                        const OuterRadiusOptions& outer,
                        const TwistOptions& twist) {
  Pipeline pipe{params, autonomous_from(params), 0.0, {}, {}, 0.0, {}, {}};
  pipe.a_nbar = equilibrium(pipe.aut);
  pipe.band = choose_band(pipe.aut);
  pipe.lc = level_curve(pipe.aut, pipe.band, level);
  pipe.tau = time_map(pipe.aut, pipe.lc);
  pipe.ann = build_annulus(pipe.lc, m, params, tol, outer);
  pipe.cert = verify_twist(pipe.ann, m, N, params, tol, twist);
  return pipe;
}

OrbitReport run_find_orbits(const SystemParams& params, int m, int N,
                            const IntegratorSettings& tol, LevelSpec level,
                            const OuterRadiusOptions& outer,
                            FinderOptions finder) {
  OrbitReport rep;
  rep.pipe = build_pipeline(params, m, N, tol, level, outer);
  finder.target_N = rep.pipe.cert.valid() ? N : 0;
  if (rep.pipe.cert.valid())
    rep.orbits = find_fixed_points(rep.pipe.ann, m, params, tol, finder);
  std::set<std::pair<int, int>> classes;
  for (const auto& o : rep.orbits) classes.insert({o.rot_k, o.class_id});
  for (const auto& [k, id] : classes) rep.classes_per_k[k] += 1;
  return rep;
}

SubharmonicReport subharmonic_search(const SystemParams& params, int m, int K,
                                     const IntegratorSettings& tol,
                                     LevelSpec level,
                                     const OuterRadiusOptions& outer,
                                     FinderOptions finder) {
  if (m < 2) throw Error("subharmonic_search: m must be >= 2");
  SubharmonicReport rep;
  rep.coprimes = coprime_rotation_set(m, K);
  rep.N = rep.coprimes.back();
  rep.base = run_find_orbits(params, m, rep.N, tol, level, outer, finder);
  // one representative per periodicity class: the whole class is the same
  // solution up to time shifts, and the multiplicity counts classes
  std::set<int> seen_classes;
  for (const auto& o : rep.base.orbits) {
    if (std::find(rep.coprimes.begin(), rep.coprimes.end(), o.rot_k) ==
        rep.coprimes.end())
      continue;
    if (!seen_classes.insert(o.class_id).second) continue;
    rep.kept.push_back(o);
  }
  rep.all_minimal = !rep.kept.empty();
  for (const auto& o : rep.kept)
    if (!o.minimal_period_certified) rep.all_minimal = false;
  rep.pairwise_distinct_classes = rep.kept.size() >= 2;
  for (size_t i = 0; i < rep.kept.size(); ++i)
    for (size_t j = i + 1; j < rep.kept.size(); ++j)
      if (same_periodicity_class(rep.kept[i], rep.kept[j], params, tol,
                                 finder.class_tol))
        rep.pairwise_distinct_classes = false;
  return rep;
}

std::vector<SweepRow> sweep_multiplicity(const Scenario& sc) {
  struct Cell {
    double n1, alpha;
    int m;
  };
  std::vector<Cell> cells;
  for (double n1 : sc.sweep_nbar)
    for (double alpha : sc.sweep_alpha)
      for (int m : sc.sweep_m) cells.push_back({n1, alpha, m});
  std::vector<SweepRow> rows(cells.size());
  parallel_for(static_cast<int>(cells.size()), [&](int i) {
    const Cell& cell = cells[i];
    SweepRow row;
    row.nbar = cell.n1;
    row.alpha = cell.alpha;
    row.m = cell.m;
    try {
      if (!(cell.alpha > 0.0 && cell.alpha < sc.beta))
        throw ConfigError("alpha must lie in ]0, beta[");
      const Nonlinearity f = Nonlinearity::cubic(sc.a);
      const ModifiedNonlinearity f0 =
          sc.k0 ? build_modified(f, *sc.k0) : build_modified(f);
      Weight w = Weight::piecewise_constant(
          sc.beta, {{cell.alpha, cell.n1}, {sc.beta, sc.sweep_n0}});
      w = split_weight(w, SplitStrategy::PlateauValue);
      row.ntilde_l1 = w.ntilde_l1();
      const SystemParams params{sc.g, w, f0};
      Pipeline pipe =
          build_pipeline(params, cell.m, 1, sc.tol, sc.level, sc.outer);
      row.certified_N = pipe.cert.max_certified();
      if (row.certified_N >= 1) {
        FinderOptions finder = sc.finder;
        finder.target_N = row.certified_N;
        const auto orbits = find_fixed_points(pipe.ann, cell.m, params, sc.tol, finder);
        std::set<std::pair<int, int>> classes;
        for (const auto& o : orbits)
          if (o.rot_k >= 1 && o.rot_k <= row.certified_N)
            classes.insert({o.rot_k, o.class_id});
        row.orbits_found = static_cast<int>(classes.size());
      }
    } catch (const HypothesisError& e) {
      row.status = std::string(e.what()).find("no crossing") != std::string::npos
                       ? "no-equilibrium"
                       : "hypothesis-violated";
    } catch (const SearchError&) {
      row.status = "radius-search-failed";
    } catch (const NumericalError&) {
      row.status = "numerical-failure";
    } catch (const ConfigError&) {
      row.status = "bad-cell";
    }
    rows[i] = row;
  });
  return rows;
}

std::string certificate_text(const TwistCertificate& c) {
  std::ostringstream os;
  os << "certificate: m=" << c.m << " N=" << c.N
     << " inner_min_rot=" << format_number(c.inner_min_rot)
     << " outer_max_rot=" << format_number(c.outer_max_rot)
     << " nonq_ok=" << (c.nonq_ok ? 1 : 0) << " valid=" << (c.valid() ? 1 : 0)
     << " max_certified_N=" << c.max_certified();
  return os.str();
}

std::string orbit_csv_header() {
  return "x0,y0,m,k,crossings,residual,xmin,xmax,minimal,class_id";
}

std::string orbit_csv_row(const PeriodicOrbit& o) {
  std::ostringstream os;
  os << csv_num(o.z0.x) << ',' << csv_num(o.z0.y) << ',' << o.m << ',' << o.rot_k
     << ',' << o.zero_crossings << ',' << csv_num(o.residual) << ','
     << csv_num(o.x_min) << ',' << csv_num(o.x_max) << ','
     << (o.minimal_period_certified ? 1 : 0) << ',' << o.class_id;
  return os.str();
}

namespace {

std::string trajectory_csv(const Trajectory& traj, double t0, double t1,
                           double dt) {
  std::string out = "t,x,y\n";
  const int n = std::max(1, static_cast<int>(std::round((t1 - t0) / dt)));
  for (int i = 0; i <= n; ++i) {
    const double t = t0 + (t1 - t0) * i / n;
    const PhaseState z = traj.state_at(t);
    out += csv_num(t) + "," + csv_num(z.x) + "," + csv_num(z.y) + "\n";
  }
  return out;
}

ScenarioResult run_portrait(const Scenario& sc) {
  ScenarioResult res;
  const SystemParams params = sc.build_params();
  std::vector<double> x0s = sc.portrait_x0;
  if (x0s.empty())
    for (int i = 1; i <= 20; ++i) x0s.push_back(0.05 * i);
  fs::create_directories(sc.out_dir);
  const double T = sc.portrait_t;
  std::ostringstream os;
  os << "portrait: " << x0s.size() << " initial points on the x-axis, t in [-"
     << format_number(T) << ", " << format_number(T) << "]\n";
  for (size_t i = 0; i < x0s.size(); ++i) {
    const PhaseState z0{x0s[i], 0.0};
    const Trajectory fwd = integrate(z0, 0.0, T, params, sc.tol);
    // the backward arc solves the time-reflected field forward
    const auto reflected = [&params](double t, PhaseState z) {
      const PhaseState d = rhs(-t, z, params);
      return PhaseState{-d.x, -d.y};
    };
    std::vector<double> rev_restarts;
    for (double t : params.weight.restart_times(-T, 0.0)) rev_restarts.push_back(-t);
    std::sort(rev_restarts.begin(), rev_restarts.end());
    const Trajectory bwd =
        integrate_rhs(reflected, z0, 0.0, T, sc.tol, rev_restarts);
    std::string csv = "t,x,y\n";
    const int n = std::max(1, static_cast<int>(std::round(T / sc.dt_out)));
    for (int j = n; j >= 1; --j) {
      const double t = T * j / n;
      const PhaseState z = bwd.state_at(t);
      csv += csv_num(-t) + "," + csv_num(z.x) + "," + csv_num(z.y) + "\n";
    }
    for (int j = 0; j <= n; ++j) {
      const double t = T * j / n;
      const PhaseState z = fwd.state_at(t);
      csv += csv_num(t) + "," + csv_num(z.x) + "," + csv_num(z.y) + "\n";
    }
    char name[64];
    std::snprintf(name, sizeof name, "portrait_orbit_%02zu.csv", i);
    const std::string path = (fs::path(sc.out_dir) / name).string();
    write_file(path, csv);
    res.files.push_back(path);
  }
  os << "wrote " << res.files.size() << " orbit-segment files under " << sc.out_dir;
  res.summary = os.str();
  return res;
}

ScenarioResult run_timemap(const Scenario& sc) {
  ScenarioResult res;
  const SystemParams params = sc.build_params();
  std::vector<double> grid = sc.nbar_grid;
  if (grid.empty()) grid = {20.0, 80.0, 320.0};
  std::string csv = "nbar,a_nbar,c,b_minus,b_plus,tau,bound\n";
  std::ostringstream os;
  for (double nbar : grid) {
    const AutonomousSystem aut{params.g, nbar, params.f0};
    const Band band = choose_band(aut);
    const LevelCurve lc = level_curve(aut, band, sc.level);
    const double tau = time_map(aut, lc);
    const double bound = period_bound(aut, band);
    csv += csv_num(nbar) + "," + csv_num(lc.a_nbar) + "," + csv_num(lc.c) + "," +
           csv_num(lc.b_minus) + "," + csv_num(lc.b_plus) + "," + csv_num(tau) +
           "," + csv_num(bound) + "\n";
    os << "nbar=" << format_number(nbar) << " tau=" << format_number(tau)
       << " bound=" << format_number(bound) << "\n";
  }
  fs::create_directories(sc.out_dir);
  const std::string path = (fs::path(sc.out_dir) / "timemap.csv").string();
  write_file(path, csv);
  res.files.push_back(path);
  os << "wrote " << path;
  res.summary = os.str();
  return res;
}

ScenarioResult run_rotation(const Scenario& sc) {
  ScenarioResult res;
  const SystemParams params = sc.build_params();
  PhaseState q0;
  if (sc.rotation_q0) {
    q0 = {sc.rotation_q0->first, sc.rotation_q0->second};
  } else {
    q0 = {equilibrium(autonomous_from(params)), 0.0};
  }
  std::string csv = "x0,y0,rot\n";
  std::ostringstream os;
  os << "rotation around q0=(" << format_number(q0.x) << ", "
     << format_number(q0.y) << "), m=" << sc.m << "\n";
  for (auto [x, y] : sc.rotation_points) {
    const double r = rot_m({x, y}, q0, sc.m, params, sc.tol);
    csv += csv_num(x) + "," + csv_num(y) + "," + csv_num(r) + "\n";
  }
  fs::create_directories(sc.out_dir);
  const std::string path = (fs::path(sc.out_dir) / "rotation.csv").string();
  write_file(path, csv);
  res.files.push_back(path);
  os << csv << "wrote " << path;
  res.summary = os.str();
  return res;
}

ScenarioResult run_outer_radius(const Scenario& sc) {
  ScenarioResult res;
  const SystemParams params = sc.build_params();
  const PhaseState q0{equilibrium(autonomous_from(params)), 0.0};
  const OuterRadiusResult r = outer_radius_search(q0, sc.m, params, sc.tol, sc.outer);
  std::ostringstream os;
  os << "outer-radius: R0=" << format_number(r.radius)
     << " max_sampled_rot=" << format_number(r.max_rot)
     << " samples=" << r.samples;
  res.summary = os.str();
  return res;
}

ScenarioResult run_orbits_task(const Scenario& sc) {
  ScenarioResult res;
  const SystemParams params = sc.build_params();
  const OrbitReport rep = run_find_orbits(params, sc.m, sc.N, sc.tol, sc.level,
                                          sc.outer, sc.finder);
  std::ostringstream os;
  os << certificate_text(rep.pipe.cert) << "\n";
  os << "a_nbar=" << format_number(rep.pipe.a_nbar)
     << " tau=" << format_number(rep.pipe.tau)
     << " R=" << format_number(rep.pipe.ann.outer_radius) << "\n";
  std::string csv = orbit_csv_header() + "\n";
  for (const auto& o : rep.orbits) csv += orbit_csv_row(o) + "\n";
  os << csv;
  fs::create_directories(sc.out_dir);
  const std::string path = (fs::path(sc.out_dir) / "orbits.csv").string();
  write_file(path, csv);
  res.files.push_back(path);
  if (!sc.emit_orbits_dir.empty()) {
    fs::create_directories(sc.emit_orbits_dir);
    for (size_t i = 0; i < rep.orbits.size(); ++i) {
      const auto& o = rep.orbits[i];
      const Trajectory traj =
          integrate(o.z0, 0.0, o.m * params.weight.beta(), params, sc.tol);
      char name[64];
      std::snprintf(name, sizeof name, "orbit_k%d_%02zu.csv", o.rot_k, i);
      const std::string opath = (fs::path(sc.emit_orbits_dir) / name).string();
      write_file(opath, trajectory_csv(traj, 0.0, o.m * params.weight.beta(),
                                       sc.dt_out));
      res.files.push_back(opath);
    }
  }
  os << "found " << rep.orbits.size() << " orbits; wrote " << path;
  res.summary = os.str();
  return res;
}

ScenarioResult run_subharmonics(const Scenario& sc) {
  ScenarioResult res;
  const SystemParams params = sc.build_params();
  const SubharmonicReport rep = subharmonic_search(
      params, sc.m, sc.K, sc.tol, sc.level, sc.outer, sc.finder);
  std::ostringstream os;
  os << "coprime rotation set:";
  for (int l : rep.coprimes) os << ' ' << l;
  os << " (N=" << rep.N << ")\n";
  os << certificate_text(rep.base.pipe.cert) << "\n";
  std::string csv = orbit_csv_header() + "\n";
  for (const auto& o : rep.kept) csv += orbit_csv_row(o) + "\n";
  os << csv;
  os << "kept " << rep.kept.size() << " subharmonic orbits; all_minimal="
     << (rep.all_minimal ? 1 : 0)
     << " pairwise_distinct=" << (rep.pairwise_distinct_classes ? 1 : 0) << "\n";
  fs::create_directories(sc.out_dir);
  const std::string path = (fs::path(sc.out_dir) / "subharmonics.csv").string();
  write_file(path, csv);
  res.files.push_back(path);
  os << "wrote " << path;
  res.summary = os.str();
  return res;
}

ScenarioResult run_sweep(const Scenario& sc) {
  ScenarioResult res;
  const auto rows = sweep_multiplicity(sc);
  std::string csv = "nbar,alpha,ntilde_l1,m,certified_N,orbits_found,status\n";
  for (const auto& r : rows) {
    csv += csv_num(r.nbar) + "," + csv_num(r.alpha) + "," + csv_num(r.ntilde_l1) +
           "," + std::to_string(r.m) + "," + std::to_string(r.certified_N) + "," +
           std::to_string(r.orbits_found) + "," + r.status + "\n";
  }
  fs::create_directories(sc.out_dir);
  const std::string path = (fs::path(sc.out_dir) / "sweep.csv").string();
  write_file(path, csv);
  res.files.push_back(path);
  res.summary = csv + "wrote " + path;
  return res;
}

}  // namespace

ScenarioResult run_scenario(const Scenario& sc) {
  switch (sc.task) {
    case Task::Portrait: return run_portrait(sc);
    case Task::TimeMap: return run_timemap(sc);
    case Task::Rotation: return run_rotation(sc);
    case Task::OuterRadius: return run_outer_radius(sc);
    case Task::FindOrbits: return run_orbits_task(sc);
    case Task::Subharmonics: return run_subharmonics(sc);
    case Task::Sweep: return run_sweep(sc);
  }
  throw Error("run_scenario: unhandled task");
}

}  // namespace nagumo
