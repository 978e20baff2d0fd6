#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nagumo/config.hpp"
#include "nagumo/energy.hpp"
#include "nagumo/model.hpp"
#include "nagumo/orbits.hpp"

namespace nagumo {

enum class Task {
  Portrait,
  TimeMap,
  Rotation,
  OuterRadius,
  FindOrbits,
  Subharmonics,
  Sweep,
};

std::string task_name(Task t);
Task task_from_name(const std::string& name);

/// Fully resolved run description. Built from a flat config file; every
/// field has a documented default so a scenario round-trips through its
/// canonical config form unchanged.
struct Scenario {
  Task task = Task::Portrait;

  // model
  double g = 0.1;
  double a = 0.6;
  double beta = 1.0;
  std::optional<double> k0;  ///< absent = default gain c0
  WeightKind weight_kind = WeightKind::Constant;
  double weight_value = 20.0;
  std::vector<WeightSegment> weight_segments;
  std::vector<std::pair<double, double>> weight_samples;
  SplitStrategy split = SplitStrategy::Mean;
  double split_nbar = 0.0;

  // numerics
  IntegratorSettings tol;
  LevelSpec level;
  FinderOptions finder;
  OuterRadiusOptions outer;

  // task parameters
  int m = 1;
  int N = 1;
  int K = 1;
  std::vector<double> portrait_x0;
  double portrait_t = 10.0;
  double dt_out = 0.01;
  std::vector<std::pair<double, double>> rotation_points;
  std::optional<std::pair<double, double>> rotation_q0;  ///< absent = (a_nbar, 0)
  std::vector<double> nbar_grid;
  std::vector<double> sweep_nbar;
  std::vector<double> sweep_alpha;
  std::vector<int> sweep_m;
  double sweep_n0 = 1.0;

  // io
  std::string out_dir = ".";
  std::string emit_orbits_dir;
  bool quiet = false;

  static Scenario from_config(const Config& cfg);
  Config to_config() const;

  /// Builds the model with the weight split already applied.
  SystemParams build_params() const;
};

/// Built once per run: the full chain from the split weight to the verified
/// annulus.
struct Pipeline {
  SystemParams params;
  AutonomousSystem aut;
  double a_nbar = 0.0;
  Band band;
  LevelCurve lc;
  double tau = 0.0;
  Annulus ann;
  TwistCertificate cert;
};

Pipeline build_pipeline(const SystemParams& params, int m, int N,
                        const IntegratorSettings& tol, LevelSpec level,
                        const OuterRadiusOptions& outer,
                        const TwistOptions& twist = {});

struct OrbitReport {
  Pipeline pipe;
  std::vector<PeriodicOrbit> orbits;
  /// Distinct periodicity classes per rotation number.
  std::map<int, int> classes_per_k;
};

OrbitReport run_find_orbits(const SystemParams& params, int m, int N,
                            const IntegratorSettings& tol, LevelSpec level,
                            const OuterRadiusOptions& outer,
                            FinderOptions finder);

struct SubharmonicReport {
  std::vector<int> coprimes;  ///< the admissible rotation numbers
  int N = 0;                  ///< largest of them
  OrbitReport base;
  std::vector<PeriodicOrbit> kept;  ///< orbits with rot in the co-prime set
  bool all_minimal = false;
  bool pairwise_distinct_classes = false;
};

SubharmonicReport subharmonic_search(const SystemParams& params, int m, int K,
                                     const IntegratorSettings& tol,
                                     LevelSpec level,
                                     const OuterRadiusOptions& outer,
                                     FinderOptions finder);

struct SweepRow {
  double nbar = 0.0;
  double alpha = 0.0;
  double ntilde_l1 = 0.0;
  int m = 0;
  int certified_N = 0;
  int orbits_found = 0;
  std::string status = "ok";
};

std::vector<SweepRow> sweep_multiplicity(const Scenario& sc);

struct ScenarioResult {
  int exit_code = 0;
  std::string summary;                  ///< printed unless quiet
  std::vector<std::string> files;       ///< files written
};

/// Dispatches a scenario to its pipeline, writes CSV outputs under the
/// scenario's output directory, and returns a printable summary. Throws
/// ConfigError / NumericalError for the CLI to map to exit codes.
ScenarioResult run_scenario(const Scenario& sc);

/// CSV snippets shared by the CLI and the reports.
std::string certificate_text(const TwistCertificate& c);
std::string orbit_csv_header();
std::string orbit_csv_row(const PeriodicOrbit& o);

}  // namespace nagumo
