#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nagumo/config.hpp"
#include "nagumo/energy.hpp"
#include "nagumo/flow.hpp"
#include "nagumo/model.hpp"
#include "nagumo/orbits.hpp"
#include "nagumo/rotation.hpp"
#include "nagumo/scenario.hpp"

namespace py = pybind11;
using namespace nagumo;

PYBIND11_MODULE(_core, mod) {
  mod.doc() =
      "Periodic and subharmonic solutions of the Nagumo-type fiber equation: "
      "flow integration, rotation numbers, energy level curves, time maps, "
      "twist certificates and fixed points of iterated period maps.";

  py::register_exception<ConfigError>(mod, "ConfigError");
  py::register_exception<NumericalError>(mod, "NumericalError");

  py::class_<Nonlinearity>(mod, "Nonlinearity")
      .def(py::init<double, std::function<double(double)>,
                    std::function<double(double)>>(),
           py::arg("a"), py::arg("f"), py::arg("df"))
      .def_static("cubic", &Nonlinearity::cubic, py::arg("a"))
      .def_property_readonly("a", &Nonlinearity::a)
      .def("__call__", &Nonlinearity::operator())
      .def("deriv", &Nonlinearity::deriv);

  py::class_<ModifiedNonlinearity>(mod, "ModifiedNonlinearity")
      .def("__call__", &ModifiedNonlinearity::operator())
      .def("deriv", &ModifiedNonlinearity::deriv)
      .def("primitive", &ModifiedNonlinearity::primitive)
      .def_property_readonly("k0", &ModifiedNonlinearity::k0)
      .def_property_readonly("c0", &ModifiedNonlinearity::c0)
      .def_property_readonly("lipschitz", &ModifiedNonlinearity::lipschitz)
      .def_property_readonly("a", &ModifiedNonlinearity::a);

  mod.def("build_modified",
          py::overload_cast<const Nonlinearity&, double>(&build_modified),
          py::arg("f"), py::arg("k0"));
  mod.def("build_modified", py::overload_cast<const Nonlinearity&>(&build_modified),
          py::arg("f"));
  mod.def("clamp01", &clamp01);
  mod.def("tail_bump", &tail_bump);

  py::enum_<WeightKind>(mod, "WeightKind")
      .value("Constant", WeightKind::Constant)
      .value("Piecewise", WeightKind::Piecewise)
      .value("Sampled", WeightKind::Sampled);

  py::enum_<SplitStrategy>(mod, "SplitStrategy")
      .value("Mean", SplitStrategy::Mean)
      .value("PlateauValue", SplitStrategy::PlateauValue)
      .value("Explicit", SplitStrategy::Explicit);

  py::class_<Weight>(mod, "Weight")
      .def_static("constant", &Weight::constant, py::arg("beta"), py::arg("value"))
      .def_static(
          "piecewise_constant",
          [](double beta, const std::vector<std::pair<double, double>>& segs) {
            std::vector<WeightSegment> ws;
            for (auto [t, v] : segs) ws.push_back({t, v});
            return Weight::piecewise_constant(beta, ws);
          },
          py::arg("beta"), py::arg("segments"))
      .def_static("sampled", &Weight::sampled, py::arg("beta"), py::arg("t"),
                  py::arg("v"))
      .def("__call__", &Weight::eval)
      .def("eval", &Weight::eval)
      .def_property_readonly("beta", &Weight::beta)
      .def_property_readonly("kind", &Weight::kind)
      .def("period_integral", &Weight::period_integral)
      .def("has_split", &Weight::has_split)
      .def_property_readonly("nbar", &Weight::nbar)
      .def_property_readonly("ntilde_l1", &Weight::ntilde_l1);

  mod.def("split_weight", &split_weight, py::arg("w"), py::arg("strategy"),
          py::arg("explicit_nbar") = 0.0);
  mod.def("l1_norm_over", &l1_norm_over, py::arg("w"), py::arg("m"));

  py::class_<SystemParams>(mod, "SystemParams")
      .def(py::init<double, Weight, ModifiedNonlinearity>(), py::arg("g"),
           py::arg("weight"), py::arg("f0"))
      .def_readonly("g", &SystemParams::g)
      .def_readonly("weight", &SystemParams::weight)
      .def_readonly("f0", &SystemParams::f0);
  mod.def("hval", &hval, py::arg("params"), py::arg("t"), py::arg("s"));

  py::class_<PhaseState>(mod, "PhaseState")
      .def(py::init<double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0)
      .def_readwrite("x", &PhaseState::x)
      .def_readwrite("y", &PhaseState::y)
      .def("norm", &PhaseState::norm)
      .def("__repr__", [](const PhaseState& z) {
        return "PhaseState(" + format_number(z.x) + ", " + format_number(z.y) + ")";
      });

  py::class_<IntegratorSettings>(mod, "IntegratorSettings")
      .def(py::init([](double rel, double abs, double max_step) {
             IntegratorSettings s{rel, abs, max_step};
             s.validate();
             return s;
           }),
           py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12,
           py::arg("max_step") = 0.25)
      .def_readwrite("rel_tol", &IntegratorSettings::rel_tol)
      .def_readwrite("abs_tol", &IntegratorSettings::abs_tol)
      .def_readwrite("max_step", &IntegratorSettings::max_step);

  py::class_<Trajectory>(mod, "Trajectory")
      .def("state_at", &Trajectory::state_at)
      .def("samples", &Trajectory::samples)
      .def_property_readonly("t_begin", &Trajectory::t_begin)
      .def_property_readonly("t_end", &Trajectory::t_end)
      .def_property_readonly("front", &Trajectory::front)
      .def_property_readonly("back", &Trajectory::back);

  mod.def("rhs", &rhs, py::arg("t"), py::arg("z"), py::arg("params"));
  mod.def("integrate", &integrate, py::arg("z0"), py::arg("t0"), py::arg("t1"),
          py::arg("params"), py::arg("settings") = IntegratorSettings{});
  mod.def("poincare_map", &poincare_map, py::arg("z0"), py::arg("m"),
          py::arg("params"), py::arg("settings") = IntegratorSettings{});

  py::class_<Mat2>(mod, "Mat2")
      .def_readonly("a11", &Mat2::a11)
      .def_readonly("a12", &Mat2::a12)
      .def_readonly("a21", &Mat2::a21)
      .def_readonly("a22", &Mat2::a22)
      .def("det", &Mat2::det);

  mod.def("poincare_jacobian", &poincare_jacobian, py::arg("z0"), py::arg("m"),
          py::arg("params"), py::arg("settings") = IntegratorSettings{},
          py::arg("fd_scale") = 1e-6);

  py::class_<AngleRecord>(mod, "AngleRecord")
      .def_readonly("t", &AngleRecord::t)
      .def_readonly("theta", &AngleRecord::theta)
      .def_readonly("rho_min", &AngleRecord::rho_min)
      .def("rot", &AngleRecord::rot);

  mod.def("unwrap_angle", &unwrap_angle, py::arg("trajectory"), py::arg("q0"),
          py::arg("rho_floor") = kRhoFloor);
  mod.def("rot_m", &rot_m, py::arg("z0"), py::arg("q0"), py::arg("m"),
          py::arg("params"), py::arg("settings") = IntegratorSettings{});
  mod.def("rot_integral", &rot_integral, py::arg("z0"), py::arg("q0"),
          py::arg("m"), py::arg("params"),
          py::arg("settings") = IntegratorSettings{});

  py::class_<OuterRadiusOptions>(mod, "OuterRadiusOptions")
      .def(py::init<>())
      .def_readwrite("n_samples", &OuterRadiusOptions::n_samples)
      .def_readwrite("max_samples", &OuterRadiusOptions::max_samples)
      .def_readwrite("margin", &OuterRadiusOptions::margin)
      .def_readwrite("r_init", &OuterRadiusOptions::r_init)
      .def_readwrite("r_max", &OuterRadiusOptions::r_max);

  py::class_<OuterRadiusResult>(mod, "OuterRadiusResult")
      .def_readonly("radius", &OuterRadiusResult::radius)
      .def_readonly("max_rot", &OuterRadiusResult::max_rot)
      .def_readonly("samples", &OuterRadiusResult::samples);

  mod.def("outer_radius_search", &outer_radius_search, py::arg("q0"),
          py::arg("m"), py::arg("params"),
          py::arg("settings") = IntegratorSettings{},
          py::arg("options") = OuterRadiusOptions{});

  py::class_<AutonomousSystem>(mod, "AutonomousSystem")
      .def(py::init<double, double, ModifiedNonlinearity>(), py::arg("g"),
           py::arg("nbar"), py::arg("f0"))
      .def_readonly("g", &AutonomousSystem::g)
      .def_readonly("nbar", &AutonomousSystem::nbar);

  mod.def("autonomous_from", &autonomous_from, py::arg("params"));
  mod.def("energy", &energy, py::arg("z"), py::arg("system"));
  mod.def("potential", &potential, py::arg("x"), py::arg("system"));
  mod.def("equilibrium", &equilibrium, py::arg("system"));

  py::class_<Band>(mod, "Band")
      .def_readonly("a", &Band::a)
      .def_readonly("b", &Band::b)
      .def_readonly("d0", &Band::d0)
      .def_readonly("mu0", &Band::mu0);
  mod.def("choose_band", &choose_band, py::arg("system"));

  py::class_<LevelSpec>(mod, "LevelSpec")
      .def_static("max_allowed", &LevelSpec::max_allowed)
      .def_static("fraction", &LevelSpec::fraction, py::arg("lam"));

  py::class_<LevelCurve>(mod, "LevelCurve")
      .def_readonly("nbar", &LevelCurve::nbar)
      .def_readonly("c", &LevelCurve::c)
      .def_readonly("a_nbar", &LevelCurve::a_nbar)
      .def_readonly("b_minus", &LevelCurve::b_minus)
      .def_readonly("b_plus", &LevelCurve::b_plus)
      .def_readonly("boundary", &LevelCurve::boundary)
      .def("max_radius", &LevelCurve::max_radius);

  mod.def("level_curve", &level_curve, py::arg("system"), py::arg("band"),
          py::arg("spec") = LevelSpec::max_allowed(),
          py::arg("boundary_points") = 256);
  mod.def("time_map", &time_map, py::arg("system"), py::arg("level"));
  mod.def("period_bound", &period_bound, py::arg("system"), py::arg("band"));
  mod.def("rot_floor", &rot_floor, py::arg("tau"), py::arg("m"), py::arg("beta"));

  py::class_<Annulus>(mod, "Annulus")
      .def_readonly("inner", &Annulus::inner)
      .def_readonly("outer_radius", &Annulus::outer_radius)
      .def_readonly("q0", &Annulus::q0)
      .def("contains", &Annulus::contains, py::arg("z"),
           py::arg("geom_tol") = 1e-9);

  mod.def("build_annulus", &build_annulus, py::arg("level"), py::arg("m"),
          py::arg("params"), py::arg("settings") = IntegratorSettings{},
          py::arg("options") = OuterRadiusOptions{});

  py::class_<TwistCertificate>(mod, "TwistCertificate")
      .def_readonly("m", &TwistCertificate::m)
      .def_readonly("N", &TwistCertificate::N)
      .def_readonly("inner_min_rot", &TwistCertificate::inner_min_rot)
      .def_readonly("outer_max_rot", &TwistCertificate::outer_max_rot)
      .def_readonly("nonq_ok", &TwistCertificate::nonq_ok)
      .def("valid", &TwistCertificate::valid)
      .def("max_certified", &TwistCertificate::max_certified);

  py::class_<TwistOptions>(mod, "TwistOptions")
      .def(py::init<>())
      .def_readwrite("inner_samples", &TwistOptions::inner_samples)
      .def_readwrite("outer_samples", &TwistOptions::outer_samples)
      .def_readwrite("max_samples", &TwistOptions::max_samples);

  mod.def("verify_twist", &verify_twist, py::arg("annulus"), py::arg("m"),
          py::arg("N"), py::arg("params"),
          py::arg("settings") = IntegratorSettings{},
          py::arg("options") = TwistOptions{});

  py::class_<PeriodicOrbit>(mod, "PeriodicOrbit")
      .def_readonly("z0", &PeriodicOrbit::z0)
      .def_readonly("m", &PeriodicOrbit::m)
      .def_readonly("rot_k", &PeriodicOrbit::rot_k)
      .def_readonly("zero_crossings", &PeriodicOrbit::zero_crossings)
      .def_readonly("residual", &PeriodicOrbit::residual)
      .def_readonly("x_min", &PeriodicOrbit::x_min)
      .def_readonly("x_max", &PeriodicOrbit::x_max)
      .def_readonly("minimal_period_certified",
                    &PeriodicOrbit::minimal_period_certified)
      .def_readonly("class_id", &PeriodicOrbit::class_id)
      .def_readonly("continuum", &PeriodicOrbit::continuum);

  py::class_<FinderOptions>(mod, "FinderOptions")
      .def(py::init<>())
      .def_readwrite("seeds_angular", &FinderOptions::seeds_angular)
      .def_readwrite("seeds_radial", &FinderOptions::seeds_radial)
      .def_readwrite("fp_tol", &FinderOptions::fp_tol)
      .def_readwrite("dedup_tol", &FinderOptions::dedup_tol)
      .def_readwrite("class_tol", &FinderOptions::class_tol)
      .def_readwrite("min_displacement", &FinderOptions::min_displacement)
      .def_readwrite("fd_scale", &FinderOptions::fd_scale)
      .def_readwrite("target_N", &FinderOptions::target_N);

  mod.def("find_fixed_points", &find_fixed_points, py::arg("annulus"),
          py::arg("m"), py::arg("params"),
          py::arg("settings") = IntegratorSettings{},
          py::arg("options") = FinderOptions{});
  mod.def("same_periodicity_class", &same_periodicity_class, py::arg("o1"),
          py::arg("o2"), py::arg("params"),
          py::arg("settings") = IntegratorSettings{},
          py::arg("class_tol") = 1e-6);
  mod.def("minimal_period_check", &minimal_period_check, py::arg("orbit"),
          py::arg("params"), py::arg("settings") = IntegratorSettings{},
          py::arg("min_displacement") = 1e-4);
  mod.def("coprime_rotation_set", &coprime_rotation_set, py::arg("m"),
          py::arg("K"));

  mod.def(
      "run_scenario_text",
      [](const std::string& config_text) {
        const Scenario sc = Scenario::from_config(Config::parse(config_text));
        const ScenarioResult res = run_scenario(sc);
        return py::make_tuple(res.exit_code, res.summary, res.files);
      },
      py::arg("config_text"),
      "Parse a scenario config and run it; returns (exit_code, summary, files).");
}
