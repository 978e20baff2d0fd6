#include <doctest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "nagumo/orbits.hpp"
#include "nagumo/scenario.hpp"
#include "oracles.hpp"

using namespace nagumo;

namespace {

const IntegratorSettings kTol{};

// harmonic fixture: strong plateau, mild two-step perturbation, one-period map
struct HarmonicFixture {
  SystemParams params = fixtures::two_step_params(320.0, 1.0, 0.99);
  OrbitReport rep;
};

const HarmonicFixture& harmonic_fixture() {
  static const HarmonicFixture fx = [] {
    HarmonicFixture f;
    FinderOptions finder;
    finder.seeds_angular = 24;
    finder.seeds_radial = 12;
    f.rep = run_find_orbits(f.params, 1, 1, kTol, LevelSpec::max_allowed(), {},
                            finder);
    return f;
  }();
  return fx;
}

// subharmonic fixture: m = 2 with the resonance in the middle of the family
struct SubharmonicFixture {
  SystemParams params = fixtures::two_step_params(80.0, 1.0, 0.99);
  SubharmonicReport rep;
};

const SubharmonicFixture& subharmonic_fixture() {
  static const SubharmonicFixture fx = [] {
    SubharmonicFixture f;
    FinderOptions finder;
    finder.seeds_angular = 24;
    finder.seeds_radial = 12;
    f.rep = subharmonic_search(f.params, 2, 1, kTol, LevelSpec::max_allowed(),
                               {}, finder);
    return f;
  }();
  return fx;
}

}  // namespace

TEST_CASE("coprime rotation sets") {
  CHECK(coprime_rotation_set(2, 3) == std::vector<int>{1, 3, 5});
  CHECK(coprime_rotation_set(6, 4) == std::vector<int>{1, 5, 7, 11});
  CHECK(coprime_rotation_set(3, 2) == std::vector<int>{1, 2});
  CHECK_THROWS_AS(coprime_rotation_set(1, 2), Error);
  CHECK_THROWS_AS(coprime_rotation_set(4, 0), Error);
}

TEST_CASE("annulus geometry") {
  const auto& fx = harmonic_fixture();
  const Annulus& ann = fx.rep.pipe.ann;
  CHECK(ann.outer_radius > 0.0);
  for (const auto& z : ann.inner.boundary) {
    CHECK(distance(z, ann.q0) < ann.outer_radius);
    CHECK(distance(z, ann.q0) > 0.0);
    CHECK(ann.contains(z, 1e-7));
  }
  CHECK_FALSE(ann.contains(ann.q0));
  CHECK(ann.contains({ann.outer_radius, 0.0}, 1e-7));
  CHECK_FALSE(ann.contains({2.0 * ann.outer_radius, 0.0}));
}

TEST_CASE("twist certificate holds for the perturbed plateau weight") {
  const auto& fx = harmonic_fixture();
  const TwistCertificate& cert = fx.rep.pipe.cert;
  CHECK(cert.valid());
  CHECK(cert.inner_min_rot > 1.0);
  CHECK(cert.outer_max_rot < 1.0);
  CHECK(cert.nonq_ok);
  // the inner rotation honors the autonomous whole-turn floor
  const int floor = rot_floor(fx.rep.pipe.tau, 1, fx.params.weight.beta());
  CHECK(cert.inner_min_rot >= floor - 0.05);
}

TEST_CASE("constant weight: certificate matches the autonomous floor") {
  const auto params = fixtures::constant_params(320.0);
  const Pipeline pipe = build_pipeline(params, 1, 1, kTol, LevelSpec::max_allowed(), {});
  CHECK(pipe.cert.inner_min_rot >= rot_floor(pipe.tau, 1, 1.0) - 1e-6);
  CHECK(pipe.cert.valid());
  // asking for more turns than measured invalidates the certificate
  const TwistCertificate too_big = verify_twist(pipe.ann, 1, 5, params, kTol);
  CHECK_FALSE(too_big.valid());
}

TEST_CASE("doubling the outer radius keeps the outer boundary slow") {
  const auto& fx = harmonic_fixture();
  const auto [mx, n] =
      circle_max_rot(2.0 * fx.rep.pipe.ann.outer_radius, fx.rep.pipe.ann.q0, 1,
                     fx.params, kTol, 32, 128);
  CHECK(mx < 1.0);
}

TEST_CASE("harmonic orbits: at least one pair with one turn per period") {
  const auto& fx = harmonic_fixture();
  REQUIRE(fx.rep.pipe.cert.valid());
  const auto it = fx.rep.classes_per_k.find(1);
  REQUIRE(it != fx.rep.classes_per_k.end());
  CHECK(it->second >= 2);
  for (const auto& o : fx.rep.orbits) {
    CHECK(o.residual < 1e-9);
    CHECK(o.z0.norm() > 1e-6);  // trivial rest state filtered
    CHECK(o.x_min > 0.0);
    CHECK(o.x_max < 1.0);
    if (o.rot_k >= 1) CHECK(o.zero_crossings == 2 * o.rot_k);
  }
}

TEST_CASE("fixed points survive re-integration at tighter tolerance") {
  const auto& fx = harmonic_fixture();
  for (const auto& o : fx.rep.orbits) {
    if (o.rot_k < 1) continue;
    const PhaseState back = poincare_map(o.z0, o.m, fx.params, kTol.tightened(10.0));
    CHECK(distance(back, o.z0) < 1e-7);
  }
}

TEST_CASE("periodicity classes") {
  const auto& fx = subharmonic_fixture();
  REQUIRE(!fx.rep.kept.empty());
  const PeriodicOrbit& o1 = fx.rep.kept.front();

  // an orbit is in its own class
  CHECK(same_periodicity_class(o1, o1, fx.params, kTol));

  // the one-period shift of the same solution lands in the same class
  PeriodicOrbit shifted = o1;
  shifted.z0 = poincare_map(o1.z0, 1, fx.params, kTol);
  CHECK(same_periodicity_class(o1, shifted, fx.params, kTol, 1e-6));

  // orbits with different rotation numbers are never shift-equivalent
  for (const auto& other : fx.rep.base.orbits) {
    if (other.rot_k == o1.rot_k) continue;
    CHECK_FALSE(same_periodicity_class(o1, other, fx.params, kTol));
  }

  PeriodicOrbit wrong_m = o1;
  wrong_m.m = 3;
  CHECK_THROWS_AS(same_periodicity_class(o1, wrong_m, fx.params, kTol), Error);
}

TEST_CASE("subharmonic search certifies minimal periods") {
  const auto& fx = subharmonic_fixture();
  CHECK(fx.rep.coprimes == std::vector<int>{1});
  CHECK(fx.rep.N == 1);
  REQUIRE(fx.rep.base.pipe.cert.valid());
  CHECK(fx.rep.kept.size() >= 2);
  CHECK(fx.rep.all_minimal);
  CHECK(fx.rep.pairwise_distinct_classes);
  std::set<int> class_ids;
  for (const auto& o : fx.rep.kept) {
    CHECK(o.rot_k == 1);
    CHECK(o.zero_crossings == 2);
    CHECK(o.minimal_period_certified);
    CHECK(o.x_min > 0.0);
    CHECK(o.x_max < 1.0);
    // the half-way iterate genuinely moves: minimal period is 2*beta
    CHECK(distance(poincare_map(o.z0, 1, fx.params, kTol), o.z0) > 1e-4);
    class_ids.insert(o.class_id);
  }
  CHECK(class_ids.size() >= 2);
}

TEST_CASE("minimal period arithmetic") {
  const auto& fx = subharmonic_fixture();
  PeriodicOrbit o = fx.rep.kept.front();
  // gcd(m, k) > 1 is never certified, whatever the displacement says
  o.m = 4;
  o.rot_k = 2;
  CHECK_FALSE(minimal_period_check(o, fx.params, kTol));
  o.m = 1;
  o.rot_k = 7;
  CHECK(minimal_period_check(o, fx.params, kTol));
}

TEST_CASE("certified turn count grows like the square root of the plateau") {
  // quadrupling the plateau roughly halves the fundamental period, so the
  // guaranteed rotation over one weight period doubles
  const SystemParams p1 = fixtures::two_step_params(320.0, 1.0, 0.99);
  const SystemParams p2 = fixtures::two_step_params(1280.0, 1.0, 0.99);
  const Pipeline pipe1 = build_pipeline(p1, 1, 1, kTol, LevelSpec::max_allowed(), {});
  const Pipeline pipe2 = build_pipeline(p2, 1, 1, kTol, LevelSpec::max_allowed(), {});
  CHECK(pipe1.tau / pipe2.tau == doctest::Approx(2.0).epsilon(0.15));
  CHECK(pipe1.cert.max_certified() == 1);
  CHECK(pipe2.cert.max_certified() >= 2);
}

TEST_CASE("shrinking the off-plateau window never weakens the certificate") {
  int prev = -1;
  for (double alpha : {0.9, 0.99}) {
    const SystemParams params = fixtures::two_step_params(320.0, 1.0, alpha);
    const Pipeline pipe = build_pipeline(params, 1, 1, kTol, LevelSpec::max_allowed(), {});
    CHECK(pipe.cert.max_certified() >= prev);
    prev = pipe.cert.max_certified();
  }
  CHECK(prev >= 1);
}

TEST_CASE("autonomous continuum collapses to flagged representatives") {
  const auto params = fixtures::constant_params(320.0);
  const Pipeline pipe = build_pipeline(params, 1, 1, kTol, LevelSpec::max_allowed(), {});
  REQUIRE(pipe.cert.valid());
  FinderOptions finder;
  finder.seeds_angular = 24;
  finder.seeds_radial = 12;
  const auto orbits = find_fixed_points(pipe.ann, 1, params, kTol, finder);
  // whole circles of fixed points exist (the period-1 resonance), so the
  // collapsed output must flag at least one continuum representative
  bool any_continuum = false;
  for (const auto& o : orbits) {
    if (o.continuum) any_continuum = true;
    if (o.rot_k == 1) CHECK(o.zero_crossings == 2);
  }
  CHECK(any_continuum);
  MESSAGE("autonomous representatives found: ", orbits.size());
}
