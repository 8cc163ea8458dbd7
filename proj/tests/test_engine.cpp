#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "casimir/constants.hpp"
#include "casimir/engine.hpp"
#include "oracle_values.hpp"

namespace e = casimir::engine;
namespace d = casimir::dielectric;
namespace c = casimir::constants;
using casimir::reflection::ReflectionPolicy;

namespace {

d::Material sio2() { return {"sio2", d::OscillatorModel{d::OscillatorSet({{2.81 * 4e32, 2e16, 0.0}})}, {}}; }

d::CarrierScenario fixed_n() {
  d::CarrierScenario s;
  s.density = {1e24, 0.0};
  s.mobility = {1e-4, 0.5 * c::kElementaryCharge};
  return s;
}

d::Material sio2_dc() {
  return {"sio2-dc", d::DcAugmentedModel{d::OscillatorSet({{2.81 * 4e32, 2e16, 0.0}}), fixed_n()}, {}};
}

const d::AtomModel kRb{319 * 1.48184711e-31, 2.4e15};

e::LifshitzJob plates(double a, double T, d::Material m = sio2(), ReflectionPolicy p = ReflectionPolicy::Standard) {
  e::LifshitzJob job;
  job.separation = a;
  job.temperature = T;
  job.material1 = m;
  job.material2 = m;
  job.policy = p;
  return job;
}

e::AtomJob atom(double a, double T, d::Material wall = sio2(), d::AtomModel at = kRb) {
  e::AtomJob job;
  job.separation = a;
  job.temperature = T;
  job.wall = wall;
  job.atom = at;
  return job;
}

double ideal_metal_energy(double a) { return -c::kPi * c::kPi * c::kHbar * c::kSpeedOfLight / (720 * a * a * a); }

}  // namespace

TEST_CASE("effective temperature and Matsubara frequencies") {
  CHECK(e::effective_temperature(1e-6) == doctest::Approx(oracle::T_eff_1um).epsilon(1e-14));
  CHECK(e::effective_temperature(1e-6) == doctest::Approx(1.15e3).epsilon(0.01));
  CHECK(e::matsubara_frequency(300.0, 0) == 0.0);
  CHECK(e::matsubara_frequency(300.0, 2) == doctest::Approx(4 * c::kPi * c::kBoltzmann * 300 / c::kHbar));
}

TEST_CASE("job validation") {
  CHECK_THROWS_AS(e::free_energy_plates(plates(0.0, 300.0)), std::invalid_argument);
  CHECK_THROWS_AS(e::free_energy_plates(plates(1e-6, -1.0)), std::invalid_argument);
  auto bad = atom(1e-6, 300.0);
  bad.atom.absorption_frequency = 0.0;
  CHECK_THROWS_AS(e::free_energy_atom_wall(bad), std::invalid_argument);
}

TEST_CASE("vacuum plates give exactly zero") {
  CHECK(e::free_energy_plates(plates(1e-6, 300.0, d::vacuum())).value == 0.0);
  CHECK(e::free_energy_plates_zero_T(plates(1e-6, 0.0, d::vacuum())).value == 0.0);
  CHECK(e::pressure_plates(plates(1e-6, 300.0, d::vacuum())) == 0.0);
  CHECK(e::pfa_sphere_force(plates(1e-6, 300.0, d::vacuum()), 1e-4).value == 0.0);
}

TEST_CASE("sio2 plates against an independent Matsubara evaluation") {
  CHECK(e::free_energy_plates(plates(1e-6, 300.0)).value == doctest::Approx(oracle::sio2_plates_1um_300K).epsilon(1e-8));
  CHECK(e::free_energy_plates(plates(1e-7, 300.0)).value == doctest::Approx(oracle::sio2_plates_100nm_300K).epsilon(1e-8));
  CHECK(e::free_energy_plates_zero_T(plates(1e-6, 0.0)).value == doctest::Approx(oracle::sio2_plates_1um_zeroT).epsilon(1e-8));
}

TEST_CASE("ideal metal plates") {
  for (double a : {1e-7, 1e-6}) {
    const auto t0 = std::chrono::steady_clock::now();
    const double E = e::free_energy_plates_zero_T(plates(a, 0.0, sio2(), ReflectionPolicy::IdealMetal)).value;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(E == doctest::Approx(ideal_metal_energy(a)).epsilon(1e-3));
    CHECK(secs < 1.0);
    const double teff = e::effective_temperature(a);
    const double F = e::free_energy_plates(plates(a, 0.01 * teff, sio2(), ReflectionPolicy::IdealMetal)).value;
    CHECK(F == doctest::Approx(ideal_metal_energy(a)).epsilon(5e-3));
  }
  CHECK(e::free_energy_plates_zero_T(plates(1e-6, 0.0, sio2(), ReflectionPolicy::IdealMetal)).value ==
        doctest::Approx(oracle::ideal_metal_E_1um).epsilon(1e-3));
}

TEST_CASE("classical limit of dielectric plates") {
  const double F = e::free_energy_plates(plates(1e-6, oracle::classical_T_1um)).value;
  CHECK(F == doctest::Approx(oracle::classical_plates_1um).epsilon(1e-2));
}

TEST_CASE("zero-T branch matches 1 K at 100 nm") {
  const double E = e::free_energy_plates_zero_T(plates(1e-7, 0.0)).value;
  const double F = e::free_energy_plates(plates(1e-7, 1.0)).value;
  CHECK(F == doctest::Approx(E).epsilon(1e-3));
  CHECK(e::free_energy_plates(plates(1e-7, 0.0)).value == E);
}

TEST_CASE("atom-wall free energy") {
  CHECK(e::free_energy_atom_wall(atom(1e-6, 300.0)).value == doctest::Approx(oracle::rb_sio2_atom_1um_300K).epsilon(1e-8));
  CHECK(e::free_energy_atom_wall(atom(1e-6, 300.0, sio2(), {0.0, 2.4e15})).value == 0.0);

  // classical l = 0 term: -kB T alpha0 r0 / (4 a^3)
  const double a = 1e-6, T = oracle::classical_T_1um;
  const double r0 = 2.81 / 4.81;
  const double l0 = -c::kBoltzmann * T * kRb.static_polarizability * r0 / (4 * a * a * a);
  CHECK(e::free_energy_atom_wall(atom(a, T)).value == doctest::Approx(l0).epsilon(1e-2));

  // between van der Waals and retarded power laws
  for (double a1 : {2e-8, 1e-7, 1e-6}) {
    const double ratio = e::free_energy_atom_wall(atom(2 * a1, 0.0)).value / e::free_energy_atom_wall(atom(a1, 0.0)).value;
    CHECK(ratio <= 1.0 / 8.0 * 1.0001);
    CHECK(ratio >= 1.0 / 16.0 * 0.9999);
  }
}

TEST_CASE("atom-wall zero-T branch") {
  // ideal metal with a static polarizability: -3 hbar c alpha0 / (8 pi a^4)
  const double a = 1e-6;
  auto job = atom(a, 0.0, sio2(), {4.73e-29, 1e30});
  job.policy = ReflectionPolicy::IdealMetal;
  const double expected = -3 * c::kHbar * c::kSpeedOfLight * 4.73e-29 / (8 * c::kPi * std::pow(a, 4));
  CHECK(e::free_energy_atom_wall_zero_T(job).value == doctest::Approx(expected).epsilon(1e-6));
  const double E = e::free_energy_atom_wall_zero_T(atom(1e-7, 0.0)).value;
  CHECK(e::free_energy_atom_wall(atom(1e-7, 1.0)).value == doctest::Approx(E).epsilon(1e-3));
}

TEST_CASE("PFA sphere force") {
  const auto job = plates(2e-7, 300.0);
  const double f1 = e::pfa_sphere_force(job, 1e-4).value;
  const double f2 = e::pfa_sphere_force(job, 2e-4).value;
  CHECK(f2 == doctest::Approx(2 * f1).epsilon(1e-12));
  CHECK(e::pfa_sphere_force(job, 1e-4).warnings.empty());
  CHECK_FALSE(e::pfa_sphere_force(job, 1e-5).warnings.empty());
  const auto metal = plates(1e-6, 0.0, sio2(), ReflectionPolicy::IdealMetal);
  CHECK(e::pfa_sphere_force(metal, 1e-4).value == doctest::Approx(2 * c::kPi * 1e-4 * ideal_metal_energy(1e-6)).epsilon(1e-3));
}

TEST_CASE("pressure") {
  const double a = 1e-6;
  const double P = e::pressure_plates(plates(a, 0.0, sio2(), ReflectionPolicy::IdealMetal));
  CHECK(P == doctest::Approx(-c::kPi * c::kPi * c::kHbar * c::kSpeedOfLight / (240 * std::pow(a, 4))).epsilon(1e-2));

  // integrating the pressure back recovers F(a)
  const double a0 = 1e-7, a1 = 1e-5;
  const int n = 61;
  double integral = 0.0, prev_a = a0, prev_p = e::pressure_plates(plates(a0, 300.0));
  for (int i = 1; i < n; ++i) {
    const double ai = a0 * std::pow(a1 / a0, double(i) / (n - 1));
    const double pi = e::pressure_plates(plates(ai, 300.0));
    // trapezoid in log a
    integral += 0.5 * (prev_p * prev_a + pi * ai) * std::log(ai / prev_a);
    prev_a = ai;
    prev_p = pi;
  }
  const double tail = e::free_energy_plates(plates(a1, 300.0)).value;
  CHECK(integral + tail == doctest::Approx(e::free_energy_plates(plates(a0, 300.0)).value).epsilon(1e-2));
}

TEST_CASE("difference force") {
  auto dark = plates(2e-7, 300.0);
  CHECK(e::difference_force(dark, dark, 1e-4).value == 0.0);
  auto other = plates(3e-7, 300.0);
  CHECK_THROWS_AS(e::difference_force(dark, other, 1e-4), std::invalid_argument);

  // sphere: plasma-like; plate dark phase with and without dc conductivity
  d::Material sphere{"sphere", d::PlasmaLikeModel{{}, 1.37e16}, {}};
  d::CarrierScenario dark_carriers;
  dark_carriers.density = {5e20, 0.0};
  dark_carriers.mobility = {0.045, 0.0};
  dark_carriers.effective_mass = 0.2063 * c::kElectronMass;
  d::CarrierScenario light_carriers = dark_carriers;
  light_carriers.density.prefactor = 2.1e25;
  light_carriers.mobility.prefactor = 0.017;
  light_carriers.statistics = d::CarrierStatistics::FermiDirac;
  d::Material si_core{"si", d::OscillatorModel{d::OscillatorSet({{10.87 * 6.6e15 * 6.6e15, 6.6e15, 0.0}})}, {}};
  double previous_neglected = INFINITY;
  for (double a : {1e-7, 1.5e-7, 2e-7, 3e-7}) {
    auto make = [&](const d::CarrierScenario& carriers, ReflectionPolicy p) {
      e::LifshitzJob job;
      job.separation = a;
      job.temperature = 300.0;
      job.material1 = sphere;
      job.material2 = si_core;
      job.material2.carriers = carriers;
      job.policy = p;
      return job;
    };
    const auto light = make(light_carriers, ReflectionPolicy::DcConductivity);
    const double neglected = e::difference_force(make(dark_carriers, ReflectionPolicy::Standard), light, 1e-4).value;
    const double included = e::difference_force(make(dark_carriers, ReflectionPolicy::DcConductivity), light, 1e-4).value;
    CHECK(neglected < 0.0);
    CHECK(std::abs(included) < std::abs(neglected));
    CHECK(std::abs(neglected) < previous_neglected);
    previous_neglected = std::abs(neglected);
  }
}

TEST_CASE("condensate frequency shift") {
  const e::TrapParameters trap;
  CHECK(trap.atom_mass == 1.443e-25);
  CHECK(trap.trap_frequency == 2 * c::kPi * 229.0);
  CHECK(e::frequency_shift_gamma_z(atom(7e-6, 310.0, sio2(), {0.0, 2.4e15})) == 0.0);

  double previous = INFINITY;
  for (double z = 7e-6; z <= 11e-6 + 1e-12; z += 1e-6) {
    const double g = e::frequency_shift_gamma_z(atom(z, 310.0));
    CHECK(g > 0.0);
    CHECK(g < previous);
    previous = g;
  }
  e::TrapParameters stiff;
  stiff.trap_frequency *= 2;
  CHECK(e::frequency_shift_gamma_z(atom(8e-6, 310.0), stiff) ==
        doctest::Approx(e::frequency_shift_gamma_z(atom(8e-6, 310.0)) / 4).epsilon(1e-12));
}

TEST_CASE("free energy is negative and increases toward zero with a") {
  double previous = -INFINITY;
  for (double a = 5e-8; a < 5e-6; a *= 1.5) {
    const double F = e::free_energy_plates(plates(a, 300.0)).value;
    CHECK(F < 0.0);
    CHECK(F > previous);
    previous = F;
  }
}

TEST_CASE("truncation index grows as T falls and stays within bounds at t = 1e-3") {
  const double a = 1e-6, teff = e::effective_temperature(a);
  long previous = 0;
  for (double t : {0.1, 0.03, 0.01, 0.003, 0.001}) {
    const auto r = e::free_energy_plates(plates(a, t * teff));
    CHECK(r.truncation_index > previous);
    CHECK(r.truncation_index < 2'000'000);
    previous = r.truncation_index;
  }
}

TEST_CASE("policy swap keeps the diagnostics comparable") {
  d::Material m = sio2();
  m.carriers = fixed_n();
  const auto a = e::free_energy_plates(plates(1e-6, 300.0, m, ReflectionPolicy::Standard));
  const auto b = e::free_energy_plates(plates(1e-6, 300.0, m, ReflectionPolicy::Screened));
  CHECK(a.truncation_index == b.truncation_index);
  CHECK(a.quadrature_error < 1e-8);
  CHECK(b.quadrature_error < 1e-8);
  CHECK(a.value != b.value);
}

TEST_CASE("dc-augmented l >= 1 terms approach the oscillator terms at low T") {
  const double a = 1e-6, T = 1e-3 * e::effective_temperature(a);
  auto osc = plates(a, T);
  auto dc = plates(a, T, sio2_dc());
  osc.numerics.keep_terms = dc.numerics.keep_terms = true;
  const auto ro = e::free_energy_plates(osc);
  const auto rd = e::free_energy_plates(dc);
  REQUIRE(ro.per_term.size() > 10);
  // the cutoff may land one term apart
  const std::size_t common = std::min(rd.per_term.size(), ro.per_term.size());
  CHECK(std::abs(double(rd.per_term.size()) - double(ro.per_term.size())) <= 2);
  for (std::size_t l = 1; l < common; ++l) {
    CHECK(rd.per_term[l] == doctest::Approx(ro.per_term[l]).epsilon(1e-6));
  }
  CHECK(std::abs(rd.per_term[0] / ro.per_term[0] - 1.0) > 1e-3);
}

TEST_CASE("thread count does not change results") {
  auto job = plates(1e-7, 300.0);
  const double serial = e::free_energy_plates(job).value;
  job.numerics.threads = 8;
  CHECK(e::free_energy_plates(job).value == serial);
  auto aj = atom(1e-7, 300.0);
  const double aserial = e::free_energy_atom_wall(aj).value;
  aj.numerics.threads = 5;
  CHECK(e::free_energy_atom_wall(aj).value == aserial);
}

TEST_CASE("convergence failure carries the partial value") {
  auto job = plates(1e-6, 1.0);
  job.numerics.summation.max_matsubara_index = 100;
  try {
    e::free_energy_plates(job);
    FAIL("expected a convergence failure");
  } catch (const casimir::numerics::ConvergenceError& err) {
    CHECK(err.best_estimate() < 0.0);
  }
}
