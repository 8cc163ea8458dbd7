#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

#include "casimir/config.hpp"
#include "casimir/constants.hpp"
#include "casimir/numerics.hpp"
#include "casimir/thermo.hpp"
#include "oracle_values.hpp"

namespace th = casimir::thermo;
namespace e = casimir::engine;
namespace d = casimir::dielectric;
namespace c = casimir::constants;
using casimir::reflection::ReflectionPolicy;

namespace {

const double kA = 1e-6;
const double kAlpha0 = 319 * 1.48184711e-31;
const double kR0 = 2.81 / 4.81;

d::Material data_material(const std::string& name) {
  return casimir::config::load_material(std::string(CASIMIR_DATA_DIR) + "/" + name);
}

d::Material oscillator_wall(double eps0) {
  return {"wall", d::OscillatorModel{d::OscillatorSet({{(eps0 - 1.0) * 4e32, 2e16, 0.0}})}, {}};
}

e::LifshitzJob plates(const d::Material& m, ReflectionPolicy p = ReflectionPolicy::Standard) {
  e::LifshitzJob job;
  job.separation = kA;
  job.material1 = m;
  job.material2 = m;
  job.policy = p;
  return job;
}

e::AtomJob atom(const d::Material& wall) {
  e::AtomJob job;
  job.separation = kA;
  job.wall = wall;
  job.atom = {kAlpha0, 2.4e15};
  return job;
}

double teff() { return e::effective_temperature(kA); }

}  // namespace

TEST_CASE("model class names round-trip") {
  for (auto m : {th::ModelClass::OscillatorOnly, th::ModelClass::DcAugmented, th::ModelClass::ScreenedVanishingN,
                 th::ModelClass::ScreenedFixedN, th::ModelClass::PlasmaLike}) {
    CHECK(th::model_class_from_string(th::to_string(m)) == m);
  }
  CHECK_THROWS_AS(th::model_class_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("temperature step") {
  CHECK(th::temperature_step(300.0) == doctest::Approx(0.3));
  CHECK(th::temperature_step(0.5) == 1e-3);
  CHECK(th::temperature_step(1e-3) == 2.5e-4);
}

TEST_CASE("entropy of vacuum is zero and requires T > 0") {
  auto job = plates(d::vacuum());
  job.temperature = 300.0;
  CHECK(th::entropy(job) == 0.0);
  job.temperature = 0.0;
  CHECK_THROWS_AS(th::entropy(job), std::domain_error);
}

TEST_CASE("plate asymptotes") {
  const double E = -5e-11;
  CHECK(th::asymptotic_free_energy_plates(kA, 0.0, 3.81, E) == E);
  const double d1 = th::asymptotic_free_energy_plates(kA, 10.0, 3.81, 0.0);
  const double d2 = th::asymptotic_free_energy_plates(kA, 20.0, 3.81, 0.0);
  CHECK(d2 / d1 == doctest::Approx(8.0).epsilon(1e-12));

  CHECK(th::asymptotic_entropy_plates(kA, 0.0, 3.81) == 0.0);
  CHECK(th::asymptotic_entropy_plates(kA, 20.0, 3.81) == doctest::Approx(oracle::asym_entropy_plates_1um_20K).epsilon(1e-12));
  CHECK(th::asymptotic_entropy_plates(kA, 40.0, 3.81) / th::asymptotic_entropy_plates(kA, 20.0, 3.81) ==
        doctest::Approx(4.0).epsilon(1e-12));

  // -dF/dT reproduces the entropy
  for (double T : {5.0, 20.0, 60.0}) {
    auto f = [&](double t) { return th::asymptotic_free_energy_plates(kA, t, 3.81, E); };
    const double h = 1e-3 * T;
    const double deriv = (f(T - 2 * h) - 8 * f(T - h) + 8 * f(T + h) - f(T + 2 * h)) / (12 * h);
    CHECK(-deriv == doctest::Approx(th::asymptotic_entropy_plates(kA, T, 3.81)).epsilon(1e-10));
  }
}

TEST_CASE("atom asymptotes") {
  const double E = -1e-31;
  CHECK(th::asymptotic_free_energy_atom(kA, 0.0, kAlpha0, 1.3, E) == E);
  CHECK(th::asymptotic_entropy_atom(kA, 0.0, kAlpha0, 1.3) == 0.0);
  CHECK(th::asymptotic_entropy_atom(kA, 40.0, kAlpha0, 1.3) / th::asymptotic_entropy_atom(kA, 20.0, kAlpha0, 1.3) ==
        doctest::Approx(8.0).epsilon(1e-12));
  const double d1 = th::asymptotic_free_energy_atom(kA, 10.0, kAlpha0, 1.3, 0.0);
  const double d2 = th::asymptotic_free_energy_atom(kA, 20.0, kAlpha0, 1.3, 0.0);
  CHECK(d2 / d1 == doctest::Approx(16.0).epsilon(1e-12));
  for (double T : {5.0, 20.0}) {
    auto f = [&](double t) { return th::asymptotic_free_energy_atom(kA, t, kAlpha0, 1.3, E); };
    const double h = 1e-3 * T;
    const double deriv = (f(T - 2 * h) - 8 * f(T - h) + 8 * f(T + h) - f(T + 2 * h)) / (12 * h);
    CHECK(-deriv == doctest::Approx(th::asymptotic_entropy_atom(kA, T, kAlpha0, 1.3)).epsilon(1e-10));
  }
}

TEST_CASE("dc residual entropies") {
  CHECK(th::dc_residual_entropy_plates(kA, 3.81) == doctest::Approx(oracle::dc_residual_plates_1um).epsilon(1e-12));
  CHECK(th::dc_residual_entropy_atom(kA, 3.81, kAlpha0) == doctest::Approx(oracle::dc_residual_atom_1um).epsilon(1e-12));

  const double pre = c::kBoltzmann / (16 * c::kPi * kA * kA);
  CHECK(th::dc_residual_entropy_plates(kA, 1.0 + 1e-9) == doctest::Approx(pre * oracle::zeta3).epsilon(1e-9));
  CHECK(th::dc_residual_entropy_plates(kA, 1e12) < 1e-10 * pre);
  CHECK(th::dc_residual_entropy_atom(kA, 1.0 + 1e-9, kAlpha0) ==
        doctest::Approx(c::kBoltzmann * kAlpha0 / (4 * kA * kA * kA)).epsilon(1e-8));
  CHECK(th::dc_residual_entropy_atom(kA, 1e12, kAlpha0) > 0.0);
  CHECK(th::dc_residual_entropy_atom(kA / 2, 3.81, kAlpha0) / th::dc_residual_entropy_atom(kA, 3.81, kAlpha0) ==
        doctest::Approx(8.0).epsilon(1e-12));
  CHECK_THROWS(th::dc_residual_entropy_plates(kA, 1.0));
  CHECK_THROWS(th::dc_residual_entropy_atom(kA, 3.81, 0.0));

  for (int i = 1; i <= 200; ++i) {
    const double eps0 = 1.0 + std::pow(10.0, -3.0 + 8.0 * i / 200.0);
    CHECK(th::dc_residual_entropy_plates(kA, eps0) > 0.0);
    CHECK(th::dc_residual_entropy_atom(kA, eps0, kAlpha0) > 0.0);
  }
}

TEST_CASE("dc free-energy correction is linear in T") {
  CHECK(th::dc_free_energy_correction_plates(kA, 0.0, 3.81) == 0.0);
  CHECK(th::dc_free_energy_correction_atom(kA, 0.0, 3.81, kAlpha0) == 0.0);
  auto f = [](double T) { return th::dc_free_energy_correction_plates(kA, T, 3.81); };
  CHECK(-(f(11.0) - f(9.0)) / 2.0 == doctest::Approx(th::dc_residual_entropy_plates(kA, 3.81)).epsilon(1e-12));
  auto g = [](double T) { return th::dc_free_energy_correction_atom(kA, T, 3.81, kAlpha0); };
  CHECK(-(g(11.0) - g(9.0)) / 2.0 == doctest::Approx(th::dc_residual_entropy_atom(kA, 3.81, kAlpha0)).epsilon(1e-12));
}

TEST_CASE("screened integrals") {
  CHECK(th::screened_log_integral(3.81, 1.0) == doctest::Approx(oracle::screened_log_integral_K1).epsilon(1e-10));
  CHECK(th::screened_atom_integral(3.81, 1.0) == doctest::Approx(oracle::screened_atom_integral_K1).epsilon(1e-10));

  const double li = casimir::numerics::polylog3(kR0 * kR0);
  CHECK(th::screened_log_integral(3.81, 0.0) == doctest::Approx(-li).epsilon(1e-11));
  CHECK(th::screened_log_integral(3.81, 1e12) == doctest::Approx(-oracle::zeta3).epsilon(1e-9));
  CHECK(th::screened_atom_integral(3.81, 0.0) == doctest::Approx(2 * kR0).epsilon(1e-11));

  double previous = th::screened_log_integral(3.81, 0.0);
  for (double K : {1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1e3}) {
    const double v = th::screened_log_integral(3.81, K);
    CHECK(v < previous);
    CHECK(v > -oracle::zeta3);
    previous = v;
    const double w = th::screened_atom_integral(3.81, K);
    CHECK(w > 2 * kR0);
    CHECK(w < 2.0);
  }
}

TEST_CASE("screened asymptotes reduce to the unscreened and dc limits") {
  const double T = 2.0, base_F = -5e-11, base_S = 1e-18;
  CHECK(th::screened_free_energy_asymptote(kA, T, 3.81, 0.0, base_F) == doctest::Approx(base_F).epsilon(1e-12));
  CHECK(th::screened_entropy_asymptote(kA, T, 3.81, 0.0, 0.0, base_S) == doctest::Approx(base_S).epsilon(1e-12));

  // both residual routes carry the same bracket
  const double dc = th::dc_residual_entropy_plates(kA, 3.81);
  const double pre = c::kBoltzmann / (16 * c::kPi * kA * kA);
  const double bracket_dc = oracle::zeta3 - casimir::numerics::polylog3(kR0 * kR0);
  const double bracket_screened =
      -(th::screened_log_integral(3.81, INFINITY) + casimir::numerics::polylog3(kR0 * kR0));
  CHECK(std::abs(bracket_screened - bracket_dc) < 1e-12);
  CHECK(std::abs(th::screened_entropy_asymptote(kA, T, 3.81, INFINITY, 0.0, 0.0) - dc) < 1e-12 * dc);
  CHECK(std::abs(pre * bracket_dc - dc) < 1e-12 * dc);

  // fixed n, Maxwell-Boltzmann: T dkappa^2/dT = -kappa^2; the extra term fades as kappa grows
  double previous_gap = INFINITY;
  for (double kappa : {1e6, 1e7, 1e8, 1e9}) {
    const double S = th::screened_entropy_asymptote(kA, T, 3.81, kappa, -kappa * kappa / T, 0.0);
    const double gap = std::abs(S - dc);
    CHECK(gap < previous_gap);
    previous_gap = gap;
  }
  CHECK(previous_gap < 1e-2 * dc);

  // atom: kappa = 0 gives nothing extra, kappa -> infinity gives the dc residual
  const auto zero = th::screened_atom_asymptotes(kA, T, 3.81, kAlpha0, 0.0, 0.0, -1e-31, 1e-40);
  CHECK(zero.free_energy == doctest::Approx(-1e-31).epsilon(1e-11));
  CHECK(zero.entropy == doctest::Approx(1e-40).epsilon(1e-9));
  const auto big = th::screened_atom_asymptotes(kA, T, 3.81, kAlpha0, 1e15, 0.0, 0.0, 0.0);
  CHECK(big.entropy == doctest::Approx(th::dc_residual_entropy_atom(kA, 3.81, kAlpha0)).epsilon(1e-6));
}

TEST_CASE("relative least squares") {
  std::vector<double> x, ones, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(i + 1.0);
    ones.push_back(1.0);
    y.push_back(3.0 + 2.0 * (i + 1.0));
  }
  const auto fit = th::relative_least_squares({ones, x}, y);
  CHECK(fit.coefficients[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.residual_rms < 1e-12);
  CHECK_THROWS_AS(th::relative_least_squares({ones, x}, std::vector<double>(3, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(th::relative_least_squares({ones, ones}, y), std::invalid_argument);
}

TEST_CASE("engine entropy follows the quadratic law at low T") {
  auto job = plates(data_material("sio2.mat"));
  job.numerics = e::NumericsConfig::entropy_grade();
  for (double t : {0.002, 0.005}) {
    job.temperature = t * teff();
    const double S = th::entropy(job);
    CHECK(S > 0.0);
    CHECK(S == doctest::Approx(th::asymptotic_entropy_plates(kA, job.temperature, 3.81)).epsilon(0.05));
  }
}

TEST_CASE("engine T^3 correction matches the asymptote at low T") {
  auto job = plates(data_material("sio2.mat"));
  job.numerics = e::NumericsConfig::entropy_grade();
  const double E = e::free_energy_plates_zero_T(job).value;
  job.temperature = 0.005 * teff();
  const double F = e::free_energy_plates(job).value;
  const double predicted = th::asymptotic_free_energy_plates(kA, job.temperature, 3.81, E) - E;
  CHECK(F - E == doctest::Approx(predicted).epsilon(0.05));
}

TEST_CASE("engine dc minus oscillator free energy matches the linear correction") {
  auto osc = plates(data_material("sio2.mat"));
  auto dc = plates(data_material("sio2_dc.mat"));
  for (double t : {0.005, 0.02}) {
    osc.temperature = dc.temperature = t * teff();
    const double diff = e::free_energy_plates(dc).value - e::free_energy_plates(osc).value;
    CHECK(diff == doctest::Approx(th::dc_free_energy_correction_plates(kA, dc.temperature, 3.81)).epsilon(0.1));
  }
}

TEST_CASE("screened fixed-n engine entropy approaches the residual") {
  auto job = plates(data_material("sio2_fixed_n.mat"), ReflectionPolicy::Screened);
  job.numerics = e::NumericsConfig::entropy_grade();
  job.temperature = 1e-3 * teff();
  CHECK(th::entropy(job) == doctest::Approx(th::dc_residual_entropy_plates(kA, 3.81)).epsilon(0.05));
}

TEST_CASE("C_D fits") {
  for (double eps0 : {2.0, 3.81, 11.87}) {
    const auto fit = th::cached_C_D(atom(oscillator_wall(eps0)));
    CHECK(fit.c_d > 0.0);
    CHECK(std::isfinite(fit.c_d));
    CHECK(fit.max_relative_residual < 0.05);
    const auto coeffs = th::asymptotic_coefficients(kA, eps0, kAlpha0, fit.c_d);
    CHECK(coeffs.quartic_T_coefficient < 0.0);
    CHECK(coeffs.cubic_T_coefficient < 0.0);
    CHECK(coeffs.quadratic_entropy_coefficient > 0.0);
    CHECK(coeffs.cubic_entropy_coefficient > 0.0);
  }
  // cached value is reused verbatim
  const auto a = th::cached_C_D(atom(oscillator_wall(3.81)));
  const auto b = th::cached_C_D(atom(oscillator_wall(3.81)));
  CHECK(a.c_d == b.c_d);
}

TEST_CASE("audit option validation") {
  th::AuditOptions options;
  options.points = 5;
  CHECK_THROWS_AS(th::nernst_audit(plates(data_material("sio2.mat")), th::ModelClass::OscillatorOnly, options),
                  std::invalid_argument);
  options = {};
  options.t_max = 0.2;
  CHECK_THROWS_AS(th::nernst_audit(plates(data_material("sio2.mat")), th::ModelClass::OscillatorOnly, options),
                  std::invalid_argument);
}

TEST_CASE("oscillator plates satisfy the heat theorem") {
  th::AuditOptions options;
  options.threads = 4;
  const auto r = th::nernst_audit(plates(data_material("sio2.mat")), th::ModelClass::OscillatorOnly, options);
  CHECK(r.satisfied);
  REQUIRE(r.predicted_coefficient.has_value());
  CHECK(r.fitted_coefficient == doctest::Approx(*r.predicted_coefficient).epsilon(0.05));
  CHECK(r.fit_window.first > 0.0);
  CHECK(r.fit_window.second < 0.1 * teff());
  CHECK(r.samples.size() == 12);
  for (const auto& [T, S] : r.samples) CHECK(S > 0.0);

  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["schema_version"] == th::AsymptoticReport::kSchemaVersion);
  CHECK(j["verdict"] == "satisfied");
  CHECK(j["model_class"] == "oscillator-only");
  CHECK(j["relative_discrepancy"].is_null());
}

TEST_CASE("dc-augmented plates violate it by the closed-form residual") {
  th::AuditOptions options;
  options.threads = 4;
  const auto r = th::nernst_audit(plates(data_material("sio2_dc.mat")), th::ModelClass::DcAugmented, options);
  CHECK_FALSE(r.satisfied);
  CHECK(r.predicted_S0 == doctest::Approx(oracle::dc_residual_plates_1um).epsilon(1e-12));
  CHECK(r.fitted_S0 == doctest::Approx(r.predicted_S0).epsilon(0.02));
  REQUIRE(r.relative_discrepancy.has_value());
  CHECK(*r.relative_discrepancy < 0.02);
  CHECK(r.residual_entropy == r.fitted_S0);
}

TEST_CASE("screened plates: vanishing n satisfies, fixed n violates") {
  th::AuditOptions options;
  options.threads = 4;
  const auto vanishing = th::nernst_audit(plates(data_material("sio2_vanishing_n.mat"), ReflectionPolicy::Screened),
                                          th::ModelClass::ScreenedVanishingN, options);
  CHECK(vanishing.satisfied);
  const auto fixed = th::nernst_audit(plates(data_material("sio2_fixed_n.mat"), ReflectionPolicy::Screened),
                                      th::ModelClass::ScreenedFixedN, options);
  CHECK_FALSE(fixed.satisfied);
  CHECK(fixed.fitted_S0 == doctest::Approx(th::dc_residual_entropy_plates(kA, 3.81)).epsilon(0.05));
}

TEST_CASE("atom-wall residual with dc conductivity") {
  th::AuditOptions options;
  options.threads = 4;
  for (double eps0 : {3.81, 11.87}) {
    d::Material wall = oscillator_wall(eps0);
    d::CarrierScenario carriers;
    carriers.density = {1e24, 0.0};
    carriers.mobility = {1e-4, 0.5 * c::kElementaryCharge};
    wall.model = d::DcAugmentedModel{std::get<d::OscillatorModel>(wall.model).oscillators, carriers};
    const auto r = th::nernst_audit(atom(wall), th::ModelClass::DcAugmented, options);
    CHECK_FALSE(r.satisfied);
    CHECK(r.power == 3);
    CHECK(r.fitted_S0 == doctest::Approx(th::dc_residual_entropy_atom(kA, eps0, kAlpha0)).epsilon(0.02));
  }
}

TEST_CASE("verdicts survive a refined temperature grid") {
  th::AuditOptions coarse, fine;
  coarse.threads = fine.threads = 4;
  fine.points = 2 * coarse.points - 1;
  for (auto [file, model_class] : {std::pair{"sio2.mat", th::ModelClass::OscillatorOnly},
                                   std::pair{"sio2_dc.mat", th::ModelClass::DcAugmented}}) {
    const auto job = plates(data_material(file));
    CHECK(th::nernst_audit(job, model_class, coarse).satisfied == th::nernst_audit(job, model_class, fine).satisfied);
  }
}
