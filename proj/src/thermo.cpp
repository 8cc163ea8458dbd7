#include "casimir/thermo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "casimir/constants.hpp"

namespace casimir::thermo {

namespace c = constants;
using engine::effective_temperature;

std::string_view to_string(ModelClass model_class) {
  switch (model_class) {
    case ModelClass::OscillatorOnly: return "oscillator-only";
    case ModelClass::DcAugmented: return "dc-augmented";
    case ModelClass::ScreenedVanishingN: return "screened-vanishing-n";
    case ModelClass::ScreenedFixedN: return "screened-fixed-n";
    case ModelClass::PlasmaLike: return "plasma-like";
  }
  return "unknown";
}

ModelClass model_class_from_string(std::string_view name) {
  for (auto m : {ModelClass::OscillatorOnly, ModelClass::DcAugmented,
                 ModelClass::ScreenedVanishingN, ModelClass::ScreenedFixedN,
                 ModelClass::PlasmaLike}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown model class '" + std::string(name) + "'");
}

std::string_view to_string(Geometry geometry) {
  return geometry == Geometry::Plates ? "plates" : "atom-wall";
}

double temperature_step(double temperature) {
  return std::min(std::max(temperature * 1e-3, 1e-3), 0.25 * temperature);
}

namespace {

template <class J, class Energy>
double entropy_of(const J& job, Energy energy) {
  if (!(job.temperature > 0.0)) throw std::domain_error("entropy needs T > 0");
  auto f = [&](double T) {
    J shifted = job;
    shifted.temperature = T;
    return energy(shifted).value;
  };
  return -numerics::derivative_central(f, job.temperature, temperature_step(job.temperature))
              .value;
}

double r0_of(double eps0) { return (eps0 - 1.0) / (eps0 + 1.0); }

double t_ratio(double separation, double temperature) {
  return temperature / effective_temperature(separation);
}

numerics::QuadratureSpec tight_spec() {
  numerics::QuadratureSpec spec;
  spec.relative_tolerance = 1e-13;
  spec.absolute_floor = 1e-24;
  spec.max_subdivisions = 4000;
  return spec;
}

double screened_r0(double eps0, double scaled_kappa, double y) {
  return reflection::evaluate(reflection::ScreenedStatic{eps0, scaled_kappa}, y).tm;
}

}  // namespace

double entropy(const LifshitzJob& job) {
  return entropy_of(job, [](const LifshitzJob& j) { return engine::free_energy_plates(j); });
}

double entropy(const AtomJob& job) {
  return entropy_of(job, [](const AtomJob& j) { return engine::free_energy_atom_wall(j); });
}

double entropy(const Job& job) {
  return std::visit([](const auto& j) { return entropy(j); }, job);
}

double asymptotic_free_energy_plates(double separation, double temperature, double eps0,
                                     double zero_temperature_energy) {
  const double r0 = r0_of(eps0);
  const double t = t_ratio(separation, temperature);
  return zero_temperature_energy - c::kHbar * c::kSpeedOfLight /
                                       (32.0 * c::kPi * std::pow(separation, 3)) * c::kZeta3 *
                                       r0 * r0 * (eps0 + 1.0) * t * t * t;
}

double asymptotic_free_energy_atom(double separation, double temperature, double alpha0,
                                   double c_d, double zero_temperature_energy) {
  const double t = t_ratio(separation, temperature);
  return zero_temperature_energy - c::kHbar * c::kSpeedOfLight * std::pow(c::kPi, 3) /
                                       (240.0 * std::pow(separation, 4)) * alpha0 * c_d *
                                       std::pow(t, 4);
}

double asymptotic_entropy_plates(double separation, double temperature, double eps0) {
  const double r0 = r0_of(eps0);
  const double t = t_ratio(separation, temperature);
  return 3.0 * c::kBoltzmann / (16.0 * c::kPi * separation * separation) * c::kZeta3 * r0 * r0 *
         (eps0 + 1.0) * t * t;
}

double asymptotic_entropy_atom(double separation, double temperature, double alpha0,
                               double c_d) {
  const double t = t_ratio(separation, temperature);
  return std::pow(c::kPi, 3) * c::kBoltzmann / (30.0 * std::pow(separation, 3)) * alpha0 * c_d *
         t * t * t;
}

double dc_residual_entropy_plates(double separation, double eps0) {
  if (!(eps0 > 1.0)) throw std::domain_error("dc residual entropy needs eps0 > 1");
  const double r0 = r0_of(eps0);
  return c::kBoltzmann / (16.0 * c::kPi * separation * separation) *
         (numerics::zeta3() - numerics::polylog3(r0 * r0));
}

double dc_residual_entropy_atom(double separation, double eps0, double alpha0) {
  if (!(eps0 > 1.0)) throw std::domain_error("dc residual entropy needs eps0 > 1");
  if (!(alpha0 > 0.0)) throw std::domain_error("dc residual entropy needs alpha0 > 0");
  return c::kBoltzmann / (4.0 * std::pow(separation, 3)) * (1.0 - r0_of(eps0)) * alpha0;
}

double dc_free_energy_correction_plates(double separation, double temperature, double eps0) {
  return -temperature * dc_residual_entropy_plates(separation, eps0);
}

double dc_free_energy_correction_atom(double separation, double temperature, double eps0,
                                      double alpha0) {
  return -temperature * dc_residual_entropy_atom(separation, eps0, alpha0);
}

double screened_log_integral(double eps0, double scaled_kappa) {
  auto f = [&](double y) {
    const double r = screened_r0(eps0, scaled_kappa, y);
    return y * std::log1p(-r * r * std::exp(-y));
  };
  return numerics::integrate_semi_infinite(f, tight_spec()).value;
}

double screened_atom_integral(double eps0, double scaled_kappa) {
  auto f = [&](double y) { return y * y * screened_r0(eps0, scaled_kappa, y) * std::exp(-y); };
  return numerics::integrate_semi_infinite(f, tight_spec()).value;
}

double screened_free_energy_asymptote(double separation, double temperature, double eps0,
                                      double kappa, double base_free_energy) {
  const double r0 = r0_of(eps0);
  const double bracket = screened_log_integral(eps0, 2.0 * separation * kappa) +
                         numerics::polylog3(r0 * r0);
  return base_free_energy +
         c::kBoltzmann * temperature / (16.0 * c::kPi * separation * separation) * bracket;
}

double screened_entropy_asymptote(double separation, double temperature, double eps0,
                                  double kappa, double dkappa2_dT, double base_entropy) {
  const double r0 = r0_of(eps0);
  const double K = 2.0 * separation * kappa;
  double bracket = screened_log_integral(eps0, K) + numerics::polylog3(r0 * r0);
  const double drive = temperature * dkappa2_dT;
  if (drive != 0.0 && std::isfinite(K) && K > 0.0) {
    auto f = [&](double y) {
      const double s = std::hypot(y, K);
      const double r = screened_r0(eps0, K, y);
      const double decay = std::exp(-y);
      const double d = eps0 * s + y;
      return y * y * r * decay / (1.0 - r * r * decay) / (s * d * d);
    };
    const double J = numerics::integrate_semi_infinite(f, tight_spec()).value;
    bracket -= 8.0 * separation * separation * eps0 * drive * J;
  }
  return base_entropy - c::kBoltzmann / (16.0 * c::kPi * separation * separation) * bracket;
}

ScreenedAtomAsymptotes screened_atom_asymptotes(double separation, double temperature,
                                                double eps0, double alpha0, double kappa,
                                                double dkappa2_dT, double base_free_energy,
                                                double base_entropy) {
  const double r0 = r0_of(eps0);
  const double K = 2.0 * separation * kappa;
  const double pre = alpha0 / (8.0 * std::pow(separation, 3));
  const double bracket = screened_atom_integral(eps0, K) - 2.0 * r0;
  double entropy_bracket = bracket;
  const double drive = temperature * dkappa2_dT;
  if (drive != 0.0 && std::isfinite(K) && K > 0.0) {
    auto f = [&](double y) {
      const double s = std::hypot(y, K);
      const double d = eps0 * s + y;
      return y * y * y * std::exp(-y) / (s * d * d);
    };
    const double J = numerics::integrate_semi_infinite(f, tight_spec()).value;
    entropy_bracket += 4.0 * separation * separation * eps0 * drive * J;
  }
  return {base_free_energy - c::kBoltzmann * temperature * pre * bracket,
          base_entropy + c::kBoltzmann * pre * entropy_bracket};
}

LinearFit relative_least_squares(const std::vector<std::vector<double>>& columns,
                                 std::span<const double> values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  const auto k = static_cast<Eigen::Index>(columns.size());
  if (n < k + 2) throw std::invalid_argument("fit ill-conditioned: too few points");
  Eigen::MatrixXd A(n, k);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = values[i] != 0.0 ? 1.0 / std::abs(values[i]) : 1.0;
    b(i) = values[i] * w;
    for (Eigen::Index j = 0; j < k; ++j) A(i, j) = columns[j][i] * w;
  }
  // Column scaling keeps the normal matrix well conditioned.
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (scale(j) == 0.0) throw std::invalid_argument("fit ill-conditioned: empty column");
    A.col(j) /= scale(j);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < k) throw std::invalid_argument("fit ill-conditioned: rank deficient");
  const Eigen::VectorXd x = qr.solve(b);
  const Eigen::VectorXd residual = A * x - b;
  const double sigma2 = residual.squaredNorm() / static_cast<double>(n - k);
  const Eigen::MatrixXd cov = (A.transpose() * A).inverse() * sigma2;
  LinearFit fit;
  for (Eigen::Index j = 0; j < k; ++j) {
    fit.coefficients.push_back(x(j) / scale(j));
    fit.standard_errors.push_back(std::sqrt(std::max(cov(j, j), 0.0)) / scale(j));
  }
  fit.residual_rms = std::sqrt(residual.squaredNorm() / static_cast<double>(n));
  return fit;
}

namespace {

double atom_quartic_scale(double separation, double alpha0) {
  return c::kHbar * c::kSpeedOfLight * std::pow(c::kPi, 3) /
         (240.0 * std::pow(separation, 4)) * alpha0;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = points == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  }
  return grid;
}

// Evaluates f at every point with up to `threads` workers; results land in
// grid order.
template <class F>
std::vector<double> evaluate_grid(const std::vector<double>& grid, int threads, F f) {
  std::vector<double> out(grid.size());
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid[i]);
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex m;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < grid.size(); i += workers) {
        try {
          out[i] = f(grid[i]);
        } catch (...) {
          std::lock_guard lock(m);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

CdFit fit_C_D(double separation, double alpha0, std::span<const double> temperatures,
              std::span<const double> free_energies, double zero_temperature_energy) {
  if (temperatures.size() != free_energies.size()) {
    throw std::invalid_argument("fit_C_D: sample size mismatch");
  }
  const double teff = effective_temperature(separation);
  std::vector<double> t4, t5, delta;
  for (std::size_t i = 0; i < temperatures.size(); ++i) {
    const double t = temperatures[i] / teff;
    t4.push_back(std::pow(t, 4));
    t5.push_back(std::pow(t, 5));
    delta.push_back(free_energies[i] - zero_temperature_energy);
  }
  const auto fit = relative_least_squares({t4, t5}, delta);
  const double scale = atom_quartic_scale(separation, alpha0);
  CdFit out;
  out.c_d = -fit.coefficients[0] / scale;
  out.standard_error = fit.standard_errors[0] / scale;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const double model = fit.coefficients[0] * t4[i] + fit.coefficients[1] * t5[i];
    out.max_relative_residual =
        std::max(out.max_relative_residual, std::abs(model - delta[i]) / std::abs(delta[i]));
  }
  return out;
}

CdFit cached_C_D(const AtomJob& job) {
  static std::mutex mutex;
  static std::map<std::tuple<std::string, double, double, double, double, double>, CdFit> cache;
  const double xi_ref = c::kSpeedOfLight / (2.0 * job.separation);
  const auto key = std::tuple{job.wall.name,
                              dielectric::core_static_permittivity(job.wall.model),
                              dielectric::core_permittivity(job.wall.model, xi_ref),
                              job.separation,
                              job.atom.static_polarizability,
                              job.atom.absorption_frequency};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  AtomJob base = job;
  base.numerics = engine::NumericsConfig::entropy_grade();
  base.policy = reflection::ReflectionPolicy::Standard;
  base.temperature = 0.0;
  const double e0 = engine::free_energy_atom_wall_zero_T(base).value;
  const double teff = effective_temperature(job.separation);
  std::vector<double> temps = log_grid(0.005 * teff, 0.05 * teff, 10);
  std::vector<double> energies = evaluate_grid(temps, job.numerics.threads, [&](double T) {
    AtomJob j = base;
    j.temperature = T;
    return engine::free_energy_atom_wall(j).value;
  });
  const CdFit fit = fit_C_D(job.separation, job.atom.static_polarizability, temps, energies, e0);
  std::lock_guard lock(mutex);
  cache.emplace(key, fit);
  return fit;
}

AsymptoticCoefficients asymptotic_coefficients(double separation, double eps0, double alpha0,
                                               double c_d) {
  const double teff = effective_temperature(separation);
  const double r0 = r0_of(eps0);
  AsymptoticCoefficients out;
  out.c_d = c_d;
  out.cubic_T_coefficient = -c::kHbar * c::kSpeedOfLight /
                            (32.0 * c::kPi * std::pow(separation, 3)) * c::kZeta3 * r0 * r0 *
                            (eps0 + 1.0) / std::pow(teff, 3);
  out.quartic_T_coefficient = -atom_quartic_scale(separation, alpha0) * c_d / std::pow(teff, 4);
  out.quadratic_entropy_coefficient = asymptotic_entropy_plates(separation, teff, eps0) /
                                      (teff * teff);
  out.cubic_entropy_coefficient =
      asymptotic_entropy_atom(separation, teff, alpha0, c_d) / std::pow(teff, 3);
  return out;
}

std::string AsymptoticReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["model_class"] = std::string(to_string(model_class));
  j["geometry"] = std::string(to_string(geometry));
  j["separation_m"] = separation;
  j["eps0"] = eps0;
  j["predicted_S0"] = predicted_S0;
  j["fitted_S0"] = fitted_S0;
  j["fitted_S0_error"] = fitted_S0_error;
  j["power"] = power;
  j["fitted_coefficient"] = fitted_coefficient;
  j["fitted_coefficient_error"] = fitted_coefficient_error;
  j["predicted_coefficient"] =
      predicted_coefficient ? nlohmann::ordered_json(*predicted_coefficient) : nlohmann::ordered_json(nullptr);
  j["fit_window_K"] = {fit_window.first, fit_window.second};
  j["verdict"] = verdict_name();
  j["residual_entropy"] = residual_entropy;
  j["relative_discrepancy"] =
      relative_discrepancy ? nlohmann::ordered_json(*relative_discrepancy) : nlohmann::ordered_json(nullptr);
  auto& s = j["samples"] = nlohmann::ordered_json::array();
  for (const auto& [T, S] : samples) s.push_back({T, S});
  return j.dump(2);
}

namespace {

bool predicts_residual(ModelClass m) {
  return m == ModelClass::DcAugmented || m == ModelClass::ScreenedFixedN;
}

template <class J, class Residual>
AsymptoticReport audit(const J& base, ModelClass model_class, Geometry geometry,
                       const dielectric::Material& material, const AuditOptions& options,
                       Residual residual) {
  if (options.points < 6) throw std::invalid_argument("fit ill-conditioned: fewer than 6 points");
  if (!(options.t_min > 0.0 && options.t_max > options.t_min && options.t_max <= 0.1)) {
    throw std::invalid_argument("fit window must lie inside (0, 0.1 T_eff)");
  }
  AsymptoticReport report;
  report.model_class = model_class;
  report.geometry = geometry;
  report.separation = base.separation;
  report.eps0 = dielectric::core_static_permittivity(material.model);
  report.power = geometry == Geometry::Plates ? 2 : 3;
  report.predicted_S0 = predicts_residual(model_class) ? residual(report.eps0) : 0.0;

  const double teff = effective_temperature(base.separation);
  const auto ts = log_grid(options.t_min, options.t_max, options.points);
  J job = base;
  job.numerics = options.numerics.value_or(engine::NumericsConfig::entropy_grade());
  const auto entropies = evaluate_grid(ts, options.threads, [&](double t) {
    J j = job;
    j.temperature = t * teff;
    return entropy(j);
  });

  std::vector<double> ones(ts.size(), 1.0), tp, tq;
  for (double t : ts) {
    tp.push_back(std::pow(t, report.power));
    tq.push_back(std::pow(t, report.power + 1));
  }
  const auto fit = relative_least_squares({ones, tp, tq}, entropies);
  report.fitted_S0 = fit.coefficients[0];
  report.fitted_S0_error = fit.standard_errors[0];
  report.fitted_coefficient = fit.coefficients[1] / std::pow(teff, report.power);
  report.fitted_coefficient_error = fit.standard_errors[1] / std::pow(teff, report.power);
  report.fit_window = {ts.front() * teff, ts.back() * teff};
  for (std::size_t i = 0; i < ts.size(); ++i) report.samples.emplace_back(ts[i] * teff, entropies[i]);

  report.satisfied =
      std::abs(report.fitted_S0) < options.significance * report.fitted_S0_error;
  if (!report.satisfied) {
    report.residual_entropy = report.fitted_S0;
    if (report.predicted_S0 != 0.0) {
      report.relative_discrepancy =
          std::abs(report.fitted_S0 - report.predicted_S0) / std::abs(report.predicted_S0);
    }
  }
  return report;
}

}  // namespace

AsymptoticReport nernst_audit(const LifshitzJob& base, ModelClass model_class,
                              const AuditOptions& options) {
  auto report = audit(base, model_class, Geometry::Plates, base.material1, options,
                      [&](double eps0) { return dc_residual_entropy_plates(base.separation, eps0); });
  if (model_class != ModelClass::PlasmaLike && report.eps0 > 1.0) {
    const double teff = effective_temperature(base.separation);
    report.predicted_coefficient =
        asymptotic_entropy_plates(base.separation, teff, report.eps0) / (teff * teff);
  }
  return report;
}

AsymptoticReport nernst_audit(const AtomJob& base, ModelClass model_class,
                              const AuditOptions& options) {
  return audit(base, model_class, Geometry::AtomWall, base.wall, options, [&](double eps0) {
    return dc_residual_entropy_atom(base.separation, eps0, base.atom.static_polarizability);
  });
}

}  // namespace casimir::thermo
