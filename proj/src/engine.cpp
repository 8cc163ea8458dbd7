#include "casimir/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <mutex>
#include <thread>

namespace casimir::engine {

namespace c = constants;
using numerics::CompensatedSum;
using reflection::FrequencySample;
using reflection::ReflectionPair;
using reflection::SurfaceResponse;

NumericsConfig NumericsConfig::entropy_grade() {
  NumericsConfig cfg;
  cfg.quadrature.relative_tolerance = 1e-13;
  cfg.quadrature.absolute_floor = 1e-22;
  cfg.quadrature.max_subdivisions = 4000;
  cfg.summation.term_cutoff_ratio = 1e-18;
  return cfg;
}

void LifshitzJob::validate() const {
  if (!(separation > 0.0)) throw std::invalid_argument("separation must be > 0");
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
  numerics.quadrature.validate();
  numerics.summation.validate();
}

void AtomJob::validate() const {
  if (!(separation > 0.0)) throw std::invalid_argument("separation must be > 0");
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
  if (!(atom.static_polarizability >= 0.0) || !(atom.absorption_frequency > 0.0)) {
    throw std::invalid_argument("atom needs alpha_0 >= 0 and omega_a > 0");
  }
  numerics.quadrature.validate();
  numerics.summation.validate();
}

double effective_temperature(double separation) {
  return c::kHbar * c::kSpeedOfLight / (2.0 * separation * c::kBoltzmann);
}

double matsubara_frequency(double temperature, long index) {
  return 2.0 * c::kPi * c::kBoltzmann * temperature * static_cast<double>(index) / c::kHbar;
}

namespace {

// Fills out[i] = term(first + i), spreading the batch over up to `threads`
// workers. Each slot is written by exactly one worker, so the result does
// not depend on scheduling.
template <class Term>
void fill_batch(const Term& term, long first, std::span<double> out, int threads,
                std::vector<double>& errors) {
  const std::size_t n = out.size();
  std::vector<double> local_errors(n, 0.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = term(first + static_cast<long>(i));
      out[i] = r.value;
      local_errors[i] = r.error_estimate;
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (workers == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  errors.insert(errors.end(), local_errors.begin(), local_errors.end());
}

template <class Term>
EnergyResult run_matsubara(const Term& term, double prefactor, const NumericsConfig& cfg) {
  std::vector<double> errors;
  std::vector<double> terms;
  auto batch = [&](long first, std::span<double> out) {
    fill_batch(term, first, out, cfg.threads, errors);
    if (cfg.keep_terms) terms.insert(terms.end(), out.begin(), out.end());
  };
  numerics::SummationResult sum;
  try {
    sum = numerics::matsubara_sum(batch, cfg.summation, std::max(16, 8 * cfg.threads));
  } catch (const numerics::ConvergenceError& e) {
    throw numerics::ConvergenceError(e.what(), prefactor * e.best_estimate());
  }
  EnergyResult result;
  result.value = prefactor * sum.value;
  result.truncation_index = sum.truncation_index;
  double abs_err = 0.0;
  const std::size_t used = std::min<std::size_t>(errors.size(), sum.truncation_index + 1);
  for (std::size_t i = 0; i < used; ++i) abs_err += errors[i];
  result.quadrature_error = sum.value != 0.0 ? abs_err / std::abs(sum.value) : abs_err;
  if (cfg.keep_terms) {
    terms.resize(std::min<std::size_t>(terms.size(), sum.truncation_index));
    for (auto& t : terms) t *= prefactor;
    if (!terms.empty()) terms[0] *= 0.5;
    result.per_term = std::move(terms);
  }
  return result;
}

// Integral over y in [zeta, inf) of y [ln(1 - r1 r2 e^-y)]_TM + [..]_TE.
template <class Pair1, class Pair2>
numerics::QuadratureResult plate_integral(const Pair1& r1, const Pair2& r2, double zeta,
                                          const numerics::QuadratureSpec& spec) {
  auto integrand = [&](double t) {
    const double y = zeta + t;
    const double decay = std::exp(-y);
    const ReflectionPair a = r1(y);
    const ReflectionPair b = r2(y);
    return y * (std::log1p(-a.tm * b.tm * decay) + std::log1p(-a.te * b.te * decay));
  };
  return numerics::integrate_semi_infinite(integrand, spec);
}

// Integral over y in [zeta, inf) of y^2 e^-y {2 r_TM - zeta^2/y^2 (r_TM + r_TE)}.
template <class Pair>
numerics::QuadratureResult atom_integral(const Pair& r, double zeta,
                                         const numerics::QuadratureSpec& spec) {
  auto integrand = [&](double t) {
    const double y = zeta + t;
    const ReflectionPair p = r(y);
    return std::exp(-y) * (2.0 * y * y * p.tm - zeta * zeta * (p.tm + p.te));
  };
  return numerics::integrate_semi_infinite(integrand, spec);
}

bool both_vacuum(const LifshitzJob& job) {
  return job.policy != ReflectionPolicy::IdealMetal &&
         (job.material1.is_vacuum() || job.material2.is_vacuum());
}

numerics::QuadratureSpec inner_spec(const numerics::QuadratureSpec& outer) {
  auto inner = outer;
  inner.relative_tolerance = std::max(outer.relative_tolerance * 0.1, 2e-14);
  return inner;
}

}  // namespace

EnergyResult free_energy_plates(const LifshitzJob& job) {
  job.validate();
  if (job.temperature == 0.0) return free_energy_plates_zero_T(job);
  if (both_vacuum(job)) return {};

  const double a = job.separation;
  const double T = job.temperature;
  const SurfaceResponse s1(job.material1, job.policy, T, a);
  const SurfaceResponse s2(job.material2, job.policy, T, a);
  const double zeta_step = 2.0 * a * matsubara_frequency(T, 1) / c::kSpeedOfLight;
  const auto& spec = job.numerics.quadrature;

  auto term = [&](long l) {
    if (l == 0) {
      const auto& z1 = s1.zero_frequency_rule();
      const auto& z2 = s2.zero_frequency_rule();
      return plate_integral([&](double y) { return reflection::evaluate(z1, y); },
                            [&](double y) { return reflection::evaluate(z2, y); }, 0.0, spec);
    }
    const double zeta = zeta_step * static_cast<double>(l);
    const FrequencySample f1 = s1.at(zeta);
    const FrequencySample f2 = s2.at(zeta);
    return plate_integral(f1, f2, zeta, spec);
  };
  const double prefactor = c::kBoltzmann * T / (8.0 * c::kPi * a * a);
  return run_matsubara(term, prefactor, job.numerics);
}

EnergyResult free_energy_plates_zero_T(const LifshitzJob& job) {
  job.validate();
  if (both_vacuum(job)) return {};
  const double a = job.separation;
  const SurfaceResponse s1(job.material1, job.policy, 0.0, a);
  const SurfaceResponse s2(job.material2, job.policy, 0.0, a);
  const auto outer = job.numerics.quadrature;
  const auto inner = inner_spec(outer);
  double inner_error = 0.0;
  auto f = [&](double zeta) {
    if (zeta <= 0.0) zeta = 1e-300;
    const auto r = plate_integral(s1.at(zeta), s2.at(zeta), zeta, inner);
    inner_error += r.error_estimate;
    return r.value;
  };
  numerics::QuadratureResult q;
  const double prefactor = c::kHbar * c::kSpeedOfLight / (32.0 * c::kPi * c::kPi * a * a * a);
  try {
    q = numerics::integrate_semi_infinite(f, outer);
  } catch (const numerics::ConvergenceError& e) {
    throw numerics::ConvergenceError(e.what(), prefactor * e.best_estimate());
  }
  EnergyResult result;
  result.value = prefactor * q.value;
  result.quadrature_error = q.value != 0.0 ? q.error_estimate / std::abs(q.value) : 0.0;
  return result;
}

EnergyResult free_energy_atom_wall(const AtomJob& job) {
  job.validate();
  if (job.temperature == 0.0) return free_energy_atom_wall_zero_T(job);
  if (job.atom.static_polarizability == 0.0 ||
      (job.wall.is_vacuum() && job.policy != ReflectionPolicy::IdealMetal)) {
    return {};
  }
  const double a = job.separation;
  const double T = job.temperature;
  const SurfaceResponse wall(job.wall, job.policy, T, a);
  const double xi_step = matsubara_frequency(T, 1);
  const double zeta_step = 2.0 * a * xi_step / c::kSpeedOfLight;
  const auto& spec = job.numerics.quadrature;

  auto term = [&](long l) {
    numerics::QuadratureResult r;
    if (l == 0) {
      const auto& rule = wall.zero_frequency_rule();
      r = atom_integral([&](double y) { return reflection::evaluate(rule, y); }, 0.0, spec);
    } else {
      const double zeta = zeta_step * static_cast<double>(l);
      r = atom_integral(wall.at(zeta), zeta, spec);
    }
    const double alpha = job.atom.polarizability(xi_step * static_cast<double>(l));
    r.value *= alpha;
    r.error_estimate *= alpha;
    return r;
  };
  const double prefactor = -c::kBoltzmann * T / (8.0 * a * a * a);
  return run_matsubara(term, prefactor, job.numerics);
}

EnergyResult free_energy_atom_wall_zero_T(const AtomJob& job) {
  job.validate();
  if (job.atom.static_polarizability == 0.0 ||
      (job.wall.is_vacuum() && job.policy != ReflectionPolicy::IdealMetal)) {
    return {};
  }
  const double a = job.separation;
  const SurfaceResponse wall(job.wall, job.policy, 0.0, a);
  const auto outer = job.numerics.quadrature;
  const auto inner = inner_spec(outer);
  auto f = [&](double zeta) {
    if (zeta <= 0.0) zeta = 1e-300;
    const double xi = zeta * c::kSpeedOfLight / (2.0 * a);
    return job.atom.polarizability(xi) * atom_integral(wall.at(zeta), zeta, inner).value;
  };
  const double prefactor = -c::kHbar * c::kSpeedOfLight / (32.0 * c::kPi * a * a * a * a);
  numerics::QuadratureResult q;
  try {
    q = numerics::integrate_semi_infinite(f, outer);
  } catch (const numerics::ConvergenceError& e) {
    throw numerics::ConvergenceError(e.what(), prefactor * e.best_estimate());
  }
  EnergyResult result;
  result.value = prefactor * q.value;
  result.quadrature_error = q.value != 0.0 ? q.error_estimate / std::abs(q.value) : 0.0;
  return result;
}

ForceResult pfa_sphere_force(const LifshitzJob& job, double sphere_radius) {
  if (!(sphere_radius > 0.0)) throw std::invalid_argument("sphere radius must be > 0");
  ForceResult out;
  if (sphere_radius / job.separation < 100.0) {
    out.warnings.push_back("proximity force approximation used with R/a < 100");
  }
  out.value = 2.0 * c::kPi * sphere_radius * free_energy_plates(job).value;
  return out;
}

double pressure_plates(const LifshitzJob& job) {
  if (both_vacuum(job)) return 0.0;
  auto energy = [&job](double a) {
    LifshitzJob shifted = job;
    shifted.separation = a;
    return free_energy_plates(shifted).value;
  };
  return -numerics::derivative_central(energy, job.separation, job.separation * 1e-4).value;
}

ForceResult difference_force(const LifshitzJob& dark, const LifshitzJob& light,
                             double sphere_radius) {
  if (dark.separation != light.separation || dark.temperature != light.temperature) {
    throw std::invalid_argument("difference_force: jobs must share separation and temperature");
  }
  auto f_dark = pfa_sphere_force(dark, sphere_radius);
  auto f_light = pfa_sphere_force(light, sphere_radius);
  ForceResult out;
  out.value = f_light.value - f_dark.value;
  out.warnings = std::move(f_dark.warnings);
  return out;
}

double frequency_shift_gamma_z(const AtomJob& job, const TrapParameters& trap) {
  if (job.atom.static_polarizability == 0.0) return 0.0;
  // Relative steps of 1e-3 keep the nested difference above the quadrature
  // noise; the power-law dependence on z makes the h^4 truncation negligible.
  const double h = job.separation * 1e-3;
  auto energy = [&job](double z) {
    AtomJob shifted = job;
    shifted.separation = z;
    return free_energy_atom_wall(shifted).value;
  };
  auto slope = [&](double z) { return numerics::derivative_central(energy, z, h).value; };
  const double curvature = numerics::derivative_central(slope, job.separation, h).value;
  return std::abs(curvature) / (2.0 * trap.atom_mass * trap.trap_frequency * trap.trap_frequency);
}

}  // namespace casimir::engine
