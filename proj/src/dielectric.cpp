#include "casimir/dielectric.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/constants.hpp"

namespace casimir::dielectric {

namespace c = constants;

OscillatorSet::OscillatorSet(std::vector<Oscillator> entries) : entries_(std::move(entries)) {
  for (const auto& o : entries_) {
    if (!(o.frequency > 0.0)) throw std::invalid_argument("oscillator frequency must be > 0");
    if (!(o.strength >= 0.0)) throw std::invalid_argument("oscillator strength must be >= 0");
    if (!(o.relaxation >= 0.0)) throw std::invalid_argument("oscillator relaxation must be >= 0");
  }
}

double OscillatorSet::eps(double xi) const {
  double sum = 1.0;
  for (const auto& o : entries_) {
    sum += o.strength / (o.frequency * o.frequency + xi * xi + o.relaxation * xi);
  }
  return sum;
}

double OscillatorSet::static_eps() const { return eps(0.0); }

double ArrheniusLaw::operator()(double temperature) const {
  if (activation == 0.0) return prefactor;
  if (temperature <= 0.0) return 0.0;
  return prefactor * std::exp(-activation / (c::kBoltzmann * temperature));
}

double ArrheniusLaw::log_derivative(double temperature) const {
  if (activation == 0.0) return 0.0;
  return activation / (c::kBoltzmann * temperature * temperature);
}

bool CarrierScenario::conducting(double temperature) const {
  if (!density.positive() || !mobility.positive()) return false;
  if (temperature > 0.0) return true;
  return !density.vanishes_at_zero() && !mobility.vanishes_at_zero();
}

double CarrierScenario::plasma_frequency_squared(double temperature) const {
  if (plasma_frequency) return *plasma_frequency * *plasma_frequency;
  if (effective_mass) {
    return density(temperature) * c::kElementaryCharge * c::kElementaryCharge /
           (c::kVacuumPermittivity * *effective_mass);
  }
  throw std::invalid_argument(
      "carrier scenario needs either plasma_frequency or effective_mass for omega_p");
}

double conductivity(const CarrierScenario& carriers, double temperature) {
  if (temperature < 0.0) throw std::domain_error("conductivity: T must be >= 0");
  const double sigma_si =
      carriers.density(temperature) * c::kElementaryCharge * carriers.mobility(temperature);
  return sigma_si / (4.0 * c::kPi * c::kVacuumPermittivity);
}

double screening_kappa(const CarrierScenario& carriers, double eps0, double temperature) {
  const double e2 = c::kElementaryCharge * c::kElementaryCharge;
  if (carriers.statistics == CarrierStatistics::MaxwellBoltzmann) {
    if (!(temperature > 0.0)) {
      throw std::domain_error("Debye-Hueckel screening needs T > 0");
    }
    const double n = carriers.density(temperature);
    if (n == 0.0) return 0.0;
    return std::sqrt(e2 * n / (c::kVacuumPermittivity * eps0 * c::kBoltzmann * temperature));
  }
  const double n = carriers.density(temperature);
  if (n == 0.0) return 0.0;
  const double fermi_energy = c::kHbar * std::sqrt(carriers.plasma_frequency_squared(temperature));
  return std::sqrt(1.5 * e2 * n / (c::kVacuumPermittivity * eps0 * fermi_energy));
}

double screening_kappa_squared_derivative(const CarrierScenario& carriers, double eps0,
                                          double temperature) {
  const double kappa = screening_kappa(carriers, eps0, temperature);
  const double k2 = kappa * kappa;
  if (k2 == 0.0) return 0.0;
  const double dlog_n = carriers.density.log_derivative(temperature);
  if (carriers.statistics == CarrierStatistics::MaxwellBoltzmann) {
    return k2 * (dlog_n - 1.0 / temperature);
  }
  // kappa^2 ~ n / omega_p; with omega_p from n via m*, kappa^2 ~ sqrt(n).
  const double exponent = (carriers.plasma_frequency || !carriers.effective_mass) ? 1.0 : 0.5;
  return k2 * exponent * dlog_n;
}

double drude_excess(const CarrierScenario& carriers, double xi, double temperature) {
  if (!(xi > 0.0)) throw std::domain_error("drude_excess: xi must be > 0");
  if (carriers.effective_mass) {
    const double mu = carriers.mobility(temperature);
    const double wp2 = carriers.plasma_frequency_squared(temperature);
    if (mu == 0.0 || wp2 == 0.0) return 0.0;
    const double gamma = c::kElementaryCharge / (*carriers.effective_mass * mu);
    return wp2 / (xi * (xi + gamma));
  }
  return 4.0 * c::kPi * conductivity(carriers, temperature) / xi;
}

double eps_oscillator(const OscillatorSet& set, double xi) {
  if (xi < 0.0) throw std::domain_error("permittivity: xi must be >= 0");
  return set.eps(xi);
}

double eps_dc_augmented(const DcAugmentedModel& model, double xi, double temperature) {
  if (!(xi > 0.0)) throw std::domain_error("eps_dc_augmented: xi must be > 0");
  return model.oscillators.eps(xi) + 4.0 * c::kPi * conductivity(model.carriers, temperature) / xi;
}

double eps_plasma_like(const PlasmaLikeModel& model, double xi) {
  if (!(xi > 0.0)) throw std::domain_error("eps_plasma_like: xi must be > 0");
  const double wp = model.plasma_frequency;
  return model.oscillators.eps(xi) + wp * wp / (xi * xi);
}

double eps_drude(const DrudeModel& model, double xi) {
  if (!(xi > 0.0)) throw std::domain_error("eps_drude: xi must be > 0");
  const double wp = model.plasma_frequency;
  return model.oscillators.eps(xi) + wp * wp / (xi * (xi + model.relaxation));
}

double eps_si_lorentz(double xi, const SiLorentzModel& m) {
  if (xi < 0.0) throw std::domain_error("permittivity: xi must be >= 0");
  const double w2 = m.omega0 * m.omega0;
  return m.eps_inf + (m.eps_static - m.eps_inf) * w2 / (w2 + xi * xi);
}

double eps_si_logband(double xi, const SiLogBandModel& m) {
  if (xi < 0.0) throw std::domain_error("permittivity: xi must be >= 0");
  const double w0 = m.omega0_ev * c::kEvToRadPerSecond;
  const double w1 = m.omega1_ev * c::kEvToRadPerSecond;
  return 1.0 + (m.eps_bar / c::kPi) * std::log((w1 * w1 + xi * xi) / (w0 * w0 + xi * xi));
}

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

double permittivity(const DielectricModel& model, double xi, double temperature) {
  return std::visit(
      Overloaded{
          [&](const OscillatorModel& m) { return eps_oscillator(m.oscillators, xi); },
          [&](const DcAugmentedModel& m) { return eps_dc_augmented(m, xi, temperature); },
          [&](const PlasmaLikeModel& m) { return eps_plasma_like(m, xi); },
          [&](const DrudeModel& m) { return eps_drude(m, xi); },
          [&](const SiLorentzModel& m) { return eps_si_lorentz(xi, m); },
          [&](const SiLogBandModel& m) { return eps_si_logband(xi, m); },
      },
      model);
}

double core_permittivity(const DielectricModel& model, double xi) {
  return std::visit(
      Overloaded{
          [&](const SiLorentzModel& m) { return eps_si_lorentz(xi, m); },
          [&](const SiLogBandModel& m) { return eps_si_logband(xi, m); },
          [&](const auto& m) { return eps_oscillator(m.oscillators, xi); },
      },
      model);
}

double core_static_permittivity(const DielectricModel& model) {
  return core_permittivity(model, 0.0);
}

double AtomModel::polarizability(double xi) const {
  const double w2 = absorption_frequency * absorption_frequency;
  return static_polarizability * w2 / (w2 + xi * xi);
}

const CarrierScenario* Material::carrier_scenario() const {
  if (const auto* dc = std::get_if<DcAugmentedModel>(&model)) return &dc->carriers;
  return carriers ? &*carriers : nullptr;
}

bool Material::is_vacuum() const {
  const auto* osc = std::get_if<OscillatorModel>(&model);
  return osc != nullptr && osc->oscillators.empty() && !carriers;
}

Material vacuum() { return Material{"vacuum", OscillatorModel{}, std::nullopt}; }

}  // namespace casimir::dielectric
