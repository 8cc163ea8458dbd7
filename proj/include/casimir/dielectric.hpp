#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace casimir::dielectric {

/// One Lorentz term g / (omega^2 + xi^2 + gamma xi) of the imaginary-axis
/// permittivity. g in rad^2/s^2, frequencies in rad/s.
struct Oscillator {
  double strength = 0.0;
  double frequency = 1.0;
  double relaxation = 0.0;
};

class OscillatorSet {
 public:
  OscillatorSet() = default;
  explicit OscillatorSet(std::vector<Oscillator> entries);

  /// 1 + sum_j g_j / (omega_j^2 + xi^2 + gamma_j xi)
  double eps(double xi) const;
  /// Static value 1 + sum_j g_j / omega_j^2.
  double static_eps() const;

  const std::vector<Oscillator>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Oscillator> entries_;
};

/// n(T) = prefactor * exp(-activation / (k_B T)); activation in J.
struct ArrheniusLaw {
  double prefactor = 0.0;
  double activation = 0.0;

  double operator()(double temperature) const;
  /// d ln(value) / dT, i.e. activation / (k_B T^2).
  double log_derivative(double temperature) const;
  /// True when the law is strictly positive at every T > 0.
  bool positive() const { return prefactor > 0.0; }
  bool vanishes_at_zero() const { return activation > 0.0; }
};

enum class CarrierStatistics { MaxwellBoltzmann, FermiDirac };

/// Free charge carriers of a dielectric: density and mobility laws, SI
/// units (m^-3, m^2 V^-1 s^-1). Effective mass (kg) and plasma frequency
/// (rad/s) are optional; see plasma_frequency_squared().
struct CarrierScenario {
  ArrheniusLaw density;
  ArrheniusLaw mobility;
  CarrierStatistics statistics = CarrierStatistics::MaxwellBoltzmann;
  std::optional<double> effective_mass;
  std::optional<double> plasma_frequency;

  /// Whether sigma(T) > 0 holds analytically at this T, independent of
  /// floating-point underflow of the Arrhenius factors.
  bool conducting(double temperature) const;
  /// omega_p^2 in rad^2/s^2: the configured value if present, otherwise
  /// n(T) e^2 / (eps_vac m*). Throws if neither is available.
  double plasma_frequency_squared(double temperature) const;
};

/// Static conductivity sigma(T) = n(T) |e| mu(T), returned in Gaussian
/// angular-frequency units (s^-1), so that 4 pi sigma / xi is dimensionless.
double conductivity(const CarrierScenario& carriers, double temperature);

/// Inverse screening length in m^-1: Debye-Hueckel for Maxwell-Boltzmann,
/// Thomas-Fermi (E_F = hbar omega_p) for Fermi-Dirac. eps0 is the static
/// permittivity of the bound (core) electrons.
double screening_kappa(const CarrierScenario& carriers, double eps0, double temperature);

/// d(kappa^2)/dT in m^-2 K^-1.
double screening_kappa_squared_derivative(const CarrierScenario& carriers, double eps0,
                                          double temperature);

/// Free-carrier excess over the core permittivity used by the screened
/// reflection family: omega_p^2 / (xi (xi + gamma)) with gamma = e/(m* mu)
/// when an effective mass is known, else the dc form 4 pi sigma / xi.
double drude_excess(const CarrierScenario& carriers, double xi, double temperature);

struct OscillatorModel {
  OscillatorSet oscillators;
};
struct DcAugmentedModel {
  OscillatorSet oscillators;
  CarrierScenario carriers;
};
struct PlasmaLikeModel {
  OscillatorSet oscillators;
  double plasma_frequency = 0.0;
};
struct DrudeModel {
  OscillatorSet oscillators;
  double plasma_frequency = 0.0;
  double relaxation = 0.0;
};
/// eps_inf + (eps_0 - eps_inf) omega_0^2 / (omega_0^2 + xi^2); defaults for Si.
struct SiLorentzModel {
  double eps_inf = 1.035;
  double eps_static = 11.87;
  double omega0 = 6.6e15;
};
/// Kramers-Kronig image of a flat Im(eps) = eps_bar band on [omega_0, omega_1];
/// band edges in eV.
struct SiLogBandModel {
  double eps_bar = 48.0;
  double omega0_ev = 3.22;
  double omega1_ev = 4.62;
};

using DielectricModel = std::variant<OscillatorModel, DcAugmentedModel, PlasmaLikeModel,
                                     DrudeModel, SiLorentzModel, SiLogBandModel>;

double eps_oscillator(const OscillatorSet& set, double xi);
/// eps(i xi) + 4 pi sigma(T) / xi; requires xi > 0.
double eps_dc_augmented(const DcAugmentedModel& model, double xi, double temperature);
/// 1 + omega_p^2/xi^2 + oscillators; requires xi > 0.
double eps_plasma_like(const PlasmaLikeModel& model, double xi);
double eps_drude(const DrudeModel& model, double xi);
double eps_si_lorentz(double xi, const SiLorentzModel& model = {});
double eps_si_logband(double xi, const SiLogBandModel& model = {});

/// Full permittivity of any variant at xi > 0.
double permittivity(const DielectricModel& model, double xi, double temperature);

/// Bound-electron part only: every free-carrier term dropped.
double core_permittivity(const DielectricModel& model, double xi);
double core_static_permittivity(const DielectricModel& model);

struct AtomModel {
  double static_polarizability = 0.0;  // m^3 (polarizability volume)
  double absorption_frequency = 1.0;   // rad/s

  /// Single-oscillator alpha(i xi) = alpha_0 omega_a^2 / (omega_a^2 + xi^2).
  double polarizability(double xi) const;
};

/// A plate or wall material: a permittivity model plus, optionally, a
/// carrier description used by the conductivity-aware reflection policies.
struct Material {
  std::string name;
  DielectricModel model = OscillatorModel{};
  std::optional<CarrierScenario> carriers;

  /// Carriers attached to the model (DcAugmented) or to the material.
  const CarrierScenario* carrier_scenario() const;
  bool is_vacuum() const;
};

Material vacuum();

}  // namespace casimir::dielectric
