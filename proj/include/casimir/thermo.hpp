#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "casimir/engine.hpp"

namespace casimir::thermo {

using engine::AtomJob;
using engine::LifshitzJob;

enum class Geometry { Plates, AtomWall };
enum class ModelClass { OscillatorOnly, DcAugmented, ScreenedVanishingN, ScreenedFixedN, PlasmaLike };

std::string_view to_string(ModelClass model_class);
ModelClass model_class_from_string(std::string_view name);
std::string_view to_string(Geometry geometry);

using Job = std::variant<LifshitzJob, AtomJob>;

/// Temperature step max(T * 1e-3, 1e-3 K), capped at T/4 so the stencil
/// stays at positive temperature.
double temperature_step(double temperature);

/// S = -dF/dT of the job's free energy (J K^-1 m^-2 for plates, J/K for
/// an atom). Requires T > 0.
double entropy(const LifshitzJob& job);
double entropy(const AtomJob& job);
double entropy(const Job& job);

// --- closed-form low-temperature laws -------------------------------------

/// E(a) - (hbar c / 32 pi a^3) zeta(3) r0^2 (eps0 + 1) (T/T_eff)^3.
double asymptotic_free_energy_plates(double separation, double temperature, double eps0,
                                     double zero_temperature_energy);
/// E^A(a) - (hbar c pi^3 / 240 a^4) alpha(0) C_D (T/T_eff)^4.
double asymptotic_free_energy_atom(double separation, double temperature, double alpha0,
                                   double c_d, double zero_temperature_energy);
/// (3 k_B / 16 pi a^2) zeta(3) r0^2 (eps0 + 1) (T/T_eff)^2
double asymptotic_entropy_plates(double separation, double temperature, double eps0);
/// (pi^3 k_B / 30 a^3) alpha(0) C_D (T/T_eff)^3
double asymptotic_entropy_atom(double separation, double temperature, double alpha0, double c_d);

/// (k_B / 16 pi a^2) [zeta(3) - Li3(r0^2)]
double dc_residual_entropy_plates(double separation, double eps0);
/// (k_B / 4 a^3) (1 - r0) alpha0
double dc_residual_entropy_atom(double separation, double eps0, double alpha0);
/// -T times the residual entropy; the exponentially small remainders are
/// dropped.
double dc_free_energy_correction_plates(double separation, double temperature, double eps0);
double dc_free_energy_correction_atom(double separation, double temperature, double eps0,
                                      double alpha0);

/// Integral over y in [0, inf) of y ln(1 - r0bar(y)^2 e^-y), with
/// r0bar the static screened TM coefficient at scaled kappa K = 2 a kappa.
double screened_log_integral(double eps0, double scaled_kappa);
/// Integral over y in [0, inf) of y^2 r0bar(y) e^-y.
double screened_atom_integral(double eps0, double scaled_kappa);

/// base + (k_B T / 16 pi a^2) {int y ln(1 - r0bar^2 e^-y) dy + Li3(r0^2)},
/// where base is the unscreened low-temperature free energy.
double screened_free_energy_asymptote(double separation, double temperature, double eps0,
                                      double kappa, double base_free_energy);
/// Entropy counterpart including the d(kappa^2)/dT term; base_entropy is
/// the unscreened low-temperature entropy.
double screened_entropy_asymptote(double separation, double temperature, double eps0,
                                  double kappa, double dkappa2_dT, double base_entropy);

struct ScreenedAtomAsymptotes {
  double free_energy = 0.0;
  double entropy = 0.0;
};
ScreenedAtomAsymptotes screened_atom_asymptotes(double separation, double temperature,
                                                double eps0, double alpha0, double kappa,
                                                double dkappa2_dT, double base_free_energy,
                                                double base_entropy);

// --- fits -----------------------------------------------------------------

struct LinearFit {
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  double residual_rms = 0.0;  // weighted, relative to the data
};

/// Weighted least squares of y on the given basis columns, weights 1/|y|.
LinearFit relative_least_squares(const std::vector<std::vector<double>>& columns,
                                 std::span<const double> values);

struct CdFit {
  double c_d = 0.0;
  double standard_error = 0.0;
  double max_relative_residual = 0.0;
};

/// Fits F^A(T) - E^A = -(hbar c pi^3 / 240 a^4) alpha0 C_D t^4 (1 + d t)
/// over the samples and returns C_D.
CdFit fit_C_D(double separation, double alpha0, std::span<const double> temperatures,
              std::span<const double> free_energies, double zero_temperature_energy);

/// Fit-derived C_D for an oscillator-type wall, computed once per
/// (wall, atom, a) and cached for the life of the process.
CdFit cached_C_D(const AtomJob& job);

struct AsymptoticCoefficients {
  double cubic_T_coefficient = 0.0;             // plates, J m^-2 K^-3
  double quartic_T_coefficient = 0.0;           // atom, J K^-4
  double quadratic_entropy_coefficient = 0.0;   // plates, J m^-2 K^-3
  double cubic_entropy_coefficient = 0.0;       // atom, J K^-4
  double c_d = 0.0;
};
AsymptoticCoefficients asymptotic_coefficients(double separation, double eps0, double alpha0,
                                               double c_d);

// --- audit ----------------------------------------------------------------

struct AuditOptions {
  double t_min = 1e-3;  // T / T_eff
  double t_max = 5e-2;
  int points = 12;
  double significance = 3.0;
  /// Overrides job numerics; defaults to NumericsConfig::entropy_grade().
  std::optional<engine::NumericsConfig> numerics;
  int threads = 1;
};

struct AsymptoticReport {
  static constexpr int kSchemaVersion = 1;

  ModelClass model_class = ModelClass::OscillatorOnly;
  Geometry geometry = Geometry::Plates;
  double separation = 0.0;
  double eps0 = 1.0;
  double predicted_S0 = 0.0;
  double fitted_S0 = 0.0;
  double fitted_S0_error = 0.0;
  int power = 2;
  double fitted_coefficient = 0.0;  // of T^power
  double fitted_coefficient_error = 0.0;
  std::optional<double> predicted_coefficient;
  std::pair<double, double> fit_window{0.0, 0.0};  // K
  bool satisfied = true;
  double residual_entropy = 0.0;  // fitted S0 when violated
  std::optional<double> relative_discrepancy;
  std::vector<std::pair<double, double>> samples;  // (T, S)

  std::string verdict_name() const { return satisfied ? "satisfied" : "violated"; }
  std::string to_json() const;
};

/// Entropy on a log grid of T/T_eff, fit S0 + c T^p + d T^(p+1) with p = 2
/// (plates) or 3 (atom), and classify |S0| against its standard error.
/// The predicted S0 follows from the model class.
AsymptoticReport nernst_audit(const LifshitzJob& base, ModelClass model_class,
                              const AuditOptions& options = {});
AsymptoticReport nernst_audit(const AtomJob& base, ModelClass model_class,
                              const AuditOptions& options = {});

}  // namespace casimir::thermo
