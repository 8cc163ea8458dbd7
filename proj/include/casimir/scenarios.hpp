#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "casimir/config.hpp"
#include "casimir/engine.hpp"
#include "casimir/thermo.hpp"

namespace casimir::scenarios {

/// A request the library deliberately does not model.
class OutOfScopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sphere above a Si plate whose carrier density is switched by light.
/// Densities in m^-3, mobilities in m^2/(V s).
struct OpticalModulationSpec {
  dielectric::Material sphere;
  dielectric::Material plate_core;  // bound-electron model only
  double temperature = 300.0;
  double sphere_radius = 0.0;
  double dark_density = 5e20;   // 5e14 cm^-3
  double light_density = 2.1e25;  // 2.1e19 cm^-3
  double dark_mobility = 0.0;
  double light_mobility = 0.0;
  double effective_mass = 0.0;  // kg, required
  dielectric::CarrierStatistics dark_statistics = dielectric::CarrierStatistics::MaxwellBoltzmann;
  dielectric::CarrierStatistics light_statistics = dielectric::CarrierStatistics::FermiDirac;
  std::string absorbed_power_label;
  std::vector<double> separations;
  engine::NumericsConfig numerics;
  std::optional<std::filesystem::path> overlay;

  void validate() const;
};

/// Point atom above a wall in thermal equilibrium (T_S = T_E).
struct CondensateSpec {
  dielectric::Material wall;  // carriers give the dc-included column
  dielectric::AtomModel atom;
  double surface_temperature = 310.0;
  double environment_temperature = 310.0;
  engine::TrapParameters trap;
  std::vector<double> positions;
  engine::NumericsConfig numerics;
  std::optional<std::filesystem::path> overlay;

  void validate() const;
};

struct AuditEntry {
  thermo::ModelClass model_class = thermo::ModelClass::OscillatorOnly;
  thermo::Geometry geometry = thermo::Geometry::Plates;
  dielectric::Material material;
  reflection::ReflectionPolicy policy = reflection::ReflectionPolicy::Standard;
  std::optional<dielectric::AtomModel> atom;
};

struct EntropyAuditSpec {
  double separation = 1e-6;
  std::vector<AuditEntry> entries;
  thermo::AuditOptions options;
};

using ScenarioSpec = std::variant<OpticalModulationSpec, CondensateSpec, EntropyAuditSpec>;

std::string scenario_name(const ScenarioSpec& spec);
ScenarioSpec scenario_from_document(const config::Document& doc);
ScenarioSpec load_scenario(const std::filesystem::path& path);

struct SweepRow {
  double abscissa = 0.0;
  std::vector<double> values;
  long max_truncation_index = 0;
  double max_quadrature_error = 0.0;
  bool ok = true;
  std::string diagnostic;
};

struct SweepResult {
  std::string scenario;
  std::string abscissa_name;
  std::vector<std::string> columns;
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
  std::vector<std::pair<double, double>> overlay;  // user data, never bundled

  bool all_ok() const;
};

/// Columns: dF_dc_neglected, dF_dc_included, dF_screened, dF_zero_T (N),
/// each F_light - F_dark in the proximity force approximation.
SweepResult run_optical_modulation(const OpticalModulationSpec& spec);

/// Columns: gamma_z_dc_neglected, gamma_z_dc_included. Throws
/// OutOfScopeError unless T_S = T_E.
SweepResult run_condensate_shift(const CondensateSpec& spec);

std::vector<thermo::AsymptoticReport> run_entropy_audit(const EntropyAuditSpec& spec);

/// True when the class is expected to obey the Nernst theorem.
bool expected_satisfied(thermo::ModelClass model_class);

}  // namespace casimir::scenarios
