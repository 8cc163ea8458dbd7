#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/numerics.hpp"
#include "casimir/reflection.hpp"

namespace casimir::engine {

using dielectric::AtomModel;
using dielectric::Material;
using reflection::ReflectionPolicy;

struct NumericsConfig {
  numerics::QuadratureSpec quadrature;
  numerics::SummationSpec summation;
  int threads = 1;
  bool keep_terms = false;

  /// Tolerances tight enough for temperature derivatives deep in the
  /// low-temperature regime, where the thermal part of F is ~1e-9 of F.
  static NumericsConfig entropy_grade();
};

/// Two parallel half-spaces at separation a (m) and temperature T (K).
struct LifshitzJob {
  double separation = 0.0;
  double temperature = 0.0;
  Material material1;
  Material material2;
  ReflectionPolicy policy = ReflectionPolicy::Standard;
  NumericsConfig numerics;

  void validate() const;
};

/// A ground-state atom at distance a (m) from one wall.
struct AtomJob {
  double separation = 0.0;
  double temperature = 0.0;
  Material wall;
  AtomModel atom;
  ReflectionPolicy policy = ReflectionPolicy::Standard;
  NumericsConfig numerics;

  void validate() const;
};

struct EnergyResult {
  double value = 0.0;           // J/m^2 for plates, J for an atom
  long truncation_index = 0;
  double quadrature_error = 0.0;  // relative
  std::vector<double> per_term;   // filled when numerics.keep_terms
};

struct ForceResult {
  double value = 0.0;
  std::vector<std::string> warnings;
};

/// Trap parameters for the condensate frequency shift; defaults are the
/// 87Rb mass and a 229 Hz axial trap.
struct TrapParameters {
  double trap_frequency = 2.0 * constants::kPi * 229.0;  // rad/s
  double atom_mass = 1.443e-25;                           // kg
};

/// hbar c / (2 a k_B)
double effective_temperature(double separation);

/// Matsubara frequency xi_l = 2 pi k_B T l / hbar.
double matsubara_frequency(double temperature, long index);

/// Free energy per unit area. T = 0 is routed to the zero-temperature
/// branch.
EnergyResult free_energy_plates(const LifshitzJob& job);
EnergyResult free_energy_plates_zero_T(const LifshitzJob& job);

EnergyResult free_energy_atom_wall(const AtomJob& job);
EnergyResult free_energy_atom_wall_zero_T(const AtomJob& job);

/// Sphere-plate force 2 pi R F(a, T) in the proximity force approximation.
ForceResult pfa_sphere_force(const LifshitzJob& job, double sphere_radius);

/// -dF/da by central differences with step a * 1e-4.
double pressure_plates(const LifshitzJob& job);

/// F_light - F_dark for a sphere above a plate; the jobs must share
/// separation and temperature.
ForceResult difference_force(const LifshitzJob& dark, const LifshitzJob& light,
                             double sphere_radius);

/// Relative shift |d_z F^A| / (2 m omega_0^2) of the centre-of-mass
/// oscillation frequency, with F^A = -d_z of the atom-wall free energy.
double frequency_shift_gamma_z(const AtomJob& job, const TrapParameters& trap = {});

}  // namespace casimir::engine
