#pragma once

#include <string_view>
#include <variant>

#include "casimir/dielectric.hpp"

namespace casimir::reflection {

struct ReflectionPair {
  double tm = 0.0;
  double te = 0.0;
};

// ---------------------------------------------------------------------------
// Dimensional forms, xi in rad/s and wave numbers in m^-1.

/// Fresnel coefficients at imaginary frequency for a half-space of
/// permittivity eps = eps(i xi).
ReflectionPair fresnel(double eps, double xi, double k_perp);

/// Screened TM coefficient. core_eps is the bound-electron eps(i xi),
/// excess the free-carrier addition (eps_tilde - eps), eps0 the static core
/// permittivity and kappa the inverse screening length.
double screened_tm(double core_eps, double excess, double eps0, double kappa, double xi,
                   double k_perp);

/// Zero-frequency screened TM coefficient
/// [eps0 sqrt(k^2 + kappa^2) - k] / [eps0 sqrt(k^2 + kappa^2) + k].
double screened_tm_static(double eps0, double kappa, double k_perp);

/// Uniaxial-crystal pair, with k_z and k_x built from eps_z and eps_x.
ReflectionPair uniaxial(double eps_x, double eps_z, double xi, double k_perp);

/// Screened zero-frequency TM coefficient in the dimensionless variable
/// y = 2 a q (q = k_perp at xi = 0).
double r0_bar(double eps0, double separation, double kappa, double y);

/// Static TM reflection (eps0 - 1)/(eps0 + 1).
double r0(double eps0);

/// First-order expansion of the Fresnel pair in the dc parameter
/// beta = 4 pi sigma / xi, i.e. eps -> eps + beta, in the dimensionless
/// variables zeta = 2 a xi / c and y = 2 a q (y >= zeta).
struct BetaExpansion {
  double tm0 = 0.0;
  double tm_slope = 0.0;
  double te0 = 0.0;
  double te_slope = 0.0;
};
BetaExpansion beta_expansion(double eps, double zeta, double y);

// ---------------------------------------------------------------------------
// Dimensionless forms used by the engine: zeta = 2 a xi / c, y = 2 a q.

ReflectionPair fresnel_dimensionless(double eps, double zeta, double y);

enum class ReflectionPolicy { Standard, DcConductivity, Screened, StaticScreened, Plasma, IdealMetal };

std::string_view to_string(ReflectionPolicy policy);
ReflectionPolicy policy_from_string(std::string_view name);

/// Zero-frequency (l = 0) limits, one per coefficient family.
struct DielectricFinite {
  double r0 = 0.0;
};
struct DrudeRule {
  double r0 = 0.0;
  bool conducting = false;
};
struct PlasmaRule {
  double omega = 0.0;  // 2 a omega_p / c
};
struct ScreenedStatic {
  double eps0 = 1.0;
  double kappa = 0.0;  // 2 a kappa
};
struct IdealMetalRule {};

using ZeroFrequencyRule =
    std::variant<DielectricFinite, DrudeRule, PlasmaRule, ScreenedStatic, IdealMetalRule>;

ReflectionPair evaluate(const ZeroFrequencyRule& rule, double y);
std::string_view rule_name(const ZeroFrequencyRule& rule);

/// Reflection pair at one nonzero Matsubara frequency; permittivities are
/// resolved once so that the y-integrand only does algebra.
class FrequencySample {
 public:
  enum class Kind { Fresnel, Screened, IdealMetal };

  static FrequencySample fresnel(double zeta, double eps);
  static FrequencySample screened(double zeta, double core_eps, double excess, double eps0,
                                  double kappa_scaled);
  static FrequencySample ideal_metal(double zeta);

  ReflectionPair operator()(double y) const;
  double zeta() const { return zeta_; }
  double eps() const { return eps_; }

 private:
  Kind kind_ = Kind::Fresnel;
  double zeta_ = 0.0;
  double eps_ = 1.0;       // eps_tilde for the screened kind
  double core_eps_ = 1.0;
  double excess_ = 0.0;
  double eps0_ = 1.0;
  double kappa_ = 0.0;     // 2 a kappa, may be +inf
};

/// One material half-space bound to a reflection policy at fixed (T, a).
class SurfaceResponse {
 public:
  SurfaceResponse(const dielectric::Material& material, ReflectionPolicy policy,
                  double temperature, double separation);

  const ZeroFrequencyRule& zero_frequency_rule() const { return zero_rule_; }
  /// Sample at zeta = 2 a xi / c > 0.
  FrequencySample at(double zeta) const;

  double static_core_eps() const { return eps0_; }
  /// 2 a kappa, or 0 when the policy does not screen.
  double scaled_kappa() const { return kappa_scaled_; }

 private:
  enum class Mode { Model, Core, CoreWithDc, Screened, Plasma, IdealMetal };

  const dielectric::Material* material_;
  Mode mode_ = Mode::Model;
  double temperature_;
  double separation_;
  double eps0_ = 1.0;
  double kappa_scaled_ = 0.0;
  double plasma_frequency_sq_ = 0.0;
  ZeroFrequencyRule zero_rule_;
};

}  // namespace casimir::reflection
