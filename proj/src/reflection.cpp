#include "casimir/reflection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "casimir/constants.hpp"

namespace casimir::reflection {

namespace c = constants;
using dielectric::Material;

namespace {

// Square roots of quantities that are non-negative up to rounding.
double safe_sqrt(double x) { return std::sqrt(std::max(x, 0.0)); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double r0(double eps0) { return (eps0 - 1.0) / (eps0 + 1.0); }

ReflectionPair fresnel_dimensionless(double eps, double zeta, double y) {
  // Rewritten so that eps -> 1 loses no digits:
  // eps y - s = (eps - 1)((eps + 1) y^2 - zeta^2) / (eps y + s), y - s = -(eps - 1) zeta^2 / (y + s).
  const double de = eps - 1.0;
  const double s = safe_sqrt(y * y + de * zeta * zeta);
  const double dtm = eps * y + s;
  const double dte = y + s;
  if (dtm == 0.0) return {0.0, 0.0};
  return {de * ((eps + 1.0) * y * y - zeta * zeta) / (dtm * dtm), -de * zeta * zeta / (dte * dte)};
}

ReflectionPair fresnel(double eps, double xi, double k_perp) {
  if (!(xi > 0.0)) throw std::domain_error("fresnel: xi must be > 0");
  const double w = xi / c::kSpeedOfLight;
  const double q = std::sqrt(k_perp * k_perp + w * w);
  const double k = safe_sqrt(k_perp * k_perp + eps * w * w);
  return {(eps * q - k) / (eps * q + k), (q - k) / (q + k)};
}

double screened_tm(double core_eps, double excess, double eps0, double kappa, double xi,
                   double k_perp) {
  if (!(xi > 0.0)) throw std::domain_error("screened_tm: xi must be > 0");
  const double eps_t = core_eps + excess;
  const double w = xi / c::kSpeedOfLight;
  const double q = std::sqrt(k_perp * k_perp + w * w);
  const double k = safe_sqrt(k_perp * k_perp + eps_t * w * w);
  double correction = 0.0;
  if (excess > 0.0 && k_perp > 0.0 && std::isfinite(kappa)) {
    const double eta = std::sqrt(k_perp * k_perp + kappa * kappa * (eps0 / core_eps) * (eps_t / excess));
    correction = k_perp * k_perp / eta * excess / core_eps;
  }
  return (eps_t * q - k - correction) / (eps_t * q + k + correction);
}

double screened_tm_static(double eps0, double kappa, double k_perp) {
  const double root = eps0 * std::sqrt(k_perp * k_perp + kappa * kappa);
  return (root - k_perp) / (root + k_perp);
}

ReflectionPair uniaxial(double eps_x, double eps_z, double xi, double k_perp) {
  if (xi < 0.0) throw std::domain_error("uniaxial: xi must be >= 0");
  const double w = xi / c::kSpeedOfLight;
  const double q = std::sqrt(k_perp * k_perp + w * w);
  const double kz = safe_sqrt(k_perp * k_perp + eps_z * w * w);
  const double kx = safe_sqrt(k_perp * k_perp + eps_x * w * w);
  const double root = std::sqrt(eps_x * eps_z);
  ReflectionPair r;
  r.tm = std::isinf(root) ? 1.0 : (root * q - kz) / (root * q + kz);
  r.te = (q - kx) / (q + kx);
  return r;
}

double r0_bar(double eps0, double separation, double kappa, double y) {
  const double scaled = 2.0 * separation * kappa;
  if (std::isinf(scaled)) return 1.0;
  const double root = eps0 * std::sqrt(y * y + scaled * scaled);
  return (root - y) / (root + y);
}

BetaExpansion beta_expansion(double eps, double zeta, double y) {
  const double s = safe_sqrt(y * y + (eps - 1.0) * zeta * zeta);
  const auto base = fresnel_dimensionless(eps, zeta, y);
  BetaExpansion out;
  out.tm0 = base.tm;
  out.te0 = base.te;
  const double dtm = eps * y + s;
  const double dte = y + s;
  out.tm_slope = y * (2.0 * y * y + (eps - 2.0) * zeta * zeta) / (s * dtm * dtm);
  out.te_slope = -y * zeta * zeta / (s * dte * dte);
  return out;
}

std::string_view to_string(ReflectionPolicy policy) {
  switch (policy) {
    case ReflectionPolicy::Standard: return "standard";
    case ReflectionPolicy::DcConductivity: return "dc";
    case ReflectionPolicy::Screened: return "screened";
    case ReflectionPolicy::StaticScreened: return "static-screened";
    case ReflectionPolicy::Plasma: return "plasma";
    case ReflectionPolicy::IdealMetal: return "ideal-metal";
  }
  return "standard";
}

ReflectionPolicy policy_from_string(std::string_view name) {
  for (auto p : {ReflectionPolicy::Standard, ReflectionPolicy::DcConductivity,
                 ReflectionPolicy::Screened, ReflectionPolicy::StaticScreened,
                 ReflectionPolicy::Plasma, ReflectionPolicy::IdealMetal}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown reflection policy '" + std::string(name) + "'");
}

ReflectionPair evaluate(const ZeroFrequencyRule& rule, double y) {
  return std::visit(
      Overloaded{
          [](const DielectricFinite& r) { return ReflectionPair{r.r0, 0.0}; },
          [](const DrudeRule& r) { return ReflectionPair{r.conducting ? 1.0 : r.r0, 0.0}; },
          [y](const PlasmaRule& r) {
            const double s = std::sqrt(y * y + r.omega * r.omega);
            return ReflectionPair{1.0, -r.omega * r.omega / ((y + s) * (y + s))};
          },
          [y](const ScreenedStatic& r) {
            if (std::isinf(r.kappa)) return ReflectionPair{1.0, 0.0};
            const double root = r.eps0 * std::sqrt(y * y + r.kappa * r.kappa);
            return ReflectionPair{(root - y) / (root + y), 0.0};
          },
          [](const IdealMetalRule&) { return ReflectionPair{1.0, -1.0}; },
      },
      rule);
}

std::string_view rule_name(const ZeroFrequencyRule& rule) {
  return std::visit(Overloaded{
                        [](const DielectricFinite&) { return std::string_view{"dielectric-finite"}; },
                        [](const DrudeRule&) { return std::string_view{"drude"}; },
                        [](const PlasmaRule&) { return std::string_view{"plasma"}; },
                        [](const ScreenedStatic&) { return std::string_view{"screened-static"}; },
                        [](const IdealMetalRule&) { return std::string_view{"ideal-metal"}; },
                    },
                    rule);
}

FrequencySample FrequencySample::fresnel(double zeta, double eps) {
  FrequencySample s;
  s.kind_ = Kind::Fresnel;
  s.zeta_ = zeta;
  s.eps_ = eps;
  return s;
}

FrequencySample FrequencySample::screened(double zeta, double core_eps, double excess, double eps0,
                                          double kappa_scaled) {
  if (!(excess > 0.0)) return fresnel(zeta, core_eps);
  FrequencySample s;
  s.kind_ = Kind::Screened;
  s.zeta_ = zeta;
  s.eps_ = core_eps + excess;
  s.core_eps_ = core_eps;
  s.excess_ = excess;
  s.eps0_ = eps0;
  s.kappa_ = kappa_scaled;
  return s;
}

FrequencySample FrequencySample::ideal_metal(double zeta) {
  FrequencySample s;
  s.kind_ = Kind::IdealMetal;
  s.zeta_ = zeta;
  return s;
}

ReflectionPair FrequencySample::operator()(double y) const {
  switch (kind_) {
    case Kind::IdealMetal: return {1.0, -1.0};
    case Kind::Fresnel: return fresnel_dimensionless(eps_, zeta_, y);
    case Kind::Screened: {
      auto pair = fresnel_dimensionless(eps_, zeta_, y);
      const double kperp2 = std::max(y * y - zeta_ * zeta_, 0.0);
      if (kperp2 == 0.0 || std::isinf(kappa_)) return pair;
      const double eta = std::sqrt(kperp2 + kappa_ * kappa_ * (eps0_ / core_eps_) * (eps_ / excess_));
      const double correction = kperp2 / eta * excess_ / core_eps_;
      const double s = safe_sqrt(y * y + (eps_ - 1.0) * zeta_ * zeta_);
      pair.tm = (eps_ * y - s - correction) / (eps_ * y + s + correction);
      return pair;
    }
  }
  return {};
}

SurfaceResponse::SurfaceResponse(const Material& material, ReflectionPolicy policy,
                                 double temperature, double separation)
    : material_(&material), temperature_(temperature), separation_(separation) {
  using namespace dielectric;
  eps0_ = core_static_permittivity(material.model);
  const double r_static = r0(eps0_);
  const CarrierScenario* carriers = material.carrier_scenario();
  const bool plasma_model = std::holds_alternative<PlasmaLikeModel>(material.model);
  const bool drude_model = std::holds_alternative<DrudeModel>(material.model);

  auto model_rule = [&]() -> ZeroFrequencyRule {
    if (const auto* p = std::get_if<PlasmaLikeModel>(&material.model)) {
      return PlasmaRule{2.0 * separation * p->plasma_frequency / c::kSpeedOfLight};
    }
    if (const auto* d = std::get_if<DrudeModel>(&material.model)) {
      return DrudeRule{r_static, d->plasma_frequency > 0.0};
    }
    if (const auto* dc = std::get_if<DcAugmentedModel>(&material.model)) {
      return DrudeRule{r_static, dc->carriers.conducting(temperature)};
    }
    return DielectricFinite{r_static};
  };

  auto screening = [&]() {
    if (carriers == nullptr) return 0.0;
    if (carriers->statistics == CarrierStatistics::MaxwellBoltzmann && temperature <= 0.0) {
      return carriers->density(0.0) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return 2.0 * separation * screening_kappa(*carriers, eps0_, temperature);
  };

  switch (policy) {
    case ReflectionPolicy::IdealMetal:
      mode_ = Mode::IdealMetal;
      zero_rule_ = IdealMetalRule{};
      break;
    case ReflectionPolicy::Standard:
      mode_ = Mode::Model;
      zero_rule_ = model_rule();
      break;
    case ReflectionPolicy::DcConductivity:
      if (carriers == nullptr) {
        mode_ = Mode::Model;
        zero_rule_ = model_rule();
      } else {
        mode_ = Mode::CoreWithDc;
        if (plasma_model) {
          zero_rule_ = model_rule();
        } else {
          zero_rule_ = DrudeRule{r_static, carriers->conducting(temperature) || drude_model};
        }
      }
      break;
    case ReflectionPolicy::Screened:
      if (carriers == nullptr) {
        mode_ = Mode::Model;
        zero_rule_ = model_rule();
      } else {
        mode_ = Mode::Screened;
        kappa_scaled_ = screening();
        zero_rule_ = ScreenedStatic{eps0_, kappa_scaled_};
      }
      break;
    case ReflectionPolicy::StaticScreened:
      mode_ = Mode::Core;
      if (carriers != nullptr) {
        kappa_scaled_ = screening();
        zero_rule_ = ScreenedStatic{eps0_, kappa_scaled_};
      } else {
        zero_rule_ = DielectricFinite{r_static};
      }
      break;
    case ReflectionPolicy::Plasma: {
      mode_ = Mode::Plasma;
      if (const auto* p = std::get_if<PlasmaLikeModel>(&material.model)) {
        plasma_frequency_sq_ = p->plasma_frequency * p->plasma_frequency;
      } else if (const auto* d = std::get_if<DrudeModel>(&material.model)) {
        plasma_frequency_sq_ = d->plasma_frequency * d->plasma_frequency;
      } else if (carriers != nullptr) {
        plasma_frequency_sq_ = carriers->plasma_frequency_squared(temperature);
      }
      if (plasma_frequency_sq_ > 0.0) {
        zero_rule_ = PlasmaRule{2.0 * separation * std::sqrt(plasma_frequency_sq_) / c::kSpeedOfLight};
      } else {
        zero_rule_ = DielectricFinite{r_static};
      }
      break;
    }
  }
}

FrequencySample SurfaceResponse::at(double zeta) const {
  using namespace dielectric;
  const double xi = zeta * c::kSpeedOfLight / (2.0 * separation_);
  const auto& model = material_->model;
  switch (mode_) {
    case Mode::IdealMetal: return FrequencySample::ideal_metal(zeta);
    case Mode::Model: return FrequencySample::fresnel(zeta, permittivity(model, xi, temperature_));
    case Mode::Core: return FrequencySample::fresnel(zeta, core_permittivity(model, xi));
    case Mode::CoreWithDc: {
      // Model as written (keeps any plasma or Drude term) with the carrier
      // term swapped in for the one a DcAugmented model already carries.
      // With an effective mass the carriers enter in Drude form.
      double eps = std::holds_alternative<DcAugmentedModel>(model)
                       ? core_permittivity(model, xi)
                       : permittivity(model, xi, temperature_);
      eps += drude_excess(*material_->carrier_scenario(), xi, temperature_);
      return FrequencySample::fresnel(zeta, eps);
    }
    case Mode::Screened: {
      const double core = core_permittivity(model, xi);
      const double excess = drude_excess(*material_->carrier_scenario(), xi, temperature_);
      return FrequencySample::screened(zeta, core, excess, eps0_, kappa_scaled_);
    }
    case Mode::Plasma:
      return FrequencySample::fresnel(zeta, core_permittivity(model, xi) + plasma_frequency_sq_ / (xi * xi));
  }
  return FrequencySample::fresnel(zeta, 1.0);
}

}  // namespace casimir::reflection
