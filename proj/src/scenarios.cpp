#include "casimir/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "casimir/constants.hpp"

namespace casimir::scenarios {

namespace c = constants;
namespace d = dielectric;
using engine::LifshitzJob;
using reflection::ReflectionPolicy;

namespace {

void check_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument(std::string(what) + " must be > 0");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(what) + " grid must be strictly increasing");
    }
  }
}

// Rows are independent; they may run on several threads and are stored in
// grid order.
template <class Row>
std::vector<SweepRow> run_rows(const std::vector<double>& grid, int threads, Row row) {
  std::vector<SweepRow> rows(grid.size());
  auto one = [&](std::size_t i) {
    try {
      rows[i] = row(grid[i]);
    } catch (const std::exception& e) {
      rows[i].abscissa = grid[i];
      rows[i].ok = false;
      rows[i].diagnostic = e.what();
    }
    rows[i].abscissa = grid[i];
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) one(i);
    return rows;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < grid.size(); i += workers) one(i);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

// Row-level jobs run single-threaded; parallelism lives at the row level.
engine::NumericsConfig row_numerics(engine::NumericsConfig n) {
  n.threads = 1;
  return n;
}

struct Tracker {
  SweepRow& row;
  void note(const engine::EnergyResult& r) {
    row.max_truncation_index = std::max(row.max_truncation_index, r.truncation_index);
    row.max_quadrature_error = std::max(row.max_quadrature_error, r.quadrature_error);
  }
};

d::CarrierStatistics statistics_from(config::SectionReader& r, const std::string& key,
                                     d::CarrierStatistics fallback) {
  const auto text = r.text(key);
  if (!text) return fallback;
  if (*text == "maxwell-boltzmann") return d::CarrierStatistics::MaxwellBoltzmann;
  if (*text == "fermi-dirac") return d::CarrierStatistics::FermiDirac;
  r.fail(key + " must be maxwell-boltzmann or fermi-dirac");
}

double density_from(config::SectionReader& r, const std::string& stem, double fallback) {
  const auto si = r.number(stem);
  const auto cm = r.number(stem + "_cm3");
  if (si && cm) r.fail("give either '" + stem + "' or '" + stem + "_cm3'");
  if (cm) return *cm * 1e6;
  return si.value_or(fallback);
}

double mobility_from(config::SectionReader& r, const std::string& stem) {
  const auto si = r.number(stem);
  const auto cm = r.number(stem + "_cm2");
  if (si.has_value() == cm.has_value()) {
    r.fail("give exactly one of '" + stem + "' (m^2/Vs) or '" + stem + "_cm2'");
  }
  return si ? *si : *cm * 1e-4;
}

std::vector<double> grid_from(config::SectionReader& r, const std::string& key) {
  const auto text = r.required_text(key);
  try {
    return config::parse_grid(text);
  } catch (const std::invalid_argument& e) {
    r.fail(key + ": " + e.what());
  }
}

std::optional<std::filesystem::path> overlay_from(config::SectionReader& r) {
  if (!r.text("overlay")) return std::nullopt;
  return r.path("overlay");
}

d::Material load_material_at(config::SectionReader& r, const std::string& key) {
  return config::load_material(r.path(key));
}

}  // namespace

void OpticalModulationSpec::validate() const {
  check_grid(separations, "separation");
  if (!(sphere_radius > 0.0)) throw std::invalid_argument("sphere_radius must be > 0");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  if (!(effective_mass > 0.0)) throw std::invalid_argument("effective mass must be > 0");
  if (dark_density < 0.0 || light_density < 0.0) throw std::invalid_argument("densities must be >= 0");
  if (!(dark_mobility > 0.0) || !(light_mobility > 0.0)) {
    throw std::invalid_argument("mobilities must be > 0");
  }
  if (plate_core.carrier_scenario() != nullptr) {
    throw std::invalid_argument("plate core material must not carry its own carriers");
  }
}

void CondensateSpec::validate() const {
  if (surface_temperature != environment_temperature) {
    throw OutOfScopeError(
        "out of scope: T_S != T_E needs the nonequilibrium atom-wall force, which is not "
        "modelled; only equilibrium runs (T_S = T_E) are supported");
  }
  check_grid(positions, "position");
  if (!(surface_temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  if (!(trap.trap_frequency > 0.0) || !(trap.atom_mass > 0.0)) {
    throw std::invalid_argument("trap frequency and atom mass must be > 0");
  }
}

bool SweepResult::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok; });
}

std::string scenario_name(const ScenarioSpec& spec) {
  struct {
    std::string operator()(const OpticalModulationSpec&) const { return "optical-modulation"; }
    std::string operator()(const CondensateSpec&) const { return "condensate-shift"; }
    std::string operator()(const EntropyAuditSpec&) const { return "entropy-audit"; }
  } visitor;
  return std::visit(visitor, spec);
}

ScenarioSpec scenario_from_document(const config::Document& doc) {
  config::SectionReader top(doc, doc.find(""));
  const auto kind = top.required_text("scenario");
  top.finish();
  const auto numerics = config::numerics_from_document(doc, {});
  for (const auto& s : doc.sections) {
    const bool known = s.name.empty() || s.name == kind || s.name == "numerics" ||
                       (kind == "entropy-audit" && s.name.rfind("audit ", 0) == 0);
    if (!known) throw config::InputError(doc.source, s.line, "unknown section [" + s.name + "]");
  }
  const auto* section = doc.find(kind);
  if (section == nullptr && kind != "entropy-audit") {
    throw config::InputError(doc.source, 0, "missing [" + kind + "] section");
  }
  config::SectionReader r(doc, section);

  if (kind == "optical-modulation") {
    OpticalModulationSpec spec;
    spec.sphere = load_material_at(r, "sphere");
    spec.plate_core = load_material_at(r, "plate");
    spec.temperature = r.number("temperature").value_or(spec.temperature);
    spec.sphere_radius = r.required_number("sphere_radius");
    spec.dark_density = density_from(r, "dark_density", spec.dark_density);
    spec.light_density = density_from(r, "light_density", spec.light_density);
    spec.dark_mobility = mobility_from(r, "dark_mobility");
    spec.light_mobility = mobility_from(r, "light_mobility");
    spec.effective_mass = r.required_number("effective_mass_ratio") * c::kElectronMass;
    spec.dark_statistics = statistics_from(r, "dark_statistics", spec.dark_statistics);
    spec.light_statistics = statistics_from(r, "light_statistics", spec.light_statistics);
    spec.absorbed_power_label = r.text("absorbed_power_label").value_or("");
    spec.separations = grid_from(r, "separations");
    spec.overlay = overlay_from(r);
    spec.numerics = numerics;
    r.finish();
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
    return spec;
  }
  if (kind == "condensate-shift") {
    CondensateSpec spec;
    spec.wall = load_material_at(r, "wall");
    spec.atom = config::load_atom(r.path("atom"));
    spec.surface_temperature = r.number("surface_temperature").value_or(spec.surface_temperature);
    spec.environment_temperature =
        r.number("environment_temperature").value_or(spec.environment_temperature);
    spec.trap.trap_frequency = r.number("trap_frequency").value_or(spec.trap.trap_frequency);
    spec.trap.atom_mass = r.number("atom_mass").value_or(spec.trap.atom_mass);
    spec.positions = grid_from(r, "positions");
    spec.overlay = overlay_from(r);
    spec.numerics = numerics;
    r.finish();
    // T_S != T_E is reported at run time as out of scope, not as bad input.
    if (spec.surface_temperature == spec.environment_temperature) {
      try {
        spec.validate();
      } catch (const std::invalid_argument& e) {
        r.fail(e.what());
      }
    }
    return spec;
  }
  if (kind == "entropy-audit") {
    EntropyAuditSpec spec;
    spec.separation = r.number("separation").value_or(spec.separation);
    spec.options.t_min = r.number("t_min").value_or(spec.options.t_min);
    spec.options.t_max = r.number("t_max").value_or(spec.options.t_max);
    if (auto p = r.integer("points")) spec.options.points = static_cast<int>(*p);
    if (doc.find("numerics") != nullptr) spec.options.numerics = config::numerics_from_document(
        doc, engine::NumericsConfig::entropy_grade());
    spec.options.threads = numerics.threads;
    r.finish();
    for (const auto* s : doc.find_prefixed("audit ")) {
      config::SectionReader a(doc, s);
      AuditEntry entry;
      try {
        entry.model_class = thermo::model_class_from_string(s->name.substr(6));
        entry.policy = reflection::policy_from_string(a.text("policy").value_or("standard"));
      } catch (const std::invalid_argument& e) {
        a.fail(e.what());
      }
      entry.material = load_material_at(a, "material");
      const auto geometry = a.text("geometry").value_or("plates");
      if (geometry == "atom-wall") {
        entry.geometry = thermo::Geometry::AtomWall;
        entry.atom = config::load_atom(a.path("atom"));
      } else if (geometry != "plates") {
        a.fail("geometry must be plates or atom-wall");
      }
      a.finish();
      spec.entries.push_back(std::move(entry));
    }
    if (spec.entries.empty()) throw config::InputError(doc.source, 0, "no [audit <class>] sections");
    return spec;
  }
  top.fail("unknown scenario '" + kind + "'");
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  return scenario_from_document(config::load_document(path));
}

SweepResult run_optical_modulation(const OpticalModulationSpec& spec) {
  spec.validate();
  auto plate = [&](double density, double mobility, d::CarrierStatistics stats) {
    d::Material m = spec.plate_core;
    d::CarrierScenario carriers;
    carriers.density = {density, 0.0};
    carriers.mobility = {mobility, 0.0};
    carriers.statistics = stats;
    carriers.effective_mass = spec.effective_mass;
    m.carriers = carriers;
    return m;
  };
  const d::Material dark = plate(spec.dark_density, spec.dark_mobility, spec.dark_statistics);
  const d::Material light = plate(spec.light_density, spec.light_mobility, spec.light_statistics);

  SweepResult result;
  result.scenario = "optical-modulation";
  result.abscissa_name = "a_m";
  result.columns = {"dF_dc_neglected_N", "dF_dc_included_N", "dF_screened_N", "dF_zero_T_N"};
  if (spec.sphere_radius / spec.separations.front() < 100.0) {
    result.warnings.push_back("proximity force approximation used with R/a < 100");
  }
  if (!spec.absorbed_power_label.empty()) {
    result.warnings.push_back("light density labelled by absorbed power " +
                              spec.absorbed_power_label);
  }
  const auto numerics = row_numerics(spec.numerics);
  result.rows = run_rows(spec.separations, spec.numerics.threads, [&](double a) {
    SweepRow row;
    Tracker track{row};
    auto energy = [&](const d::Material& plate_material, ReflectionPolicy policy, double T) {
      LifshitzJob job;
      job.separation = a;
      job.temperature = T;
      job.material1 = spec.sphere;
      job.material2 = plate_material;
      job.policy = policy;
      job.numerics = numerics;
      const auto r = engine::free_energy_plates(job);
      track.note(r);
      return r.value;
    };
    const double pfa = 2.0 * c::kPi * spec.sphere_radius;
    const double T = spec.temperature;
    const double light_T = energy(light, ReflectionPolicy::DcConductivity, T);
    const double dark_plain = energy(dark, ReflectionPolicy::Standard, T);
    const double dark_dc = energy(dark, ReflectionPolicy::DcConductivity, T);
    const double light_scr = energy(light, ReflectionPolicy::Screened, T);
    const double dark_scr = energy(dark, ReflectionPolicy::Screened, T);
    const double light_0 = energy(light, ReflectionPolicy::DcConductivity, 0.0);
    const double dark_0 = energy(dark, ReflectionPolicy::Standard, 0.0);
    row.values = {pfa * (light_T - dark_plain), pfa * (light_T - dark_dc),
                  pfa * (light_scr - dark_scr), pfa * (light_0 - dark_0)};
    return row;
  });
  if (spec.overlay) result.overlay = config::load_overlay(*spec.overlay);
  return result;
}

SweepResult run_condensate_shift(const CondensateSpec& spec) {
  spec.validate();
  SweepResult result;
  result.scenario = "condensate-shift";
  result.abscissa_name = "z_m";
  result.columns = {"gamma_z_dc_neglected", "gamma_z_dc_included"};
  const bool has_carriers = spec.wall.carrier_scenario() != nullptr;
  if (!has_carriers) {
    result.warnings.push_back("wall has no carriers; dc-included column equals dc-neglected");
  }
  const auto numerics = row_numerics(spec.numerics);
  result.rows = run_rows(spec.positions, spec.numerics.threads, [&](double z) {
    SweepRow row;
    Tracker track{row};
    auto gamma = [&](const d::Material& wall, ReflectionPolicy policy) {
      engine::AtomJob job;
      job.separation = z;
      job.temperature = spec.surface_temperature;
      job.wall = wall;
      job.atom = spec.atom;
      job.policy = policy;
      job.numerics = numerics;
      track.note(engine::free_energy_atom_wall(job));
      return engine::frequency_shift_gamma_z(job, spec.trap);
    };
    // A DcAugmented wall carries the dc term as written; strip it for the
    // neglected column.
    d::Material core = spec.wall;
    if (const auto* dc = std::get_if<d::DcAugmentedModel>(&spec.wall.model)) {
      core.model = d::OscillatorModel{dc->oscillators};
    }
    const double g_neglected = gamma(core, ReflectionPolicy::Standard);
    const double g_included = gamma(spec.wall, ReflectionPolicy::DcConductivity);
    row.values = {g_neglected, g_included};
    return row;
  });
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    const auto& prev = result.rows[i - 1];
    const auto& cur = result.rows[i];
    if (prev.ok && cur.ok && !(cur.values[0] < prev.values[0] && cur.values[1] < prev.values[1])) {
      result.warnings.push_back("gamma_z not decreasing between rows " + std::to_string(i - 1) +
                                " and " + std::to_string(i));
    }
  }
  if (spec.overlay) result.overlay = config::load_overlay(*spec.overlay);
  return result;
}

std::vector<thermo::AsymptoticReport> run_entropy_audit(const EntropyAuditSpec& spec) {
  std::vector<thermo::AsymptoticReport> reports;
  for (const auto& entry : spec.entries) {
    if (entry.geometry == thermo::Geometry::Plates) {
      LifshitzJob job;
      job.separation = spec.separation;
      job.material1 = entry.material;
      job.material2 = entry.material;
      job.policy = entry.policy;
      reports.push_back(thermo::nernst_audit(job, entry.model_class, spec.options));
    } else {
      engine::AtomJob job;
      job.separation = spec.separation;
      job.wall = entry.material;
      job.atom = entry.atom.value();
      job.policy = entry.policy;
      reports.push_back(thermo::nernst_audit(job, entry.model_class, spec.options));
    }
  }
  return reports;
}

bool expected_satisfied(thermo::ModelClass model_class) {
  switch (model_class) {
    case thermo::ModelClass::DcAugmented:
    case thermo::ModelClass::ScreenedFixedN: return false;
    default: return true;
  }
}

}  // namespace casimir::scenarios
