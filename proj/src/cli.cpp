#include "casimir/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/config.hpp"
#include "casimir/engine.hpp"
#include "casimir/scenarios.hpp"
#include "casimir/thermo.hpp"

namespace casimir::cli {

namespace {

using json = nlohmann::ordered_json;
namespace d = dielectric;

class ExpectationMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string material;
  std::string material2;
  std::string atom;
  double a = 1e-6;
  double T = 300.0;
  std::optional<double> R;
  std::string policy = "standard";
  std::string sweep;
  std::string sweep_var = "a";
  std::string out;
  std::string format = "csv";
  bool deterministic = false;
  int threads = 1;
  std::string expect;
  std::string model_class;
  double t_min = 1e-3;
  double t_max = 5e-2;
  int points = 12;
  std::optional<double> rel_tol;
  std::optional<double> term_cutoff;
  std::optional<long> max_index;
  bool entropy_grade = false;
  std::string scenario_file;
};

std::string format_value(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.11e", v);
  return buffer;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config::InputError(path, 0, "cannot open file");
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string sha256_prefix(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < 8 && i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

/// Canonical text of everything that determines the output.
class ConfigFingerprint {
 public:
  void add(const std::string& key, const std::string& value) { entries_[key] = value; }
  void add_file(const std::string& key, const std::string& path) {
    if (!path.empty()) entries_["file:" + key] = read_file(path);
  }
  std::string hash() const {
    std::string canonical;
    for (const auto& [k, v] : entries_) canonical += k + "=" + v + "\n";
    return sha256_prefix(canonical);
  }

 private:
  std::map<std::string, std::string> entries_;
};

std::string tolerance_text(const engine::NumericsConfig& n) {
  std::ostringstream s;
  s << "relative=" << format_value(n.quadrature.relative_tolerance)
    << " floor=" << format_value(n.quadrature.absolute_floor)
    << " cutoff=" << format_value(n.summation.term_cutoff_ratio)
    << " max_index=" << n.summation.max_matsubara_index;
  return s.str();
}

struct Header {
  std::string command;
  std::string hash;
  std::string tolerances;

  std::string comment() const {
    return "# casimir " + std::string(kVersion) + "\n# command: " + command +
           "\n# config-hash: " + hash + "\n# tolerances: " + tolerances + "\n";
  }
  json to_json() const {
    json j;
    j["tool"] = "casimir";
    j["version"] = std::string(kVersion);
    j["command"] = command;
    j["config_hash"] = hash;
    j["tolerances"] = tolerances;
    return j;
  }
};

/// A table with typed cells: numbers print in %.11e, text as is.
struct Table {
  using Cell = std::variant<double, long, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string csv(const Header& h) const {
    std::string s = h.comment();
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    s += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) s += ",";
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) s += format_value(v);
              else if constexpr (std::is_same_v<T, long>) s += std::to_string(v);
              else s += v;
            },
            row[i]);
      }
      s += "\n";
    }
    return s;
  }

  json to_json() const {
    json rows_json = json::array();
    for (const auto& row : rows) {
      json r = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::visit([&](const auto& v) { r[columns[i]] = v; }, row[i]);
      }
      rows_json.push_back(r);
    }
    return rows_json;
  }

  std::string render(const Header& h, const std::string& format) const {
    if (format == "csv") return csv(h);
    json j;
    j["header"] = h.to_json();
    j["rows"] = to_json();
    return j.dump(2) + "\n";
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw config::InputError(path, 0, "cannot write output file");
  file << text;
}

engine::NumericsConfig numerics_from(const Options& o, engine::NumericsConfig base) {
  if (o.entropy_grade) base = engine::NumericsConfig::entropy_grade();
  if (o.rel_tol) base.quadrature.relative_tolerance = *o.rel_tol;
  if (o.term_cutoff) base.summation.term_cutoff_ratio = *o.term_cutoff;
  if (o.max_index) base.summation.max_matsubara_index = *o.max_index;
  base.threads = std::max(1, o.threads);
  base.quadrature.validate();
  base.summation.validate();
  return base;
}

void fingerprint_numerics(ConfigFingerprint& fp, const engine::NumericsConfig& n) {
  fp.add("tolerances", tolerance_text(n));
}

// ---------------------------------------------------------------------------

int cmd_eps(const Options& o, std::ostream& out) {
  if (o.material.empty()) throw std::invalid_argument("eps needs --material");
  const auto material = config::load_material(o.material);
  const auto grid = config::parse_grid(o.sweep.empty() ? "1e13:1e17:9:log" : o.sweep);
  Table table;
  table.columns = {"xi_rad_s", "eps"};
  for (double xi : grid) {
    if (xi < 0.0) throw std::invalid_argument("xi must be >= 0");
    double eps;
    if (xi == 0.0) {
      // Only bound-charge models have a finite static value.
      const bool finite = std::holds_alternative<d::OscillatorModel>(material.model) ||
                          std::holds_alternative<d::SiLorentzModel>(material.model) ||
                          std::holds_alternative<d::SiLogBandModel>(material.model);
      if (!finite) throw std::invalid_argument("model diverges at xi = 0");
      eps = d::core_static_permittivity(material.model);
    } else {
      eps = d::permittivity(material.model, xi, o.T);
    }
    table.rows.push_back({xi, eps});
  }
  ConfigFingerprint fp;
  fp.add("command", "eps");
  fp.add("sweep", o.sweep);
  fp.add("T", format_value(o.T));
  fp.add_file("material", o.material);
  const Header header{"eps", fp.hash(), "n/a"};
  emit(table.render(header, o.format), o.out, out);
  return kOk;
}

int cmd_free_energy(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.material.empty()) throw std::invalid_argument("free-energy needs --material");
  const auto numerics = numerics_from(o, {});
  const auto policy = reflection::policy_from_string(o.policy);
  const auto m1 = config::load_material(o.material);
  const auto m2 = o.material2.empty() ? m1 : config::load_material(o.material2);
  std::optional<d::AtomModel> atom;
  if (!o.atom.empty()) atom = config::load_atom(o.atom);
  if (o.sweep_var != "a" && o.sweep_var != "T") throw std::invalid_argument("--sweep-var must be a or T");
  if (atom && o.R) throw std::invalid_argument("--R applies to plate geometry only");

  std::vector<double> grid;
  if (o.sweep.empty()) {
    grid = {o.sweep_var == "a" ? o.a : o.T};
  } else {
    grid = config::parse_grid(o.sweep);
  }

  Table table;
  table.columns = {o.sweep_var == "a" ? "a_m" : "T_K", atom ? "free_energy_J" : "free_energy_J_m2"};
  if (o.R) table.columns.push_back("force_N");
  table.columns.insert(table.columns.end(), {"truncation_index", "quadrature_error", "status"});

  bool failed = false;
  for (double x : grid) {
    const double a = o.sweep_var == "a" ? x : o.a;
    const double T = o.sweep_var == "T" ? x : o.T;
    engine::EnergyResult r;
    std::string status = "ok";
    try {
      if (atom) {
        engine::AtomJob job{a, T, m1, *atom, policy, numerics};
        r = engine::free_energy_atom_wall(job);
      } else {
        engine::LifshitzJob job{a, T, m1, m2, policy, numerics};
        r = engine::free_energy_plates(job);
      }
    } catch (const numerics::ConvergenceError& e) {
      r.value = e.best_estimate();
      status = "partial";
      failed = true;
      err << "row " << x << ": " << e.what() << "\n";
    }
    std::vector<Table::Cell> row{x, r.value};
    if (o.R) {
      if (*o.R / a < 100.0) err << "warning: proximity force approximation used with R/a < 100\n";
      row.push_back(2.0 * constants::kPi * *o.R * r.value);
    }
    row.insert(row.end(), {r.truncation_index, r.quadrature_error, status});
    table.rows.push_back(std::move(row));
  }

  ConfigFingerprint fp;
  fp.add("command", "free-energy");
  fp.add("a", format_value(o.a));
  fp.add("T", format_value(o.T));
  fp.add("R", o.R ? format_value(*o.R) : "");
  fp.add("policy", o.policy);
  fp.add("sweep", o.sweep);
  fp.add("sweep_var", o.sweep_var);
  fp.add_file("material", o.material);
  fp.add_file("material2", o.material2);
  fp.add_file("atom", o.atom);
  fingerprint_numerics(fp, numerics);
  emit(table.render({"free-energy", fp.hash(), tolerance_text(numerics)}, o.format), o.out, out);
  return failed ? kNumericalFailure : kOk;
}

int cmd_audit(const Options& o, std::ostream& out) {
  if (o.material.empty()) throw std::invalid_argument("audit needs --material");
  if (o.model_class.empty()) throw std::invalid_argument("audit needs --class");
  const auto model_class = thermo::model_class_from_string(o.model_class);
  const auto policy = reflection::policy_from_string(o.policy);
  const auto material = config::load_material(o.material);
  if (!o.expect.empty() && o.expect != "satisfied" && o.expect != "violated") {
    throw std::invalid_argument("--expect must be satisfied or violated");
  }
  thermo::AuditOptions options;
  options.t_min = o.t_min;
  options.t_max = o.t_max;
  options.points = o.points;
  options.threads = std::max(1, o.threads);
  options.numerics = numerics_from(o, engine::NumericsConfig::entropy_grade());
  options.numerics->threads = 1;

  thermo::AsymptoticReport report;
  if (!o.atom.empty()) {
    engine::AtomJob job;
    job.separation = o.a;
    job.wall = material;
    job.atom = config::load_atom(o.atom);
    job.policy = policy;
    report = thermo::nernst_audit(job, model_class, options);
  } else {
    engine::LifshitzJob job;
    job.separation = o.a;
    job.material1 = material;
    job.material2 = o.material2.empty() ? material : config::load_material(o.material2);
    job.policy = policy;
    report = thermo::nernst_audit(job, model_class, options);
  }

  ConfigFingerprint fp;
  fp.add("command", "audit");
  fp.add("a", format_value(o.a));
  fp.add("class", o.model_class);
  fp.add("policy", o.policy);
  fp.add("window", format_value(o.t_min) + ":" + format_value(o.t_max) + ":" + std::to_string(o.points));
  fp.add_file("material", o.material);
  fp.add_file("material2", o.material2);
  fp.add_file("atom", o.atom);
  fingerprint_numerics(fp, *options.numerics);
  const Header header{"audit", fp.hash(), tolerance_text(*options.numerics)};

  std::string text;
  if (o.format == "csv") {
    Table table;
    table.columns = {"T_K", "entropy"};
    for (const auto& [T, S] : report.samples) table.rows.push_back({T, S});
    text = table.csv(header);
    text += "# verdict: " + report.verdict_name() + " fitted_S0=" + format_value(report.fitted_S0) +
            " predicted_S0=" + format_value(report.predicted_S0) + "\n";
  } else {
    json j;
    j["header"] = header.to_json();
    const auto body = json::parse(report.to_json());
    for (const auto& [k, v] : body.items()) j[k] = v;
    text = j.dump(2) + "\n";
  }
  emit(text, o.out, out);
  if (!o.expect.empty() && o.expect != report.verdict_name()) {
    throw ExpectationMismatch("expected " + o.expect + ", audit found " + report.verdict_name());
  }
  return kOk;
}

Table sweep_table(const scenarios::SweepResult& r) {
  Table t;
  t.columns.push_back(r.abscissa_name);
  t.columns.insert(t.columns.end(), r.columns.begin(), r.columns.end());
  t.columns.insert(t.columns.end(), {"truncation_index", "quadrature_error", "status"});
  for (const auto& row : r.rows) {
    std::vector<Table::Cell> cells{row.abscissa};
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
      cells.emplace_back(row.ok ? row.values[i] : std::nan(""));
    }
    cells.emplace_back(row.max_truncation_index);
    cells.emplace_back(row.max_quadrature_error);
    cells.emplace_back(row.ok ? std::string("ok") : std::string("failed"));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

int cmd_scenario(const Options& o, std::ostream& out, std::ostream& err) {
  const auto doc = config::load_document(o.scenario_file);
  auto spec = scenarios::scenario_from_document(doc);
  const auto started = std::chrono::steady_clock::now();

  // Flags override file values.
  engine::NumericsConfig used;
  std::visit(
      [&](auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, scenarios::EntropyAuditSpec>) {
          auto n = numerics_from(o, s.options.numerics.value_or(engine::NumericsConfig::entropy_grade()));
          n.threads = 1;
          s.options.numerics = n;
          if (o.threads > 1) s.options.threads = o.threads;
          used = n;
        } else {
          auto n = s.numerics;
          if (o.rel_tol) n.quadrature.relative_tolerance = *o.rel_tol;
          if (o.term_cutoff) n.summation.term_cutoff_ratio = *o.term_cutoff;
          if (o.max_index) n.summation.max_matsubara_index = *o.max_index;
          if (o.threads > 1) n.threads = o.threads;
          n.quadrature.validate();
          n.summation.validate();
          s.numerics = n;
          used = n;
        }
      },
      spec);

  ConfigFingerprint fp;
  fp.add("command", "scenario");
  fp.add_file("spec", o.scenario_file);
  for (const auto& s : doc.sections) {
    for (const auto& e : s.entries) {
      if (e.key == "sphere" || e.key == "plate" || e.key == "wall" || e.key == "material" ||
          e.key == "atom" || e.key == "overlay") {
        fp.add_file(s.name + "." + e.key, (doc.base_directory / e.value).string());
      }
    }
  }
  fingerprint_numerics(fp, used);
  const std::string name = scenarios::scenario_name(spec);
  const Header header{"scenario " + name, fp.hash(), tolerance_text(used)};

  json summary;
  summary["header"] = header.to_json();
  summary["scenario"] = name;
  int code = kOk;
  Table table;

  if (auto* s = std::get_if<scenarios::OpticalModulationSpec>(&spec)) {
    const auto r = scenarios::run_optical_modulation(*s);
    table = sweep_table(r);
    summary["absorbed_power_label"] = s->absorbed_power_label;
    summary["warnings"] = r.warnings;
    summary["rows_failed"] = std::count_if(r.rows.begin(), r.rows.end(), [](auto& x) { return !x.ok; });
    summary["overlay"] = r.overlay;
    if (!r.all_ok()) code = kNumericalFailure;
  } else if (auto* s = std::get_if<scenarios::CondensateSpec>(&spec)) {
    const auto r = scenarios::run_condensate_shift(*s);
    table = sweep_table(r);
    summary["trap_frequency_rad_s"] = s->trap.trap_frequency;
    summary["atom_mass_kg"] = s->trap.atom_mass;
    summary["warnings"] = r.warnings;
    summary["rows_failed"] = std::count_if(r.rows.begin(), r.rows.end(), [](auto& x) { return !x.ok; });
    summary["overlay"] = r.overlay;
    if (!r.all_ok()) code = kNumericalFailure;
  } else {
    const auto& audit_spec = std::get<scenarios::EntropyAuditSpec>(spec);
    const auto reports = scenarios::run_entropy_audit(audit_spec);
    table.columns = {"model_class", "geometry", "verdict", "expected", "predicted_S0",
                     "fitted_S0", "fitted_S0_error", "fitted_coefficient", "relative_discrepancy"};
    json list = json::array();
    int mismatches = 0;
    for (const auto& rep : reports) {
      const bool expected = scenarios::expected_satisfied(rep.model_class);
      if (expected != rep.satisfied) ++mismatches;
      table.rows.push_back({std::string(thermo::to_string(rep.model_class)),
                            std::string(thermo::to_string(rep.geometry)), rep.verdict_name(),
                            std::string(expected ? "satisfied" : "violated"), rep.predicted_S0,
                            rep.fitted_S0, rep.fitted_S0_error, rep.fitted_coefficient,
                            rep.relative_discrepancy.value_or(std::nan(""))});
      list.push_back(json::parse(rep.to_json()));
    }
    summary["reports"] = list;
    summary["mismatches"] = mismatches;
    if (mismatches > 0) code = kExpectationMismatch;
  }
  if (!o.deterministic) {
    summary["elapsed_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }

  emit(table.render(header, o.format), o.out, out);
  if (!o.out.empty()) {
    emit(summary.dump(2) + "\n", o.out + ".summary.json", out);
  } else {
    err << "note: no --out given; summary JSON not written\n";
  }
  if (code == kExpectationMismatch) throw ExpectationMismatch("verdict table mismatch");
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Lifshitz free energies, Casimir entropy audits and scenario sweeps", "casimir"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output file (default: stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--deterministic", o.deterministic, "Byte-stable output (no timings)");
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1, 256));
  };
  auto add_numerics = [&](CLI::App* sub) {
    sub->add_option("--rel-tol", o.rel_tol, "Quadrature relative tolerance");
    sub->add_option("--term-cutoff", o.term_cutoff, "Matsubara term cutoff ratio");
    sub->add_option("--max-index", o.max_index, "Maximum Matsubara index");
    sub->add_flag("--entropy-grade", o.entropy_grade, "Tight tolerances for T-derivatives");
  };

  auto* eps = app.add_subcommand("eps", "Tabulate eps(i xi) of a material file");
  eps->add_option("--material", o.material, "Material file")->required();
  eps->add_option("--sweep", o.sweep, "xi grid start:stop:points[:log] (rad/s)");
  eps->add_option("--T", o.T, "Temperature for carrier terms (K)");
  add_common(eps);

  auto* fe = app.add_subcommand("free-energy", "Plate-plate or atom-wall free energy");
  fe->add_option("--material", o.material, "Material file (plate 1 or wall)")->required();
  fe->add_option("--material2", o.material2, "Second plate (default: same as --material)");
  fe->add_option("--atom", o.atom, "Atom file; switches to atom-wall geometry");
  fe->add_option("--a", o.a, "Separation (m)");
  fe->add_option("--T", o.T, "Temperature (K)");
  fe->add_option("--R", o.R, "Sphere radius (m); adds the PFA force column");
  fe->add_option("--policy", o.policy, "standard|dc|screened|static-screened|plasma|ideal-metal");
  fe->add_option("--sweep", o.sweep, "Grid start:stop:points[:log]");
  fe->add_option("--sweep-var", o.sweep_var, "a or T");
  add_common(fe);
  add_numerics(fe);

  auto* audit = app.add_subcommand("audit", "Nernst heat-theorem audit");
  audit->add_option("--material", o.material, "Material file")->required();
  audit->add_option("--material2", o.material2, "Second plate (default: same)");
  audit->add_option("--atom", o.atom, "Atom file; switches to atom-wall geometry");
  audit->add_option("--class", o.model_class,
                    "oscillator-only|dc-augmented|screened-vanishing-n|screened-fixed-n|plasma-like")
      ->required();
  audit->add_option("--a", o.a, "Separation (m)");
  audit->add_option("--policy", o.policy, "Reflection policy");
  audit->add_option("--expect", o.expect, "satisfied or violated");
  audit->add_option("--t-min", o.t_min, "Lowest T/T_eff");
  audit->add_option("--t-max", o.t_max, "Highest T/T_eff");
  audit->add_option("--points", o.points, "Grid points");
  add_common(audit);
  add_numerics(audit);
  o.format = "csv";

  auto* scenario = app.add_subcommand("scenario", "Run a scenario spec file");
  scenario->add_option("spec", o.scenario_file, "Scenario spec file")->required();
  add_common(scenario);
  add_numerics(scenario);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }
  if (audit->parsed() && audit->count("--format") == 0) o.format = "json";

  try {
    if (eps->parsed()) return cmd_eps(o, out);
    if (fe->parsed()) return cmd_free_energy(o, out, err);
    if (audit->parsed()) return cmd_audit(o, out);
    return cmd_scenario(o, out, err);
  } catch (const ExpectationMismatch& e) {
    err << "expectation mismatch: " << e.what() << "\n";
    return kExpectationMismatch;
  } catch (const scenarios::OutOfScopeError& e) {
    err << e.what() << "\n";
    return kOutOfScope;
  } catch (const config::InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const numerics::ConvergenceError& e) {
    err << "numerical failure: " << e.what() << " (best estimate " << e.best_estimate() << ")\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace casimir::cli
