#include "casimir/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "casimir/constants.hpp"

namespace casimir::config {

namespace c = constants;
namespace d = dielectric;

namespace {

std::string format_error(const std::string& source, int line, const std::string& message) {
  if (line > 0) return source + ":" + std::to_string(line) + ": " + message;
  return source + ": " + message;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

InputError::InputError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(format_error(source, line, message)), line_(line) {}

const Document::Section* Document::find(std::string_view name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<const Document::Section*> Document::find_prefixed(std::string_view prefix) const {
  std::vector<const Section*> out;
  for (const auto& s : sections) {
    if (s.name.size() > prefix.size() && s.name.compare(0, prefix.size(), prefix) == 0) {
      out.push_back(&s);
    }
  }
  return out;
}

Document parse_document(std::string_view text, std::string source,
                        std::filesystem::path base_directory) {
  Document doc;
  doc.source = std::move(source);
  doc.base_directory = std::move(base_directory);
  doc.sections.push_back({"", 0, {}});
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw InputError(doc.source, line_no, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw InputError(doc.source, line_no, "empty section name");
      if (doc.find(name) != nullptr) {
        throw InputError(doc.source, line_no, "duplicate section [" + std::string(name) + "]");
      }
      doc.sections.push_back({std::string(name), line_no, {}});
    } else {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw InputError(doc.source, line_no, "expected 'key = value'");
      }
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (key.empty()) throw InputError(doc.source, line_no, "missing key");
      if (value.empty()) throw InputError(doc.source, line_no, "missing value for '" + std::string(key) + "'");
      doc.sections.back().entries.push_back({std::string(key), std::string(value), line_no});
    }
    if (end == text.size()) break;
  }
  return doc;
}

Document load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string(), 0, "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str(), path.string(), path.parent_path());
}

double parse_number(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last || !std::isfinite(value)) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_number(part));
  return out;
}

std::vector<double> parse_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() < 3 || parts.size() > 4) {
    throw std::invalid_argument("grid must be start:stop:points[:log]");
  }
  const double start = parse_number(parts[0]);
  const double stop = parse_number(parts[1]);
  const double count = parse_number(parts[2]);
  const bool log = parts.size() == 4;
  if (log && parts[3] != "log") throw std::invalid_argument("grid spacing must be 'log'");
  if (count < 1 || count != std::floor(count) || count > 1e7) {
    throw std::invalid_argument("grid point count must be a positive integer");
  }
  const auto n = static_cast<int>(count);
  if (n > 1 && !(stop > start)) throw std::invalid_argument("grid must be strictly increasing");
  if (log && !(start > 0.0)) throw std::invalid_argument("log grid needs start > 0");
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    grid[i] = log ? start * std::pow(stop / start, f) : start + (stop - start) * f;
  }
  if (n > 1) grid.back() = stop;
  return grid;
}

SectionReader::SectionReader(const Document& doc, const Document::Section* section)
    : doc_(&doc), section_(section), used_(section ? section->entries.size() : 0, false) {}

const Document::Entry* SectionReader::take(std::string_view key) {
  if (section_ == nullptr) return nullptr;
  const Document::Entry* found = nullptr;
  for (std::size_t i = 0; i < section_->entries.size(); ++i) {
    if (section_->entries[i].key != key) continue;
    if (found != nullptr) fail(section_->entries[i], "duplicate key '" + std::string(key) + "'");
    found = &section_->entries[i];
    used_[i] = true;
  }
  return found;
}

std::optional<std::string> SectionReader::text(std::string_view key) {
  const auto* e = take(key);
  if (e == nullptr) return std::nullopt;
  return e->value;
}

std::optional<double> SectionReader::number(std::string_view key) {
  const auto* e = take(key);
  if (e == nullptr) return std::nullopt;
  try {
    return parse_number(e->value);
  } catch (const std::invalid_argument& ex) {
    fail(*e, std::string(key) + ": " + ex.what());
  }
}

std::optional<long> SectionReader::integer(std::string_view key) {
  const auto* e = take(key);
  if (e == nullptr) return std::nullopt;
  long value = 0;
  const auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), value);
  if (ec != std::errc() || ptr != e->value.data() + e->value.size()) {
    fail(*e, std::string(key) + ": not an integer: '" + e->value + "'");
  }
  return value;
}

std::vector<const Document::Entry*> SectionReader::all(std::string_view key) {
  std::vector<const Document::Entry*> out;
  if (section_ == nullptr) return out;
  for (std::size_t i = 0; i < section_->entries.size(); ++i) {
    if (section_->entries[i].key == key) {
      out.push_back(&section_->entries[i]);
      used_[i] = true;
    }
  }
  return out;
}

double SectionReader::required_number(std::string_view key) {
  if (auto v = number(key)) return *v;
  fail("missing required key '" + std::string(key) + "'");
}

std::string SectionReader::required_text(std::string_view key) {
  if (auto v = text(key)) return *v;
  fail("missing required key '" + std::string(key) + "'");
}

std::filesystem::path SectionReader::path(std::string_view key) {
  std::filesystem::path p = required_text(key);
  if (p.is_relative()) p = doc_->base_directory / p;
  return p;
}

void SectionReader::fail(const Document::Entry& entry, const std::string& message) const {
  throw InputError(doc_->source, entry.line, message);
}

void SectionReader::fail(const std::string& message) const {
  const std::string where = section_ && !section_->name.empty() ? " in [" + section_->name + "]" : "";
  throw InputError(doc_->source, section_ ? section_->line : 0, message + where);
}

void SectionReader::finish() const {
  if (section_ == nullptr) return;
  for (std::size_t i = 0; i < used_.size(); ++i) {
    if (!used_[i]) fail(section_->entries[i], "unknown key '" + section_->entries[i].key + "'");
  }
}

namespace {

constexpr double kPerCubicCm = 1e6;     // cm^-3 -> m^-3
constexpr double kSquareCm = 1e-4;      // cm^2 -> m^2
constexpr double kBohrVolume = 1.48184711e-31;  // a0^3 in m^3

double frequency(SectionReader& r, const std::string& key) {
  const auto si = r.number(key);
  const auto ev = r.number(key + "_ev");
  if (si && ev) r.fail("give either '" + key + "' or '" + key + "_ev', not both");
  if (ev) return *ev * c::kEvToRadPerSecond;
  if (si) return *si;
  return std::numeric_limits<double>::quiet_NaN();
}

d::OscillatorSet read_oscillators(const Document& doc) {
  const auto* section = doc.find("oscillators");
  SectionReader r(doc, section);
  std::vector<d::Oscillator> list;
  auto parse_triple = [&](const Document::Entry& e) {
    std::vector<double> v;
    try {
      v = parse_number_list(e.value);
    } catch (const std::invalid_argument& ex) {
      r.fail(e, ex.what());
    }
    if (v.size() != 3) r.fail(e, "expected three comma-separated numbers");
    return v;
  };
  // Keep file order across both spellings.
  std::vector<const Document::Entry*> entries;
  for (const auto* e : r.all("oscillator")) entries.push_back(e);
  for (const auto* e : r.all("static")) entries.push_back(e);
  std::sort(entries.begin(), entries.end(),
            [](const auto* a, const auto* b) { return a->line < b->line; });
  for (const auto* e : entries) {
    auto v = parse_triple(*e);
    if (!(v[1] > 0.0)) r.fail(*e, "oscillator frequency must be > 0");
    if (v[0] < 0.0 || v[2] < 0.0) r.fail(*e, "strength and relaxation must be >= 0");
    const double g = e->key == "static" ? v[0] * v[1] * v[1] : v[0];
    list.push_back({g, v[1], v[2]});
  }
  r.finish();
  return d::OscillatorSet(std::move(list));
}

std::optional<d::CarrierScenario> read_carriers(const Document& doc) {
  const auto* section = doc.find("carriers");
  if (section == nullptr) return std::nullopt;
  SectionReader r(doc, section);
  d::CarrierScenario carriers;
  const auto n_si = r.number("density");
  const auto n_cm = r.number("density_cm3");
  if (n_si.has_value() == n_cm.has_value()) r.fail("give exactly one of 'density' or 'density_cm3'");
  carriers.density.prefactor = n_si ? *n_si : *n_cm * kPerCubicCm;
  carriers.density.activation = r.number("density_activation_ev").value_or(0.0) * c::kElementaryCharge;
  const auto mu_si = r.number("mobility");
  const auto mu_cm = r.number("mobility_cm2");
  if (mu_si.has_value() == mu_cm.has_value()) r.fail("give exactly one of 'mobility' or 'mobility_cm2'");
  carriers.mobility.prefactor = mu_si ? *mu_si : *mu_cm * kSquareCm;
  carriers.mobility.activation = r.number("mobility_activation_ev").value_or(0.0) * c::kElementaryCharge;
  if (carriers.density.prefactor < 0.0 || carriers.mobility.prefactor < 0.0) {
    r.fail("density and mobility must be >= 0");
  }
  if (carriers.density.activation < 0.0 || carriers.mobility.activation < 0.0) {
    r.fail("activation energies must be >= 0");
  }
  if (auto stats = r.text("statistics")) {
    if (*stats == "maxwell-boltzmann") {
      carriers.statistics = d::CarrierStatistics::MaxwellBoltzmann;
    } else if (*stats == "fermi-dirac") {
      carriers.statistics = d::CarrierStatistics::FermiDirac;
    } else {
      r.fail("statistics must be maxwell-boltzmann or fermi-dirac");
    }
  }
  if (auto m = r.number("effective_mass_ratio")) {
    if (!(*m > 0.0)) r.fail("effective_mass_ratio must be > 0");
    carriers.effective_mass = *m * c::kElectronMass;
  }
  const double wp = frequency(r, "plasma_frequency");
  if (!std::isnan(wp)) {
    if (!(wp > 0.0)) r.fail("plasma_frequency must be > 0");
    carriers.plasma_frequency = wp;
  }
  r.finish();
  return carriers;
}

}  // namespace

d::Material material_from_document(const Document& doc) {
  SectionReader top(doc, doc.find(""));
  d::Material material;
  material.name = top.text("name").value_or(std::filesystem::path(doc.source).stem().string());
  top.finish();

  for (const auto& s : doc.sections) {
    if (!s.name.empty() && s.name != "variant" && s.name != "oscillators" && s.name != "carriers") {
      throw InputError(doc.source, s.line, "unknown section [" + s.name + "]");
    }
  }

  const auto* variant_section = doc.find("variant");
  SectionReader v(doc, variant_section);
  const std::string type = v.text("type").value_or("oscillator");
  auto oscillators = read_oscillators(doc);
  auto carriers = read_carriers(doc);

  if (type == "oscillator") {
    material.model = d::OscillatorModel{std::move(oscillators)};
  } else if (type == "dc-augmented") {
    if (!carriers) v.fail("dc-augmented variant needs a [carriers] section");
    material.model = d::DcAugmentedModel{std::move(oscillators), *carriers};
    carriers.reset();
  } else if (type == "plasma-like" || type == "drude") {
    const double wp = frequency(v, "plasma_frequency");
    if (!(wp > 0.0)) v.fail(type + " variant needs plasma_frequency > 0");
    if (type == "plasma-like") {
      material.model = d::PlasmaLikeModel{std::move(oscillators), wp};
    } else {
      const double gamma = frequency(v, "relaxation");
      if (!(gamma >= 0.0)) v.fail("drude variant needs relaxation >= 0");
      material.model = d::DrudeModel{std::move(oscillators), wp, gamma};
    }
  } else if (type == "si-lorentz") {
    d::SiLorentzModel m;
    m.eps_inf = v.number("eps_inf").value_or(m.eps_inf);
    m.eps_static = v.number("eps_static").value_or(m.eps_static);
    if (const double w = frequency(v, "omega0"); !std::isnan(w)) m.omega0 = w;
    if (!(m.omega0 > 0.0) || !(m.eps_inf >= 1.0) || !(m.eps_static >= m.eps_inf)) {
      v.fail("si-lorentz needs omega0 > 0 and eps_static >= eps_inf >= 1");
    }
    if (!oscillators.empty()) v.fail("si-lorentz variant takes no [oscillators]");
    material.model = m;
  } else if (type == "si-logband") {
    d::SiLogBandModel m;
    m.eps_bar = v.number("eps_bar").value_or(m.eps_bar);
    m.omega0_ev = v.number("omega0_ev").value_or(m.omega0_ev);
    m.omega1_ev = v.number("omega1_ev").value_or(m.omega1_ev);
    if (!(m.omega0_ev > 0.0 && m.omega1_ev > m.omega0_ev && m.eps_bar >= 0.0)) {
      v.fail("si-logband needs 0 < omega0_ev < omega1_ev and eps_bar >= 0");
    }
    if (!oscillators.empty()) v.fail("si-logband variant takes no [oscillators]");
    material.model = m;
  } else {
    int line = 0;
    for (const auto& entry : variant_section->entries) {
      if (entry.key == "type") line = entry.line;
    }
    throw InputError(doc.source, line, "unknown variant type '" + type + "'");
  }
  v.finish();
  material.carriers = carriers;
  return material;
}

d::Material load_material(const std::filesystem::path& path) {
  return material_from_document(load_document(path));
}

d::AtomModel atom_from_document(const Document& doc) {
  const auto* section = doc.find("atom");
  if (section == nullptr) throw InputError(doc.source, 0, "missing [atom] section");
  for (const auto& s : doc.sections) {
    if (!s.name.empty() && s.name != "atom") {
      throw InputError(doc.source, s.line, "unknown section [" + s.name + "]");
    }
  }
  SectionReader top(doc, doc.find(""));
  top.text("name");
  top.finish();
  SectionReader r(doc, section);
  d::AtomModel atom;
  const auto si = r.number("static_polarizability");
  const auto au = r.number("static_polarizability_au");
  if (si.has_value() == au.has_value()) {
    r.fail("give exactly one of 'static_polarizability' (m^3) or 'static_polarizability_au'");
  }
  atom.static_polarizability = si ? *si : *au * kBohrVolume;
  const double w = frequency(r, "absorption_frequency");
  if (std::isnan(w)) r.fail("missing required key 'absorption_frequency'");
  atom.absorption_frequency = w;
  if (!(atom.static_polarizability >= 0.0) || !(atom.absorption_frequency > 0.0)) {
    r.fail("atom needs static polarizability >= 0 and absorption frequency > 0");
  }
  r.finish();
  return atom;
}

d::AtomModel load_atom(const std::filesystem::path& path) {
  return atom_from_document(load_document(path));
}

engine::NumericsConfig numerics_from_document(const Document& doc, engine::NumericsConfig base) {
  const auto* section = doc.find("numerics");
  if (section == nullptr) return base;
  SectionReader r(doc, section);
  if (auto v = r.number("relative_tolerance")) base.quadrature.relative_tolerance = *v;
  if (auto v = r.number("absolute_floor")) base.quadrature.absolute_floor = *v;
  if (auto v = r.integer("max_subdivisions")) base.quadrature.max_subdivisions = static_cast<int>(*v);
  if (auto v = r.number("term_cutoff_ratio")) base.summation.term_cutoff_ratio = *v;
  if (auto v = r.integer("max_matsubara_index")) base.summation.max_matsubara_index = *v;
  if (auto v = r.integer("threads")) base.threads = static_cast<int>(std::max(1L, *v));
  r.finish();
  try {
    base.quadrature.validate();
    base.summation.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(doc.source, section->line, e.what());
  }
  return base;
}

std::vector<std::pair<double, double>> load_overlay(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string(), 0, "cannot open overlay file");
  std::vector<std::pair<double, double>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    std::istringstream fields{std::string(view)};
    std::string a, b, extra;
    fields >> a >> b;
    if (a.empty() || b.empty() || (fields >> extra)) {
      throw InputError(path.string(), line_no, "expected two columns");
    }
    if (a.back() == ',') a.pop_back();
    try {
      out.emplace_back(parse_number(a), parse_number(b));
    } catch (const std::invalid_argument& e) {
      throw InputError(path.string(), line_no, e.what());
    }
  }
  return out;
}

}  // namespace casimir::config
