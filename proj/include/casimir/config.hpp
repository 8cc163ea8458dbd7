#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "casimir/dielectric.hpp"
#include "casimir/engine.hpp"

namespace casimir::config {

/// Malformed input; carries the source name and 1-based line (0 if the
/// problem is not tied to a line).
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// INI-like document: `key = value` lines, `[section]` headers, `#` comments.
/// Keys before the first header belong to the unnamed section "".
struct Document {
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };
  struct Section {
    std::string name;
    int line = 0;
    std::vector<Entry> entries;
  };

  std::string source;
  std::filesystem::path base_directory;
  std::vector<Section> sections;

  const Section* find(std::string_view name) const;
  std::vector<const Section*> find_prefixed(std::string_view prefix) const;
};

Document parse_document(std::string_view text, std::string source,
                        std::filesystem::path base_directory = {});
Document load_document(const std::filesystem::path& path);

/// Typed accessors over one section; every key must be consumed, so that
/// typos surface as line-numbered errors via finish().
class SectionReader {
 public:
  SectionReader(const Document& doc, const Document::Section* section);

  std::optional<std::string> text(std::string_view key);
  std::optional<double> number(std::string_view key);
  std::optional<long> integer(std::string_view key);
  std::vector<const Document::Entry*> all(std::string_view key);
  double required_number(std::string_view key);
  std::string required_text(std::string_view key);
  std::filesystem::path path(std::string_view key);

  [[noreturn]] void fail(const Document::Entry& entry, const std::string& message) const;
  [[noreturn]] void fail(const std::string& message) const;
  void finish() const;

 private:
  const Document::Entry* take(std::string_view key);

  const Document* doc_;
  const Document::Section* section_;
  std::vector<bool> used_;
};

double parse_number(std::string_view text);
std::vector<double> parse_number_list(std::string_view text);

/// `start:stop:points[:log]`, strictly increasing.
std::vector<double> parse_grid(std::string_view text);

dielectric::Material material_from_document(const Document& doc);
dielectric::Material load_material(const std::filesystem::path& path);

dielectric::AtomModel atom_from_document(const Document& doc);
dielectric::AtomModel load_atom(const std::filesystem::path& path);

/// Optional [numerics] overrides on top of `base`.
engine::NumericsConfig numerics_from_document(const Document& doc, engine::NumericsConfig base);

/// Two-column (abscissa, value) text with `#` comments.
std::vector<std::pair<double, double>> load_overlay(const std::filesystem::path& path);

}  // namespace casimir::config
