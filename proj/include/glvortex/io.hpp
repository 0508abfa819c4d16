#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "glvortex/renorm.hpp"

namespace glvortex::io {

namespace fs = std::filesystem;

// Writes to a sibling temporary file and renames it over path.
void atomic_write(const fs::path& path, const std::string& content);

std::string fmt(double v);  // %.12g, "nan"/"inf" spelled out
std::string fmt(int v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const fs::path& path) const { atomic_write(path, str()); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Parses a CSV with a header line into columns by name.
std::map<std::string, std::vector<std::string>> read_csv(const fs::path& path);

// Columns x,y.
void write_config(const fs::path& path, const VortexConfig& config);
VortexConfig read_config(const fs::path& path);
// FNV-1a of the coordinates, 16 hex digits.
std::string config_hash(const VortexConfig& config);

// Columns x,y,<name>... over interior nodes.
void write_fields(const fs::path& path, const std::vector<std::string>& names,
                  const std::vector<const ScalarField*>& fields);

// "disk", "disk:R", "ellipse:A,B"
DomainSpec parse_domain(const std::string& text);
std::string domain_text(const DomainSpec& spec);

// key = value lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> read_key_values(const fs::path& path);

class Svg {
 public:
  Svg(const DomainSpec& spec, int pixels = 480);
  // Cell colours from a diverging scale over [lo, hi].
  void heatmap(const ScalarField& f, double lo, double hi);
  void mask(const ScalarField& f, const std::vector<unsigned char>& mask, const std::string& colour);
  void points(const std::vector<Vec2>& pts, const std::string& colour, double radius_px = 3.0);
  void outline();
  void title(const std::string& text);
  std::string str() const;
  void write(const fs::path& path) const { atomic_write(path, str()); }

 private:
  double sx(double x) const;
  double sy(double y) const;
  DomainSpec spec_;
  int px_;
  double scale_;
  std::string body_;
};

}  // namespace glvortex::io
