#include "glvortex/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "glvortex/errors.hpp"

namespace glvortex::io {

void atomic_write(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(int v) { return std::to_string(v); }

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw ConfigError("csv row has the wrong number of columns");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("not a number in " + what + ": '" + s + "'");
}

}  // namespace

std::map<std::string, std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty csv: " + path.string());
  const auto header = split(trim(line), ',');
  std::map<std::string, std::vector<std::string>> cols;
  for (const auto& h : header) cols[trim(h)];
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw ConfigError("ragged csv row in " + path.string());
    for (std::size_t i = 0; i < cells.size(); ++i) cols[trim(header[i])].push_back(trim(cells[i]));
  }
  return cols;
}

void write_config(const fs::path& path, const VortexConfig& config) {
  CsvTable t({"x", "y"});
  for (const Vec2& p : config.points) t.add({fmt(p.x()), fmt(p.y())});
  t.write(path);
}

VortexConfig read_config(const fs::path& path) {
  auto cols = read_csv(path);
  if (!cols.count("x") || !cols.count("y")) throw ConfigError("configuration csv needs columns x,y");
  VortexConfig c;
  for (std::size_t i = 0; i < cols["x"].size(); ++i)
    c.points.emplace_back(to_double(cols["x"][i], path.string()), to_double(cols["y"][i], path.string()));
  return c;
}

std::string config_hash(const VortexConfig& config) {
  std::uint64_t h = 1469598103934665603ull;
  char buf[64];
  for (const Vec2& p : config.points) {
    const int n = std::snprintf(buf, sizeof buf, "%.17g,%.17g;", p.x(), p.y());
    for (int i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_fields(const fs::path& path, const std::vector<std::string>& names,
                  const std::vector<const ScalarField*>& fields) {
  if (names.size() != fields.size() || fields.empty()) throw ConfigError("field names and fields differ");
  std::vector<std::string> header{"x", "y"};
  header.insert(header.end(), names.begin(), names.end());
  CsvTable t(header);
  const Grid& g = fields[0]->grid();
  for (int k : g.interior_nodes()) {
    std::vector<std::string> row{fmt(g.point(k).x()), fmt(g.point(k).y())};
    for (const ScalarField* f : fields) row.push_back(fmt((*f)[k]));
    t.add(std::move(row));
  }
  t.write(path);
}

DomainSpec parse_domain(const std::string& text) {
  const std::string s = trim(text);
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (kind == "disk") return DomainSpec::disk(args.empty() ? 1.0 : to_double(args, "domain"));
  if (kind == "ellipse") {
    const auto ab = split(args, ',');
    if (ab.size() != 2) throw ConfigError("ellipse domain needs 'ellipse:A,B'");
    return DomainSpec::ellipse(to_double(ab[0], "domain"), to_double(ab[1], "domain"));
  }
  throw ConfigError("unknown domain '" + text + "' (expected disk, disk:R or ellipse:A,B)");
}

std::string domain_text(const DomainSpec& spec) {
  if (spec.kind == DomainKind::disk) return "disk:" + fmt(spec.a);
  return "ellipse:" + fmt(spec.a) + "," + fmt(spec.b);
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(path.string() + ":" + std::to_string(n) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

Svg::Svg(const DomainSpec& spec, int pixels) : spec_(spec), px_(pixels) {
  scale_ = 0.45 * px_ / std::max(spec.a, spec.b);
}

double Svg::sx(double x) const { return 0.5 * px_ + scale_ * x; }
double Svg::sy(double y) const { return 0.5 * px_ - scale_ * y; }

void Svg::heatmap(const ScalarField& f, double lo, double hi) {
  const Grid& g = f.grid();
  const double w = scale_ * g.h();
  std::ostringstream os;
  for (int k : g.interior_nodes()) {
    const double t = hi > lo ? std::clamp((f[k] - lo) / (hi - lo), 0.0, 1.0) : 0.5;
    // blue - white - red
    const int r = t < 0.5 ? static_cast<int>(510 * t) : 255;
    const int b = t > 0.5 ? static_cast<int>(510 * (1 - t)) : 255;
    const int gr = std::min(r, b);
    char buf[160];
    std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"#%02x%02x%02x\"/>\n",
                  sx(g.point(k).x()) - 0.5 * w, sy(g.point(k).y()) - 0.5 * w, w + 0.05, w + 0.05, r, gr, b);
    os << buf;
  }
  body_ += os.str();
}

void Svg::mask(const ScalarField& f, const std::vector<unsigned char>& mask, const std::string& colour) {
  const Grid& g = f.grid();
  const double w = scale_ * g.h();
  std::ostringstream os;
  for (int k : g.interior_nodes()) {
    if (!mask[k]) continue;
    char buf[160];
    std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\"/>\n",
                  sx(g.point(k).x()) - 0.5 * w, sy(g.point(k).y()) - 0.5 * w, w + 0.05, w + 0.05, colour.c_str());
    os << buf;
  }
  body_ += os.str();
}

void Svg::points(const std::vector<Vec2>& pts, const std::string& colour, double radius_px) {
  std::ostringstream os;
  for (const Vec2& p : pts) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.1f\" fill=\"%s\"/>\n", sx(p.x()), sy(p.y()),
                  radius_px, colour.c_str());
    os << buf;
  }
  body_ += os.str();
}

void Svg::outline() {
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "<ellipse cx=\"%.2f\" cy=\"%.2f\" rx=\"%.2f\" ry=\"%.2f\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
                sx(0), sy(0), scale_ * spec_.a, scale_ * spec_.b);
  body_ += buf;
}

void Svg::title(const std::string& text) {
  body_ += "<text x=\"8\" y=\"18\" font-family=\"monospace\" font-size=\"13\">" + text + "</text>\n";
}

std::string Svg::str() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px_ << "\" height=\"" << px_ << "\" viewBox=\"0 0 "
     << px_ << ' ' << px_ << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << body_ << "</svg>\n";
  return os.str();
}

}  // namespace glvortex::io
