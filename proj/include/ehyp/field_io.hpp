#pragma once

// Field files (JSON) and study tables (CSV). Every number is written with 17
// significant digits and keys in a fixed order, so a file read back and
// written again is byte-identical.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ehyp/error.hpp"
#include "ehyp/grid_field.hpp"

namespace ehyp {

inline constexpr int kSchemaVersion = 1;

inline std::string fmt_double(double v) {
  require(std::isfinite(v), ErrorKind::InvalidArgument, "cannot serialize a non-finite number");
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_escape(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

/// Minimal ordered JSON builder for reports: members appear in insertion
/// order, numbers via fmt_double.
class JsonObject {
 public:
  JsonObject& add(std::string_view key, double v) { return raw(key, fmt_double(v)); }
  JsonObject& add(std::string_view key, int v) { return raw(key, std::to_string(v)); }
  JsonObject& add(std::string_view key, std::size_t v) { return raw(key, std::to_string(v)); }
  JsonObject& add(std::string_view key, bool v) { return raw(key, v ? "true" : "false"); }
  JsonObject& add(std::string_view key, std::string_view v) { return raw(key, json_escape(v)); }
  JsonObject& add(std::string_view key, const char* v) { return raw(key, json_escape(v)); }
  JsonObject& add(std::string_view key, const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_double(v[i]);
    return raw(key, s + "]");
  }
  JsonObject& add(std::string_view key, const JsonObject& v) { return raw(key, v.str()); }
  JsonObject& add(std::string_view key, const std::vector<JsonObject>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
    return raw(key, s + "]");
  }
  JsonObject& raw(std::string_view key, std::string value) {
    members_.emplace_back(std::string(key), std::move(value));
    return *this;
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < members_.size(); ++i)
      s += (i ? ", " : "") + json_escape(members_[i].first) + ": " + members_[i].second;
    return s + "}";
  }

  /// One member per line, for top-level documents.
  std::string pretty() const {
    std::string s = "{\n";
    for (std::size_t i = 0; i < members_.size(); ++i)
      s += "  " + json_escape(members_[i].first) + ": " + members_[i].second + (i + 1 < members_.size() ? ",\n" : "\n");
    return s + "}\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> members_;
};

inline std::string field_to_json(const GridField& f) {
  f.validate();
  JsonObject o;
  o.add("schema_version", kSchemaVersion);
  o.add("chart", to_string(f.chart));
  o.add("origin", std::vector<double>{f.x0, f.y0});
  o.add("spacing", std::vector<double>{f.hx, f.hy});
  o.raw("dims", "[" + std::to_string(f.nx) + ", " + std::to_string(f.ny) + "]");
  o.add("components", f.components);
  o.add("values", f.values);
  if (!f.mask.empty()) {
    std::string m = "[";
    for (std::size_t i = 0; i < f.mask.size(); ++i) m += std::string(i ? ", " : "") + (f.mask[i] ? "true" : "false");
    o.raw("mask", m + "]");
  }
  return o.pretty();
}

inline GridField field_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("field file is not valid JSON: ") + e.what());
  }
  try {
    require(j.at("schema_version").get<int>() == kSchemaVersion, ErrorKind::ConfigError, "unsupported schema_version");
    const auto chart = j.at("chart").get<std::string>();
    require(chart == "cartesian" || chart == "polar", ErrorKind::ConfigError, "chart must be cartesian or polar");
    const auto origin = j.at("origin").get<std::vector<double>>();
    const auto spacing = j.at("spacing").get<std::vector<double>>();
    const auto dims = j.at("dims").get<std::vector<std::size_t>>();
    require(origin.size() == 2 && spacing.size() == 2 && dims.size() == 2, ErrorKind::ConfigError,
            "origin, spacing and dims need two entries");
    GridField f;
    f.chart = chart == "cartesian" ? Chart::Cartesian : Chart::Polar;
    f.x0 = origin[0];
    f.y0 = origin[1];
    f.hx = spacing[0];
    f.hy = spacing[1];
    f.nx = dims[0];
    f.ny = dims[1];
    f.components = j.at("components").get<std::size_t>();
    f.values = j.at("values").get<std::vector<double>>();
    if (j.contains("mask")) {
      for (bool b : j.at("mask").get<std::vector<bool>>()) f.mask.push_back(b ? 1 : 0);
    }
    try {
      f.validate();
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, std::string("field file: ") + e.what());
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("field file: ") + e.what());
  }
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::ConfigError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::ConfigError, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), ErrorKind::ConfigError, "write failed for " + path);
}

inline GridField read_field(const std::string& path) { return field_from_json(read_text(path)); }
inline void write_field(const std::string& path, const GridField& f) { write_text(path, field_to_json(f)); }

/// CSV table with a header row; cells are numbers or plain strings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvTable& row(const std::vector<std::string>& cells) {
    require(cells.size() == header_.size(), ErrorKind::InvalidArgument, "CSV row width differs from header");
    rows_.push_back(cells);
    return *this;
  }
  CsvTable& row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    for (double v : cells) s.push_back(fmt_double(v));
    return row(s);
  }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
      out += "\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace ehyp
