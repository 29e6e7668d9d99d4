#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace gausspoly::cli {

namespace {

constexpr std::size_t kTextRowLimit = 40;

std::string printf_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string scalar_text(const Json& v, const char* double_fmt) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return printf_double(double_fmt, v.get<double>());
  if (v.is_number()) return v.dump();
  return v.dump();
}

void append_object_lines(std::ostringstream& os, const Json& obj, const std::string& indent) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object()) {
      os << indent << key << ":\n";
      append_object_lines(os, value, indent + "  ");
    } else {
      os << indent << key << " = " << scalar_text(value, "%.12g") << '\n';
    }
  }
}

}  // namespace

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const Report& r) {
  Json j = Json::object();
  j["command"] = r.command;
  j["params"] = r.params;
  j["rows"] = Json::array();
  for (const auto& row : r.rows) j["rows"].push_back(row);
  j["metadata"] = r.metadata;
  return j;
}

std::string render_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

std::vector<std::string> csv_columns(const Report& r) {
  if (!r.columns.empty()) return r.columns;
  std::vector<std::string> cols;
  for (const auto& row : r.rows) {
    for (const auto& [key, value] : row.items()) {
      if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
    }
  }
  return cols;
}

std::string format_number(const Json& v) { return scalar_text(v, "%.17g"); }

std::string render_csv(const Report& r) {
  const auto cols = csv_columns(r);
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(cols[i]);
  }
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ',';
      const auto it = row.find(cols[i]);
      if (it != row.end()) out += csv_escape(format_number(*it));
    }
    out += '\n';
  }
  return out;
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << r.command;
  for (const auto& [key, value] : r.params.items()) {
    if (value.is_array()) {
      os << ' ' << key << '=' << value.dump();
    } else if (!value.is_null()) {
      os << ' ' << key << '=' << scalar_text(value, "%.12g");
    }
  }
  os << '\n';

  // Long reports (verification grids) only list rows that did not pass.
  std::vector<const Json*> shown;
  const bool abbreviate = r.rows.size() > kTextRowLimit;
  for (const auto& row : r.rows) {
    if (!abbreviate || row.value("status", std::string("pass")) != "pass") shown.push_back(&row);
  }
  const auto cols = csv_columns(r);
  if (!shown.empty()) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) width[c] = cols[c].size();
    for (const Json* row : shown) {
      auto& line = cells.emplace_back();
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto it = row->find(cols[c]);
        line.push_back(it == row->end() ? "" : scalar_text(*it, "%.12g"));
        width[c] = std::max(width[c], line.back().size());
      }
    }
    auto emit = [&](const std::vector<std::string>& line) {
      for (std::size_t c = 0; c < line.size(); ++c) {
        os << (c ? "  " : "") << line[c];
        if (c + 1 < line.size()) os << std::string(width[c] - line[c].size(), ' ');
      }
      os << '\n';
    };
    emit(cols);
    for (const auto& line : cells) emit(line);
  }
  if (abbreviate) {
    os << "(" << r.rows.size() - shown.size() << " of " << r.rows.size()
       << " rows passed and are omitted; use --format json or csv for all rows)\n";
  }
  if (r.metadata.contains("summary")) {
    os << "summary:\n";
    append_object_lines(os, r.metadata["summary"], "  ");
  }
  for (const char* key : {"note", "band_derivation"}) {
    if (r.metadata.contains(key)) os << key << ": " << r.metadata[key].get<std::string>() << '\n';
  }
  if (r.metadata.contains("wall_time_s")) {
    os << "wall time: " << printf_double("%.3f", r.metadata["wall_time_s"].get<double>())
       << " s\n";
  }
  return os.str();
}

std::string render(const Report& r, const std::string& format) {
  if (format == "json") return render_json(r);
  if (format == "csv") return render_csv(r);
  if (format == "text") return render_text(r);
  throw std::invalid_argument("unknown format '" + format + "'");
}

}  // namespace gausspoly::cli
