#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gausspoly::cli {

using Json = nlohmann::ordered_json;

/// One command's output. Rows are flat objects whose values are numbers,
/// strings, booleans or null; the CSV header is the union of their keys in
/// first-seen order unless `columns` pins it.
struct Report {
  std::string command;
  Json params = Json::object();
  std::vector<Json> rows;
  Json metadata = Json::object();
  std::vector<std::string> columns;
  /// 0 on success, 1 when a verification suite has a hard failure.
  int exit_code = 0;
};

/// Number or null when not finite (JSON has no NaN/inf).
Json finite_or_null(double v);

Json to_json(const Report& r);
std::string render_json(const Report& r);
std::string render_csv(const Report& r);
std::string render_text(const Report& r);

/// Renders in one of "json", "csv", "text".
std::string render(const Report& r, const std::string& format);

/// Column order used by render_csv.
std::vector<std::string> csv_columns(const Report& r);

/// %.17g; integers stay integral.
std::string format_number(const Json& v);

}  // namespace gausspoly::cli
