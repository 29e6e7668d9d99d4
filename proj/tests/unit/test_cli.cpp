#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include "app.hpp"
#include "commands.hpp"
#include "report.hpp"

using namespace gausspoly::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Json parse(const std::string& s) { return Json::parse(s); }

// Drops metadata.wall_time_s, the only field allowed to differ between runs.
std::string body(const std::string& json_text) {
  Json j = parse(json_text);
  j["metadata"].erase("wall_time_s");
  return j.dump(2);
}

struct Process {
  int code;
  std::string out;
};

Process run_binary(const std::string& args) {
  const std::string cmd = std::string(GAUSSPOLY_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("gausspoly_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_CASE("exact") {
  const Result r = run_cli({"exact", "--n", "6", "--d", "5", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const Json j = parse(r.out);
  CHECK(j["command"] == "exact");
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0]["route"] == "quad_y");
  CHECK(j["rows"][0]["value"].get<double>() == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(j["metadata"]["version"] == kVersion);
  CHECK(j["metadata"].contains("wall_time_s"));

  const Result all = run_cli({"exact", "--n", "10", "--d", "2", "--route", "all", "--format", "json"});
  REQUIRE(all.code == kExitOk);
  const Json ja = parse(all.out);
  REQUIRE(ja["rows"].size() == 3);
  for (const auto& row : ja["rows"]) CHECK(row["agrees"] == true);

  CHECK(run_cli({"exact", "--n", "5", "--d", "5"}).code == kExitUsage);
  CHECK(run_cli({"exact", "--n", "10"}).code == kExitUsage);
  CHECK(run_cli({"exact", "--n", "10", "--d", "2", "--route", "bogus"}).code == kExitUsage);
  CHECK(run_cli({"exact", "--n", "10", "--d", "2", "--rel-tol", "0"}).code == kExitUsage);
}

TEST_CASE("value is omitted when not representable") {
  const Result r = run_cli({"exact", "--n", "1000000", "--d", "500", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const Json row = parse(r.out)["rows"][0];
  CHECK(row["value"].is_null());
  CHECK(row["log_value"].get<double>() > 700.0);
  CHECK(row["log10_value"].get<double>() ==
        doctest::Approx(row["log_value"].get<double>() / std::log(10.0)).epsilon(1e-14));
}

TEST_CASE("asymptotic") {
  const Result t = run_cli({"asymptotic", "--formula", "thm11", "--n", "1200", "--d", "78",
                            "--compare", "--format", "json"});
  REQUIRE(t.code == kExitOk);
  const Json jt = parse(t.out);
  CHECK(jt["rows"][0]["in_band"] == true);
  CHECK(jt["rows"][1]["in_band"] == true);
  CHECK(jt["metadata"].contains("band_derivation"));
  for (const auto& row : jt["rows"]) {
    const double v = row["exact_log_value"].get<double>();
    const bool inside = row["log_lower"].get<double>() <= v && v <= row["log_upper"].get<double>();
    CHECK(row["in_band"].get<bool>() == inside);
  }

  const Result c = run_cli({"asymptotic", "--formula", "cor12", "--n", "1000000", "--d", "2",
                            "--format", "json"});
  REQUIRE(c.code == kExitOk);
  CHECK(parse(c.out)["rows"][0]["log_value"].get<double>() ==
        doctest::Approx(std::log(2.0 * std::sqrt(2.0 * M_PI * std::log(1e6)))).epsilon(1e-14));

  const Result bad = run_cli({"asymptotic", "--formula", "thm11", "--n", "100", "--d", "10"});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("d >= 78") != std::string::npos);
  CHECK(run_cli({"asymptotic", "--formula", "cor12", "--n", "2", "--d", "1"}).code == kExitUsage);
  CHECK(run_cli({"asymptotic", "--formula", "nope", "--n", "20", "--d", "2"}).code == kExitUsage);
}

TEST_CASE("mc") {
  const Result r = run_cli({"mc", "--n", "10", "--d", "2", "--trials", "10000", "--seed", "42",
                            "--compare", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const Json row = parse(r.out)["rows"][0];
  CHECK(std::abs(row["z_score"].get<double>()) <= 4.0);
  CHECK(row["trials"] == 10000);
  CHECK(row["seed"] == 42);

  const Result s = run_cli({"mc", "--n", "6", "--d", "5", "--trials", "100", "--method", "hull",
                            "--format", "json"});
  REQUIRE(s.code == kExitOk);
  const Json srow = parse(s.out)["rows"][0];
  CHECK(srow["mean"].get<double>() == 6.0);
  CHECK(srow["std_error"].get<double>() == 0.0);

  const Result g = run_cli({"mc", "--n", "40", "--d", "8", "--trials", "10", "--guard", "1000"});
  CHECK(g.code == kExitUsage);
  CHECK(g.err.find("1000") != std::string::npos);

  CHECK(run_cli({"mc", "--n", "10", "--d", "2", "--trials", "1"}).code == kExitUsage);
}

TEST_CASE("mc reruns are byte-identical apart from wall time") {
  const std::vector<std::string> args = {"mc",     "--n",      "9",    "--d",
                                         "3",      "--trials", "2000", "--seed",
                                         "7",      "--format", "json", "--compare"};
  const Result a = run_cli(args);
  const Result b = run_cli(args);
  REQUIRE(a.code == kExitOk);
  CHECK(body(a.out) == body(b.out));

  auto other = args;
  other[8] = "8";
  CHECK(body(run_cli(other).out) != body(a.out));
}

TEST_CASE("verify") {
  for (const std::string& suite : verify_suites()) {
    CAPTURE(suite);
    const Result r = run_cli({"verify", "--suite", suite, "--format", "json"});
    CHECK(r.code == kExitOk);
    const Json j = parse(r.out);
    CHECK(j["metadata"]["summary"]["passed"] == true);
    for (const auto& row : j["rows"]) REQUIRE(row["status"] != "fail");
  }
  const Json mills = parse(run_cli({"verify", "--suite", "mills", "--format", "json"}).out);
  CHECK(mills["rows"].size() == 10000);
  const Json delta = parse(run_cli({"verify", "--suite", "delta", "--format", "json"}).out);
  CHECK(delta["rows"].size() == 10000);
  const Json small = parse(
      run_cli({"verify", "--suite", "delta", "--grid-size", "50", "--format", "json"}).out);
  CHECK(small["rows"].size() == 50);
  CHECK(run_cli({"verify", "--suite", "bogus"}).code == kExitUsage);
}

TEST_CASE("text output summarises large reports") {
  const Result r = run_cli({"verify", "--suite", "mills"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("mills") != std::string::npos);
  CHECK(split_lines(r.out).size() < 60);
}

TEST_CASE("sweep") {
  const Result r = run_cli({"sweep", "--d-list", "78,100,150", "--n-over-d-list", "16,100,1000",
                            "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const Json j = parse(r.out);
  CHECK(j["rows"].size() == 27);
  for (const auto& row : j["rows"]) CHECK(row["in_band"] == true);

  CHECK(run_cli({"sweep", "--d-list", "", "--n-list", "10"}).code == kExitUsage);
  CHECK(run_cli({"sweep", "--d-list", "2"}).code == kExitUsage);
  CHECK(run_cli({"sweep", "--d-list", "2", "--n-list", "10", "--n-over-d-list", "5"}).code ==
        kExitUsage);
  CHECK(run_cli({"sweep", "--d-list", "2,x", "--n-list", "10"}).code == kExitUsage);
}

TEST_CASE("JSON round-trips byte for byte") {
  const Result r = run_cli({"exact", "--n", "20", "--d", "5", "--route", "all", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  CHECK(parse(r.out).dump(2) + "\n" == r.out);

  const Result v = run_cli({"verify", "--suite", "stirling", "--format", "json"});
  CHECK(parse(v.out).dump(2) + "\n" == v.out);
}

TEST_CASE("CSV and JSON carry the same data") {
  const std::vector<std::string> base = {"sweep", "--d-list", "2,5", "--n-list", "10,40"};
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  auto csv_args = base;
  csv_args.insert(csv_args.end(), {"--format", "csv"});
  const Json j = parse(run_cli(json_args).out);
  const Result csv = run_cli(csv_args);
  REQUIRE(csv.code == kExitOk);
  CHECK(csv.out.find('\r') == std::string::npos);

  const auto lines = split_lines(csv.out);
  REQUIRE(lines.size() == j["rows"].size() + 1);
  CHECK(lines[0] ==
        "n,d,route,log_value,log10_value,error_estimate,thm11_lower,thm11_upper,in_band");
  const auto header = split_csv(lines[0]);
  for (std::size_t i = 0; i < j["rows"].size(); ++i) {
    const auto cells = split_csv(lines[i + 1]);
    REQUIRE(cells.size() == header.size());
    const Json& row = j["rows"][i];
    for (std::size_t c = 0; c < header.size(); ++c) {
      const Json& v = row[header[c]];
      CAPTURE(header[c]);
      if (v.is_null()) {
        CHECK(cells[c].empty());
      } else if (v.is_string()) {
        CHECK(cells[c] == v.get<std::string>());
      } else if (v.is_boolean()) {
        CHECK(cells[c] == (v.get<bool>() ? "true" : "false"));
      } else {
        // 17 significant digits round-trip doubles exactly.
        CHECK(std::stod(cells[c]) == v.get<double>());
      }
    }
  }
}

TEST_CASE("--output writes the report to a file") {
  const fs::path path = temp_path("out.csv");
  const Result r = run_cli({"sweep", "--d-list", "78,100,150", "--n-over-d-list", "16,100,1000",
                            "--format", "csv", "--output", path.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  REQUIRE(fs::exists(path));
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first == "n,d,route,log_value,log10_value,error_estimate,thm11_lower,thm11_upper,in_band");
  fs::remove(path);

  CHECK(run_cli({"exact", "--n", "6", "--d", "5", "--output", "/nonexistent/dir/x.json"}).code ==
        kExitUsage);
}

TEST_CASE("config precedence: flags > file > defaults") {
  const fs::path path = temp_path("cfg.ini");
  {
    std::ofstream cfg(path);
    cfg << "format=json\nrel-tol=1e-8\nseed=5\n[mc]\ntrials=500\n";
  }
  const Result from_file =
      run_cli({"--config", path.string(), "mc", "--n", "10", "--d", "2"});
  REQUIRE(from_file.code == kExitOk);
  const Json jf = parse(from_file.out);
  CHECK(jf["metadata"]["config"]["rel_tol"].get<double>() == 1e-8);
  CHECK(jf["metadata"]["seed"] == 5);
  CHECK(jf["rows"][0]["trials"] == 500);

  const Result flags = run_cli({"--config", path.string(), "mc", "--n", "10", "--d", "2",
                                "--seed", "6", "--trials", "300", "--rel-tol", "1e-9"});
  REQUIRE(flags.code == kExitOk);
  const Json jg = parse(flags.out);
  CHECK(jg["metadata"]["config"]["rel_tol"].get<double>() == 1e-9);
  CHECK(jg["metadata"]["seed"] == 6);
  CHECK(jg["rows"][0]["trials"] == 300);

  const Result defaults = run_cli({"mc", "--n", "10", "--d", "2", "--format", "json"});
  const Json jd = parse(defaults.out);
  CHECK(jd["metadata"]["seed"] == 0);
  CHECK(jd["rows"][0]["trials"] == 10000);
  CHECK(jd["metadata"]["config"]["rel_tol"].get<double>() == 1e-10);
  fs::remove(path);

  CHECK(run_cli({"--config", "/nonexistent.ini", "exact", "--n", "6", "--d", "5"}).code ==
        kExitUsage);
}

TEST_CASE("report rendering") {
  Report r;
  r.command = "demo";
  r.rows.push_back(Json{{"a", 1}, {"b", 0.1}});
  r.rows.push_back(Json{{"a", 2}, {"c", "x"}, {"b", finite_or_null(std::nan(""))}});
  CHECK(csv_columns(r) == std::vector<std::string>{"a", "b", "c"});
  CHECK(render_csv(r) == "a,b,c\n1,0.10000000000000001,\n2,,x\n");
  CHECK(format_number(Json(3)) == "3");
  CHECK(format_number(Json(0.5)) == "0.5");
  CHECK(finite_or_null(INFINITY).is_null());
  const Json j = parse(render_json(r));
  CHECK(j.size() == 4);
  CHECK(j.contains("command"));
  CHECK(j.contains("params"));
  CHECK(j.contains("rows"));
  CHECK(j.contains("metadata"));
}

TEST_CASE("binary exit codes") {
  CHECK(run_binary("exact --n 6 --d 5").code == 0);
  CHECK(run_binary("exact --n 5 --d 5").code == 2);
  CHECK(run_binary("asymptotic --formula thm11 --n 100 --d 10").code == 2);
  CHECK(run_binary("mc --n 40 --d 8 --trials 10 --guard 1000").code == 2);
  // Far outside double-precision reach: the y-route cannot converge.
  CHECK(run_binary("exact --n 1000000000000000000 --d 900000000000000000").code == 3);
  CHECK(run_binary("verify --suite stirling").code == 0);
  CHECK(run_binary("no-such-command").code == 2);
  CHECK(run_binary("--help").code == 0);
  const Process v = run_binary("--version");
  CHECK(v.code == 0);
  CHECK(v.out.find(kVersion) != std::string::npos);
}
