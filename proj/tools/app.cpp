#include "app.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gausspoly/errors.hpp"

namespace gausspoly::cli {

namespace {

void add_params(CLI::App* sub, std::int64_t& n, std::int64_t& d) {
  sub->add_option("--n", n, "number of points")->required();
  sub->add_option("--d", d, "dimension")->required();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expected facet counts of Gaussian polytopes", "gausspoly"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; flags override its values");
  app.set_version_flag("--version", kVersion);

  CommonOptions common;
  app.add_option("--format", common.format, "report format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("--output", common.output, "write the report here instead of stdout");
  app.add_option("--rel-tol", common.quad.rel_tol, "quadrature relative tolerance (log scale)")
      ->capture_default_str();
  app.add_option("--abs-tol", common.quad.abs_tol, "quadrature absolute tolerance")
      ->capture_default_str();
  app.add_option("--max-depth", common.quad.max_depth, "maximum step-halving levels")
      ->capture_default_str();
  app.add_option("--peak-cutoff", common.quad.peak_cutoff,
                 "drop the integrand this far (in log) below its peak")
      ->capture_default_str();
  app.add_option("--seed", common.seed, "seed for Monte Carlo commands")->capture_default_str();

  ExactOptions exact;
  auto* exact_cmd = app.add_subcommand("exact", "E f_{d-1} by quadrature");
  add_params(exact_cmd, exact.n, exact.d);
  exact_cmd->add_option("--route", exact.route, "y, u, smalldiff or all")->capture_default_str();

  AsymptoticOptions asym;
  auto* asym_cmd = app.add_subcommand("asymptotic", "asymptotic bands and leading terms");
  add_params(asym_cmd, asym.n, asym.d);
  asym_cmd->add_option("--formula", asym.formula, "thm11, cor12 or thm13")->required();
  asym_cmd->add_flag("--compare", asym.compare, "also evaluate the exact value");
  asym_cmd->add_option("--route", asym.route, "route used by --compare (auto, y, u, smalldiff)")
      ->capture_default_str();

  McOptions mc;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimates");
  add_params(mc_cmd, mc.n, mc.d);
  mc_cmd->add_option("--trials", mc.trials, "number of trials")->capture_default_str();
  mc_cmd->add_option("--method", mc.method, "hull or onedim")->capture_default_str();
  mc_cmd->add_flag("--compare", mc.compare, "z-score against the quadrature value");
  mc_cmd->add_option("--guard", mc.guard, "maximum C(n,d) for hull enumeration")
      ->capture_default_str();

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "run verification grids");
  verify_cmd->add_option("--suite", verify.suite,
                         "mills, delta, gd, beta-bounds, stirling, sandwich or all")
      ->capture_default_str();
  verify_cmd->add_option("--grid-size", verify.grid_size,
                         "points per one-dimensional grid (0 = suite default)")
      ->capture_default_str();

  const CLI::Validator non_empty(
      [](std::string& v) { return v.empty() ? std::string("empty list entry") : std::string(); },
      "NONEMPTY");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate routes over an (n, d) grid");
  sweep_cmd->add_option("--d-list", sweep.d_list, "comma-separated dimensions")
      ->delimiter(',')
      ->check(non_empty);
  sweep_cmd->add_option("--n-list", sweep.n_list, "comma-separated sample sizes")
      ->delimiter(',')
      ->check(non_empty);
  sweep_cmd->add_option("--n-over-d-list", sweep.n_over_d_list, "comma-separated n/d ratios")
      ->delimiter(',')
      ->check(non_empty);
  sweep_cmd->add_option("--routes", sweep.routes, "comma-separated routes")
      ->delimiter(',')
      ->check(non_empty);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Report report;
  try {
    if (*exact_cmd) report = cmd_exact(exact, common);
    if (*asym_cmd) report = cmd_asymptotic(asym, common);
    if (*mc_cmd) report = cmd_mc(mc, common);
    if (*verify_cmd) report = cmd_verify(verify, common);
    if (*sweep_cmd) report = cmd_sweep(sweep, common);
  } catch (const GuardExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidParams& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: precondition violated: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "error: numerical method did not converge: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  report.metadata["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string body = render(report, common.format);
  if (common.output.empty()) {
    out << body;
    out.flush();
  } else {
    std::ofstream file(common.output, std::ios::binary | std::ios::trunc);
    if (!file || !(file << body) || !file.flush()) {
      err << "error: cannot write report to '" << common.output << "'\n";
      return kExitUsage;
    }
  }
  return report.exit_code;
}

}  // namespace gausspoly::cli
