#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "gausspoly/betadist.hpp"
#include "gausspoly/errors.hpp"
#include "gausspoly/expectation.hpp"
#include "gausspoly/mcgeom.hpp"
#include "gausspoly/quadrature.hpp"
#include "gausspoly/specfun.hpp"

namespace py = pybind11;
using namespace gausspoly;

namespace {

QuadConfig make_config(double rel_tol, double abs_tol, int max_depth, double peak_cutoff) {
  QuadConfig cfg{rel_tol, abs_tol, max_depth, peak_cutoff};
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Expected facet counts of Gaussian polytopes: special functions, quadrature routes, "
            "asymptotic bands and Monte Carlo.";

  auto domain_error = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InvalidParams>(m, "InvalidParams", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", domain_error.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_RuntimeError);
  py::register_exception<GuardExceeded>(m, "GuardExceeded", PyExc_RuntimeError);

  // Special functions (Phi is the CDF of N(0, 1/2)).
  m.def("erfc", &specfun::erfc, py::arg("x"));
  m.def("log_erfc", &specfun::log_erfc, py::arg("x"));
  m.def("phi_cap", &specfun::phi_cap, py::arg("y"));
  m.def("log_phi_cap", &specfun::log_phi_cap, py::arg("y"));
  m.def("log_phi_lower", &specfun::log_phi_lower, py::arg("y"));
  m.def("phi_cap_inv", &specfun::phi_cap_inv, py::arg("p"));
  m.def("phi_cap_inv_log", &specfun::phi_cap_inv_log, py::arg("log_p"));
  m.def("mills_theta", [](double z) { return specfun::mills_theta(z).theta; }, py::arg("z"));
  m.def("delta_of", [](double u) { return specfun::delta_of(u).delta; }, py::arg("u"));
  m.def("log_g", &specfun::log_g, py::arg("u"), py::arg("d"));

  // Beta distribution in the reversed convention: (alpha, beta) is Beta(beta, alpha).
  m.def("log_gamma", &betadist::log_gamma, py::arg("x"));
  m.def("log_binomial", &betadist::log_binomial, py::arg("n"), py::arg("k"));
  m.def(
      "beta_cdf",
      [](double u, double alpha, double beta) { return betadist::beta_cdf(u, {alpha, beta}); },
      py::arg("u"), py::arg("alpha"), py::arg("beta"));
  m.def(
      "log_beta_cdf",
      [](double u, double alpha, double beta) { return betadist::log_beta_cdf(u, {alpha, beta}); },
      py::arg("u"), py::arg("alpha"), py::arg("beta"));

  py::class_<QuadConfig>(m, "QuadConfig")
      .def(py::init(&make_config), py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-300,
           py::arg("max_depth") = 60, py::arg("peak_cutoff") = 60.0)
      .def_readonly("rel_tol", &QuadConfig::rel_tol)
      .def_readonly("abs_tol", &QuadConfig::abs_tol)
      .def_readonly("max_depth", &QuadConfig::max_depth)
      .def_readonly("peak_cutoff", &QuadConfig::peak_cutoff);

  py::class_<expectation::FacetExpectation>(m, "FacetExpectation")
      .def_property_readonly("n", [](const expectation::FacetExpectation& f) { return f.params.n; })
      .def_property_readonly("d", [](const expectation::FacetExpectation& f) { return f.params.d; })
      .def_property_readonly("route",
                             [](const expectation::FacetExpectation& f) {
                               return std::string(expectation::to_string(f.route));
                             })
      .def_property_readonly(
          "log_value", [](const expectation::FacetExpectation& f) { return f.value.log_value; })
      .def_property_readonly(
          "log10_value",
          [](const expectation::FacetExpectation& f) { return f.value.log10_value(); })
      .def_property_readonly(
          "value", [](const expectation::FacetExpectation& f) { return f.value.value(); },
          "Decimal value, or None when |log_value| >= 700.")
      .def_readonly("error_estimate", &expectation::FacetExpectation::error_estimate)
      .def("__repr__", [](const expectation::FacetExpectation& f) {
        return "FacetExpectation(n=" + std::to_string(f.params.n) +
               ", d=" + std::to_string(f.params.d) + ", route='" +
               std::string(expectation::to_string(f.route)) +
               "', log_value=" + py::repr(py::float_(f.value.log_value)).cast<std::string>() + ")";
      });

  py::class_<expectation::Band>(m, "Band")
      .def_readonly("log_lower", &expectation::Band::log_lower)
      .def_readonly("log_upper", &expectation::Band::log_upper)
      .def_property_readonly(
          "source",
          [](const expectation::Band& b) { return std::string(expectation::to_string(b.source)); })
      .def("contains", &expectation::Band::contains, py::arg("log_value"))
      .def("__repr__", [](const expectation::Band& b) {
        return "Band(" + py::repr(py::float_(b.log_lower)).cast<std::string>() + ", " +
               py::repr(py::float_(b.log_upper)).cast<std::string>() + ")";
      });

  const auto release = py::call_guard<py::gil_scoped_release>();
  const auto route = [&](const char* name, auto fn) {
    m.def(
        name,
        [fn](std::int64_t n, std::int64_t d, const QuadConfig& cfg) { return fn({n, d}, cfg); },
        py::arg("n"), py::arg("d"), py::arg("config") = QuadConfig{}, release);
  };
  route("ef_quad_y", &expectation::ef_quad_y);
  route("ef_quad_u", &expectation::ef_quad_u);
  route("ef_quad_smalldiff", &expectation::ef_quad_smalldiff);

  m.def(
      "e_g_quadrature",
      [](std::int64_t n, std::int64_t d, const QuadConfig& cfg) {
        return expectation::e_g_quadrature({n, d}, cfg).log_value;
      },
      py::arg("n"), py::arg("d"), py::arg("config") = QuadConfig{}, release,
      "ln E g_d(U) by quadrature.");
  m.def(
      "lemma5_sandwich",
      [](std::int64_t n, std::int64_t d) { return expectation::lemma5_sandwich({n, d}); },
      py::arg("n"), py::arg("d"));
  m.def(
      "thm11_band", [](std::int64_t n, std::int64_t d) { return expectation::thm11_band({n, d}); },
      py::arg("n"), py::arg("d"));
  m.def(
      "cor12_leading",
      [](std::int64_t n, std::int64_t d) { return expectation::cor12_leading({n, d}).log_value; },
      py::arg("n"), py::arg("d"));
  m.def(
      "thm13_leading",
      [](std::int64_t n, std::int64_t d) { return expectation::thm13_leading({n, d}).log_value; },
      py::arg("n"), py::arg("d"));
  m.def(
      "onedim_identity_mc",
      [](std::int64_t n, std::int64_t d, std::int64_t trials, std::uint64_t seed) {
        return expectation::onedim_identity_mc({n, d}, trials, seed);
      },
      py::arg("n"), py::arg("d"), py::arg("trials"), py::arg("seed") = 0, release);

  py::class_<mcgeom::McEstimate>(m, "McEstimate")
      .def_readonly("mean", &mcgeom::McEstimate::mean)
      .def_readonly("std_error", &mcgeom::McEstimate::std_error)
      .def_readonly("trials", &mcgeom::McEstimate::trials)
      .def_readonly("seed", &mcgeom::McEstimate::seed)
      .def_readonly("degenerate_trials", &mcgeom::McEstimate::degenerate_trials)
      .def("__repr__", [](const mcgeom::McEstimate& e) {
        return "McEstimate(mean=" + py::repr(py::float_(e.mean)).cast<std::string>() +
               ", std_error=" + py::repr(py::float_(e.std_error)).cast<std::string>() +
               ", trials=" + std::to_string(e.trials) + ")";
      });

  m.def(
      "ef_mc",
      [](std::int64_t n, std::int64_t d, std::int64_t trials, std::uint64_t seed,
         std::int64_t guard) { return mcgeom::ef_mc({n, d}, trials, seed, guard); },
      py::arg("n"), py::arg("d"), py::arg("trials"), py::arg("seed") = 0,
      py::arg("subset_guard") = mcgeom::kDefaultSubsetGuard, release);
  m.def(
      "facet_count",
      [](const std::vector<std::vector<double>>& points, std::int64_t guard) -> py::object {
        if (points.empty()) throw InvalidParams("facet_count needs at least one point");
        mcgeom::PointCloud cloud;
        cloud.n = static_cast<int>(points.size());
        cloud.d = static_cast<int>(points.front().size());
        for (const auto& p : points) {
          if (static_cast<int>(p.size()) != cloud.d) {
            throw InvalidParams("facet_count: all points must have the same dimension");
          }
          cloud.coords.insert(cloud.coords.end(), p.begin(), p.end());
        }
        if (cloud.d < 1 || cloud.n < cloud.d + 1) {
          throw InvalidParams("facet_count requires n >= d + 1 and d >= 1");
        }
        const mcgeom::FacetCount fc = mcgeom::facet_count(cloud, guard);
        if (fc.degenerate) return py::none();
        return py::int_(fc.count);
      },
      py::arg("points"), py::arg("subset_guard") = mcgeom::kDefaultSubsetGuard,
      "Facet count of the hull of `points` (rows), or None for a degenerate cloud.");
}
