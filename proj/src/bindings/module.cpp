#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "betadelta/generate.hpp"
#include "betadelta/io.hpp"
#include "betadelta/linalg.hpp"
#include "betadelta/rng.hpp"

namespace py = pybind11;
using namespace betadelta;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse recovery with a certified link between the noise bound "
            "and the l1 penalty weight";

  py::register_exception<SingularMatrixError>(m, "SingularMatrixError");
  py::register_exception<BracketError>(m, "BracketError");
  py::register_exception<InfeasibleSupportError>(m, "InfeasibleSupportError");

  py::class_<DenseMatrix>(m, "DenseMatrix")
      .def(py::init<std::size_t, std::size_t, Vec>(), py::arg("rows"),
           py::arg("cols"), py::arg("entries"))
      .def_readonly("rows", &DenseMatrix::rows)
      .def_readonly("cols", &DenseMatrix::cols)
      .def_readonly("entries", &DenseMatrix::data)
      .def("__getitem__",
           [](const DenseMatrix& a, std::pair<std::size_t, std::size_t> ij) {
             if (ij.first >= a.rows || ij.second >= a.cols) {
               throw py::index_error();
             }
             return a(ij.first, ij.second);
           });

  py::class_<SensingProblem>(m, "SensingProblem")
      .def_readonly("A", &SensingProblem::A)
      .def_readonly("b", &SensingProblem::b)
      .def_readonly("x_true", &SensingProblem::x_true)
      .def_readonly("delta", &SensingProblem::delta)
      .def_readonly("sigma", &SensingProblem::sigma)
      .def_readonly("sigma_w", &SensingProblem::sigma_w)
      .def_readonly("seed", &SensingProblem::seed);

  py::class_<SparseSolution>(m, "SparseSolution")
      .def_readonly("x", &SparseSolution::x)
      .def_readonly("support", &SparseSolution::support)
      .def_readonly("k", &SparseSolution::k)
      .def_readonly("residual_norm", &SparseSolution::residual_norm)
      .def_readonly("kkt", &SparseSolution::kkt)
      .def_readonly("iterations", &SparseSolution::iterations)
      .def_readonly("converged", &SparseSolution::converged);

  py::class_<SignVector>(m, "SignVector")
      .def(py::init([](Vec values) {
             SignVector c;
             c.values = std::move(values);
             return c;
           }),
           py::arg("values"))
      .def_readonly("values", &SignVector::values);

  py::enum_<LpnStatus>(m, "LpnStatus")
      .value("OK", LpnStatus::kOk)
      .value("TRIVIAL_ZERO", LpnStatus::kTrivialZero)
      .value("NOISELESS", LpnStatus::kNoiseless);

  py::class_<LpnResult>(m, "LpnResult")
      .def_readonly("solution", &LpnResult::solution)
      .def_readonly("beta_star", &LpnResult::beta_star)
      .def_readonly("boundary_gap", &LpnResult::boundary_gap)
      .def_readonly("beta_low", &LpnResult::beta_low)
      .def_readonly("beta_high", &LpnResult::beta_high)
      .def_readonly("status", &LpnResult::status)
      .def_readonly("probes", &LpnResult::probes)
      .def_readonly("converged", &LpnResult::converged);

  py::class_<BetaBounds>(m, "BetaBounds")
      .def_readonly("lower", &BetaBounds::lower)
      .def_readonly("upper", &BetaBounds::upper)
      .def_readonly("lambda_max", &BetaBounds::lambda_max)
      .def_readonly("lambda_min_nonzero", &BetaBounds::lambda_min_nonzero)
      .def_readonly("k", &BetaBounds::k)
      .def_readonly("m", &BetaBounds::m)
      .def_readonly("delta", &BetaBounds::delta);

  py::class_<EqualityResult>(m, "EqualityResult")
      .def_readonly("beta", &EqualityResult::beta)
      .def_readonly("x_bar", &EqualityResult::x_bar)
      .def_readonly("sign_consistent", &EqualityResult::sign_consistent);

  py::class_<DualScan>(m, "DualScan")
      .def_readonly("betas", &DualScan::betas)
      .def_readonly("g_values", &DualScan::g_values)
      .def_readonly("primal_l1", &DualScan::primal_l1)
      .def_readonly("beta_best", &DualScan::beta_best)
      .def_readonly("best_index", &DualScan::best_index)
      .def_readonly("gap", &DualScan::gap)
      .def_readonly("weak_duality_violations", &DualScan::weak_duality_violations)
      .def_readonly("trivial", &DualScan::trivial)
      .def_readonly("lpn", &DualScan::lpn)
      .def_readonly("qp_residuals", &DualScan::qp_residuals)
      .def_readonly("qp_support_sizes", &DualScan::qp_support_sizes);

  py::class_<TrialParams>(m, "TrialParams")
      .def(py::init([](std::size_t n, std::size_t m, std::size_t k, double sigma,
                       double sigma_w, std::string label) {
             return TrialParams{n, m, k, sigma, sigma_w, std::move(label)};
           }),
           py::arg("n") = 256, py::arg("m") = 100, py::arg("k") = 24,
           py::arg("sigma") = 1.0, py::arg("sigma_w") = 0.15, py::arg("label") = "")
      .def_readonly("n", &TrialParams::n)
      .def_readonly("m", &TrialParams::m)
      .def_readonly("k", &TrialParams::k)
      .def_readonly("sigma", &TrialParams::sigma)
      .def_readonly("sigma_w", &TrialParams::sigma_w)
      .def_readonly("label", &TrialParams::label);

  py::class_<TrialReport>(m, "TrialReport")
      .def_readonly("seed", &TrialReport::seed)
      .def_readonly("delta", &TrialReport::delta)
      .def_readonly("betas", &TrialReport::betas)
      .def_readonly("g_values", &TrialReport::g_values)
      .def_readonly("qp_errors", &TrialReport::qp_errors)
      .def_readonly("qp_residuals", &TrialReport::qp_residuals)
      .def_readonly("lpn_l1", &TrialReport::lpn_l1)
      .def_readonly("lpn_error", &TrialReport::lpn_error)
      .def_readonly("beta_star", &TrialReport::beta_star)
      .def_readonly("beta_best", &TrialReport::beta_best)
      .def_readonly("gap", &TrialReport::gap)
      .def_readonly("boundary_gap", &TrialReport::boundary_gap)
      .def_readonly("bounds_exact", &TrialReport::bounds_exact)
      .def_readonly("bounds_gaussian", &TrialReport::bounds_gaussian)
      .def_readonly("best_in_bounds", &TrialReport::best_in_bounds)
      .def_readonly("x_true", &TrialReport::x_true)
      .def_readonly("x_lpn", &TrialReport::x_lpn);

  m.def("generate_gaussian_matrix", &generate_gaussian_matrix, py::arg("m"),
        py::arg("n"), py::arg("sigma"), py::arg("seed"));
  m.def("generate_spike_signal", &generate_spike_signal, py::arg("n"), py::arg("k"),
        py::arg("seed"));
  m.def("generate_problem", &generate_problem, py::arg("n"), py::arg("m"),
        py::arg("k"), py::arg("sigma"), py::arg("sigma_w"), py::arg("seed"));

  m.def("gram", &gram);
  m.def("symmetric_eigenvalues", &symmetric_eigenvalues);
  m.def("solve_spd", &solve_spd);

  m.def("soft_threshold", &soft_threshold, py::arg("v"), py::arg("tau"));
  m.def("beta_max", &beta_max, py::arg("A"), py::arg("b"));
  m.def("qp_objective", &qp_objective, py::arg("A"), py::arg("b"), py::arg("x"),
        py::arg("beta"));
  m.def("kkt_residual", &kkt_residual, py::arg("A"), py::arg("b"), py::arg("x"),
        py::arg("beta"));
  m.def(
      "solve_qp",
      [](const DenseMatrix& A, const Vec& b, double beta, double tol,
         std::size_t max_iter) {
        QpConfig cfg;
        cfg.beta = beta;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        return solve_qp(A, b, cfg);
      },
      py::arg("A"), py::arg("b"), py::arg("beta"), py::arg("tol") = 1e-8,
      py::arg("max_iter") = 100000);
  m.def(
      "residual_at_beta",
      [](const DenseMatrix& A, const Vec& b, double beta) {
        return residual_at_beta(A, b, beta);
      },
      py::arg("A"), py::arg("b"), py::arg("beta"));
  m.def(
      "solve_lpn",
      [](const DenseMatrix& A, const Vec& b, double delta) {
        return solve_lpn(A, b, delta);
      },
      py::arg("A"), py::arg("b"), py::arg("delta"));

  m.def("beta_upper", &beta_upper, py::arg("lambda_max"), py::arg("k"), py::arg("delta"));
  m.def("beta_lower", &beta_lower, py::arg("lambda_min_nonzero"), py::arg("m"),
        py::arg("delta"));
  m.def("exact_bounds", &exact_bounds, py::arg("A_bar"), py::arg("delta"));
  m.def(
      "gaussian_eigen_estimates",
      [](std::size_t m_, double sigma, double gamma) {
        const EigenEstimates est = gaussian_eigen_estimates(m_, sigma, gamma);
        return std::make_pair(est.lambda_min, est.lambda_max);
      },
      py::arg("m"), py::arg("sigma"), py::arg("gamma"));
  m.def("gaussian_beta_interval", &gaussian_beta_interval, py::arg("m"), py::arg("k"),
        py::arg("sigma"), py::arg("delta"));
  m.def("beta_equality", &beta_equality, py::arg("A_bar"), py::arg("b"), py::arg("c"),
        py::arg("delta"));
  m.def("residual_eigen_coefficients", &residual_eigen_coefficients, py::arg("A_bar"),
        py::arg("residual"));

  m.def(
      "dual_value",
      [](const DenseMatrix& A, const Vec& b, double delta, double beta) {
        return dual_value(A, b, delta, beta);
      },
      py::arg("A"), py::arg("b"), py::arg("delta"), py::arg("beta"));
  m.def(
      "scan_dual",
      [](const DenseMatrix& A, const Vec& b, double delta, const Vec& grid) {
        return scan_dual(A, b, delta, grid);
      },
      py::arg("A"), py::arg("b"), py::arg("delta"), py::arg("beta_grid"));
  m.def("check_boundary", &check_boundary, py::arg("A"), py::arg("b"),
        py::arg("delta"), py::arg("x"));
  m.def("log_space", &log_space, py::arg("lo"), py::arg("hi"), py::arg("points"));

  m.def("normalized_error", &normalized_error, py::arg("x_true"), py::arg("x_hat"));
  m.def(
      "run_trial",
      [](const TrialParams& params, const Vec& grid, std::uint64_t seed) {
        return run_trial(params, grid, seed);
      },
      py::arg("params"), py::arg("beta_grid"), py::arg("seed"));
  m.def(
      "make_beta_grid",
      [](const DenseMatrix& A, const Vec& b, std::size_t points, double min_factor,
         double max_factor) {
        return make_beta_grid(A, b, GridSpec{points, min_factor, max_factor});
      },
      py::arg("A"), py::arg("b"), py::arg("points") = 100,
      py::arg("min_factor") = 1e-4, py::arg("max_factor") = 1.0);
  m.def("derive_seed_for_trial",
        [](std::uint64_t master, std::uint64_t index) {
          return derive_seed(master, index);
        });
}
