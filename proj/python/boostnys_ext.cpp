#include "bnys/error.hpp"
#include "bnys/harness.hpp"
#include "bnys/kernels.hpp"
#include "bnys/linalg.hpp"
#include "bnys/methods.hpp"
#include "bnys/nystrom.hpp"
#include "bnys/weighting.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>

namespace py = pybind11;

namespace {

bnys::WeightScheme make_scheme(const std::string& kind, double eta, const std::vector<double>& grid) {
  if (kind == "uniform") return bnys::WeightScheme::uniform();
  if (kind == "exponential") return bnys::WeightScheme::exponential(eta);
  if (kind == "ridge") return bnys::WeightScheme::ridge(grid.empty() ? bnys::WeightScheme::default_lambda_grid() : grid);
  throw bnys::Error(bnys::ErrorCode::InvalidConfig, "scheme must be uniform, exponential or ridge");
}

bnys::KernelSpec make_kernel(const std::string& kind, double sigma) {
  if (kind == "gaussian") return bnys::KernelSpec::gaussian(sigma);
  if (kind == "linear") return bnys::KernelSpec::linear();
  throw bnys::Error(bnys::ErrorCode::InvalidConfig, "kernel must be gaussian or linear");
}

py::dict result_dict(const bnys::RunResult& r) {
  py::list learners;
  for (const auto& f : r.model.learners) learners.append(py::cast(f, py::return_value_policy::copy));
  py::list trace;
  for (const auto& pt : r.trace.points) trace.append(py::make_tuple(pt.learners, pt.rel_error, pt.seconds));
  py::dict out;
  out["learners"] = learners;
  out["weights"] = r.model.weights;
  out["trace"] = trace;
  out["v1"] = r.v1;
  out["v2"] = r.v2;
  out["residual_norms"] = r.residual_norms;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Standard, ensemble and boosting Nystrom approximation of kernel matrices";

  py::register_exception<bnys::Error>(m, "BoostnysError", PyExc_ValueError);

  m.def("frobenius_norm", &bnys::frobenius_norm, py::arg("m"));
  m.def("relative_error", &bnys::relative_error, py::arg("approx"), py::arg("target"));
  m.def(
      "sym_eig",
      [](const bnys::DenseMatrix& a) {
        auto e = bnys::sym_eig(a);
        return std::make_pair(std::move(e.values), std::move(e.vectors));
      },
      py::arg("a"), "Returns (values descending, vectors).");
  m.def("pinv_rank_k", &bnys::pinv_rank_k, py::arg("w"), py::arg("k"), py::arg("tol") = bnys::kDefaultPinvTol);
  m.def("ridge_solve", &bnys::ridge_solve, py::arg("a"), py::arg("b"), py::arg("lam"));

  m.def(
      "gram_full",
      [](const bnys::DenseMatrix& points, const std::string& kernel, double sigma) {
        return bnys::gram_full(make_kernel(kernel, sigma), bnys::Dataset{points});
      },
      py::arg("points"), py::arg("kernel") = "gaussian", py::arg("sigma") = 1.0);
  m.def(
      "standardize_columns",
      [](const bnys::DenseMatrix& points) { return bnys::standardize_columns(bnys::Dataset{points}).points; },
      py::arg("points"));

  py::class_<bnys::NystromFactor>(m, "NystromFactor")
      .def_readonly("indices", &bnys::NystromFactor::indices)
      .def_readonly("c", &bnys::NystromFactor::c)
      .def_readonly("wk_pinv", &bnys::NystromFactor::wk_pinv)
      .def_readonly("k", &bnys::NystromFactor::k)
      .def("reconstruct", [](const bnys::NystromFactor& f) { return bnys::reconstruct_full(f); })
      .def("block", &bnys::evaluate_block, py::arg("rows"), py::arg("cols"));

  m.def(
      "standard_nystrom",
      [](const bnys::DenseMatrix& gram, const bnys::IndexSet& indices, Eigen::Index k) {
        bnys::MatrixKernel kernel(gram);
        return bnys::standard_nystrom(kernel.columns(indices), indices, k);
      },
      py::arg("gram"), py::arg("indices"), py::arg("k"), "Nystrom factor of a Gram matrix from the given columns.");

  m.def(
      "ensemble_nystrom",
      [](const bnys::DenseMatrix& gram, Eigen::Index m_cols, Eigen::Index k, Eigen::Index p, const std::string& scheme,
         Eigen::Index v1, Eigen::Index v2, double eta, const std::vector<double>& lambda_grid, std::uint64_t seed) {
        bnys::MatrixKernel kernel(gram);
        bnys::EnsembleConfig cfg;
        cfg.m = m_cols;
        cfg.k = k;
        cfg.p = p;
        cfg.v1 = v1;
        cfg.v2 = v2;
        cfg.scheme = make_scheme(scheme, eta, lambda_grid);
        cfg.seed = seed;
        return result_dict(bnys::ensemble_nystrom(kernel, cfg, &kernel.matrix()));
      },
      py::arg("gram"), py::arg("m"), py::arg("k"), py::arg("p"), py::arg("scheme") = "ridge", py::arg("v1") = 20,
      py::arg("v2") = 20, py::arg("eta") = 0.01, py::arg("lambda_grid") = std::vector<double>{},
      py::arg("seed") = 0);

  m.def(
      "boosting_nystrom",
      [](const bnys::DenseMatrix& gram, const std::string& method, Eigen::Index m_cols, Eigen::Index k,
         Eigen::Index p, Eigen::Index s, Eigen::Index v1, Eigen::Index v2, double eta,
         const std::vector<double>& lambda_grid, std::uint64_t seed) {
        bnys::MatrixKernel kernel(gram);
        const auto name = bnys::parse_method_name(method);
        auto kind_name = [](bnys::WeightKind k) {
          switch (k) {
            case bnys::WeightKind::Uniform: return "uniform";
            case bnys::WeightKind::Exponential: return "exponential";
            case bnys::WeightKind::Ridge: return "ridge";
          }
          return "uniform";
        };
        bnys::BoostConfig cfg;
        cfg.m = m_cols;
        cfg.k = k;
        cfg.p = p;
        cfg.s = s;
        cfg.v1 = v1;
        cfg.v2 = v2;
        cfg.boost_scheme = make_scheme(kind_name(name.boost), eta, lambda_grid);
        cfg.strong_scheme = make_scheme(kind_name(name.strong), eta, lambda_grid);
        cfg.clustering = name.clustering;
        cfg.seed = seed;
        return result_dict(bnys::boosting_nystrom(kernel, cfg, &kernel.matrix()));
      },
      py::arg("gram"), py::arg("method") = "URB-mean", py::arg("m") = 10, py::arg("k") = 10, py::arg("p") = 10,
      py::arg("s") = 100, py::arg("v1") = 20, py::arg("v2") = 20, py::arg("eta") = 0.01,
      py::arg("lambda_grid") = std::vector<double>{}, py::arg("seed") = 0);

  m.def(
      "parse_method_name",
      [](const std::string& name) {
        const auto parsed = bnys::parse_method_name(name);
        auto w = [](bnys::WeightKind k) {
          return k == bnys::WeightKind::Uniform ? "uniform" : k == bnys::WeightKind::Exponential ? "exponential" : "ridge";
        };
        const char* c = parsed.clustering == bnys::ClusteringKind::KMeans ? "kmeans"
                        : parsed.clustering == bnys::ClusteringKind::PAM  ? "pam"
                                                                          : "sf";
        return py::make_tuple(w(parsed.boost), w(parsed.strong), c);
      },
      py::arg("name"));

  m.def(
      "welch_t_test",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const auto r = bnys::welch_t_test(a, b);
        return py::make_tuple(r.t, r.df, r.p_value);
      },
      py::arg("a"), py::arg("b"), "One-sided Welch test of mean(a) < mean(b); returns (t, df, p).");

  m.def(
      "run_experiment",
      [](const std::string& config_text, const std::string& out_dir, std::size_t workers) {
        const auto spec = bnys::parse_experiment(config_text);
        const auto result = out_dir.empty() ? bnys::run_experiment(spec, workers)
                                            : bnys::run_experiment(spec, std::filesystem::path(out_dir), workers);
        return bnys::format_summary_csv(result.summary);
      },
      py::arg("config_text"), py::arg("out_dir") = "", py::arg("workers") = 1,
      "Runs an experiment from key = value text; returns the summary CSV.");
}
