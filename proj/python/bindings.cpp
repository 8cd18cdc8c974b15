#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhmcgp/bench.hpp"
#include "qhmcgp/config.hpp"
#include "qhmcgp/error.hpp"
#include "qhmcgp/normal.hpp"
#include "qhmcgp/results.hpp"
#include "qhmcgp/selftest.hpp"

namespace py = pybind11;
using namespace qhmcgp;

namespace {

Hyperparams hyper_from(const std::array<double, 3>& log_hyper) { return Hyperparams::from_array(log_hyper); }

Dataset dataset_from(const Matrix& X, const Vector& y, bool center) { return Dataset::make(X, y, center); }

py::dict report_dict(const ExperimentReport& r) {
  py::list trace;
  for (const TraceRecord& t : r.trace) {
    py::dict d;
    d["step"] = t.step;
    d["n_constraints"] = t.n_constraints;
    d["rel_error"] = t.rel_error;
    d["rel_error_chain_mean"] = t.rel_error_chain_mean;
    d["mean_post_var"] = t.mean_post_var;
    d["acceptance_rate"] = t.acceptance_rate;
    d["log_hyper"] = t.hyper.as_array();
    d["location"] = t.added_location;
    trace.append(d);
  }
  py::dict d;
  d["experiment_id"] = make_row(r).experiment_id;
  d["method"] = r.method;
  d["function"] = r.spec.function_name;
  d["rel_error"] = r.rel_error;
  d["rel_error_chain_mean"] = r.rel_error_chain_mean;
  d["mean_posterior_variance"] = r.mean_posterior_variance;
  d["wall_time_s"] = r.wall_time_s;
  d["acceptance_rate"] = r.acceptance_rate;
  d["n_constraints"] = r.n_constraints_final;
  d["log_hyper"] = r.hyper.as_array();
  d["constraint_points"] = r.constraints.points;
  d["trace"] = trace;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qhmcgp, m) {
  m.doc() = "GP regression with QHMC hyperparameter sampling and adaptive constraints";

  // Translators run most-recent first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ChainFailure>(m, "ChainFailure", PyExc_RuntimeError);

  m.def("normal_cdf", &normal_cdf, py::arg("x"));
  m.def("normal_quantile", &normal_quantile, py::arg("p"));

  m.def(
      "se_kernel",
      [](const Vector& x, const Vector& xp, const std::array<double, 3>& h, bool same_index) {
        return se_kernel(x, xp, hyper_from(h), same_index);
      },
      py::arg("x"), py::arg("x_prime"), py::arg("log_hyper"), py::arg("same_index") = false);

  m.def(
      "nll",
      [](const std::array<double, 3>& h, const Matrix& X, const Vector& y, bool center) {
        return nll(hyper_from(h), dataset_from(X, y, center));
      },
      py::arg("log_hyper"), py::arg("X"), py::arg("y"), py::arg("center") = true,
      "Negative log marginal likelihood at log-hyperparameters (log sigma, log l, log sigma_n).");
  m.def(
      "nll_grad",
      [](const std::array<double, 3>& h, const Matrix& X, const Vector& y, bool center) {
        return Vector(nll_grad(hyper_from(h), dataset_from(X, y, center)));
      },
      py::arg("log_hyper"), py::arg("X"), py::arg("y"), py::arg("center") = true,
      "Gradient of nll plus the log-space hyperprior.");
  m.def(
      "posterior",
      [](const std::array<double, 3>& h, const Matrix& X, const Vector& y, const Matrix& Xq, bool center) {
        const PosteriorSummary p = posterior(hyper_from(h), dataset_from(X, y, center), Xq);
        return py::make_tuple(p.mean, p.std);
      },
      py::arg("log_hyper"), py::arg("X"), py::arg("y"), py::arg("X_query"), py::arg("center") = true,
      "Posterior (mean, std) of the latent function.");
  m.def(
      "derivative_posterior",
      [](const std::array<double, 3>& h, const Matrix& X, const Vector& y, const Matrix& Xq, int dim, bool center) {
        const PosteriorSummary p = derivative_posterior(hyper_from(h), dataset_from(X, y, center), Xq, dim);
        return py::make_tuple(p.mean, p.std);
      },
      py::arg("log_hyper"), py::arg("X"), py::arg("y"), py::arg("X_query"), py::arg("dim"), py::arg("center") = true);

  m.def(
      "run_chain",
      [](const PotentialFn& U, const GradientFn& G, const Vector& init, double epsilon, int steps, double mu_m,
         double sigma_m, int n_samples, int burn_in, std::uint64_t seed) {
        QhmcConfig c{epsilon, steps, mu_m, sigma_m, n_samples, burn_in, seed};
        SampleChain chain;
        {
          py::gil_scoped_release release;
          chain = run_chain(
              [&](const Vector& x) {
                py::gil_scoped_acquire acquire;
                return U(x);
              },
              [&](const Vector& x) {
                py::gil_scoped_acquire acquire;
                return G(x);
              },
              init, c);
        }
        Matrix samples(static_cast<Eigen::Index>(chain.samples.size()), init.size());
        for (std::size_t i = 0; i < chain.samples.size(); ++i) {
          samples.row(static_cast<Eigen::Index>(i)) = chain.samples[i].transpose();
        }
        py::dict d;
        d["samples"] = samples;
        d["potentials"] = chain.potentials;
        d["masses"] = chain.masses;
        d["acceptance_rate"] = chain.acceptance_rate;
        return d;
      },
      py::arg("potential"), py::arg("gradient"), py::arg("init"), py::arg("epsilon") = 0.01, py::arg("steps") = 10,
      py::arg("mu_m") = 0.0, py::arg("sigma_m") = 1.0, py::arg("n_samples") = 2000, py::arg("burn_in") = 500,
      py::arg("seed") = 0);

  m.def("benchmark_target", &target, py::arg("function"), py::arg("x"));
  m.def("relative_error", &relative_error, py::arg("y_pred"), py::arg("y_true"));

  m.def(
      "resolve_config", [](const std::string& text) { return parse_config(text).to_json().dump(); },
      py::arg("text") = "", "Validate a JSON config and return the fully resolved config as JSON text.");
  m.def(
      "run_experiment",
      [](const std::string& text, std::optional<std::uint64_t> seed) {
        RunConfig cfg = parse_config(text);
        if (seed) cfg.settings.bench.seed = *seed;
        ExperimentReport r;
        {
          py::gil_scoped_release release;
          r = run_experiment(cfg.settings);
        }
        return report_dict(r);
      },
      py::arg("config") = "", py::arg("seed") = py::none(), "Run one benchmark cell described by JSON config text.");

  m.def("selftest", [] {
    std::vector<py::tuple> out;
    for (const CheckResult& r : run_selftest()) out.push_back(py::make_tuple(r.name, r.passed, r.detail));
    return out;
  });
}
