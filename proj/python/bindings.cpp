#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "dualiv/bounds.hpp"
#include "dualiv/error.hpp"
#include "dualiv/estimators.hpp"
#include "dualiv/inference.hpp"
#include "dualiv/io.hpp"
#include "dualiv/simulation.hpp"

namespace py = pybind11;
using namespace dualiv;

namespace {

template <typename T>
std::vector<T> to_vector(const py::array_t<T, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return std::vector<T>(a.data(), a.data() + a.size());
}

Sample make_sample(const py::array_t<double, py::array::c_style | py::array::forcecast>& y,
                   const py::array_t<int, py::array::c_style | py::array::forcecast>& d,
                   const py::array_t<int, py::array::c_style | py::array::forcecast>& z,
                   const py::array_t<int, py::array::c_style | py::array::forcecast>& w) {
  return Sample::validate(to_vector(y), to_vector(d), to_vector(z), to_vector(w));
}

py::array_t<double> as_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

ConditionOn condition_from(const std::string& name) { return parse_condition_on(name); }

EstimatorOptions options_from(const std::string& condition_on, double relevance_tol) {
  return EstimatorOptions{relevance_tol, condition_from(condition_on)};
}

Design design_from(const std::string& name, double k) {
  if (name == "baseline") return Design::baseline();
  if (name == "threshold") return Design::threshold(k);
  throw Error(ErrorCode::InvalidConfig, "design must be 'baseline' or 'threshold'");
}

const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Input: return "input";
    case ErrorCategory::Estimation: return "estimation";
    case ErrorCategory::Config: return "config";
  }
  return "unknown";
}

}  // namespace

PYBIND11_MODULE(_dualiv, m) {
  m.doc() = "LATE estimation with an imperfect instrument pair";

  py::exception<Error> error_type(m, "DualivError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object cls = py::module_::import("dualiv._dualiv").attr("DualivError");
      py::object exc = cls(e.what());
      exc.attr("name") = std::string(error_name(e.code()));
      exc.attr("subcode") = static_cast<int>(e.code());
      exc.attr("category") = category_name(e.category());
      exc.attr("exit_status") = exit_status(e.category());
      const ErrorDetail& d = e.detail();
      exc.attr("z") = d.z ? py::cast(*d.z) : py::none();
      exc.attr("w") = d.w ? py::cast(*d.w) : py::none();
      exc.attr("row") = d.row ? py::cast(*d.row) : py::none();
      exc.attr("column") = d.column.empty() ? py::none() : py::cast(d.column);
      exc.attr("component") = d.component.empty() ? py::none() : py::cast(d.component);
      PyErr_SetObject(cls.ptr(), exc.ptr());
    }
  });

  py::class_<SubgroupProbs>(m, "SubgroupProbs")
      .def_readonly("p_at", &SubgroupProbs::p_at)
      .def_readonly("p_nt", &SubgroupProbs::p_nt)
      .def_readonly("p_cp", &SubgroupProbs::p_cp)
      .def_readonly("w", &SubgroupProbs::w)
      .def("__repr__", [](const SubgroupProbs& p) {
        return "SubgroupProbs(p_at=" + std::to_string(p.p_at) + ", p_nt=" +
               std::to_string(p.p_nt) + ", p_cp=" + std::to_string(p.p_cp) + ")";
      });

  py::class_<DirectEffects>(m, "DirectEffects")
      .def_readonly("rho1", &DirectEffects::rho1)
      .def_readonly("rho0", &DirectEffects::rho0);

  py::class_<ComplierMeans>(m, "ComplierMeans")
      .def_readonly("treated", &ComplierMeans::treated)
      .def_readonly("untreated", &ComplierMeans::untreated);

  py::class_<LateComponents>(m, "LateComponents")
      .def_readonly("iv", &LateComponents::iv)
      .def_readonly("iv1", &LateComponents::iv1)
      .def_readonly("rho", &LateComponents::rho)
      .def_readonly("w1", &LateComponents::w1)
      .def_readonly("w0", &LateComponents::w0)
      .def_readonly("late", &LateComponents::late)
      .def_readonly("probs_w1", &LateComponents::probs_w1)
      .def_readonly("probs_w0", &LateComponents::probs_w0)
      .def_readonly("z_bar", &LateComponents::z_bar)
      .def_readonly("r1", &LateComponents::r1)
      .def_readonly("r0", &LateComponents::r0)
      .def_readonly("n", &LateComponents::n);

  py::class_<InferenceResult>(m, "InferenceResult")
      .def_readonly("level", &InferenceResult::level)
      .def_readonly("se_late", &InferenceResult::se_late)
      .def_readonly("se_rho1", &InferenceResult::se_rho1)
      .def_readonly("se_rho0", &InferenceResult::se_rho0)
      .def_readonly("se_iv1", &InferenceResult::se_iv1)
      .def_readonly("se_iv", &InferenceResult::se_iv)
      .def_property_readonly("ci_late", [](const InferenceResult& r) {
        return py::make_tuple(r.ci_late.lower, r.ci_late.upper);
      })
      .def_property_readonly("ci_rho1", [](const InferenceResult& r) {
        return py::make_tuple(r.ci_rho1.lower, r.ci_rho1.upper);
      })
      .def_property_readonly("ci_rho0", [](const InferenceResult& r) {
        return py::make_tuple(r.ci_rho0.lower, r.ci_rho0.upper);
      });

  py::class_<BoundsResult>(m, "BoundsResult")
      .def_readonly("lower", &BoundsResult::lower)
      .def_readonly("upper", &BoundsResult::upper)
      .def_readonly("center", &BoundsResult::center)
      .def_readonly("half_width", &BoundsResult::half_width);

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("bias", &Metrics::bias)
      .def_readonly("sd", &Metrics::sd)
      .def_readonly("rmse", &Metrics::rmse)
      .def_readonly("mad", &Metrics::mad);

  py::class_<SimReport>(m, "SimReport")
      .def_readonly("theta_zw", &SimReport::theta_zw)
      .def_readonly("theta_z", &SimReport::theta_z)
      .def_readonly("rho1_hat", &SimReport::rho1_hat)
      .def_readonly("rho0_hat", &SimReport::rho0_hat)
      .def_readonly("theta0", &SimReport::theta0)
      .def_readonly("failed_reps", &SimReport::failed_reps)
      .def("to_json", [](const SimReport& r) { return sim_report_to_json(r); });

  m.def(
      "late_estimate",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> y,
         py::array_t<int, py::array::c_style | py::array::forcecast> d,
         py::array_t<int, py::array::c_style | py::array::forcecast> z,
         py::array_t<int, py::array::c_style | py::array::forcecast> w,
         const std::string& condition_on, double relevance_tol) {
        return late_estimate(make_sample(y, d, z, w), options_from(condition_on, relevance_tol));
      },
      py::arg("y"), py::arg("d"), py::arg("z"), py::arg("w"), py::arg("condition_on") = "w1",
      py::arg("relevance_tol") = kDefaultRelevanceTol);

  m.def("complier_means", &complier_means, py::arg("fit"),
        py::arg("relevance_tol") = kDefaultRelevanceTol);

  m.def(
      "infer",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> y,
         py::array_t<int, py::array::c_style | py::array::forcecast> d,
         py::array_t<int, py::array::c_style | py::array::forcecast> z,
         py::array_t<int, py::array::c_style | py::array::forcecast> w,
         const std::string& condition_on, double level, double relevance_tol) {
        const Sample s = make_sample(y, d, z, w);
        const LateComponents fit = late_estimate(s, options_from(condition_on, relevance_tol));
        return py::make_tuple(fit, standard_errors(influence_set(s, fit, relevance_tol), fit, level));
      },
      py::arg("y"), py::arg("d"), py::arg("z"), py::arg("w"), py::arg("condition_on") = "w1",
      py::arg("level") = 0.95, py::arg("relevance_tol") = kDefaultRelevanceTol);

  m.def(
      "influence",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> y,
         py::array_t<int, py::array::c_style | py::array::forcecast> d,
         py::array_t<int, py::array::c_style | py::array::forcecast> z,
         py::array_t<int, py::array::c_style | py::array::forcecast> w,
         const std::string& condition_on, double relevance_tol) {
        const Sample s = make_sample(y, d, z, w);
        const LateComponents fit = late_estimate(s, options_from(condition_on, relevance_tol));
        const InfluenceSet phi = influence_set(s, fit, relevance_tol);
        py::dict out;
        out["iv1"] = as_array(phi.phi_iv1);
        out["w1"] = as_array(phi.phi_w1);
        out["w0"] = as_array(phi.phi_w0);
        out["rho1"] = as_array(phi.phi_rho1);
        out["rho0"] = as_array(phi.phi_rho0);
        out["late"] = as_array(phi.phi_late);
        out["iv"] = as_array(phi.phi_iv);
        return out;
      },
      py::arg("y"), py::arg("d"), py::arg("z"), py::arg("w"), py::arg("condition_on") = "w1",
      py::arg("relevance_tol") = kDefaultRelevanceTol);

  m.def(
      "late_bounds",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> y,
         py::array_t<int, py::array::c_style | py::array::forcecast> d,
         py::array_t<int, py::array::c_style | py::array::forcecast> z,
         py::array_t<int, py::array::c_style | py::array::forcecast> w, double k1, double k0,
         const std::string& condition_on, double relevance_tol) {
        return late_bounds(make_sample(y, d, z, w), HeterogeneityCaps{k1, k0},
                           options_from(condition_on, relevance_tol));
      },
      py::arg("y"), py::arg("d"), py::arg("z"), py::arg("w"), py::arg("k1") = 0.0,
      py::arg("k0") = 0.0, py::arg("condition_on") = "w1",
      py::arg("relevance_tol") = kDefaultRelevanceTol);

  m.def(
      "estimate_report",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> y,
         py::array_t<int, py::array::c_style | py::array::forcecast> d,
         py::array_t<int, py::array::c_style | py::array::forcecast> z,
         py::array_t<int, py::array::c_style | py::array::forcecast> w, double level, double k1,
         double k0, const std::string& condition_on, double relevance_tol,
         const std::string& format) {
        const EstimateReport r =
            build_estimate_report(make_sample(y, d, z, w), options_from(condition_on, relevance_tol),
                                  HeterogeneityCaps{k1, k0}, level);
        return render_estimate(r, parse_output_format(format));
      },
      py::arg("y"), py::arg("d"), py::arg("z"), py::arg("w"), py::arg("level") = 0.95,
      py::arg("k1") = 0.0, py::arg("k0") = 0.0, py::arg("condition_on") = "w1",
      py::arg("relevance_tol") = kDefaultRelevanceTol, py::arg("format") = "json");

  m.def(
      "load_csv",
      [](const std::string& path) {
        const Sample s = load_csv(path);
        std::vector<int> d(s.d().begin(), s.d().end());
        std::vector<int> z(s.z().begin(), s.z().end());
        std::vector<int> w(s.w().begin(), s.w().end());
        return py::make_tuple(
            py::array_t<double>(static_cast<py::ssize_t>(s.size()), s.y().data()),
            py::array_t<int>(static_cast<py::ssize_t>(d.size()), d.data()),
            py::array_t<int>(static_cast<py::ssize_t>(z.size()), z.data()),
            py::array_t<int>(static_cast<py::ssize_t>(w.size()), w.data()));
      },
      py::arg("path"));

  const auto config_from = [](std::size_t n, std::size_t reps, double rho1, double rho0,
                              double a1, double a0, double c, double p_z,
                              const std::string& design, double k, std::uint64_t seed) {
    SimConfig cfg;
    cfg.n = n;
    cfg.reps = reps;
    cfg.rho1 = rho1;
    cfg.rho0 = rho0;
    cfg.a1 = a1;
    cfg.a0 = a0;
    cfg.c = c;
    cfg.p_z = p_z;
    cfg.design = design_from(design, k);
    cfg.seed = seed;
    return cfg;
  };
  const SimConfig defaults;

  m.def(
      "run_monte_carlo",
      [config_from](std::size_t n, std::size_t reps, double rho1, double rho0, double a1,
                    double a0, double c, double p_z, const std::string& design, double k,
                    std::uint64_t seed, unsigned workers) {
        const SimConfig cfg = config_from(n, reps, rho1, rho0, a1, a0, c, p_z, design, k, seed);
        py::gil_scoped_release release;
        return run_monte_carlo(cfg, workers);
      },
      py::arg("n") = defaults.n, py::arg("reps") = defaults.reps, py::arg("rho1") = 0.0,
      py::arg("rho0") = 0.0, py::arg("a1") = defaults.a1, py::arg("a0") = defaults.a0,
      py::arg("c") = defaults.c, py::arg("p_z") = defaults.p_z, py::arg("design") = "baseline",
      py::arg("k") = 0.0, py::arg("seed") = defaults.seed, py::arg("workers") = 0u);

  m.def(
      "generate_sample",
      [config_from](std::size_t n, double rho1, double rho0, double a1, double a0, double c,
                    double p_z, const std::string& design, double k, std::uint64_t seed,
                    std::size_t rep) {
        const SimConfig cfg = config_from(n, 1, rho1, rho0, a1, a0, c, p_z, design, k, seed);
        const Sample s = generate_sample(cfg, rep);
        std::vector<int> d(s.d().begin(), s.d().end());
        std::vector<int> z(s.z().begin(), s.z().end());
        std::vector<int> w(s.w().begin(), s.w().end());
        return py::make_tuple(
            py::array_t<double>(static_cast<py::ssize_t>(s.size()), s.y().data()),
            py::array_t<int>(static_cast<py::ssize_t>(d.size()), d.data()),
            py::array_t<int>(static_cast<py::ssize_t>(z.size()), z.data()),
            py::array_t<int>(static_cast<py::ssize_t>(w.size()), w.data()));
      },
      py::arg("n") = defaults.n, py::arg("rho1") = 0.0, py::arg("rho0") = 0.0,
      py::arg("a1") = defaults.a1, py::arg("a0") = defaults.a0, py::arg("c") = defaults.c,
      py::arg("p_z") = defaults.p_z, py::arg("design") = "baseline", py::arg("k") = 0.0,
      py::arg("seed") = defaults.seed, py::arg("rep") = 0);

  m.def(
      "true_late",
      [config_from](double rho1, double rho0, double a1, double a0, double c, double p_z,
                    const std::string& design, double k) {
        return true_late(config_from(2, 1, rho1, rho0, a1, a0, c, p_z, design, k, 0));
      },
      py::arg("rho1") = 0.0, py::arg("rho0") = 0.0, py::arg("a1") = defaults.a1,
      py::arg("a0") = defaults.a0, py::arg("c") = defaults.c, py::arg("p_z") = defaults.p_z,
      py::arg("design") = "baseline", py::arg("k") = 0.0);

  m.attr("__version__") = DUALIV_VERSION;
}
