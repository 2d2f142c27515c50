#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "detquas/dpp.hpp"
#include "detquas/equivalence.hpp"
#include "detquas/fock.hpp"
#include "detquas/functionals.hpp"
#include "detquas/kernels.hpp"
#include "detquas/orthopoly.hpp"

namespace py = pybind11;
using namespace detquas;

namespace {

using PyWindow = std::shared_ptr<GroundWindow>;

// The window type is immutable, so handing python a non-const holder is safe.
PyWindow mut(const WindowPtr& w) { return std::const_pointer_cast<GroundWindow>(w); }

PyWindow make_window(const std::string& model, long lo, long hi) {
    AmbientModel m;
    if (model == "half_line") m = AmbientModel::HalfLine;
    else if (model == "full_line") m = AmbientModel::FullLine;
    else if (model == "finite") m = AmbientModel::Finite;
    else throw std::invalid_argument("model must be half_line, full_line or finite");
    return mut(GroundWindow::integer_interval(m, lo, hi));
}

HalfLineSide side_of(const std::string& s) {
    if (s == "plus" || s == "+") return HalfLineSide::Plus;
    if (s == "minus" || s == "-") return HalfLineSide::Minus;
    throw std::invalid_argument("sign must be 'plus' or 'minus'");
}

py::dict verdict_dict(const EquivalenceVerdict& v) {
    py::dict d;
    d["verdict"] = v.verdict == VerdictKind::Equivalent ? "equivalent"
                   : v.verdict == VerdictKind::Disjoint ? "disjoint"
                                                        : "inconclusive";
    d["S"] = v.sums.partial_sums;
    d["cutoffs"] = v.sums.cutoffs;
    d["cauchy_gap"] = v.cauchy_gap;
    d["norm_gap"] = v.norm_gap;
    if (v.index) d["index"] = *v.index;
    else d["index"] = py::none();
    d["diagnostics"] = v.diagnostics;
    return d;
}

}  // namespace

PYBIND11_MODULE(_detquas, m) {
    m.doc() = "determinantal measures and fermion quasifree states";

    py::class_<GroundWindow, PyWindow>(m, "GroundWindow")
        .def(py::init(&make_window), py::arg("model"), py::arg("lo"), py::arg("hi"))
        .def_property_readonly("sites",
                               [](const GroundWindow& w) {
                                   return std::vector<double>(w.sites().begin(), w.sites().end());
                               })
        .def("nu", &GroundWindow::nu)
        .def("__len__", &GroundWindow::size);

    py::class_<WeightFunction>(m, "WeightFunction")
        .def_property_readonly("window",
                               [](const WeightFunction& w) { return mut(w.window); })
        .def_readonly("values", &WeightFunction::w)
        .def("check_moment_bound", &WeightFunction::check_moment_bound);

    m.def("uniform_weight", &uniform_weight);
    m.def("charlier_weight", &charlier_weight, py::arg("window"), py::arg("theta"));
    m.def("meixner_weight", &meixner_weight, py::arg("window"), py::arg("beta"), py::arg("c"));
    m.def("krawtchouk_weight", &krawtchouk_weight, py::arg("window"), py::arg("M"),
          py::arg("p"));
    m.def("table_weight", [](WindowPtr w, std::vector<double> values) {
        return WeightFunction(std::move(w), std::move(values));
    });

    py::class_<OPSystem>(m, "OPSystem")
        .def(py::init<WeightFunction, std::size_t>(), py::arg("weight"), py::arg("n_max"))
        .def("alpha", &OPSystem::alpha)
        .def("beta", &OPSystem::beta)
        .def("h", &OPSystem::h)
        .def("eval", &OPSystem::eval, py::arg("degree"), py::arg("x"))
        .def("orthogonality_residual", &OPSystem::orthogonality_residual)
        .def_property_readonly("degree_bound", &OPSystem::degree_bound);

    py::class_<KernelMatrix>(m, "KernelMatrix")
        .def(py::init<WindowPtr, Eigen::MatrixXd>(), py::arg("window"), py::arg("entries"))
        .def_property_readonly("entries",
                               [](const KernelMatrix& k) { return k.entries(); })
        .def_property_readonly("window", [](const KernelMatrix& k) { return mut(k.window()); })
        .def("projection_defect", &KernelMatrix::projection_defect)
        .def("is_projection", &KernelMatrix::is_projection, py::arg("tol") = 1e-8)
        .def("trace", &KernelMatrix::trace)
        .def("eigenvalues", &KernelMatrix::eigenvalues)
        .def("__len__", &KernelMatrix::size);

    m.def("cd_kernel", &cd_kernel, py::arg("ops"), py::arg("N"));
    m.def("cd_kernel_ratio_form", &cd_kernel_ratio_form);

    py::class_<EnsembleSpec>(m, "EnsembleSpec")
        .def(py::init<OPSystem, std::size_t>(), py::arg("ops"), py::arg("N"));
    m.def("ensemble_mass", [](const EnsembleSpec& spec, const std::vector<double>& sites) {
        const WindowPtr& w = spec.ops.weight().window;
        return ensemble_mass(spec, make_configuration(w, sites));
    });
    m.def("sf_closed_form",
          [](const OPSystem& ops, std::size_t N, const std::vector<double>& X,
             const std::vector<double>& Y) { return sf_closed_form(ops, N, X, Y); });

    py::class_<KernelFunction, std::shared_ptr<KernelFunction>>(m, "KernelFunction")
        .def("entry", &KernelFunction::entry)
        .def_property_readonly("family", &KernelFunction::family);

    m.def("sine_kernel", &sine_kernel, py::arg("phi"));
    m.def("discrete_hermite",
          [](const std::string& sign, double r) { return discrete_hermite(side_of(sign), r); },
          py::arg("sign"), py::arg("r"));
    m.def("discrete_laguerre",
          [](double alpha, double r, const std::string& sign) {
              return discrete_laguerre(alpha, r, side_of(sign));
          },
          py::arg("alpha"), py::arg("r"), py::arg("sign"));
    m.def("discrete_jacobi_symmetric",
          [](double a, const std::string& sign) {
              return discrete_jacobi_symmetric(a, side_of(sign));
          },
          py::arg("a"), py::arg("sign"));
    m.def("materialize",
          [](const KernelFunctionPtr& kf, const WindowPtr& w) { return materialize(*kf, w); });
    m.def("particle_hole", py::overload_cast<const KernelMatrix&>(&particle_hole));
    m.def("particle_hole_function", py::overload_cast<KernelFunctionPtr>(&particle_hole));
    m.def("charlier_shift", &charlier_shift, py::arg("N"), py::arg("phi"));
    m.def("charlier_scaled_kernel", &charlier_scaled_kernel, py::arg("N"), py::arg("phi"),
          py::arg("window"));

    py::class_<FullMeasure>(m, "FullMeasure")
        .def_property_readonly("window", [](const FullMeasure& f) { return mut(f.window); })
        .def_readonly("mass", &FullMeasure::mass)
        .def("total", &FullMeasure::total);

    m.def("ensemble_measure", &ensemble_measure);
    m.def("full_measure", &full_measure);
    m.def("tau_state", [](const FullMeasure& mu, const std::vector<double>& X,
                          const std::vector<double>& Y) { return tau_state(mu, X, Y); });
    m.def("quasifree_state",
          [](const KernelMatrix& K, const std::vector<double>& X,
             const std::vector<double>& Y) { return quasifree_state(K, X, Y); });
    m.def("quasifree_state_pfaffian",
          [](const KernelMatrix& K, const std::vector<double>& X,
             const std::vector<double>& Y) { return quasifree_state_pfaffian(K, X, Y); });
    m.def("fermionic_sign",
          [](const std::vector<double>& X, const std::vector<double>& Y, const WindowPtr& w,
             const std::vector<double>& occupied) {
              return fermionic_sign(X, Y, make_configuration(w, occupied));
          },
          py::arg("X"), py::arg("Y"), py::arg("window"), py::arg("occupied"));
    m.def("pfaffian", &pfaffian);

    m.def("correlation", [](const KernelMatrix& K, const std::vector<double>& pts) {
        return correlation(K, pts);
    });
    m.def("cylinder_prob",
          [](const KernelMatrix& K, const std::vector<double>& occupied,
             const std::vector<double>& vacant) {
              return cylinder_prob(K, CylinderSpec{occupied, vacant});
          },
          py::arg("kernel"), py::arg("occupied"), py::arg("vacant"));
    m.def(
        "sample",
        [](const KernelMatrix& K, std::size_t n, std::uint64_t seed) {
            DeterminantalMeasure measure(K);
            std::mt19937_64 rng(seed);
            Eigen::MatrixXi out(n, K.size());
            for (std::size_t s = 0; s < n; ++s) {
                Configuration c = measure.sample(rng);
                for (std::size_t i = 0; i < K.size(); ++i)
                    out(s, i) = c.contains_index(i) ? 1 : 0;
            }
            return out;
        },
        py::arg("kernel"), py::arg("n"), py::arg("seed"));
    m.def(
        "reduce",
        [](const KernelMatrix& K, const std::vector<double>& occupied,
           const std::vector<double>& vacant, double eps_reg) {
            auto [reduced, trace] = reduce(K, occupied, vacant, eps_reg);
            py::list steps;
            for (const auto& s : trace.steps)
                steps.append(py::make_tuple(s.site, s.occupied ? "occupied" : "vacant", s.pivot));
            return py::make_tuple(reduced, steps);
        },
        py::arg("kernel"), py::arg("occupied"), py::arg("vacant"),
        py::arg("eps_reg") = kRegularityEps);
    m.def("rn_density", [](const std::vector<double>& X, const std::vector<double>& Y,
                           double u) { return rn_density(X, Y, u); });
    m.def("quasi_invariance_check",
          [](const EnsembleSpec& spec, const std::vector<double>& X,
             const std::vector<double>& Xp, const std::vector<double>& Y,
             const std::vector<double>& Yp) {
              return quasi_invariance_check(spec, X, Xp, Y, Yp);
          });

    py::class_<MultiplierFunction>(m, "MultiplierFunction")
        .def(py::init([](WindowPtr w, std::vector<double> alpha) {
                 return MultiplierFunction(std::move(w), std::move(alpha));
             }),
             py::arg("window"), py::arg("alpha"));
    m.def("det2", &det2);
    m.def("expected_sqrt_multiplicative", &expected_sqrt_multiplicative);
    m.def("density_ratio_check", &density_ratio_check);

    m.def("hs_partial_sums",
          [](const KernelFunctionPtr& k1, const KernelFunctionPtr& k2,
             const std::vector<long>& cutoffs) {
              HSSummary s = hs_partial_sums(*k1, *k2, cutoffs);
              return py::make_tuple(s.cutoffs, s.partial_sums);
          });
    m.def("index_estimate", &index_estimate, py::arg("k1"), py::arg("k2"),
          py::arg("sv_threshold_rel") = 1e-8);
    m.def("principal_angle_cosines", &principal_angle_cosines);
    m.def(
        "verdict",
        [](const KernelFunctionPtr& k1, const KernelFunctionPtr& k2,
           const std::vector<long>& cutoffs, double cauchy_eps, double divergence_factor,
           long norm_window, bool declare_path) {
            VerdictPolicy policy;
            policy.cauchy_eps = cauchy_eps;
            policy.divergence_factor = divergence_factor;
            policy.norm_window = norm_window;
            policy.continuous_path_declared = declare_path;
            return verdict_dict(verdict(*k1, *k2, cutoffs, policy));
        },
        py::arg("k1"), py::arg("k2"), py::arg("cutoffs"), py::arg("cauchy_eps") = 1e-3,
        py::arg("divergence_factor") = 10.0, py::arg("norm_window") = 512,
        py::arg("declare_path") = false);
    m.def("jacobi_asymptotic_ratio", &jacobi_asymptotic_ratio);
}
