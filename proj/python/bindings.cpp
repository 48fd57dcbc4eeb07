// bindings.cpp — pybind11 module dissfield._core

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dissfield/commands.hpp"
#include "dissfield/io.hpp"

namespace py = pybind11;
using namespace dissfield;

namespace {

py::list rows_to_list(const CorrelatorTable& t) {
    py::list out;
    for (const auto& r : t) out.append(py::make_tuple(r.dt, r.dr, r.value, r.est_error));
    return out;
}

ResponseEvaluator evaluator(const SusceptibilityModel& model, double omega_k, double hbar) {
    return {model, ModeContext::with_frequency(omega_k), hbar};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dissipative field mode: response, thermodynamics, correlators and Langevin checks";
    m.attr("__version__") = kToolVersion;

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    py::class_<SusceptibilityModel>(m, "SusceptibilityModel")
        .def_property_readonly("name", &SusceptibilityModel::name)
        .def("im_chi", &SusceptibilityModel::im_chi)
        .def("chi", &SusceptibilityModel::chi)
        .def("static_chi", &SusceptibilityModel::static_chi);

    m.def("drude_lorentz", [](double eta, double omega0, double gamma) {
        return SusceptibilityModel(DrudeLorentz{eta, omega0, gamma});
    }, py::arg("eta"), py::arg("omega0"), py::arg("gamma"));
    m.def("ohmic", [](double eta, double omega_c) { return SusceptibilityModel(Ohmic{eta, omega_c}); },
          py::arg("eta"), py::arg("omega_c"));
    m.def("tabulated", [](std::vector<double> w, std::vector<double> im) {
        return SusceptibilityModel(Tabulated(std::move(w), std::move(im)));
    }, py::arg("omega"), py::arg("im_chi"));

    m.def("re_chi_kk", [](const SusceptibilityModel& model, double w) { return re_chi_kk(model, w).value; },
          py::arg("model"), py::arg("omega"));
    m.def("kk_max_rel_dev", [](const SusceptibilityModel& model, const std::vector<double>& grid) {
        return kk_report(model, grid).max_rel_dev;
    }, py::arg("model"), py::arg("omega"));

    m.def("greens", [](const SusceptibilityModel& model, double omega_k, double w) {
        return evaluator(model, omega_k, 1.0).greens(w);
    }, py::arg("model"), py::arg("omega_k"), py::arg("omega"));
    m.def("sum_rule", [](const SusceptibilityModel& model, double omega_k) {
        return commutator_sum_rule(evaluator(model, omega_k, 1.0)).value;
    }, py::arg("model"), py::arg("omega_k"));

    m.def("thermo_point", [](const SusceptibilityModel& model, double omega_k, double T) {
        const auto ev = evaluator(model, omega_k, 1.0);
        const auto r = thermo_point(ev, ThermalState(T));
        py::dict d;
        d["T"] = r.T;
        d["U_star"] = r.U_star;
        d["F_star"] = r.F_star;
        d["F_closed"] = r.F_closed;
        d["S_star"] = r.S_star;
        d["S_closed"] = r.S_closed;
        d["E_system"] = r.E_system;
        d["E_interaction"] = r.E_interaction;
        d["E_reservoir_excess"] = r.E_reservoir_excess;
        d["consistency_dev"] = r.consistency.max_rel_dev;
        return d;
    }, py::arg("model"), py::arg("omega_k"), py::arg("T"));

    m.def("corr_phi", [](const SusceptibilityModel& model, double k, double T, std::vector<double> dt,
                         std::vector<double> dr) {
        const ResponseEvaluator ev(model, ModeContext::make(k, 0.0));
        const auto state = T == 0.0 ? ThermalState::vacuum() : ThermalState(T);
        return rows_to_list(thermal_corr_phi(ev, state, {std::move(dt), std::move(dr)}));
    }, py::arg("model"), py::arg("k"), py::arg("T"), py::arg("dt"), py::arg("dr"));

    m.def("run", [](const std::string& command, const std::filesystem::path& config,
                    std::optional<std::filesystem::path> out, std::optional<int> threads) {
        CommandOptions opts;
        opts.config = config;
        opts.out = std::move(out);
        opts.threads = threads;
        const auto rep = run_command(command, opts);
        py::dict d;
        d["exit_code"] = rep.exit_code;
        d["message"] = rep.message;
        d["config_digest"] = rep.config_digest;
        d["warnings"] = rep.warnings;
        py::list outs;
        for (const auto& o : rep.outputs) outs.append(py::make_tuple(o.path, o.sha256));
        d["outputs"] = outs;
        return d;
    }, py::arg("command"), py::arg("config"), py::arg("out") = py::none(), py::arg("threads") = py::none());

    m.def("read_csv", [](const std::filesystem::path& path) {
        const auto t = io::read_csv(path);
        return py::make_tuple(t.metadata, t.columns, t.rows);
    }, py::arg("path"));
}
