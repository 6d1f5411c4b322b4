#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "krein/commands.hpp"
#include "krein/config.hpp"
#include "krein/errors.hpp"
#include "krein/exact.hpp"
#include "krein/perturbation.hpp"
#include "krein/specfun.hpp"
#include "krein/spectra.hpp"

namespace py = pybind11;

namespace {

std::vector<std::vector<double>> to_lists(const krein::Matrix& m) {
    std::vector<std::vector<double>> out(m.size(), std::vector<double>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = m(i, j);
    return out;
}

py::dict exact_dict(const krein::TwoCenterExact& r) {
    py::dict d;
    d["e_plus"] = r.e_plus;
    d["e_minus"] = r.e_minus;
    d["splitting"] = r.splitting;
    d["half_separation"] = r.half_separation;
    return d;
}

struct Model {
    krein::RunConfig config;
    krein::PrincipalMatrix pm;
    explicit Model(const std::string& text)
        : config(krein::parse_config(text)), pm(config.model, krein::PhiOptions{config.quad_order}) {}
};

}  // namespace

PYBIND11_MODULE(_krein, m) {
    m.doc() = "Principal-matrix bound states and tunneling splittings";

    static py::exception<krein::Error> base(m, "KreinError");
    static py::exception<krein::ConfigError> cfg(m, "ConfigError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const krein::ConfigError& e) {
            PyErr_SetString(cfg.ptr(), e.what());
        } catch (const krein::Error& e) {
            PyErr_SetString(base.ptr(), (std::string(e.kind()) + ": " + e.what()).c_str());
        }
    });

    m.def("bessel_k0", &krein::bessel_k0);
    m.def("bessel_k1", &krein::bessel_k1);
    m.def("digamma", &krein::digamma);
    m.def("trigamma", &krein::trigamma);
    m.def("lambert_w0", &krein::lambert_w0);
    m.def("legendre_q", [](double v, double cosh_a) { return krein::legendre_q(v, cosh_a); });

    m.def("exact_two_center_1d", [](double lam, double a) { return exact_dict(krein::exact_two_center_1d(lam, a)); });
    m.def("exact_two_center_3d", [](double mu, double a) { return exact_dict(krein::exact_two_center_3d(mu, a)); });
    m.def("numeric_two_center_2d", [](double mu, double a) { return exact_dict(krein::numeric_two_center_2d(mu, a)); });

    m.def("solve_json", [](const std::string& text) { return krein::cmd_solve(krein::parse_config(text)); });
    m.def("split_json", [](const std::string& text) { return krein::cmd_split(krein::parse_config(text)); });
    m.def("sweep_csv", [](const std::string& text, int threads) {
        const auto c = krein::parse_config(text);
        py::gil_scoped_release nogil;
        return krein::cmd_sweep(c, threads);
    }, py::arg("text"), py::arg("threads") = 0);
    m.def("wavefunction_csv", [](const std::string& text) { return krein::cmd_wavefunction(krein::parse_config(text)); });
    m.def("echo_config", [](const std::string& text) { return krein::echo_config(krein::parse_config(text)); });

    py::class_<Model>(m, "Model")
        .def(py::init<const std::string&>(), py::arg("config_json"))
        .def_property_readonly("size", [](const Model& s) { return s.pm.size(); })
        .def_property_readonly("threshold", [](const Model& s) { return s.pm.threshold(); })
        .def("phi", [](const Model& s, double E) { return to_lists(s.pm.eval(E)); })
        .def("phi_derivative", [](const Model& s, double E) { return to_lists(s.pm.derivative(E)); })
        .def("offdiag_bound", [](const Model& s, double E) { return s.pm.offdiag_bound(E); })
        .def("bound_states", [](const Model& s) {
            std::vector<double> e;
            for (const auto& st : krein::find_bound_states(s.pm, s.config.tol).states) e.push_back(st.energy);
            return e;
        })
        .def("perturbative_shift", [](const Model& s, std::size_t k) { return krein::perturbative_shift(s.pm, k).shift; })
        .def("degenerate_splitting", [](const Model& s) {
            const auto d = krein::degenerate_splitting(s.pm);
            py::dict r;
            r["e_plus"] = d.e_plus;
            r["e_minus"] = d.e_minus;
            r["splitting"] = d.splitting;
            r["first_order"] = d.first_order;
            r["asymptotic"] = d.asymptotic;
            return r;
        });
}
