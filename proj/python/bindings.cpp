// bindings.cpp — Python module kerrtk._core

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kerr/commands.hpp"
#include "kerr/errors.hpp"

namespace py = pybind11;
using namespace kerr;

namespace {

DensityMatrix as_state(const Matrix& rho) { return DensityMatrix(FockSpace(static_cast<int>(rho.rows())), rho); }

py::dict gap_dict(const GapReport& g)
{
    py::dict d;
    d["gap_p"] = g.gap_p ? py::cast(*g.gap_p) : py::none();
    d["gap_t"] = g.gap_t;
    d["dominant_phase"] = g.dominant_phase;
    d["period_doubled"] = g.period_doubled;
    d["gap_p_is_smallest_modulus"] = g.gap_p_is_smallest_modulus;
    return d;
}

py::dict observables_dict(const SteadyObservables& o)
{
    py::dict d;
    d["Na"] = o.mean_photons;
    d["variance"] = o.variance;
    d["fano"] = o.fano;
    d["Sv"] = o.entropy;
    d["S0v"] = o.thermal_entropy;
    d["ratio"] = o.entropy_ratio;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Floquet Kerr oscillator: spectra, steady states, Wigner maps and mean-field dynamics";
    m.attr("__version__") = KERRTK_VERSION;

    // translators run newest-first, so the base must be registered before the subclasses
    auto& base = py::register_exception<Error>(m, "KerrError", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
    py::register_exception<TailTooHeavy>(m, "TailTooHeavy", base.ptr());
    py::register_exception<InvalidState>(m, "InvalidState", base.ptr());
    py::register_exception<StepTooLarge>(m, "StepTooLarge", base.ptr());
    py::register_exception<ExpFailure>(m, "ExpFailure", base.ptr());
    py::register_exception<EigenFailure>(m, "EigenFailure", base.ptr());
    py::register_exception<DegenerateSteady>(m, "DegenerateSteady", base.ptr());
    py::register_exception<NotPositive>(m, "NotPositive", base.ptr());
    py::register_exception<NoRealEigenvalue>(m, "NoRealEigenvalue", base.ptr());
    py::register_exception<EmptyOrbit>(m, "EmptyOrbit", base.ptr());
    py::register_exception<Diverged>(m, "Diverged", base.ptr());
    py::register_exception<TooFewPoints>(m, "TooFewPoints", base.ptr());
    py::register_exception<ConfigInvalid>(m, "ConfigInvalid", base.ptr());

    py::class_<DriveProtocol>(m, "DriveProtocol")
        .def(py::init<>())
        .def_static("alternating", &DriveProtocol::alternating, py::arg("detuning"), py::arg("kerr"),
                    py::arg("eps0"), py::arg("period"), py::arg("kappa"))
        .def_readwrite("detuning", &DriveProtocol::detuning)
        .def_readwrite("kerr", &DriveProtocol::kerr)
        .def_readwrite("eps1", &DriveProtocol::eps1)
        .def_readwrite("eps2", &DriveProtocol::eps2)
        .def_readwrite("period", &DriveProtocol::period)
        .def_readwrite("kappa", &DriveProtocol::kappa)
        .def("__repr__", [](const DriveProtocol& p) {
            return "DriveProtocol(detuning=" + std::to_string(p.detuning) + ", kerr=" + std::to_string(p.kerr) +
                   ", period=" + std::to_string(p.period) + ", kappa=" + std::to_string(p.kappa) + ")";
        });

    m.def("hamiltonian", [](int cutoff, double detuning, double kerr_u, cplx eps) {
        return hamiltonian(FockSpace(cutoff), detuning, kerr_u, eps).matrix;
    }, py::arg("cutoff"), py::arg("detuning"), py::arg("kerr"), py::arg("eps"));

    m.def("liouvillian", [](const DriveProtocol& p, int cutoff, cplx eps) {
        return kerr_liouvillian(p, FockSpace(cutoff), eps).matrix;
    }, py::arg("protocol"), py::arg("cutoff"), py::arg("eps"));

    m.def("floquet_propagator", [](const DriveProtocol& p, int cutoff) {
        return floquet_propagator(p, FockSpace(cutoff)).matrix;
    }, py::arg("protocol"), py::arg("cutoff"), py::call_guard<py::gil_scoped_release>());

    m.def("effective_spectrum", [](const DriveProtocol& p, int cutoff) {
        FloquetSpectrum s = [&] {
            py::gil_scoped_release release;
            return effective_spectrum(floquet_propagator(p, FockSpace(cutoff)), p.period);
        }();
        py::dict d;
        d["multipliers"] = s.multipliers;
        d["exponents"] = s.exponents;
        d["steady_index"] = s.steady_index;
        d["gaps"] = gap_dict(gaps(s));
        d["steady_state"] = steady_state(s).rho.matrix();
        return d;
    }, py::arg("protocol"), py::arg("cutoff"));

    m.def("steady_state", [](const DriveProtocol& p, int cutoff) {
        py::gil_scoped_release release;
        return quasi_steady_state(p, cutoff).rho.matrix();
    }, py::arg("protocol"), py::arg("cutoff"));

    m.def("integrate_master_equation", [](const DriveProtocol& p, const Matrix& rho0, double t_final, double dt) {
        return integrate_master_equation(p, as_state(rho0), t_final, dt).state.matrix();
    }, py::arg("protocol"), py::arg("rho0"), py::arg("t_final"), py::arg("dt"));

    m.def("steady_observables", [](const Matrix& rho) { return observables_dict(steady_observables(as_state(rho))); },
          py::arg("rho"));
    m.def("thermal_entropy", &thermal_entropy, py::arg("mean_photons"));
    m.def("thermal_state", [](int cutoff, double na) { return thermal_density_matrix(FockSpace(cutoff), na).matrix(); },
          py::arg("cutoff"), py::arg("mean_photons"));

    m.def("wigner", [](const Matrix& rho, double x_min, double x_max, double p_min, double p_max, int nx, int np) {
        PhaseGrid g{x_min, x_max, p_min, p_max, nx, np};
        const WignerMap w = wigner(as_state(rho), g);
        py::dict d;
        d["values"] = w.values;
        d["integral"] = w.integral;
        d["negativity"] = w.negativity;
        d["boundary_ok"] = w.boundary_ok;
        return d;
    }, py::arg("rho"), py::arg("x_min"), py::arg("x_max"), py::arg("p_min"), py::arg("p_max"),
       py::arg("nx") = 201, py::arg("np") = 201);
    m.def("wigner_at", [](const Matrix& rho, cplx alpha) { return wigner_at(as_state(rho), alpha); },
          py::arg("rho"), py::arg("alpha"));

    m.def("mean_field_rhs", &classical::mean_field_rhs, py::arg("alpha"), py::arg("eps"), py::arg("protocol"));
    m.def("integrate_orbit", [](const DriveProtocol& p, cplx alpha0, int transient, int recorded, int steps) {
        classical::OrbitSettings s;
        s.transient_periods = transient;
        s.recorded_periods = recorded;
        s.steps_per_half = steps;
        const auto orbit = classical::integrate_orbit(p, alpha0, s);
        py::dict d;
        d["samples"] = orbit.samples;
        d["classification"] = orbit.classification.name();
        d["lyapunov"] = orbit.lyapunov ? py::cast(*orbit.lyapunov) : py::none();
        return d;
    }, py::arg("protocol"), py::arg("alpha0"), py::arg("transient_periods") = 500,
       py::arg("recorded_periods") = 2000, py::arg("steps_per_half") = 100);

    m.def("bifurcation_sweep", [](const DriveProtocol& templ, const std::vector<double>& eps0, int n_ic,
                                  std::uint64_t seed, int transient, int recorded, int workers) {
        classical::OrbitSettings s;
        s.transient_periods = transient;
        s.recorded_periods = recorded;
        const auto d = [&] {
            py::gil_scoped_release release;
            return classical::bifurcation_sweep(templ, eps0, n_ic, seed, s, workers);
        }();
        py::list columns;
        for (std::size_t i = 0; i < eps0.size(); ++i) {
            py::dict c;
            c["eps0"] = eps0[i];
            c["classification"] = d.column_classification(i).name();
            const auto lam = d.column_lyapunov(i);
            c["lyapunov"] = lam ? py::cast(*lam) : py::none();
            std::vector<double> re;
            for (const auto& o : d.orbits[i]) re.insert(re.end(), o.re_samples.begin(), o.re_samples.end());
            c["re_alpha"] = re;
            columns.append(c);
        }
        return columns;
    }, py::arg("protocol"), py::arg("eps0"), py::arg("initial_conditions") = 8, py::arg("seed") = 0,
       py::arg("transient_periods") = 500, py::arg("recorded_periods") = 2000, py::arg("workers") = 1);

    m.def("fit_critical_drive", [](const std::vector<std::pair<double, double>>& pts, double kerr_u,
                                   std::pair<double, double> window) {
        const auto f = fit_critical_drive(pts, kerr_u, window);
        py::dict d;
        d["eps_c"] = f.eps_c;
        d["slope"] = f.slope;
        d["residual"] = f.residual;
        d["points"] = f.points;
        d["free_slope"] = f.free_slope;
        d["free_eps_c"] = f.free_eps_c;
        return d;
    }, py::arg("points"), py::arg("kerr"), py::arg("window"));

    m.def("run_oracles", [] {
        py::list out;
        for (const auto& r : run_oracles()) {
            py::dict d;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["measured"] = r.measured;
            d["tolerance"] = r.tolerance;
            d["detail"] = r.detail;
            out.append(d);
        }
        return out;
    });
}
