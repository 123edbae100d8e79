// verify.cpp — built-in oracle suite for the `verify` subcommand

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kerr/commands.hpp"
#include "kerr/errors.hpp"
#include "kerr/linalg.hpp"

namespace kerr {

namespace {

constexpr double kDetuning = -1.0;
constexpr double kKappa = 0.5;

OracleResult make(std::string name, double measured, double tolerance, std::string detail = {})
{
    return {std::move(name), std::isfinite(measured) && measured <= tolerance, measured, tolerance,
            std::move(detail)};
}

// Lindblad generator with an optionally sign-flipped Hamiltonian.
Superoperator generator(const FockSpace& space, double detuning, double kerr_u, cplx eps, double kappa,
                        bool flip)
{
    FockOperator h = hamiltonian(space, detuning, kerr_u, eps);
    if (flip) h.matrix = -h.matrix;
    return build_liouvillian(h, kappa);
}

// Expected eigenvalue of the undriven linear oscillator for the mode rho(n, m).
cplx damped_mode(int n, int m, double detuning, double kappa)
{
    return {-0.5 * kappa * (n + m), detuning * (n - m)};
}

// Largest distance from a value in `got` to its nearest partner in `want`,
// consuming partners greedily.
double set_distance(std::vector<cplx> got, std::vector<cplx> want)
{
    if (got.size() != want.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const cplx& g : got) {
        auto it = std::min_element(want.begin(), want.end(),
                                   [&](cplx a, cplx b) { return std::abs(a - g) < std::abs(b - g); });
        worst = std::max(worst, std::abs(*it - g));
        want.erase(it);
    }
    return worst;
}

std::vector<cplx> damped_set(int d, double detuning, double kappa)
{
    std::vector<cplx> out;
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) out.push_back(damped_mode(n, m, detuning, kappa));
    }
    return out;
}

OracleResult damped_spectrum(bool flip)
{
    const FockSpace space(6);
    const Superoperator l = generator(space, kDetuning, 0.0, 0.0, kKappa, flip);
    const auto e = linalg::eig(l.matrix, false);
    std::vector<cplx> got(e.values.data(), e.values.data() + e.values.size());
    return make("damped_spectrum_set", set_distance(got, damped_set(6, kDetuning, kKappa)), 1e-10,
                "eigenvalues of the undriven linear generator, D=6");
}

OracleResult damped_diagonal(bool flip)
{
    const int d = 6;
    const FockSpace space(d);
    const Superoperator l = generator(space, kDetuning, 0.0, 0.0, kKappa, flip);
    double worst = 0.0;
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            const Eigen::Index k = n + d * m;
            worst = std::max(worst, std::abs(l.matrix(k, k) - damped_mode(n, m, kDetuning, kKappa)));
        }
    }
    return make("damped_mode_resolved", worst, 1e-12, "L[(n,m),(n,m)] = -kappa(n+m)/2 + i detuning (n-m), D=6");
}

OracleResult static_effective()
{
    const int d = 6;
    const double period = 0.5;
    const FockSpace space(d);
    const auto p = DriveProtocol::alternating(kDetuning, 0.0, 0.0, period, kKappa);
    const FloquetSpectrum s = effective_spectrum(floquet_propagator(p, space), period);
    std::vector<cplx> got(s.exponents.data(), s.exponents.data() + s.exponents.size());
    return make("static_effective_spectrum", set_distance(got, damped_set(d, kDetuning, kKappa)), 1e-7,
                "(1/T) log U(T) of the undriven oscillator, D=6, T=0.5");
}

OracleResult trace_preservation(bool flip)
{
    const FockSpace space(8);
    const Superoperator l = generator(space, kDetuning, 0.2, {0.7, 0.3}, kKappa, flip);
    const int d = space.dim();
    Eigen::RowVectorXcd left = Eigen::RowVectorXcd::Zero(d * d);
    for (int i = 0; i < d; ++i) left(i + d * i) = 1.0;
    const double residual = (left * l.matrix).cwiseAbs().maxCoeff() / linalg::one_norm(l.matrix);
    return make("trace_preservation", residual, 1e-14, "vec(I)^T L = 0 relative to ||L||_1, D=8");
}

OracleResult pade_vs_eigen()
{
    const FockSpace space(8);
    const auto p = DriveProtocol::alternating(kDetuning, 0.2, 0.8, 2.0, kKappa);
    const Superoperator a = floquet_propagator(p, space, {ExpMethod::Pade, false});
    const Superoperator b = floquet_propagator(p, space, {ExpMethod::Eigen, false});
    return make("pade_vs_eigen_expm", (a.matrix - b.matrix).cwiseAbs().maxCoeff(), 1e-9, "U(T), D=8");
}

OracleResult rotation_shortcut()
{
    const FockSpace space(8);
    const auto p = DriveProtocol::alternating(kDetuning, 0.2, 1.3, 2.0, kKappa);
    const Superoperator a = floquet_propagator(p, space, {ExpMethod::Pade, true});
    const Superoperator b = floquet_propagator(p, space, {ExpMethod::Pade, false});
    return make("rotated_half_period", (a.matrix - b.matrix).cwiseAbs().maxCoeff(), 1e-10,
                "reused vs recomputed first half-period exponential, D=8");
}

OracleResult decay_weights()
{
    const FockSpace space(4);
    const auto p = DriveProtocol::alternating(0.0, 0.0, 0.0, 2.0, kKappa);
    const Superoperator u = floquet_propagator(p, space);
    const Vector out = u.matrix * vectorize(DensityMatrix::fock_state(space, 1).matrix());
    const Matrix rho = devectorize(out, space);
    const double p1 = std::exp(-kKappa * 2.0);
    const double err = std::max(std::abs(rho(1, 1) - p1), std::abs(rho(0, 0) - (1.0 - p1)));
    std::ostringstream os;
    os << "|1><1| after one period: p1=" << rho(1, 1).real() << " p0=" << rho(0, 0).real();
    return make("single_photon_decay", err, 1e-10, os.str());
}

// Spectral propagation of rho0 over n periods.
Matrix propagate_spectral(const Superoperator& u, const DensityMatrix& rho0, int n)
{
    Vector v = vectorize(rho0.matrix());
    for (int k = 0; k < n; ++k) v = u.matrix * v;
    return devectorize(v, rho0.space());
}

OracleResult rk4_vs_propagator()
{
    const FockSpace space(30);
    const auto p = DriveProtocol::alternating(kDetuning, 0.2, 1.0, 2.0, kKappa);
    const Superoperator u = floquet_propagator(p, space);
    const DensityMatrix rho0 = DensityMatrix::fock_state(space, 0);
    const int periods = 20;
    const auto run = integrate_master_equation(p, rho0, periods * p.period, p.period / 800.0);
    const double dist = trace_distance(run.state.matrix(), propagate_spectral(u, rho0, periods));
    return make("rk4_vs_propagator", dist, 1e-6, "trace distance after 20 periods from vacuum, D=30, eps0=1");
}

OracleResult rk4_order()
{
    const FockSpace space(10);
    const auto p = DriveProtocol::alternating(kDetuning, 0.2, 1.0, 2.0, kKappa);
    const DensityMatrix rho0 = DensityMatrix::coherent(space, {0.8, -0.4});
    const Matrix exact = propagate_spectral(floquet_propagator(p, space), rho0, 1);
    const double e1 = trace_distance(integrate_master_equation(p, rho0, p.period, 0.05).state.matrix(), exact);
    const double e2 = trace_distance(integrate_master_equation(p, rho0, p.period, 0.025).state.matrix(), exact);
    const double ratio = e1 / e2;
    OracleResult r{"rk4_order", ratio >= 12.0 && ratio <= 20.0, ratio, 16.0, {}};
    std::ostringstream os;
    os << "error ratio on halving dt (expected in [12, 20]); errors " << e1 << ", " << e2;
    r.detail = os.str();
    return r;
}

OracleResult jacobian()
{
    const auto p = DriveProtocol::alternating(kDetuning, 0.2, 1.1, 2.0, kKappa);
    const double h = 1e-6;
    double worst = 0.0;
    for (cplx alpha : {cplx{0.3, -0.2}, cplx{1.5, 2.0}, cplx{-2.2, 0.7}}) {
        for (cplx eps : {p.eps1, p.eps2}) {
            const Eigen::Matrix2d j = classical::mean_field_jacobian(alpha, eps, p);
            for (int c = 0; c < 2; ++c) {
                const cplx step = c == 0 ? cplx{h, 0.0} : cplx{0.0, h};
                const cplx df = (classical::mean_field_rhs(alpha + step, eps, p) -
                                 classical::mean_field_rhs(alpha - step, eps, p)) / (2.0 * h);
                worst = std::max({worst, std::abs(j(0, c) - df.real()), std::abs(j(1, c) - df.imag())});
            }
        }
    }
    return make("mean_field_jacobian", worst, 1e-6, "analytic vs central differences");
}

OracleResult wigner_vacuum()
{
    const FockSpace space(12);
    const DensityMatrix vac = DensityMatrix::fock_state(space, 0);
    double worst = 0.0;
    for (cplx a : {cplx{0.0, 0.0}, cplx{0.5, 0.0}, cplx{-0.3, 0.8}, cplx{1.2, -1.1}}) {
        const double want = 2.0 / std::numbers::pi * std::exp(-2.0 * std::norm(a));
        worst = std::max(worst, std::abs(wigner_at(vac, a) - want));
    }
    return make("wigner_vacuum", worst, 1e-8, "W = (2/pi) exp(-2|alpha|^2)");
}

OracleResult thermal_ratio()
{
    const DensityMatrix th = thermal_density_matrix(FockSpace(80), 1.5);
    const auto obs = steady_observables(th);
    return make("thermal_entropy_ratio", std::abs(obs.entropy_ratio - 1.0), 1e-8, "thermal state, Na=1.5, D=80");
}

OracleResult linear_lyapunov()
{
    const auto p = DriveProtocol::alternating(kDetuning, 0.0, 0.0, 2.0, kKappa);
    classical::OrbitSettings s;
    s.transient_periods = 10;
    const double lam = classical::lyapunov_exponent(p, {1.0, 0.5}, 200, s);
    std::ostringstream os;
    os << "undriven linear flow, lambda=" << lam << " (expected -kappa/2)";
    return make("linear_lyapunov", std::abs(lam + 0.5 * kKappa), 1e-6, os.str());
}

OracleResult spectral_radius()
{
    const FockSpace space(30);
    const auto p = DriveProtocol::alternating(kDetuning, 0.2, 0.3, 2.0, kKappa);
    const FloquetSpectrum s = effective_spectrum(floquet_propagator(p, space), p.period);
    double excess = 0.0;
    for (Eigen::Index k = 0; k < s.multipliers.size(); ++k) {
        excess = std::max(excess, std::abs(s.multipliers(k)) - 1.0);
    }
    const double unit = std::abs(s.multipliers(s.steady_index) - 1.0);
    return make("spectral_radius", std::max(excess, unit), 1e-10, "max |mu| - 1 and |mu_0 - 1|, D=30, eps0=0.3");
}

OracleResult fixed_point()
{
    const FockSpace space(20);
    const auto p = DriveProtocol::alternating(kDetuning, 0.2, 0.8, 2.0, kKappa);
    const Superoperator u = floquet_propagator(p, space);
    const SteadyState ss = steady_state_direct(u);
    const Vector v = vectorize(ss.rho.matrix());
    return make("steady_fixed_point", (u.matrix * v - v).norm(), 1e-10, "||U vec(rho) - vec(rho)||, D=20");
}

} // namespace

std::vector<OracleResult> run_oracles(const VerifyOptions& options)
{
    using Oracle = std::function<OracleResult()>;
    const bool flip = options.flip_hamiltonian_sign;
    const std::vector<std::pair<std::string, Oracle>> suite = {
        {"damped_spectrum_set", [&] { return damped_spectrum(flip); }},
        {"damped_mode_resolved", [&] { return damped_diagonal(flip); }},
        {"static_effective_spectrum", static_effective},
        {"trace_preservation", [&] { return trace_preservation(flip); }},
        {"pade_vs_eigen_expm", pade_vs_eigen},
        {"rotated_half_period", rotation_shortcut},
        {"single_photon_decay", decay_weights},
        {"rk4_vs_propagator", rk4_vs_propagator},
        {"rk4_order", rk4_order},
        {"mean_field_jacobian", jacobian},
        {"wigner_vacuum", wigner_vacuum},
        {"thermal_entropy_ratio", thermal_ratio},
        {"linear_lyapunov", linear_lyapunov},
        {"spectral_radius", spectral_radius},
        {"steady_fixed_point", fixed_point},
    };
    std::vector<OracleResult> out;
    for (const auto& [name, oracle] : suite) {
        try {
            out.push_back(oracle());
        } catch (const Error& e) {
            out.push_back({name, false, std::nan(""), 0.0, e.what()});
        }
    }
    return out;
}

} // namespace kerr
