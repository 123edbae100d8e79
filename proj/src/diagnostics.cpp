// diagnostics.cpp — observables of the quasi-steady state

#include "kerr/diagnostics.hpp"

#include <cmath>
#include <string>

#include "kerr/errors.hpp"
#include "kerr/floquet.hpp"

namespace kerr {

double thermal_entropy(double mean_photons)
{
    if (!(mean_photons >= 0.0)) throw InvalidArgument("mean photon number must be >= 0");
    if (mean_photons == 0.0) return 0.0;
    const double n = mean_photons;
    return (n + 1.0) * std::log1p(n) - n * std::log(n);
}

double von_neumann_entropy(const DensityMatrix& rho)
{
    const Eigen::VectorXd p = rho.eigenvalues();
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) < -1e-8) {
            throw NotPositive("density matrix eigenvalue " + std::to_string(p(i)) + " below -1e-8");
        }
        if (p(i) < 1e-14) continue;
        s -= p(i) * std::log(p(i));
    }
    return s;
}

SteadyObservables steady_observables(const DensityMatrix& rho)
{
    const Eigen::Index d = rho.matrix().rows();
    double na = 0.0;
    double n2 = 0.0;
    for (Eigen::Index m = 0; m < d; ++m) {
        const double pm = rho.matrix()(m, m).real();
        na += m * pm;
        n2 += static_cast<double>(m) * m * pm;
    }
    SteadyObservables o;
    o.mean_photons = std::max(0.0, na);
    o.variance = std::max(0.0, n2 - na * na);
    o.fano = o.mean_photons > 0.0 ? o.variance / o.mean_photons : 0.0;
    o.entropy = von_neumann_entropy(rho);
    o.thermal_entropy = thermal_entropy(o.mean_photons);
    o.entropy_ratio = o.thermal_entropy > 0.0 ? o.entropy / o.thermal_entropy : 0.0;
    return o;
}

FitResult fit_critical_drive(std::span<const std::pair<double, double>> points, double kerr,
                             std::pair<double, double> window)
{
    if (!(kerr > 0.0)) throw InvalidArgument("fit needs U > 0");
    std::vector<std::pair<double, double>> used;
    for (const auto& pt : points) {
        if (pt.first >= window.first && pt.first <= window.second) used.push_back(pt);
    }
    if (used.size() < 4) {
        throw TooFewPoints("need >= 4 points in [" + std::to_string(window.first) + ", " +
                           std::to_string(window.second) + "], got " + std::to_string(used.size()));
    }
    const double n = static_cast<double>(used.size());
    FitResult fit;
    fit.window = window;
    fit.points = used.size();
    fit.slope = 1.0 / kerr;

    double sum_c = 0.0;
    for (const auto& [eps, na] : used) sum_c += eps - kerr * na;
    fit.eps_c = sum_c / n;
    double ss = 0.0;
    for (const auto& [eps, na] : used) ss += std::pow(na - (eps - fit.eps_c) / kerr, 2);
    fit.residual = std::sqrt(ss / n);

    double mx = 0.0, my = 0.0;
    for (const auto& [eps, na] : used) {
        mx += eps;
        my += na;
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [eps, na] : used) {
        sxy += (eps - mx) * (na - my);
        sxx += (eps - mx) * (eps - mx);
    }
    fit.free_slope = sxx > 0.0 ? sxy / sxx : 0.0;
    const double intercept = my - fit.free_slope * mx;
    fit.free_eps_c = fit.free_slope != 0.0 ? -intercept / fit.free_slope : 0.0;
    return fit;
}

ConvergenceReport convergence_certify(const std::function<double(int)>& observable,
                                      std::span<const int> cutoffs)
{
    if (cutoffs.size() < 3) throw InvalidArgument("convergence check needs >= 3 cutoffs");
    for (std::size_t i = 1; i < cutoffs.size(); ++i) {
        if (!(cutoffs[i] > cutoffs[i - 1])) throw InvalidArgument("cutoffs must be increasing");
    }
    ConvergenceReport report;
    for (int d : cutoffs) {
        report.cutoffs.push_back(d);
        try {
            report.values.push_back(observable(d));
            report.errors.emplace_back();
        } catch (const Error& e) {
            report.values.push_back(std::nan(""));
            report.errors.emplace_back(e.what());
        }
    }
    const double a = report.values[report.values.size() - 2];
    const double b = report.values.back();
    const double scale = std::max(std::abs(a), std::abs(b));
    report.last_relative_change = scale > 0.0 ? std::abs(b - a) / scale : 0.0;
    report.converged = std::isfinite(a) && std::isfinite(b) && report.last_relative_change < 0.01;
    return report;
}

ConvergenceReport convergence_certify(const DriveProtocol& protocol,
                                      const std::function<double(const DensityMatrix&)>& extractor,
                                      std::span<const int> cutoffs)
{
    return convergence_certify(
        [&](int d) {
            const FockSpace space(d);
            const auto u = floquet_propagator(protocol, space);
            return extractor(steady_state_direct(u).rho);
        },
        cutoffs);
}

} // namespace kerr
