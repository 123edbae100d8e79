// diagnostics.hpp — steady-state observables, thermal entropy baseline,
// critical-drive fit and cutoff convergence checks

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kerr/fock.hpp"

namespace kerr {

struct SteadyObservables {
    double mean_photons = 0.0;      // Na = Tr(rho n)
    double variance = 0.0;          // <n^2> - <n>^2
    double fano = 0.0;              // variance / Na, 0 when Na == 0
    double entropy = 0.0;           // von Neumann, natural log
    double thermal_entropy = 0.0;   // thermal state with the same Na
    double entropy_ratio = 0.0;     // entropy / thermal_entropy, 0 when Na == 0
    std::optional<double> negativity;  // filled in by callers that evaluate a Wigner map
};

// (Na + 1) ln(Na + 1) - Na ln Na, with the Na = 0 limit equal to 0.
double thermal_entropy(double mean_photons);

// -sum p ln p over the eigenvalues of rho. Eigenvalues below 1e-14 are dropped;
// an eigenvalue below -1e-8 raises NotPositive.
double von_neumann_entropy(const DensityMatrix& rho);

SteadyObservables steady_observables(const DensityMatrix& rho);

struct FitResult {
    double eps_c = 0.0;
    double slope = 0.0;         // fixed to 1/U
    double residual = 0.0;      // RMS of Na - (eps0 - eps_c)/U
    std::pair<double, double> window;
    std::size_t points = 0;
    double free_slope = 0.0;    // unconstrained linear fit, for comparison
    double free_eps_c = 0.0;
};

// Least squares of Na(eps0) = (eps0 - eps_c)/U with the slope pinned to 1/U,
// using only points inside the closed window. Throws TooFewPoints (< 4).
FitResult fit_critical_drive(std::span<const std::pair<double, double>> points, double kerr,
                             std::pair<double, double> window);

struct ConvergenceReport {
    std::vector<int> cutoffs;
    std::vector<double> values;
    std::vector<std::string> errors;  // empty string when the run succeeded
    double last_relative_change = 0.0;
    bool converged = false;
};

// Evaluates observable(D) for each cutoff (increasing, >= 3 entries).
// Converged iff the last two values differ by < 1% relative.
ConvergenceReport convergence_certify(const std::function<double(int)>& observable,
                                      std::span<const int> cutoffs);

// Steady state of U(T) at each cutoff, fed to the extractor.
ConvergenceReport convergence_certify(const DriveProtocol& protocol,
                                      const std::function<double(const DensityMatrix&)>& extractor,
                                      std::span<const int> cutoffs);

} // namespace kerr
