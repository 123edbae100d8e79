// classical.hpp — mean-field dynamics of the driven Kerr oscillator
//
//   d alpha/dt = (-kappa/2 + i Delta - i U |alpha|^2) alpha - i eps(t) conj(alpha)
//
// The Poincare section is the stroboscopic map t = kT + phase * T.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kerr/fock.hpp"

namespace kerr::classical {

enum class AttractorKind { FixedPoint, PeriodK, Chaotic, Unclassified, Diverged };

struct Classification {
    AttractorKind kind = AttractorKind::Unclassified;
    int period = 0;  // cycle length for FixedPoint (1) and PeriodK (k)

    bool operator==(const Classification&) const = default;
    // "FixedPoint", "PeriodTwo", "PeriodK(3)", "Chaotic", "Unclassified", "Diverged"
    std::string name() const;
    static Classification fixed_point() { return {AttractorKind::FixedPoint, 1}; }
    static Classification period_k(int k) { return {AttractorKind::PeriodK, k}; }
    static Classification chaotic() { return {AttractorKind::Chaotic, 0}; }
};

struct OrbitSettings {
    int transient_periods = 500;
    int recorded_periods = 2000;
    int steps_per_half = 100;
    double section_phase = 0.0;       // fraction of T in [0, 1)
    double divergence_radius = 1e3;
};

struct StroboscopicOrbit {
    DriveProtocol protocol;
    cplx initial{};
    int transient_periods = 0;
    std::vector<cplx> samples;
    Classification classification;
    std::optional<double> lyapunov;
};

cplx mean_field_rhs(cplx alpha, cplx eps, const DriveProtocol& p);

// Real Jacobian d(Re f, Im f)/d(Re alpha, Im alpha).
Eigen::Matrix2d mean_field_jacobian(cplx alpha, cplx eps, const DriveProtocol& p);

// Advance alpha from t0 to t1 with RK4; the step is (T/2)/steps_per_half and is
// shortened so that drive switches fall on step boundaries.
cplx propagate(const DriveProtocol& p, cplx alpha, double t0, double t1, int steps_per_half);

// Integrates transient + recorded periods, collects the section samples and the
// tangent-space Lyapunov exponent over the recorded window, then classifies.
// Divergence (|alpha| > divergence_radius) yields classification Diverged.
StroboscopicOrbit integrate_orbit(const DriveProtocol& p, cplx alpha0,
                                  const OrbitSettings& settings = {});

double default_cluster_radius(const std::vector<cplx>& samples);

// Greedy clustering with radius delta; <= 8 clusters visited cyclically gives
// FixedPoint / PeriodK, otherwise Chaotic when lyapunov > 1e-3 / T.
// Requires >= 200 samples.
Classification classify(const std::vector<cplx>& samples, std::optional<double> lyapunov,
                        double period, std::optional<double> cluster_radius = std::nullopt);

// Largest exponent (per unit time) after discarding settings.transient_periods;
// averaged over `periods` periods. Throws Diverged.
double lyapunov_exponent(const DriveProtocol& p, cplx alpha0, int periods,
                         const OrbitSettings& settings = {});

struct OrbitSummary {
    cplx initial{};
    std::vector<double> re_samples;
    Classification classification;
    std::optional<double> lyapunov;
};

struct BifurcationDiagram {
    std::vector<double> drive_values;              // strictly increasing
    std::vector<std::vector<OrbitSummary>> orbits;  // [drive index][initial condition]

    // Most frequent classification among the initial conditions of a column;
    // ties go to the earliest initial condition.
    Classification column_classification(std::size_t i) const;
    std::optional<double> column_lyapunov(std::size_t i) const;  // max over orbits
};

// Uniform point in the disk |alpha| <= radius, determined by (seed, i, j) alone.
cplx sample_initial_condition(std::uint64_t seed, std::size_t i, std::size_t j, double radius);

// Radius sqrt((eps0 + 1)/U) of the initial-condition disk.
double initial_condition_radius(double eps0, double kerr);

// Random initial conditions uniformly in |alpha| <= sqrt((eps0 + 1)/U), seeded
// per (seed, drive index, condition index) so results do not depend on workers.
BifurcationDiagram bifurcation_sweep(const DriveProtocol& templ, const std::vector<double>& eps0,
                                     int initial_conditions, std::uint64_t seed,
                                     const OrbitSettings& settings = {}, int workers = 1);

} // namespace kerr::classical
