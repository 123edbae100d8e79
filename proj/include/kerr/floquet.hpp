// floquet.hpp — one-period propagator, effective Liouvillian spectrum,
// quasi-steady state and dissipative gaps
//
// The effective generator (1/T) ln U(T) is never formed as a matrix: its
// eigenvalues follow from the propagator multipliers through the principal
// logarithm, and the quasi-steady state is the multiplier-1 eigenvector.

#pragma once

#include <optional>

#include "kerr/liouvillian.hpp"

namespace kerr {

enum class ExpMethod { Pade, Eigen };

struct PropagatorOptions {
    ExpMethod method = ExpMethod::Pade;
    // When |eps1| == |eps2| the first half-period exponential is a diagonal
    // similarity transform of the second one; reuse it instead of a second expm.
    bool reuse_rotated_half = true;
};

// U(T) = exp(L2 T/2) exp(L1 T/2). Requires kappa > 0.
Superoperator floquet_propagator(const DriveProtocol& protocol, const FockSpace& space,
                                 const PropagatorOptions& options = {});

struct FloquetSpectrum {
    FockSpace space;
    double period = 0.0;
    Vector multipliers;           // mu_k
    Vector exponents;             // lambda_k = log(mu_k) / T, Im(lambda_k) T in (-pi, pi]
    Matrix eigenvectors;          // empty unless requested
    Vector steady_vector;         // right eigenvector of mu closest to 1
    Eigen::Index steady_index = -1;
};

// Principal-branch map mu -> log(mu)/T with the phase taken in (-pi, pi].
cplx effective_exponent(cplx multiplier, double period);

// Throws DegenerateSteady if two multipliers lie within 1e-8 of 1, InvalidState
// if none does.
FloquetSpectrum effective_spectrum(const Superoperator& propagator, double period,
                                   bool keep_eigenvectors = false);

struct SteadyState {
    DensityMatrix rho;
    double min_eigenvalue = 0.0;
    bool positivity_warning = false;  // min eigenvalue in [-1e-4, -1e-6)
};

// Devectorize, Hermitize, normalize. NotPositive when min eigenvalue < -1e-4.
SteadyState steady_state(const FloquetSpectrum& spectrum);

// Same post-processing on the fixed point of U(T) found by inverse iteration,
// without the full eigendecomposition.
SteadyState steady_state_direct(const Superoperator& propagator);

struct GapReport {
    std::optional<double> gap_p;      // undefined when no nonzero real eigenvalue exists
    double gap_t = 0.0;
    double dominant_phase = 0.0;      // |Im lambda| T of the slowest nonzero mode(s)
    bool period_doubled = false;
    bool gap_p_is_smallest_modulus = false;

    // Throws NoRealEigenvalue when gap_p is undefined.
    double require_gap_p() const;
};

struct GapTolerances {
    double real = 1e-6;     // |Im lambda| T below this counts as real
    double zero = 1e-8;     // |lambda| below this counts as the steady mode
    double family = 1e-8;   // eigenvalues within this of max Re share the slowest decay
};

GapReport gaps(const FloquetSpectrum& spectrum, const GapTolerances& tol = {});

} // namespace kerr
