// floquet.cpp — propagator, spectrum, steady state, gaps

#include "kerr/floquet.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kerr/errors.hpp"
#include "kerr/linalg.hpp"

namespace kerr {

namespace {

Matrix half_period_exponential(const Superoperator& l, double period, ExpMethod method)
{
    const Matrix a = l.matrix * (0.5 * period);
    if (method == ExpMethod::Eigen) {
        if (auto r = linalg::expm_eigen(a)) return *std::move(r);
        throw ExpFailure("eigendecomposition exponential rejected (ill-conditioned)");
    }
    return linalg::expm(a);
}

// Entries exp(i theta (i - j)) at vec index i + D j: conjugation by exp(i theta n).
Vector rotation_phases(const FockSpace& space, double theta)
{
    const Eigen::Index d = space.size();
    Vector phases(d * d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            phases(i + d * j) = std::polar(1.0, theta * static_cast<double>(i - j));
        }
    }
    return phases;
}

SteadyState finalize_steady(const Vector& v, const FockSpace& space)
{
    Matrix rho = devectorize(v, space);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const cplx tr = rho.trace();
    if (std::abs(tr) < 1e-300) throw InvalidState("steady eigenvector has zero trace");
    rho /= tr.real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    DensityMatrix dm(space, std::move(rho));
    const double lo = dm.min_eigenvalue();
    if (lo < -1e-4) {
        throw NotPositive("steady state has eigenvalue " + std::to_string(lo) +
                          "; the Fock cutoff is probably too small");
    }
    return {std::move(dm), lo, lo < -1e-6};
}

} // namespace

Superoperator floquet_propagator(const DriveProtocol& protocol, const FockSpace& space,
                                 const PropagatorOptions& options)
{
    protocol.validate();
    if (!(protocol.kappa > 0.0)) {
        throw InvalidArgument("the Floquet propagator method requires kappa > 0");
    }
    const Superoperator l2 = kerr_liouvillian(protocol, space, protocol.eps2);
    Matrix e2 = half_period_exponential(l2, protocol.period, options.method);

    const double m1 = std::abs(protocol.eps1);
    const double m2 = std::abs(protocol.eps2);
    const bool same_modulus = std::abs(m1 - m2) <= 1e-15 * std::max(1.0, m2);
    Matrix e1;
    if (options.reuse_rotated_half && same_modulus) {
        // H(eps1) = V H(eps2) V^dag with V = exp(i theta n), exp(2 i theta) = eps1 / eps2.
        const double theta = m2 > 0.0 ? 0.5 * std::arg(protocol.eps1 / protocol.eps2) : 0.0;
        const Vector phases = rotation_phases(space, theta);
        e1 = phases.asDiagonal() * e2 * phases.conjugate().asDiagonal();
    } else {
        const Superoperator l1 = kerr_liouvillian(protocol, space, protocol.eps1);
        e1 = half_period_exponential(l1, protocol.period, options.method);
    }
    Matrix u = e2 * e1;
    return {space, std::move(u), "U(T)"};
}

cplx effective_exponent(cplx multiplier, double period)
{
    double phase = std::arg(multiplier);
    if (phase <= -std::numbers::pi) phase = std::numbers::pi;
    return cplx(std::log(std::abs(multiplier)), phase) / period;
}

FloquetSpectrum effective_spectrum(const Superoperator& propagator, double period,
                                   bool keep_eigenvectors)
{
    if (!(period > 0.0)) throw InvalidArgument("period must be positive");
    const Eigen::Index d2 = propagator.space.size() * propagator.space.size();
    if (propagator.matrix.rows() != d2 || propagator.matrix.cols() != d2) {
        throw DimensionMismatch("propagator is not D^2 x D^2");
    }
    auto er = linalg::eig(propagator.matrix, keep_eigenvectors);

    FloquetSpectrum spec{propagator.space, period, std::move(er.values), Vector(d2),
                         std::move(er.vectors), Vector(), -1};
    Eigen::Index best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    int near_one = 0;
    for (Eigen::Index k = 0; k < d2; ++k) {
        spec.exponents(k) = effective_exponent(spec.multipliers(k), period);
        const double dist = std::abs(spec.multipliers(k) - 1.0);
        if (dist < 1e-8) ++near_one;
        if (dist < best_dist) {
            best_dist = dist;
            best = k;
        }
    }
    if (near_one > 1) {
        throw DegenerateSteady(std::to_string(near_one) + " multipliers within 1e-8 of 1");
    }
    if (near_one == 0) {
        throw InvalidState("no multiplier within 1e-8 of 1 (closest at distance " +
                           std::to_string(best_dist) + "); propagator is not trace preserving");
    }
    spec.steady_index = best;
    if (keep_eigenvectors) {
        spec.steady_vector = spec.eigenvectors.col(best);
    } else {
        spec.steady_vector = linalg::eigenvector_near(propagator.matrix, spec.multipliers(best));
    }
    return spec;
}

SteadyState steady_state(const FloquetSpectrum& spectrum)
{
    if (spectrum.steady_index < 0) throw InvalidState("spectrum has no steady mode");
    return finalize_steady(spectrum.steady_vector, spectrum.space);
}

SteadyState steady_state_direct(const Superoperator& propagator)
{
    return finalize_steady(linalg::eigenvector_near(propagator.matrix, cplx(1.0, 0.0)),
                           propagator.space);
}

double GapReport::require_gap_p() const
{
    if (!gap_p) throw NoRealEigenvalue("no nonzero real effective eigenvalue");
    return *gap_p;
}

GapReport gaps(const FloquetSpectrum& spectrum, const GapTolerances& tol)
{
    const double period = spectrum.period;
    const auto& lam = spectrum.exponents;
    auto candidate = [&](Eigen::Index k) {
        return k != spectrum.steady_index && std::abs(lam(k)) > tol.zero;
    };

    double max_re = -std::numeric_limits<double>::infinity();
    double max_re_real = -std::numeric_limits<double>::infinity();
    double min_modulus = std::numeric_limits<double>::infinity();
    bool any = false;
    bool any_real = false;
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        if (!candidate(k)) continue;
        any = true;
        max_re = std::max(max_re, lam(k).real());
        min_modulus = std::min(min_modulus, std::abs(lam(k)));
        if (std::abs(lam(k).imag()) * period <= tol.real) {
            any_real = true;
            max_re_real = std::max(max_re_real, lam(k).real());
        }
    }
    if (!any) throw InvalidState("spectrum has no nonzero eigenvalues");

    GapReport report;
    report.gap_t = -max_re;
    if (any_real) {
        report.gap_p = -max_re_real;
        report.gap_p_is_smallest_modulus =
            std::abs(*report.gap_p - min_modulus) <= 1e-9 * std::max(1.0, min_modulus);
    }

    bool all_pi = true;
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        if (!candidate(k) || lam(k).real() < max_re - tol.family) continue;
        const double phase = std::abs(lam(k).imag()) * period;
        report.dominant_phase = std::max(report.dominant_phase, phase);
        if (phase < std::numbers::pi - 1e-3 || phase > std::numbers::pi + 1e-12) all_pi = false;
    }
    report.period_doubled = all_pi;
    return report;
}

} // namespace kerr
