// test_floquet.cpp — propagator, effective spectrum, steady state, gaps

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kerr/errors.hpp"
#include "kerr/floquet.hpp"
#include "kerr/linalg.hpp"

using namespace kerr;

namespace {

const double pi = std::numbers::pi;

DriveProtocol reference(double eps0) { return DriveProtocol::alternating(-1.0, 0.2, eps0, 2.0, 0.5); }

std::vector<cplx> damped_set(int d)
{
    std::vector<cplx> out;
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) out.push_back({-0.25 * (n + m), -1.0 * (n - m)});
    }
    return out;
}

// Synthetic spectrum with the given effective exponents; index 0 is the steady mode.
FloquetSpectrum synthetic(std::vector<cplx> exps, double period)
{
    FloquetSpectrum s{FockSpace(2), period, {}, {}, {}, {}, 0};
    s.exponents = Eigen::Map<Vector>(exps.data(), static_cast<Eigen::Index>(exps.size()));
    s.multipliers = (s.exponents * period).array().exp();
    return s;
}

} // namespace

TEST_CASE("effective exponent arithmetic")
{
    CHECK(std::abs(effective_exponent(1.0, 2.0)) == 0.0);
    const cplx l = effective_exponent(-std::exp(-0.5), 2.0);
    CHECK(l.real() == doctest::Approx(-0.25));
    CHECK(l.imag() == doctest::Approx(pi / 2));
    // The branch cut belongs to +pi.
    const cplx below = effective_exponent(cplx(-0.5, -0.0), 1.0);
    CHECK(below.imag() == doctest::Approx(pi));
}

TEST_CASE("unmodulated drive gives exp(L T)")
{
    const FockSpace space(6);
    DriveProtocol p = reference(0.0);
    p.eps1 = p.eps2 = cplx(0.9, 0.2);
    const auto u = floquet_propagator(p, space);
    const auto want = linalg::expm(kerr_liouvillian(p, space, p.eps1).matrix * p.period);
    CHECK((u.matrix - want).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("half-period order: first half uses eps1")
{
    const FockSpace space(6);
    DriveProtocol p = reference(0.0);
    p.eps1 = 1.0;
    p.eps2 = cplx(0.0, 0.3);
    const auto l1 = kerr_liouvillian(p, space, p.eps1).matrix;
    const auto l2 = kerr_liouvillian(p, space, p.eps2).matrix;
    const Matrix want = linalg::expm(l2) * linalg::expm(l1);
    CHECK((floquet_propagator(p, space).matrix - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("single-photon decay over one period")
{
    const FockSpace space(5);
    const auto p = DriveProtocol::alternating(0.0, 0.0, 0.0, 2.0, 0.5);
    const Matrix rho = devectorize(floquet_propagator(p, space).matrix *
                                       vectorize(DensityMatrix::fock_state(space, 1).matrix()),
                                   space);
    CHECK(rho(1, 1).real() == doctest::Approx(0.3679).epsilon(1e-4));
    CHECK(rho(0, 0).real() == doctest::Approx(0.6321).epsilon(1e-4));
    CHECK(std::abs(rho(1, 1) - std::exp(-1.0)) < 1e-12);
}

TEST_CASE("Pade and eigen paths agree; rotated half-period matches")
{
    const FockSpace space(8);
    const auto p = reference(1.1);
    const auto pade = floquet_propagator(p, space, {ExpMethod::Pade, false});
    const auto eig = floquet_propagator(p, space, {ExpMethod::Eigen, false});
    const auto rot = floquet_propagator(p, space, {ExpMethod::Pade, true});
    CHECK((pade.matrix - eig.matrix).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((pade.matrix - rot.matrix).cwiseAbs().maxCoeff() < 1e-10);

    DriveProtocol complex_drive = p;
    complex_drive.eps1 = std::polar(1.1, 0.7);
    complex_drive.eps2 = std::polar(1.1, -1.9);
    const auto a = floquet_propagator(complex_drive, space, {ExpMethod::Pade, true});
    const auto b = floquet_propagator(complex_drive, space, {ExpMethod::Pade, false});
    CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("propagator requires dissipation")
{
    auto p = reference(1.0);
    p.kappa = 0.0;
    CHECK_THROWS_AS(floquet_propagator(p, FockSpace(4)), InvalidArgument);
}

TEST_CASE("static damped oscillator: spectrum and gaps")
{
    const int d = 6;
    const FockSpace space(d);
    {
        const auto p = DriveProtocol::alternating(-1.0, 0.0, 0.0, 0.5, 0.5);
        const auto s = effective_spectrum(floquet_propagator(p, space), p.period);
        auto want = damped_set(d);
        double worst = 0.0;
        for (Eigen::Index k = 0; k < s.exponents.size(); ++k) {
            auto it = std::min_element(want.begin(), want.end(), [&](cplx a, cplx b) {
                return std::abs(a - s.exponents(k)) < std::abs(b - s.exponents(k));
            });
            worst = std::max(worst, std::abs(*it - s.exponents(k)));
            want.erase(it);
        }
        CHECK(worst < 1e-7);
    }
    const auto p = DriveProtocol::alternating(-1.0, 0.0, 0.0, 2.0, 0.5);
    const auto s = effective_spectrum(floquet_propagator(p, space), p.period);
    const auto g = gaps(s);
    CHECK(g.gap_t == doctest::Approx(0.25).epsilon(1e-10));
    REQUIRE(g.gap_p.has_value());
    CHECK(*g.gap_p == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_FALSE(g.period_doubled);
    CHECK(g.require_gap_p() == *g.gap_p);

    const auto ss = steady_state(s);
    CHECK(std::abs(ss.rho.matrix()(0, 0) - 1.0) < 1e-8);
    CHECK((ss.rho.matrix() - DensityMatrix::fock_state(space, 0).matrix()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("synthetic spectra: period doubling and missing real modes")
{
    {
        const auto s = synthetic({0.0, {-0.1, pi / 2.0}, {-0.1, -pi / 2.0}, {-0.4, 0.0}}, 2.0);
        const auto g = gaps(s);
        CHECK(g.period_doubled);
        CHECK(g.gap_t == doctest::Approx(0.1));
        CHECK(*g.gap_p == doctest::Approx(0.4));
        CHECK(std::abs(g.dominant_phase) == doctest::Approx(pi));
    }
    {
        const auto s = synthetic({0.0, {-0.1, 1.0}, {-0.1, -1.0}}, 2.0);
        const auto g = gaps(s);
        CHECK_FALSE(g.period_doubled);
        CHECK_FALSE(g.gap_p.has_value());
        CHECK_THROWS_AS(g.require_gap_p(), NoRealEigenvalue);
    }
    {
        // Mixed family at the same decay rate: one pi-phase, one real.
        const auto s = synthetic({0.0, {-0.1, pi / 2.0}, {-0.1, 0.0}}, 2.0);
        CHECK_FALSE(gaps(s).period_doubled);
    }
}

TEST_CASE("degenerate and missing steady modes")
{
    const FockSpace space(2);
    Superoperator id{space, Matrix::Identity(4, 4), "id"};
    CHECK_THROWS_AS(effective_spectrum(id, 1.0), DegenerateSteady);
    Superoperator half{space, 0.5 * Matrix::Identity(4, 4), "half"};
    CHECK_THROWS_AS(effective_spectrum(half, 1.0), InvalidState);
}

TEST_CASE("spectral properties of the driven protocol")
{
    const FockSpace space(30);
    const auto p = reference(0.3);
    const auto u = floquet_propagator(p, space);
    const auto s = effective_spectrum(u, p.period);

    double radius = 0.0;
    for (Eigen::Index k = 0; k < s.multipliers.size(); ++k) radius = std::max(radius, std::abs(s.multipliers(k)));
    CHECK(std::abs(radius - 1.0) < 1e-8);
    CHECK(std::abs(s.multipliers(s.steady_index) - 1.0) < 1e-8);

    // Conjugate pairing. Multipliers at roundoff level (|mu| < 1e-8) carry no
    // meaningful phase, so there the pairing is checked on mu itself.
    for (Eigen::Index k = 0; k < s.exponents.size(); ++k) {
        CHECK(s.exponents(k).real() <= 1e-8);
        const cplx z = s.exponents(k);
        const cplx mu = s.multipliers(k);
        double partner = 1e300, mu_partner = 1e300;
        for (Eigen::Index j = 0; j < s.exponents.size(); ++j) {
            partner = std::min(partner, std::abs(s.exponents(j) - std::conj(z)));
            mu_partner = std::min(mu_partner, std::abs(s.multipliers(j) - std::conj(mu)));
        }
        INFO("lambda = " << z << ", |mu| = " << std::abs(mu));
        if (std::abs(mu) > 1e-8) {
            if (std::abs(std::abs(z.imag()) * p.period - pi) > 1e-6) CHECK(partner < 1e-8);
        } else {
            CHECK(mu_partner < 1e-12);
        }
    }

    const auto g = gaps(s);
    REQUIRE(g.gap_p.has_value());
    CHECK(g.gap_t <= *g.gap_p + 1e-10);

    const auto ss = steady_state(s);
    const Matrix evolved = devectorize(u.matrix * vectorize(ss.rho.matrix()), space);
    CHECK(trace_distance(evolved, ss.rho.matrix()) < 1e-7);
    CHECK_FALSE(ss.positivity_warning);

    const auto direct = steady_state_direct(u);
    CHECK(trace_distance(direct.rho.matrix(), ss.rho.matrix()) < 1e-9);
}

TEST_CASE("phase structure at D=40")
{
    const FockSpace space(40);
    const auto regular = gaps(effective_spectrum(floquet_propagator(reference(0.2), space), 2.0));
    CHECK_FALSE(regular.period_doubled);

    const auto crystal = gaps(effective_spectrum(floquet_propagator(reference(1.2), space), 2.0));
    CHECK(crystal.period_doubled);
    CHECK(std::abs(std::abs(crystal.dominant_phase) - pi) < 1e-3);

    const auto coarse = gaps(effective_spectrum(floquet_propagator(reference(1.2), FockSpace(30)), 2.0));
    CHECK(crystal.gap_t < coarse.gap_t);
}
