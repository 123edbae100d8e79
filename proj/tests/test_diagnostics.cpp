// test_diagnostics.cpp — observables, entropy baseline, fit, convergence

#include "doctest.h"

#include <cmath>
#include <random>

#include "kerr/diagnostics.hpp"
#include "kerr/errors.hpp"
#include "support.hpp"

using namespace kerr;

TEST_CASE("observables of simple states")
{
    const FockSpace space(6);
    const auto vac = steady_observables(DensityMatrix::fock_state(space, 0));
    CHECK(vac.mean_photons == 0.0);
    CHECK(vac.variance == 0.0);
    CHECK(vac.entropy == 0.0);
    CHECK(vac.thermal_entropy == 0.0);
    CHECK(vac.entropy_ratio == 0.0);
    CHECK(vac.fano == 0.0);

    Matrix mix = Matrix::Zero(6, 6);
    mix(0, 0) = mix(1, 1) = 0.5;
    const auto two = steady_observables(DensityMatrix(space, mix));
    CHECK(two.mean_photons == doctest::Approx(0.5));
    CHECK(two.variance == doctest::Approx(0.25));
    CHECK(two.entropy == doctest::Approx(std::log(2.0)));
    CHECK(two.fano == doctest::Approx(0.5));

    const auto th = steady_observables(thermal_density_matrix(FockSpace(80), 1.0));
    CHECK(th.entropy == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-10));
    CHECK(th.thermal_entropy == doctest::Approx(1.38629436).epsilon(1e-8));

    for (int m = 0; m < 6; ++m) CHECK(steady_observables(DensityMatrix::fock_state(space, m)).variance == doctest::Approx(0.0));
}

TEST_CASE("thermal entropy formula")
{
    CHECK(thermal_entropy(0.0) == 0.0);
    CHECK(thermal_entropy(1.0) == doctest::Approx(2.0 * std::log(2.0)));
    CHECK(thermal_entropy(3.0) == doctest::Approx(4.0 * std::log(4.0) - 3.0 * std::log(3.0)));
    for (double na : {0.1, 0.5, 2.0, 5.0}) {
        const double d = 2.0 + std::ceil(std::log(1e-12) / std::log(na / (na + 1.0)));
        const auto obs = steady_observables(thermal_density_matrix(FockSpace(static_cast<int>(d)), na));
        CHECK(std::abs(obs.entropy_ratio - 1.0) < 1e-10);
    }
}

TEST_CASE("entropy bounds and unitary invariance")
{
    std::mt19937_64 rng(41);
    const FockSpace space(12);
    for (int trial = 0; trial < 5; ++trial) {
        const auto rho = testing::random_density(space, rng);
        const double s = von_neumann_entropy(rho);
        CHECK(s <= std::log(12.0) + 1e-8);
        CHECK(s >= 0.0);
        const Matrix u = testing::random_unitary(12, rng);
        Matrix rotated = u * rho.matrix() * u.adjoint();
        rotated = 0.5 * (rotated + rotated.adjoint()).eval();
        CHECK(std::abs(von_neumann_entropy(DensityMatrix(space, rotated)) - s) < 1e-9);
    }
    Matrix flat = Matrix::Identity(12, 12) / 12.0;
    CHECK(von_neumann_entropy(DensityMatrix(space, flat)) == doctest::Approx(std::log(12.0)));

    Matrix bad = Matrix::Zero(12, 12);
    bad(0, 0) = 1.1;
    bad(1, 1) = -0.1;
    CHECK_THROWS_AS(von_neumann_entropy(DensityMatrix(space, bad)), NotPositive);
}

TEST_CASE("critical drive fit")
{
    std::vector<std::pair<double, double>> exact;
    for (int i = 0; i <= 8; ++i) {
        const double e = 2.2 + 0.1 * i;
        exact.push_back({e, (e - 0.27) / 0.2});
    }
    const auto f = fit_critical_drive(exact, 0.2, {2.2, 3.0});
    CHECK(f.eps_c == doctest::Approx(0.27).epsilon(1e-12));
    CHECK(f.residual < 1e-12);
    CHECK(f.slope == doctest::Approx(5.0));
    CHECK(f.points == 9);
    CHECK(f.free_slope == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(f.free_eps_c == doctest::Approx(0.27).epsilon(1e-9));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 0.01);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<double, double>> pts;
        for (auto [e, na] : exact) pts.push_back({e, na + noise(rng)});
        const auto g = fit_critical_drive(pts, 0.2, {2.2, 3.0});
        CHECK(std::abs(g.eps_c - 0.27) < 0.02);
        CHECK(g.residual >= 0.0);
    }

    CHECK_THROWS_AS(fit_critical_drive(exact, 0.2, {2.75, 3.0}), TooFewPoints);
}

TEST_CASE("convergence certification")
{
    const std::vector<int> ds{10, 20, 30};
    const auto flat = convergence_certify([](int) { return 4.2; }, ds);
    CHECK(flat.converged);
    CHECK(flat.last_relative_change == 0.0);

    const auto drifting = convergence_certify([](int d) { return 1.0 + 10.0 / d; }, ds);
    CHECK_FALSE(drifting.converged);
    CHECK(drifting.values.size() == 3);

    const auto failing = convergence_certify(
        [](int d) -> double {
            if (d == 10) throw NotPositive("cutoff too small");
            return 2.0;
        },
        ds);
    CHECK(failing.errors[0].find("cutoff too small") != std::string::npos);
    CHECK(failing.converged);

    const auto vac = convergence_certify(
        DriveProtocol::alternating(-1.0, 0.2, 0.0, 2.0, 0.5),
        [](const DensityMatrix& rho) { return rho.matrix()(0, 0).real(); }, std::vector<int>{3, 4, 5});
    CHECK(vac.converged);
    CHECK(vac.values[0] == doctest::Approx(1.0).epsilon(1e-8));

    CHECK_THROWS_AS(convergence_certify([](int) { return 1.0; }, std::vector<int>{10, 20}), InvalidArgument);
    CHECK_THROWS_AS(convergence_certify([](int) { return 1.0; }, std::vector<int>{10, 30, 20}), InvalidArgument);
}
