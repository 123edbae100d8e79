// support.hpp — shared helpers for the test suites

#pragma once

#include <random>

#include "kerr/fock.hpp"

namespace kerr::testing {

inline Matrix random_hermitian(int d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = {g(rng), g(rng)};
    }
    return 0.5 * (m + m.adjoint());
}

// Random full-rank density matrix G G^dag / Tr.
inline DensityMatrix random_density(const FockSpace& space, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    const int d = space.dim();
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = {g(rng), g(rng)};
    }
    Matrix rho = m * m.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(space, rho);
}

inline Matrix random_unitary(int d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = {g(rng), g(rng)};
    }
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ() * Matrix::Identity(d, d);
}

} // namespace kerr::testing
