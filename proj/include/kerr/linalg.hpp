// linalg.hpp — dense complex kernels: matrix exponential and general eigensolver

#pragma once

#include <Eigen/Dense>

#include <optional>

#include "kerr/fock.hpp"

namespace kerr::linalg {

// Scaling-and-squaring with a diagonal Pade approximant of degree 3..13
// chosen from the 1-norm. Throws ExpFailure if the result is not finite.
Matrix expm_pade(const Matrix& a);

// V exp(Lambda) V^-1 from a full eigendecomposition. Returns nullopt when the
// eigenvector matrix has 1-norm condition estimate >= max_condition.
std::optional<Matrix> expm_eigen(const Matrix& a, double max_condition = 1e8);

// Pade first, eigendecomposition as fallback; ExpFailure if both fail.
Matrix expm(const Matrix& a);

struct EigenResult {
    Vector values;
    Matrix vectors;  // empty unless requested; columns are right eigenvectors
};

// General (non-Hermitian) dense eigensolver, backed by LAPACK zgeev.
EigenResult eig(const Matrix& a, bool right_vectors);

// Right eigenvector of `a` for the eigenvalue closest to `shift`, by inverse
// iteration on (a - shift I) with a perturbed shift. Unit 2-norm.
Vector eigenvector_near(const Matrix& a, cplx shift);

double one_norm(const Matrix& a);

} // namespace kerr::linalg
