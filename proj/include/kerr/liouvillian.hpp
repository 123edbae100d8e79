// liouvillian.hpp — Lindblad generator on vectorized density matrices
//
// Vectorization is column-stacking throughout: vec(A X B) = (B^T (x) A) vec(X),
// so the entry rho(i, j) sits at index i + D * j.

#pragma once

#include <string>
#include <vector>

#include "kerr/fock.hpp"

namespace kerr {

struct Superoperator {
    FockSpace space;
    Matrix matrix;  // D^2 x D^2
    std::string label;
};

Vector vectorize(const Matrix& rho);
Matrix devectorize(const Vector& v, const FockSpace& space);

// Generator of  d rho/dt = i[rho, H] + kappa (a rho a^dag - {a^dag a, rho}/2).
// Throws DimensionMismatch when H is not square on its space, InvalidArgument
// when kappa < 0 or H is not Hermitian.
Superoperator build_liouvillian(const FockOperator& h, double kappa);

// Generator for the Kerr oscillator with a fixed drive amplitude.
Superoperator kerr_liouvillian(const DriveProtocol& protocol, const FockSpace& space, cplx eps);

// d rho/dt for the given state.
Matrix apply(const Superoperator& l, const Matrix& rho);
Matrix apply(const Superoperator& l, const DensityMatrix& rho);

struct MasterEquationRun {
    DensityMatrix state;
    double dt = 0.0;                   // step actually used (divides T/2)
    std::vector<double> trace_drift;   // |Tr rho - 1| before each per-period correction
};

// Fixed-step RK4 of the piecewise-constant master equation in matrix form.
// dt is reduced so that it divides T/2; t_final must be a multiple of T.
// Throws StepTooLarge if the per-period trace drift exceeds 1e-6.
MasterEquationRun integrate_master_equation(const DriveProtocol& protocol,
                                            const DensityMatrix& rho0, double t_final,
                                            double dt);

} // namespace kerr
