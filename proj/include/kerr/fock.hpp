// fock.hpp — truncated Fock space, Kerr oscillator Hamiltonian, drive protocol
//
// Basis convention: index m is the photon number (0-based) and the row index
// of every matrix is the bra, so op(i, j) = <i|op|j>.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>

namespace kerr {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class FockSpace {
public:
    // Throws InvalidArgument when cutoff < 2.
    explicit FockSpace(int cutoff);

    int dim() const noexcept { return dim_; }
    Eigen::Index size() const noexcept { return dim_; }

    bool operator==(const FockSpace&) const = default;

private:
    int dim_;
};

struct FockOperator {
    FockSpace space;
    Matrix matrix;
    std::string label;
};

// Two-step drive: eps1 on [kT, kT + T/2), eps2 on [kT + T/2, (k+1)T).
struct DriveProtocol {
    double detuning = 0.0;
    double kerr = 0.0;
    cplx eps1{0.0, 0.0};
    cplx eps2{0.0, 0.0};
    double period = 1.0;
    double kappa = 0.0;

    // The case studied throughout: eps2 = -eps1 = eps0 (real).
    static DriveProtocol alternating(double detuning, double kerr, double eps0,
                                     double period, double kappa);

    // Throws InvalidArgument on T <= 0, kappa < 0 or non-finite fields.
    void validate() const;

    cplx drive_at(double t) const;
};

FockOperator annihilation(const FockSpace& space);
FockOperator creation(const FockSpace& space);
FockOperator number_operator(const FockSpace& space);

// H = -detuning a^dag a + (kerr/2) a^dag^2 a^2 + (eps/2) a^dag^2 + (conj(eps)/2) a^2.
// Off-diagonal entries are written in conjugate pairs, so H == H^dag exactly.
FockOperator hamiltonian(const FockSpace& space, double detuning, double kerr, cplx eps);

class DensityMatrix {
public:
    // Validates shape, Hermiticity (1e-10 max-norm) and unit trace (1e-10).
    // Positivity is not checked here; see min_eigenvalue().
    DensityMatrix(const FockSpace& space, Matrix rho);

    static DensityMatrix fock_state(const FockSpace& space, int m);
    // Normalized truncation of the coherent state |alpha>.
    static DensityMatrix coherent(const FockSpace& space, cplx alpha);

    const FockSpace& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return rho_; }

    double min_eigenvalue() const;
    Eigen::VectorXd eigenvalues() const;

private:
    FockSpace space_;
    Matrix rho_;
};

// Geometric photon distribution with mean Na, renormalized after truncation.
// Throws TailTooHeavy when the discarded mass (Na/(Na+1))^D exceeds 1e-10.
DensityMatrix thermal_density_matrix(const FockSpace& space, double mean_photons);

cplx expectation(const Matrix& op, const DensityMatrix& rho);

// 0.5 * sum |eig(rho - sigma)|.
double trace_distance(const Matrix& rho, const Matrix& sigma);

} // namespace kerr
