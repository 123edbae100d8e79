// fock.cpp — truncated Fock-space operators and states

#include "kerr/fock.hpp"

#include <cmath>
#include <string>

#include "kerr/errors.hpp"

namespace kerr {

FockSpace::FockSpace(int cutoff) : dim_(cutoff)
{
    if (cutoff < 2) {
        throw InvalidArgument("Fock cutoff must be >= 2, got " + std::to_string(cutoff));
    }
}

DriveProtocol DriveProtocol::alternating(double detuning, double kerr, double eps0,
                                         double period, double kappa)
{
    DriveProtocol p;
    p.detuning = detuning;
    p.kerr = kerr;
    p.eps1 = cplx(-eps0, 0.0);
    p.eps2 = cplx(eps0, 0.0);
    p.period = period;
    p.kappa = kappa;
    return p;
}

void DriveProtocol::validate() const
{
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(detuning) || !finite(kerr) || !finite(eps1.real()) || !finite(eps1.imag()) ||
        !finite(eps2.real()) || !finite(eps2.imag()) || !finite(period) || !finite(kappa)) {
        throw InvalidArgument("drive protocol has non-finite parameters");
    }
    if (period <= 0.0) throw InvalidArgument("drive period must be positive");
    if (kappa < 0.0) throw InvalidArgument("dissipation rate must be non-negative");
}

cplx DriveProtocol::drive_at(double t) const
{
    double phase = std::fmod(t, period);
    if (phase < 0.0) phase += period;
    return phase < 0.5 * period ? eps1 : eps2;
}

FockOperator annihilation(const FockSpace& space)
{
    const Eigen::Index d = space.size();
    Matrix a = Matrix::Zero(d, d);
    for (Eigen::Index m = 1; m < d; ++m) {
        a(m - 1, m) = std::sqrt(static_cast<double>(m));
    }
    return {space, std::move(a), "a"};
}

FockOperator creation(const FockSpace& space)
{
    auto a = annihilation(space);
    return {space, a.matrix.adjoint(), "a_dag"};
}

FockOperator number_operator(const FockSpace& space)
{
    const Eigen::Index d = space.size();
    Matrix n = Matrix::Zero(d, d);
    for (Eigen::Index m = 0; m < d; ++m) n(m, m) = static_cast<double>(m);
    return {space, std::move(n), "n"};
}

FockOperator hamiltonian(const FockSpace& space, double detuning, double kerr, cplx eps)
{
    const Eigen::Index d = space.size();
    Matrix h = Matrix::Zero(d, d);
    for (Eigen::Index m = 0; m < d; ++m) {
        const double n = static_cast<double>(m);
        h(m, m) = -detuning * n + 0.5 * kerr * n * (n - 1.0);
    }
    // <m+2| (eps/2) a^dag^2 |m> = (eps/2) sqrt((m+1)(m+2)); the a^2 term is its conjugate.
    for (Eigen::Index m = 0; m + 2 < d; ++m) {
        const double amp = std::sqrt(static_cast<double>((m + 1) * (m + 2)));
        const cplx elem = 0.5 * eps * amp;
        h(m + 2, m) = elem;
        h(m, m + 2) = std::conj(elem);
    }
    return {space, std::move(h), "H"};
}

DensityMatrix::DensityMatrix(const FockSpace& space, Matrix rho)
    : space_(space), rho_(std::move(rho))
{
    if (rho_.rows() != space_.size() || rho_.cols() != space_.size()) {
        throw DimensionMismatch("density matrix shape does not match the Fock cutoff");
    }
    const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm <= 1e-10)) {
        throw InvalidState("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
    }
    const cplx tr = rho_.trace();
    if (!(std::abs(tr - 1.0) <= 1e-10)) {
        throw InvalidState("density matrix trace deviates from 1 by " +
                           std::to_string(std::abs(tr - 1.0)));
    }
}

DensityMatrix DensityMatrix::fock_state(const FockSpace& space, int m)
{
    if (m < 0 || m >= space.dim()) throw InvalidArgument("Fock level outside the cutoff");
    Matrix rho = Matrix::Zero(space.size(), space.size());
    rho(m, m) = 1.0;
    return {space, std::move(rho)};
}

DensityMatrix DensityMatrix::coherent(const FockSpace& space, cplx alpha)
{
    Vector psi(space.size());
    psi(0) = 1.0;
    for (Eigen::Index m = 1; m < space.size(); ++m) {
        psi(m) = psi(m - 1) * alpha / std::sqrt(static_cast<double>(m));
    }
    psi /= psi.norm();
    Matrix rho = psi * psi.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return {space, std::move(rho)};
}

Eigen::VectorXd DensityMatrix::eigenvalues() const
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double DensityMatrix::min_eigenvalue() const { return eigenvalues().minCoeff(); }

DensityMatrix thermal_density_matrix(const FockSpace& space, double mean_photons)
{
    if (!(mean_photons >= 0.0)) throw InvalidArgument("mean photon number must be >= 0");
    const double q = mean_photons / (mean_photons + 1.0);
    const double tail = std::pow(q, space.dim());
    if (tail > 1e-10) {
        throw TailTooHeavy("thermal tail mass " + std::to_string(tail) + " beyond cutoff " +
                           std::to_string(space.dim()) + " for Na=" + std::to_string(mean_photons));
    }
    Matrix rho = Matrix::Zero(space.size(), space.size());
    double w = 1.0;
    double total = 0.0;
    for (Eigen::Index m = 0; m < space.size(); ++m) {
        rho(m, m) = w;
        total += w;
        w *= q;
    }
    rho /= total;
    return {space, std::move(rho)};
}

cplx expectation(const Matrix& op, const DensityMatrix& rho)
{
    if (op.rows() != rho.matrix().rows() || op.cols() != rho.matrix().cols()) {
        throw DimensionMismatch("operator and state dimensions differ");
    }
    return (rho.matrix() * op).trace();
}

double trace_distance(const Matrix& rho, const Matrix& sigma)
{
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw DimensionMismatch("trace distance of matrices with different shapes");
    }
    Matrix diff = rho - sigma;
    diff = 0.5 * (diff + diff.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace kerr
