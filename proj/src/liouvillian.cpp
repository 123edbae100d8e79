// liouvillian.cpp — superoperator construction and the RK4 master-equation oracle

#include "kerr/liouvillian.hpp"

#include <cmath>
#include <string>

#include "kerr/errors.hpp"

namespace kerr {

namespace {

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

void check_space(const FockSpace& space, const Matrix& m, const char* what)
{
    if (m.rows() != space.size() || m.cols() != space.size()) {
        throw DimensionMismatch(std::string(what) + " does not match the Fock cutoff");
    }
}

} // namespace

Vector vectorize(const Matrix& rho)
{
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix devectorize(const Vector& v, const FockSpace& space)
{
    if (v.size() != space.size() * space.size()) {
        throw DimensionMismatch("vector length is not D^2");
    }
    return Eigen::Map<const Matrix>(v.data(), space.size(), space.size());
}

Superoperator build_liouvillian(const FockOperator& h, double kappa)
{
    check_space(h.space, h.matrix, "Hamiltonian");
    if (!(kappa >= 0.0)) throw InvalidArgument("kappa must be non-negative");
    if ((h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidArgument("Hamiltonian is not Hermitian");
    }
    const auto& space = h.space;
    const Eigen::Index d = space.size();
    const Matrix ident = Matrix::Identity(d, d);
    const Matrix a = annihilation(space).matrix;
    const Matrix n = a.adjoint() * a;
    const cplx i(0.0, 1.0);

    Matrix l = i * (kron(h.matrix.transpose(), ident) - kron(ident, h.matrix));
    if (kappa > 0.0) {
        l += kappa * (kron(a.conjugate(), a) - 0.5 * kron(ident, n) - 0.5 * kron(n.transpose(), ident));
    }
    return {space, std::move(l), "L[" + h.label + "]"};
}

Superoperator kerr_liouvillian(const DriveProtocol& protocol, const FockSpace& space, cplx eps)
{
    protocol.validate();
    return build_liouvillian(hamiltonian(space, protocol.detuning, protocol.kerr, eps),
                             protocol.kappa);
}

Matrix apply(const Superoperator& l, const Matrix& rho)
{
    check_space(l.space, rho, "state");
    const Eigen::Index d2 = l.space.size() * l.space.size();
    if (l.matrix.rows() != d2 || l.matrix.cols() != d2) {
        throw DimensionMismatch("superoperator is not D^2 x D^2");
    }
    const Vector out = l.matrix * vectorize(rho);
    return devectorize(out, l.space);
}

Matrix apply(const Superoperator& l, const DensityMatrix& rho)
{
    if (!(l.space == rho.space())) throw DimensionMismatch("superoperator and state spaces differ");
    return apply(l, rho.matrix());
}

namespace {

// d rho/dt = K rho + rho K^dag + kappa a rho a^dag,  K = -iH - (kappa/2) n.
class MasterRhs {
public:
    MasterRhs(const Matrix& h, double kappa) : kappa_(kappa), d_(h.rows())
    {
        k_ = cplx(0.0, -1.0) * h;
        for (Eigen::Index m = 0; m < d_; ++m) k_(m, m) -= 0.5 * kappa * static_cast<double>(m);
        k_adj_ = k_.adjoint();
        sqrt_n_.resize(d_);
        for (Eigen::Index m = 0; m < d_; ++m) sqrt_n_(m) = std::sqrt(static_cast<double>(m));
    }

    void operator()(const Matrix& rho, Matrix& out) const
    {
        out.noalias() = k_ * rho;
        out.noalias() += rho * k_adj_;
        if (kappa_ > 0.0) {
            // (a rho a^dag)(i, j) = sqrt(i+1) sqrt(j+1) rho(i+1, j+1)
            for (Eigen::Index j = 0; j + 1 < d_; ++j) {
                for (Eigen::Index i = 0; i + 1 < d_; ++i) {
                    out(i, j) += kappa_ * sqrt_n_(i + 1) * sqrt_n_(j + 1) * rho(i + 1, j + 1);
                }
            }
        }
    }

private:
    Matrix k_;
    Matrix k_adj_;
    Eigen::VectorXd sqrt_n_;
    double kappa_;
    Eigen::Index d_;
};

void rk4_steps(const MasterRhs& f, Matrix& rho, double dt, long steps)
{
    Matrix k1(rho.rows(), rho.cols()), k2(k1), k3(k1), k4(k1), tmp(k1);
    for (long s = 0; s < steps; ++s) {
        f(rho, k1);
        tmp = rho + 0.5 * dt * k1;
        f(tmp, k2);
        tmp = rho + 0.5 * dt * k2;
        f(tmp, k3);
        tmp = rho + dt * k3;
        f(tmp, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

} // namespace

MasterEquationRun integrate_master_equation(const DriveProtocol& protocol,
                                            const DensityMatrix& rho0, double t_final,
                                            double dt)
{
    protocol.validate();
    if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
    if (!(t_final >= 0.0)) throw InvalidArgument("final time must be non-negative");
    const double periods_real = t_final / protocol.period;
    const long periods = std::lround(periods_real);
    if (std::abs(periods_real - static_cast<double>(periods)) > 1e-9 * std::max(1.0, periods_real)) {
        throw InvalidArgument("final time must be a whole number of drive periods");
    }
    const double half = 0.5 * protocol.period;
    const long steps = static_cast<long>(std::ceil(half / dt - 1e-9));
    const double step = half / static_cast<double>(steps);

    const auto& space = rho0.space();
    const MasterRhs first(hamiltonian(space, protocol.detuning, protocol.kerr, protocol.eps1).matrix,
                          protocol.kappa);
    const MasterRhs second(hamiltonian(space, protocol.detuning, protocol.kerr, protocol.eps2).matrix,
                           protocol.kappa);

    Matrix rho = rho0.matrix();
    std::vector<double> drift;
    drift.reserve(static_cast<std::size_t>(periods));
    for (long p = 0; p < periods; ++p) {
        rk4_steps(first, rho, step, steps);
        rk4_steps(second, rho, step, steps);
        // Density-matrix entries are bounded by 1; larger values mean RK4 instability.
        if (!rho.allFinite() || rho.cwiseAbs().maxCoeff() > 1.0 + 1e-6) {
            throw StepTooLarge("integration blew up in period " + std::to_string(p) +
                               " (dt=" + std::to_string(step) + ")");
        }
        const double err = std::abs(rho.trace() - 1.0);
        drift.push_back(err);
        if (err > 1e-6) {
            throw StepTooLarge("trace drift " + std::to_string(err) + " in period " +
                               std::to_string(p) + " (dt=" + std::to_string(step) + ")");
        }
        rho = 0.5 * (rho + rho.adjoint()).eval();
        rho /= rho.trace().real();
    }
    return {DensityMatrix(space, std::move(rho)), step, std::move(drift)};
}

} // namespace kerr
