// phase_space.cpp — Wigner kernel sums, attractor overlap, KDE comparison

#include "kerr/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <vector>

#include "kerr/errors.hpp"

namespace kerr {

void PhaseGrid::validate() const
{
    if (nx < 16 || np < 16) throw InvalidArgument("phase grid needs at least 16 points per axis");
    if (!(x_max > x_min) || !(p_max > p_min)) throw InvalidArgument("phase grid range is empty");
}

PhaseGrid PhaseGrid::auto_sized(double mean_photons, int points)
{
    const double a = std::sqrt(std::max(0.0, mean_photons)) + 3.0;
    return {-1.5 * a, 1.5 * a, -1.5 * a, 1.5 * a, points, points};
}

namespace {

// Kernel sum at one point: returns the complex total (before the 2/pi factor).
// phi holds scratch space of size D.
cplx kernel_sum(const Matrix& rho, cplx alpha, std::vector<double>& phi)
{
    const Eigen::Index d = rho.rows();
    const double x = 4.0 * std::norm(alpha);
    const double theta = std::arg(alpha);
    const double log_x = std::log(x);
    cplx total = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        const Eigen::Index count = d - k;
        // phi_m^k = sqrt(m!/(m+k)!) x^{k/2} exp(-x/2) L_m^k(x)
        if (k == 0) {
            phi[0] = std::exp(-0.5 * x);
        } else if (x == 0.0) {
            phi[0] = 0.0;
        } else {
            phi[0] = std::exp(0.5 * k * log_x - 0.5 * x - 0.5 * std::lgamma(static_cast<double>(k) + 1.0));
        }
        const double kd = static_cast<double>(k);
        if (count > 1) phi[1] = (1.0 + kd - x) * phi[0] / std::sqrt(1.0 + kd);
        for (Eigen::Index m = 1; m + 1 < count; ++m) {
            const double md = static_cast<double>(m);
            phi[m + 1] = ((2.0 * md + 1.0 + kd - x) * phi[m] - std::sqrt(md * (md + kd)) * phi[m - 1]) /
                         std::sqrt((md + 1.0) * (md + 1.0 + kd));
        }
        cplx upper = 0.0;  // sum_m (-1)^m rho(m, m+k) phi_m
        cplx lower = 0.0;  // sum_m (-1)^m rho(m+k, m) phi_m
        for (Eigen::Index m = 0; m < count; ++m) {
            const double term = (m % 2 == 0 ? 1.0 : -1.0) * phi[m];
            upper += rho(m, m + k) * term;
            if (k > 0) lower += rho(m + k, m) * term;
        }
        if (k == 0) {
            total += upper;
        } else {
            const cplx rot = std::polar(1.0, kd * theta);
            total += rot * upper + std::conj(rot) * lower;
        }
    }
    return total;
}

void check_samples(std::span<const cplx> samples)
{
    if (samples.empty()) throw EmptyOrbit("orbit has no post-transient samples");
}

} // namespace

double wigner_at(const DensityMatrix& rho, cplx alpha)
{
    std::vector<double> phi(static_cast<std::size_t>(rho.matrix().rows()));
    return 2.0 / std::numbers::pi * kernel_sum(rho.matrix(), alpha, phi).real();
}

WignerMap wigner(const DensityMatrix& rho, const PhaseGrid& grid)
{
    grid.validate();
    WignerMap w;
    w.grid = grid;
    w.values.resize(grid.nx, grid.np);
    std::vector<double> phi(static_cast<std::size_t>(rho.matrix().rows()));
    double residue = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.np; ++j) {
            const cplx s = kernel_sum(rho.matrix(), cplx(grid.x(i), grid.p(j)), phi);
            residue = std::max(residue, std::abs(s.imag()));
            w.values(i, j) = 2.0 / std::numbers::pi * s.real();
        }
    }
    w.imag_residue = 2.0 / std::numbers::pi * residue;
    const double area = grid.cell_area();
    w.integral = w.values.sum() * area;
    w.negativity = w.values.cwiseMin(0.0).cwiseAbs().sum() * area;

    const double peak = w.values.cwiseAbs().maxCoeff();
    double edge = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        edge = std::max({edge, std::abs(w.values(i, 0)), std::abs(w.values(i, grid.np - 1))});
    }
    for (int j = 0; j < grid.np; ++j) {
        edge = std::max({edge, std::abs(w.values(0, j)), std::abs(w.values(grid.nx - 1, j))});
    }
    w.boundary_ok = edge < 1e-4 * peak;
    return w;
}

double attractor_overlap(const WignerMap& w, std::span<const cplx> samples, double radius)
{
    check_samples(samples);
    if (!(radius > 0.0)) throw InvalidArgument("overlap radius must be positive");
    const auto& g = w.grid;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> inside =
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(g.nx, g.np, false);
    const double r2 = radius * radius;
    for (const auto& s : samples) {
        const int i0 = std::max(0, static_cast<int>(std::floor((s.real() - radius - g.x_min) / g.dx())));
        const int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((s.real() + radius - g.x_min) / g.dx())));
        const int j0 = std::max(0, static_cast<int>(std::floor((s.imag() - radius - g.p_min) / g.dp())));
        const int j1 = std::min(g.np - 1, static_cast<int>(std::ceil((s.imag() + radius - g.p_min) / g.dp())));
        for (int i = i0; i <= i1; ++i) {
            const double ddx = g.x(i) - s.real();
            for (int j = j0; j <= j1; ++j) {
                const double ddp = g.p(j) - s.imag();
                if (ddx * ddx + ddp * ddp <= r2) inside(i, j) = true;
            }
        }
    }
    double in = 0.0;
    double total = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.np; ++j) {
            const double v = std::max(0.0, w.values(i, j));
            total += v;
            if (inside(i, j)) in += v;
        }
    }
    if (!(total > 0.0)) return 0.0;
    return in / total;
}

double attractor_overlap(const WignerMap& w, const classical::StroboscopicOrbit& orbit, double radius)
{
    return attractor_overlap(w, std::span<const cplx>(orbit.samples), radius);
}

double bhattacharyya(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q)
{
    if (p.rows() != q.rows() || p.cols() != q.cols()) {
        throw DimensionMismatch("densities live on different grids");
    }
    const double sp = p.sum();
    const double sq = q.sum();
    if (!(sp > 0.0) || !(sq > 0.0)) throw InvalidArgument("density has no mass");
    return ((p / sp).cwiseMax(0.0).cwiseProduct((q / sq).cwiseMax(0.0))).cwiseSqrt().sum();
}

Eigen::MatrixXd kernel_density(const PhaseGrid& grid, std::span<const cplx> samples, double sigma)
{
    check_samples(samples);
    if (!(sigma > 0.0)) throw InvalidArgument("bandwidth must be positive");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(grid.nx, grid.np);
    const double reach = 5.0 * sigma;
    const double inv = 1.0 / (2.0 * sigma * sigma);
    Eigen::VectorXd gx(grid.nx);
    Eigen::VectorXd gp(grid.np);
    for (const auto& s : samples) {
        const int i0 = std::max(0, static_cast<int>(std::floor((s.real() - reach - grid.x_min) / grid.dx())));
        const int i1 = std::min(grid.nx - 1, static_cast<int>(std::ceil((s.real() + reach - grid.x_min) / grid.dx())));
        const int j0 = std::max(0, static_cast<int>(std::floor((s.imag() - reach - grid.p_min) / grid.dp())));
        const int j1 = std::min(grid.np - 1, static_cast<int>(std::ceil((s.imag() + reach - grid.p_min) / grid.dp())));
        if (i0 > i1 || j0 > j1) continue;
        for (int i = i0; i <= i1; ++i) gx(i) = std::exp(-inv * std::pow(grid.x(i) - s.real(), 2));
        for (int j = j0; j <= j1; ++j) gp(j) = std::exp(-inv * std::pow(grid.p(j) - s.imag(), 2));
        out.block(i0, j0, i1 - i0 + 1, j1 - j0 + 1) +=
            gx.segment(i0, i1 - i0 + 1) * gp.segment(j0, j1 - j0 + 1).transpose();
    }
    return out / (2.0 * std::numbers::pi * sigma * sigma * static_cast<double>(samples.size()));
}

Eigen::MatrixXd gaussian_smooth(const PhaseGrid& grid, const Eigen::MatrixXd& field, double sigma)
{
    if (!(sigma > 0.0)) throw InvalidArgument("bandwidth must be positive");
    auto taps = [&](double step) {
        const int half = static_cast<int>(std::ceil(5.0 * sigma / step));
        Eigen::VectorXd t(2 * half + 1);
        for (int k = -half; k <= half; ++k) t(k + half) = std::exp(-0.5 * std::pow(k * step / sigma, 2));
        return Eigen::VectorXd(t / t.sum());
    };
    const Eigen::VectorXd tx = taps(grid.dx());
    const Eigen::VectorXd tp = taps(grid.dp());
    const int hx = static_cast<int>(tx.size() / 2);
    const int hp = static_cast<int>(tp.size() / 2);

    Eigen::MatrixXd pass = Eigen::MatrixXd::Zero(field.rows(), field.cols());
    for (int i = 0; i < field.rows(); ++i) {
        for (int k = -hx; k <= hx; ++k) {
            const int src = i + k;
            if (src < 0 || src >= field.rows()) continue;
            pass.row(i) += tx(k + hx) * field.row(src);
        }
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(field.rows(), field.cols());
    for (int j = 0; j < field.cols(); ++j) {
        for (int k = -hp; k <= hp; ++k) {
            const int src = j + k;
            if (src < 0 || src >= field.cols()) continue;
            out.col(j) += tp(k + hp) * pass.col(src);
        }
    }
    return out;
}

double distribution_distance(const WignerMap& w, std::span<const cplx> samples, double sigma)
{
    check_samples(samples);
    if (samples.size() < 100) throw InvalidArgument("distribution comparison needs >= 100 samples");
    const double bw = sigma > 0.0 ? sigma : 2.0 * std::max(w.grid.dx(), w.grid.dp());
    const Eigen::MatrixXd classical = kernel_density(w.grid, samples, bw);
    const Eigen::MatrixXd quantum = gaussian_smooth(w.grid, w.values.cwiseMax(0.0), bw);
    return bhattacharyya(classical, quantum);
}

double distribution_distance(const WignerMap& w, const classical::StroboscopicOrbit& orbit, double sigma)
{
    return distribution_distance(w, std::span<const cplx>(orbit.samples), sigma);
}

void write_wigner_csv(const std::filesystem::path& path, const WignerMap& w)
{
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
    out.precision(12);
    out << "x,p,w\n";
    for (int i = 0; i < w.grid.nx; ++i) {
        for (int j = 0; j < w.grid.np; ++j) {
            out << w.grid.x(i) << ',' << w.grid.p(j) << ',' << w.values(i, j) << '\n';
        }
    }
}

} // namespace kerr
