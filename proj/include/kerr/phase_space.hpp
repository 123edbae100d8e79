// phase_space.hpp — Wigner distributions on rectangular grids and their
// comparison with classical stroboscopic attractors.
//
// Phase-space convention: alpha = x + i p.

#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <span>

#include "kerr/classical.hpp"
#include "kerr/fock.hpp"

namespace kerr {

struct PhaseGrid {
    double x_min = -1.0, x_max = 1.0;
    double p_min = -1.0, p_max = 1.0;
    int nx = 201, np = 201;

    // Throws InvalidArgument unless nx, np >= 16 and the ranges are non-empty.
    void validate() const;
    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dp() const { return (p_max - p_min) / (np - 1); }
    double x(int i) const { return x_min + i * dx(); }
    double p(int j) const { return p_min + j * dp(); }
    double cell_area() const { return dx() * dp(); }

    // Square grid over [-1.5 a, 1.5 a]^2 with a = sqrt(Na) + 3.
    static PhaseGrid auto_sized(double mean_photons, int points = 201);
};

struct WignerMap {
    PhaseGrid grid;
    Eigen::MatrixXd values;   // values(i, j) = W(x_i + i p_j)
    double integral = 0.0;     // Riemann sum times cell area
    double negativity = 0.0;   // integral of |min(W, 0)|
    double imag_residue = 0.0; // max |Im| of the kernel sum before discarding
    bool boundary_ok = false;  // boundary cells below 1e-4 max|W|
};

// W(alpha) = (2/pi) sum_{mn} rho_mn K_mn(alpha). For n = m + k, k >= 0:
//   K_mn(alpha) = (-1)^m sqrt(m!/n!) (2 alpha)^k exp(-2|alpha|^2) L_m^k(4|alpha|^2)
// and K_nm = conj(K_mn). Uses an upward recurrence on the normalized Laguerre
// functions with the prefactor evaluated in log space.
WignerMap wigner(const DensityMatrix& rho, const PhaseGrid& grid);

// Single-point evaluation with the same kernel.
double wigner_at(const DensityMatrix& rho, cplx alpha);

// Fraction of positive Wigner mass inside the union of disks of radius r
// centred on the samples. Throws EmptyOrbit.
double attractor_overlap(const WignerMap& w, std::span<const cplx> samples, double radius);
double attractor_overlap(const WignerMap& w, const classical::StroboscopicOrbit& orbit, double radius);

// Bhattacharyya coefficient sum sqrt(P Q) of two non-negative grid densities,
// each normalized to unit sum first.
double bhattacharyya(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q);

// Gaussian KDE of the samples on the grid (bandwidth sigma), with unit integral
// when the grid covers the samples.
Eigen::MatrixXd kernel_density(const PhaseGrid& grid, std::span<const cplx> samples, double sigma);

// Separable Gaussian convolution of a grid field, truncated at 5 sigma.
Eigen::MatrixXd gaussian_smooth(const PhaseGrid& grid, const Eigen::MatrixXd& field, double sigma);

// Bhattacharyya coefficient between the classical KDE and the smoothed,
// clipped Wigner map. sigma <= 0 selects 2x grid spacing. Needs >= 100
// samples; throws EmptyOrbit when there are none.
double distribution_distance(const WignerMap& w, std::span<const cplx> samples, double sigma = 0.0);
double distribution_distance(const WignerMap& w, const classical::StroboscopicOrbit& orbit,
                             double sigma = 0.0);

// CSV with header x,p,w (x-major order).
void write_wigner_csv(const std::filesystem::path& path, const WignerMap& w);

} // namespace kerr
