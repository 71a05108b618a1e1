#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bandspec/profile.hpp"

namespace bandspec {

// Complex-valued grid solution f(t_i, z) on a uniform grid over [-nu, nu],
// with convergence metadata. Every accepted value satisfies the Nevanlinna
// constraints Im f * Im z >= 0 and |f| <= 1/|Im z|.
struct GridSolution {
    double nu = 0.0;
    std::vector<double> grid;
    std::vector<std::complex<double>> values;
    std::complex<double> z;
    int iterations = 0;
    double residual = 0.0;
};

// Discretization of the map T behind the fixed-point equation
//
//   f(t) = -( z - int v^2(t - tau) (1 + int v^2(theta - tau) f(theta)
//             dtheta)^{-1} dtau )^{-1}
//
// on a uniform t-grid. Both integrals use composite trapezoid weights that
// clip the piecewise-constant kernel exactly at its jumps (the integrand's
// piecewise-linear interpolant is integrated exactly against the kernel),
// which keeps the scheme second order even though v^2 is discontinuous.
class BandIntegralOperator {
public:
    BandIntegralOperator(const BandProfile& profile, double nu, int grid_size);

    const std::vector<double>& grid() const { return grid_; }
    double nu() const { return nu_; }

    // (Tf)(t_i) for all i. Throws ConvergenceError when an inner
    // denominator falls below 1e-12 in modulus (z too close to the
    // spectrum for the current damping).
    std::vector<std::complex<double>> apply(std::span<const std::complex<double>> f,
                                            std::complex<double> z) const;

private:
    double nu_;
    int grid_size_;
    std::vector<double> grid_;
    std::vector<double> outer_weights_;  // row-major G x G
    std::vector<double> inner_weights_;
};

// Single application of the discretized map to an existing grid solution.
std::vector<std::complex<double>> apply_T(const GridSolution& solution,
                                          const BandProfile& profile,
                                          std::complex<double> z);

// Damped fixed-point iteration for the grid solution at one z. Plain
// iteration from f = -1/z inside the proven contraction region
// |Im z| >= K0 = 2.5 w^2; continuation along decreasing Im z with warm
// starts below it. Throws ConvergenceError when the residual is not below
// tol after 10^4 iterations, InvariantViolation if an iterate leaves the
// Nevanlinna class.
GridSolution solve_fixed_point(const BandProfile& profile, double nu,
                               std::complex<double> z, int grid_size, double tol);

// Same, reusing a prebuilt operator (cheaper for scans over many z).
GridSolution solve_fixed_point(const BandIntegralOperator& op,
                               std::complex<double> z, double tol,
                               const GridSolution* warm_start = nullptr);

// f(z) = (2 nu)^-1 int f(t, z) dt by trapezoid over the grid.
std::complex<double> aggregate(const GridSolution& solution);

// Closed-form transform for the quarter-circle law: the root of
// z w^2 f^2 + z f + 1 = 0 with Im f * Im z >= 0 and f -> -1/z at infinity.
// Throws std::domain_error for z on the support [0, 4 w^2].
std::complex<double> solve_quarter_circle_transform(std::complex<double> z, double w2);

// (2 pi w^2)^-1 sqrt((4 w^2 - lambda)/lambda) on [0, 4 w^2]; 0 outside;
// +infinity at the hard edge lambda = 0 (CSV emission encodes the edge as
// a flag, never as a float infinity).
double quarter_circle_density(double lambda, double w2);
double quarter_circle_cdf(double lambda, double w2);

// K0 for the contraction region given w^2; strictly above the proven
// threshold 2 w^2 with margin for quadrature error.
double contraction_k0(double w2);

// Imaginary-axis descent from the contraction region to z_target: starts
// at Re z_target + i K0, shrinks the imaginary part geometrically (factor
// 0.8) and ends exactly at z_target. Requires Im z_target > 0.
std::vector<std::complex<double>> continuation_path(std::complex<double> z_target,
                                                    double w2);

enum class DensityFlag { ok, edge, hard_edge };
std::string to_string(DensityFlag flag);

struct SpectralDensity {
    std::vector<double> lambda;
    std::vector<double> rho;
    std::vector<double> epsilon_used;
    std::vector<DensityFlag> flags;
    double support_lo = 0.0;
    double support_hi = 0.0;
};

// Stieltjes inversion rho = pi^-1 Im f(lambda + i eps), extrapolated to
// eps = 0 with a linear-in-eps Richardson fit over the schedule (strictly
// decreasing, all >= 1e-4). Rows where the fit is visibly nonlinear (near
// a spectral edge) fall back to the smallest-eps raw value and are flagged.
SpectralDensity density_from_transform(
    const std::function<std::complex<double>(std::complex<double>)>& transform,
    std::span<const double> lambda_grid, std::span<const double> epsilon_schedule);

}  // namespace bandspec
