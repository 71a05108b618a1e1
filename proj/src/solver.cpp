#include "bandspec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bandspec/errors.hpp"

namespace bandspec {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr int kMaxIterations = 10000;
constexpr double kDenominatorFloor = 1e-12;
// |f| <= 1/|Im z| is checked with a few ulp of slack: the bound is exact in
// real arithmetic but the modulus is computed in floating point.
constexpr double kNevanlinnaSlack = 1e-13;

// Accumulate weights for int K(a - s) F(s) ds over the grid domain, where
// K is piecewise constant and F is interpolated linearly between nodes.
// Piece (p, q, c) of K contributes c on s in (a - q, a - p); each grid
// cell's overlap with that window is integrated exactly.
void accumulate_row_weights(double a, const std::vector<ProfilePiece>& pieces,
                            const std::vector<double>& grid, double* w) {
    const double lo_dom = grid.front(), hi_dom = grid.back();
    const double h = grid[1] - grid[0];
    const int cells = static_cast<int>(grid.size()) - 1;
    for (const auto& piece : pieces) {
        double lo = std::max(a - piece.hi, lo_dom);
        double hi = std::min(a - piece.lo, hi_dom);
        if (hi <= lo) continue;
        int j0 = std::clamp(static_cast<int>(std::floor((lo - lo_dom) / h)), 0, cells - 1);
        for (int j = j0; j < cells; ++j) {
            double x0 = std::max(lo, grid[j]);
            double x1 = std::min(hi, grid[j + 1]);
            if (x1 <= x0) {
                if (grid[j] >= hi) break;
                continue;
            }
            double mean_u = 0.5 * ((x0 - grid[j]) + (x1 - grid[j])) / h;
            double len = x1 - x0;
            w[j] += piece.value * len * (1.0 - mean_u);
            w[j + 1] += piece.value * len * mean_u;
        }
    }
}

bool nevanlinna_ok(const std::vector<Complex>& f, Complex z) {
    const double sign = z.imag() > 0.0 ? 1.0 : -1.0;
    const double bound = (1.0 + kNevanlinnaSlack) / std::abs(z.imag());
    for (const Complex& v : f) {
        if (sign * v.imag() < -kNevanlinnaSlack) return false;
        if (std::abs(v) > bound) return false;
    }
    return true;
}

}  // namespace

BandIntegralOperator::BandIntegralOperator(const BandProfile& profile, double nu,
                                           int grid_size)
    : nu_(nu), grid_size_(grid_size) {
    if (!std::isfinite(nu) || !(nu > 0.0))
        throw std::invalid_argument("grid operator requires finite positive nu");
    if (grid_size < 64) throw std::invalid_argument("grid_size must be >= 64");

    grid_.resize(grid_size);
    const double h = 2.0 * nu / (grid_size - 1);
    for (int i = 0; i < grid_size; ++i) grid_[i] = -nu + i * h;
    grid_.back() = nu;

    // outer integral kernel v^2(t - tau); inner kernel v^2(theta - tau) as
    // a function of theta at fixed tau is the reflection v^2(-(tau - theta))
    auto sq = profile.squared_pieces();
    std::vector<ProfilePiece> sq_reflected;
    sq_reflected.reserve(sq.size());
    for (const auto& p : sq) sq_reflected.push_back({-p.hi, -p.lo, p.value});

    const std::size_t g = static_cast<std::size_t>(grid_size);
    outer_weights_.assign(g * g, 0.0);
    inner_weights_.assign(g * g, 0.0);
    for (int i = 0; i < grid_size; ++i) {
        accumulate_row_weights(grid_[i], sq, grid_, &outer_weights_[g * i]);
        accumulate_row_weights(grid_[i], sq_reflected, grid_, &inner_weights_[g * i]);
    }
}

std::vector<Complex> BandIntegralOperator::apply(std::span<const Complex> f,
                                                 Complex z) const {
    if (static_cast<int>(f.size()) != grid_size_)
        throw std::invalid_argument("grid size mismatch in apply");
    if (z.imag() == 0.0) throw std::domain_error("apply requires Im z != 0");

    const std::size_t g = static_cast<std::size_t>(grid_size_);
    std::vector<Complex> inv_denominator(g);
    for (std::size_t j = 0; j < g; ++j) {
        const double* w = &inner_weights_[g * j];
        double re = 1.0, im = 0.0;
        for (std::size_t l = 0; l < g; ++l) {
            re += w[l] * f[l].real();
            im += w[l] * f[l].imag();
        }
        Complex d(re, im);
        if (std::abs(d) < kDenominatorFloor)
            throw ConvergenceError(
                "singular inner denominator |1 + int v^2 f| < 1e-12; z too "
                "close to the spectrum for the current damping",
                std::abs(d));
        inv_denominator[j] = 1.0 / d;
    }

    std::vector<Complex> result(g);
    for (std::size_t i = 0; i < g; ++i) {
        const double* w = &outer_weights_[g * i];
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < g; ++j) {
            re += w[j] * inv_denominator[j].real();
            im += w[j] * inv_denominator[j].imag();
        }
        result[i] = -1.0 / (z - Complex(re, im));
    }
    return result;
}

std::vector<Complex> apply_T(const GridSolution& solution, const BandProfile& profile,
                             Complex z) {
    BandIntegralOperator op(profile, solution.nu,
                            static_cast<int>(solution.values.size()));
    return op.apply(solution.values, z);
}

namespace {

// Iterate f <- (1-alpha) f + alpha T f until sup|Tf - f| <= tol.
GridSolution iterate_to_fixed_point(const BandIntegralOperator& op, Complex z,
                                    double tol, std::vector<Complex> f,
                                    double alpha) {
    double previous_residual = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        std::vector<Complex> tf = op.apply(f, z);
        double residual = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            residual = std::max(residual, std::abs(tf[i] - f[i]));

        if (residual > previous_residual) alpha = std::max(0.5 * alpha, 1.0 / 16.0);
        previous_residual = residual;

        if (alpha == 1.0) {
            f = std::move(tf);
        } else {
            for (std::size_t i = 0; i < f.size(); ++i)
                f[i] = (1.0 - alpha) * f[i] + alpha * tf[i];
        }
        if (!nevanlinna_ok(f, z))
            throw InvariantViolation(
                "solver iterate left the Nevanlinna class (Im f Im z >= 0, "
                "|f| <= 1/|Im z|)");
        if (residual <= tol) {
            GridSolution out;
            out.nu = op.nu();
            out.grid = op.grid();
            out.values = std::move(f);
            out.z = z;
            out.iterations = iter;
            out.residual = residual;
            return out;
        }
    }
    throw ConvergenceError("fixed-point iteration did not reach tol after " +
                               std::to_string(kMaxIterations) + " iterations",
                           previous_residual);
}

GridSolution conjugate(GridSolution s) {
    s.z = std::conj(s.z);
    for (Complex& v : s.values) v = std::conj(v);
    return s;
}

}  // namespace

GridSolution solve_fixed_point(const BandIntegralOperator& op, Complex z, double tol,
                               const GridSolution* warm_start) {
    if (z.imag() == 0.0)
        throw std::domain_error("solve_fixed_point requires Im z != 0");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (z.imag() < 0.0) {
        // f(conj z) = conj f(z): solve in the upper half plane
        GridSolution upper = solve_fixed_point(op, std::conj(z), tol, warm_start);
        return conjugate(std::move(upper));
    }

    if (warm_start && warm_start->values.size() == op.grid().size() &&
        warm_start->z.imag() > 0.0) {
        return iterate_to_fixed_point(op, z, tol, warm_start->values, 0.5);
    }
    std::vector<Complex> f0(op.grid().size(), -1.0 / z);
    return iterate_to_fixed_point(op, z, tol, std::move(f0), 1.0);
}

GridSolution solve_fixed_point(const BandProfile& profile, double nu, Complex z,
                               int grid_size, double tol) {
    if (z.imag() == 0.0)
        throw std::domain_error("solve_fixed_point requires Im z != 0");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

    BandIntegralOperator op(profile, nu, grid_size);
    if (z.imag() < 0.0)
        return conjugate(solve_fixed_point(op, std::conj(z), tol, nullptr));

    const double w2 = squared_l2_norm(profile, nu);
    const double k0 = contraction_k0(w2);
    if (z.imag() >= k0) {
        std::vector<Complex> f0(op.grid().size(), -1.0 / z);
        return iterate_to_fixed_point(op, z, tol, std::move(f0), 1.0);
    }

    // descend from the contraction region, warm-starting each step
    GridSolution current;
    bool have = false;
    for (Complex zs : continuation_path(z, w2)) {
        if (!have) {
            std::vector<Complex> f0(op.grid().size(), -1.0 / zs);
            current = iterate_to_fixed_point(op, zs, tol, std::move(f0), 1.0);
            have = true;
        } else {
            double alpha = zs.imag() >= k0 ? 1.0 : 0.5;
            current = iterate_to_fixed_point(op, zs, tol, current.values, alpha);
        }
    }
    return current;
}

Complex aggregate(const GridSolution& solution) {
    if (solution.values.size() < 2)
        throw std::invalid_argument("aggregate requires a converged grid solution");
    Complex acc = 0.0;
    for (std::size_t i = 0; i + 1 < solution.values.size(); ++i) {
        double h = solution.grid[i + 1] - solution.grid[i];
        acc += 0.5 * h * (solution.values[i] + solution.values[i + 1]);
    }
    return acc / (2.0 * solution.nu);
}

Complex solve_quarter_circle_transform(Complex z, double w2) {
    if (!(w2 > 0.0)) throw std::invalid_argument("w2 must be positive");
    if (z.imag() == 0.0 && z.real() >= 0.0 && z.real() <= 4.0 * w2)
        throw std::domain_error(
            "z on the support [0, 4 w^2]; evaluate at z + i*eps instead");
    // principal sqrt(1 - 4 w^2 / z) only meets its cut when z is on the
    // support, so this branch is continuous off [0, 4 w^2] and has the
    // -1/z - w^2/z^2 - ... expansion at infinity
    return (std::sqrt(1.0 - 4.0 * w2 / z) - 1.0) / (2.0 * w2);
}

double quarter_circle_density(double lambda, double w2) {
    if (!(w2 > 0.0)) throw std::invalid_argument("w2 must be positive");
    if (lambda < 0.0 || lambda > 4.0 * w2) return 0.0;
    if (lambda == 0.0) return std::numeric_limits<double>::infinity();  // hard edge
    return std::sqrt((4.0 * w2 - lambda) / lambda) / (2.0 * kPi * w2);
}

double quarter_circle_cdf(double lambda, double w2) {
    if (!(w2 > 0.0)) throw std::invalid_argument("w2 must be positive");
    if (lambda <= 0.0) return 0.0;
    if (lambda >= 4.0 * w2) return 1.0;
    double theta = std::asin(std::sqrt(lambda / (4.0 * w2)));
    return (2.0 / kPi) * (theta + std::sin(theta) * std::cos(theta));
}

double contraction_k0(double w2) { return 2.5 * w2; }

std::vector<Complex> continuation_path(Complex z_target, double w2) {
    if (!(z_target.imag() > 0.0))
        throw std::invalid_argument("continuation path requires Im z > 0");
    const double k0 = contraction_k0(w2);
    if (z_target.imag() >= k0) return {z_target};
    std::vector<Complex> path;
    for (double y = k0; y > z_target.imag(); y *= 0.8)
        path.emplace_back(z_target.real(), y);
    path.push_back(z_target);
    return path;
}

std::string to_string(DensityFlag flag) {
    switch (flag) {
        case DensityFlag::ok: return "ok";
        case DensityFlag::edge: return "edge";
        case DensityFlag::hard_edge: return "hard_edge";
    }
    throw std::logic_error("unknown density flag");
}

SpectralDensity density_from_transform(
    const std::function<Complex(Complex)>& transform,
    std::span<const double> lambda_grid, std::span<const double> epsilon_schedule) {
    if (epsilon_schedule.empty())
        throw std::invalid_argument("epsilon schedule must be nonempty");
    for (std::size_t i = 0; i < epsilon_schedule.size(); ++i) {
        if (!(epsilon_schedule[i] >= 1e-4))
            throw std::invalid_argument("epsilon schedule entries must be >= 1e-4");
        if (i > 0 && !(epsilon_schedule[i] < epsilon_schedule[i - 1]))
            throw std::invalid_argument("epsilon schedule must be strictly decreasing");
    }

    SpectralDensity out;
    out.lambda.assign(lambda_grid.begin(), lambda_grid.end());
    out.rho.reserve(lambda_grid.size());
    out.epsilon_used.reserve(lambda_grid.size());
    out.flags.reserve(lambda_grid.size());
    const double eps_min = epsilon_schedule.back();

    for (double lambda : lambda_grid) {
        if (lambda <= 0.0) {
            out.rho.push_back(0.0);
            out.epsilon_used.push_back(eps_min);
            out.flags.push_back(DensityFlag::hard_edge);
            continue;
        }
        std::vector<double> values(epsilon_schedule.size());
        for (std::size_t i = 0; i < epsilon_schedule.size(); ++i)
            values[i] =
                transform(Complex(lambda, epsilon_schedule[i])).imag() / kPi;

        double rho, eps_used = eps_min;
        DensityFlag flag = DensityFlag::ok;
        if (values.size() == 1) {
            rho = values[0];
        } else {
            // least-squares line rho(eps) = rho0 + c eps, extrapolated to 0
            double se = 0.0, sy = 0.0, see = 0.0, sey = 0.0;
            const double m = static_cast<double>(values.size());
            for (std::size_t i = 0; i < values.size(); ++i) {
                se += epsilon_schedule[i];
                sy += values[i];
                see += epsilon_schedule[i] * epsilon_schedule[i];
                sey += epsilon_schedule[i] * values[i];
            }
            double denom = m * see - se * se;
            double slope = (m * sey - se * sy) / denom;
            double rho0 = (sy - slope * se) / m;
            double max_dev = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i)
                max_dev = std::max(
                    max_dev, std::abs(values[i] - (rho0 + slope * epsilon_schedule[i])));
            if (max_dev > 0.05 * std::max(std::abs(rho0), 1e-2)) {
                // visibly nonlinear in eps: near an edge; report the raw
                // smallest-eps value instead of extrapolating across it
                rho = values.back();
                flag = DensityFlag::edge;
            } else {
                rho = rho0;
            }
        }
        out.rho.push_back(std::max(rho, 0.0));
        out.epsilon_used.push_back(eps_used);
        out.flags.push_back(flag);
    }
    if (!out.lambda.empty()) {
        out.support_lo = *std::min_element(out.lambda.begin(), out.lambda.end());
        out.support_hi = *std::max_element(out.lambda.begin(), out.lambda.end());
    }
    return out;
}

}  // namespace bandspec
