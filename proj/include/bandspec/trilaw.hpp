#pragma once

#include <complex>
#include <string>

namespace bandspec {

// Limiting law of squared singular values of lower-triangular band matrices.
// Support is [0, e]; the Stieltjes transform f solves the transcendental
// equation (1 + f) ln(1 + f) = -1/z. Everything here is stateless.

// Solves (1+f)ln(1+f) = -1/z on the branch with f -> -1/z at infinity
// (equivalently c e^c = -1/z on the principal branch, f = e^c - 1). The
// returned value satisfies |(1+f)ln(1+f) + 1/z| <= tol; choose tol with
// the |1/z| scale in mind for very small |z|. Throws std::domain_error for
// z on the support [0, e], ConvergenceError on Newton stagnation.
std::complex<double> triangular_transform(std::complex<double> z, double tol = 1e-12);

struct ParametricPoint {
    double lambda;
    double rho;
};

// Boundary-value parametrization of the density: for eta in (0, pi),
// lambda = e^{eta cot eta} sin(eta)/eta and rho = sin^2(eta)/(pi lambda eta).
ParametricPoint parametric_point(double eta);

// Density at lambda in (0, e), by bisection on the monotone parametric map
// (|lambda(eta_found) - lambda| <= tol). Returns 0 for lambda >= e; throws
// std::domain_error at the hard edge lambda <= 0.
double triangular_density(double lambda, double tol = 1e-12);

// CDF by adaptive quadrature of the parametric form; absolute error <= tol.
// 0 for lambda <= 0, 1 for lambda >= e.
double triangular_cdf(double lambda, double tol = 1e-10);

// Exact rational p/q on 128-bit integers, reduced.
struct Rational {
    __int128 num = 0;
    __int128 den = 1;
    double value() const;
    std::string str() const;  // "p/q"
};

// k-th moment of the law: k^k/(k+1)!, exactly. k in [1, 20].
Rational triangular_moment(int k);

// Functional inverse of the Stieltjes transform on the real line:
// x(f) = -1/((1+f)ln(1+f)), f > -1, f != 0.
double inverse_x(double f);
double inverse_x_derivative(double f);

struct SupportInterval {
    double lo, hi;
};

// Recovers the support [0, e] from the monotonicity set of x(f): locates
// the critical point of (1+f)ln(1+f) by bisection on the closed-form
// derivative and takes the complement of the image of the increase set.
SupportInterval support_from_inverse(double tol = 1e-9);

}  // namespace bandspec
