#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "bandspec/matrix.hpp"

namespace bandspec {

// Sorted eigenvalue sample of one Gram matrix, with provenance.
struct SpectralSample {
    std::vector<double> values;  // ascending
    uint64_t spec_hash = 0;
    uint32_t replica = 0;
};

// All eigenvalues of a symmetric matrix, ascending. Householder reduction
// to tridiagonal form followed by implicit-shift QL. Negative eigenvalues
// in [-tol*|M|_F, 0) are clamped to zero (Gram matrices are PSD by
// construction, anything in that window is roundoff). Throws
// std::invalid_argument when the input is not symmetric to 1e-10 relative,
// ConvergenceError when QL fails after 50 sweeps for some eigenvalue.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& m, double tol = 1e-10);

// All singular values of a square matrix, ascending. Golub-Kahan
// bidiagonalization followed by implicit-shift bidiagonal QR; never forms
// A A^T, so small singular values keep relative accuracy near the hard
// edge. Independent of symmetric_eigenvalues by design: the two routes are
// cross-checked in the test suite.
std::vector<double> singular_values(const DenseMatrix& a);

// Normalized counting measure: atoms with uniform weight 1/n.
class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(std::vector<double> values);  // sorts its input

    const std::vector<double>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

    double cdf(double x) const;       // right-continuous F(x)
    double cdf_left(double x) const;  // F(x-)
    double moment(int k) const;       // n^-1 sum lambda^k, k >= 1
    double count_in(double lo, double hi) const;  // mass of [lo, hi]

    // g_n(z) = n^-1 sum 1/(lambda_l - z); requires Im z != 0.
    std::complex<double> stieltjes(std::complex<double> z) const;

private:
    std::vector<double> atoms_;
};

// sup over atoms of max(|F_n(x) - F(x)|, |F_n(x-) - F(x)|) against a
// reference CDF (monotone, 0 -> 1).
double ks_distance(const EmpiricalMeasure& measure,
                   const std::function<double(double)>& reference_cdf);

}  // namespace bandspec
