#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bandspec/errors.hpp"
#include "bandspec/spectra.hpp"

// Symmetric eigenvalue path: Householder reduction to tridiagonal form
// (eigenvalues only, no transform accumulation), then QL iteration with
// implicit Wilkinson shifts. Deflation when an off-diagonal element is
// negligible against its diagonal neighbours at machine precision.

namespace bandspec {

namespace {

constexpr int kMaxSweeps = 50;

// Reduce symmetric a (overwritten) to tridiagonal: d = diagonal,
// e = subdiagonal with e[0] unused.
void householder_tridiagonalize(DenseMatrix& a, std::vector<double>& d,
                                std::vector<double>& e) {
    const int n = a.dim();
    d.assign(n, 0.0);
    e.assign(n, 0.0);

    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k)
                        a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    for (int i = 0; i < n; ++i) d[i] = a(i, i);
}

// QL with implicit shifts on (d, e); e[0] unused on input. On return d
// holds the eigenvalues, unsorted.
void ql_implicit_shift(std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == kMaxSweeps)
                    throw ConvergenceError(
                        "QL iteration exceeded " + std::to_string(kMaxSweeps) +
                        " sweeps for one eigenvalue", std::abs(e[l]));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const DenseMatrix& m, double tol) {
    const int n = m.dim();
    if (n == 0) throw std::invalid_argument("empty matrix");
    if (!m.all_finite()) throw std::invalid_argument("matrix has non-finite entries");

    const double norm = m.frobenius_norm();
    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
    if (asym > 1e-10 * (norm + 1.0))
        throw std::invalid_argument("matrix is not symmetric within 1e-10 relative");

    if (n == 1) return {m(0, 0)};

    DenseMatrix work = m;
    // symmetrize exactly so the reduction sees one consistent triangle
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = 0.5 * (work(i, j) + work(j, i));
            work(i, j) = v;
            work(j, i) = v;
        }

    std::vector<double> d, e;
    householder_tridiagonalize(work, d, e);
    ql_implicit_shift(d, e);

    const double clamp = tol * norm;
    for (double& x : d)
        if (x < 0.0 && x >= -clamp) x = 0.0;
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace bandspec
