#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bandspec/errors.hpp"
#include "bandspec/spectra.hpp"

// Singular value path: Golub-Kahan Householder bidiagonalization followed
// by implicit-shift QR on the bidiagonal, singular values only. Works on A
// directly instead of A A^T, which preserves relative accuracy for the
// small singular values at the hard edge.

namespace bandspec {

namespace {

constexpr int kMaxIterations = 50;

inline double sign_with(double magnitude, double sign_of) {
    return sign_of >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

// Bidiagonalize square a in place: w = diagonal, rv1 = superdiagonal
// stored shifted so rv1[i] sits in row i-1 (rv1[0] = 0). Returns the
// max column norm of the bidiagonal for negligibility tests.
double bidiagonalize(DenseMatrix& a, std::vector<double>& w, std::vector<double>& rv1) {
    const int n = a.dim();
    double g = 0.0, scale = 0.0, anorm = 0.0;

    for (int i = 0; i < n; ++i) {
        const int l = i + 1;
        rv1[i] = scale * g;
        g = scale = 0.0;
        double s = 0.0;
        // left Householder: clear column i below the diagonal
        for (int k = i; k < n; ++k) scale += std::abs(a(k, i));
        if (scale != 0.0) {
            for (int k = i; k < n; ++k) {
                a(k, i) /= scale;
                s += a(k, i) * a(k, i);
            }
            double f = a(i, i);
            g = -sign_with(std::sqrt(s), f);
            double h = f * g - s;
            a(i, i) = f - g;
            for (int j = l; j < n; ++j) {
                s = 0.0;
                for (int k = i; k < n; ++k) s += a(k, i) * a(k, j);
                f = s / h;
                for (int k = i; k < n; ++k) a(k, j) += f * a(k, i);
            }
            for (int k = i; k < n; ++k) a(k, i) *= scale;
        }
        w[i] = scale * g;

        g = scale = s = 0.0;
        // right Householder: clear row i right of the superdiagonal
        if (i != n - 1) {
            for (int k = l; k < n; ++k) scale += std::abs(a(i, k));
            if (scale != 0.0) {
                for (int k = l; k < n; ++k) {
                    a(i, k) /= scale;
                    s += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                g = -sign_with(std::sqrt(s), f);
                double h = f * g - s;
                a(i, l) = f - g;
                for (int k = l; k < n; ++k) rv1[k] = a(i, k) / h;
                for (int j = l; j < n; ++j) {
                    s = 0.0;
                    for (int k = l; k < n; ++k) s += a(j, k) * a(i, k);
                    for (int k = l; k < n; ++k) a(j, k) += s * rv1[k];
                }
                for (int k = l; k < n; ++k) a(i, k) *= scale;
            }
        }
        anorm = std::max(anorm, std::abs(w[i]) + std::abs(rv1[i]));
    }
    return anorm;
}

// Implicit-shift QR on the bidiagonal (w, rv1), Golub-Reinsch form.
void bidiagonal_qr(std::vector<double>& w, std::vector<double>& rv1, double anorm) {
    const int n = static_cast<int>(w.size());
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double negligible = eps * anorm;

    for (int k = n - 1; k >= 0; --k) {
        for (int its = 1; ; ++its) {
            bool flag = true;
            int l, nm = 0;
            for (l = k; l >= 0; --l) {
                nm = l - 1;
                if (std::abs(rv1[l]) <= negligible) {
                    flag = false;
                    break;
                }
                // rv1[0] is exactly zero, so nm >= 0 whenever we get here
                if (std::abs(w[nm]) <= negligible) break;
            }
            if (flag) {
                // w[l-1] is negligible: rotate rv1[l..k] away so the block
                // splits despite the zero diagonal entry
                double c = 0.0, s = 1.0;
                for (int i = l; i <= k; ++i) {
                    double f = s * rv1[i];
                    rv1[i] = c * rv1[i];
                    if (std::abs(f) <= negligible) break;
                    double g = w[i];
                    double h = std::hypot(f, g);
                    w[i] = h;
                    h = 1.0 / h;
                    c = g * h;
                    s = -f * h;
                }
            }
            double z = w[k];
            if (l == k) {
                if (z < 0.0) w[k] = -z;
                break;
            }
            if (its == kMaxIterations)
                throw ConvergenceError("bidiagonal QR exceeded " +
                                           std::to_string(kMaxIterations) +
                                           " iterations for one singular value",
                                       std::abs(rv1[k]));
            // shift from the trailing 2x2 of B^T B
            double x = w[l];
            nm = k - 1;
            double y = w[nm];
            double g = rv1[nm];
            double h = rv1[k];
            double f = ((y - z) * (y + z) + (g - h) * (g + h)) / (2.0 * h * y);
            g = std::hypot(f, 1.0);
            f = ((x - z) * (x + z) + h * (y / (f + sign_with(g, f)) - h)) / x;
            // chase the bulge with two interleaved Givens sequences
            double c = 1.0, s = 1.0;
            for (int j = l; j <= nm; ++j) {
                int i = j + 1;
                g = rv1[i];
                y = w[i];
                h = s * g;
                g = c * g;
                z = std::hypot(f, h);
                rv1[j] = z;
                c = f / z;
                s = h / z;
                f = x * c + g * s;
                g = g * c - x * s;
                h = y * s;
                y *= c;
                z = std::hypot(f, h);
                w[j] = z;
                if (z != 0.0) {
                    z = 1.0 / z;
                    c = f * z;
                    s = h * z;
                }
                f = c * g + s * y;
                x = c * y - s * g;
            }
            rv1[l] = 0.0;
            rv1[k] = f;
            w[k] = x;
        }
    }
}

}  // namespace

std::vector<double> singular_values(const DenseMatrix& a) {
    const int n = a.dim();
    if (n == 0) throw std::invalid_argument("empty matrix");
    if (!a.all_finite()) throw std::invalid_argument("matrix has non-finite entries");
    if (n == 1) return {std::abs(a(0, 0))};

    DenseMatrix work = a;
    std::vector<double> w(n, 0.0), rv1(n, 0.0);
    double anorm = bidiagonalize(work, w, rv1);
    if (anorm > 0.0) bidiagonal_qr(w, rv1, anorm);
    for (double& x : w) x = std::abs(x);
    std::sort(w.begin(), w.end());
    return w;
}

}  // namespace bandspec
