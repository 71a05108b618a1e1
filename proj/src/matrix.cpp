#include "bandspec/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bandspec {

DenseMatrix::DenseMatrix(int n, double fill) : n_(n) {
    if (n <= 0) throw std::invalid_argument("matrix dimension must be positive");
    data_.assign(static_cast<std::size_t>(n) * n, fill);
}

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double DenseMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool DenseMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

DenseMatrix gram(const DenseMatrix& a) {
    const int n = a.dim();
    std::vector<int> first(n, n), last(n, -1);
    for (int i = 0; i < n; ++i) {
        auto row = a.row(i);
        int f = 0;
        while (f < n && row[f] == 0.0) ++f;
        int l = n - 1;
        while (l >= 0 && row[l] == 0.0) --l;
        first[i] = f;
        last[i] = l;
    }

    DenseMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (last[i] < first[i]) continue;  // zero row
        const double* ri = a.row(i).data();
        for (int j = i; j < n; ++j) {
            int lo = std::max(first[i], first[j]);
            int hi = std::min(last[i], last[j]);
            if (hi < lo) continue;
            const double* rj = a.row(j).data();
            double dot = 0.0;
            for (int k = lo; k <= hi; ++k) dot += ri[k] * rj[k];
            m(i, j) = dot;
            m(j, i) = dot;
        }
    }
    return m;
}

}  // namespace bandspec
