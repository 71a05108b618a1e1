#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bandspec {

// Square real matrix, row-major dense storage. Desk-scale dimensions only;
// band sparsity is exploited in products, not in storage.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(int n, double fill = 0.0);

    int dim() const { return n_; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    std::span<const double> row(int i) const {
        return {data_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
    }

    static DenseMatrix identity(int n);

    double trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

private:
    int n_ = 0;
    std::vector<double> data_;
};

// M = A A^T. Rows are scanned for their nonzero extent first, so banded
// inputs cost O(n^2 b) instead of O(n^3).
DenseMatrix gram(const DenseMatrix& a);

}  // namespace bandspec
