#include "bandspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bandspec {

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> values) : atoms_(std::move(values)) {
    if (atoms_.empty()) throw std::invalid_argument("empty eigenvalue sample");
    for (double v : atoms_)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite eigenvalue");
    std::sort(atoms_.begin(), atoms_.end());
}

double EmpiricalMeasure::cdf(double x) const {
    auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
    return static_cast<double>(it - atoms_.begin()) / atoms_.size();
}

double EmpiricalMeasure::cdf_left(double x) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x);
    return static_cast<double>(it - atoms_.begin()) / atoms_.size();
}

double EmpiricalMeasure::moment(int k) const {
    if (k < 1) throw std::invalid_argument("moment order must be >= 1");
    double acc = 0.0;
    for (double v : atoms_) acc += std::pow(v, k);
    return acc / atoms_.size();
}

double EmpiricalMeasure::count_in(double lo, double hi) const {
    if (lo > hi) throw std::invalid_argument("count_in requires lo <= hi");
    auto first = std::lower_bound(atoms_.begin(), atoms_.end(), lo);
    auto last = std::upper_bound(atoms_.begin(), atoms_.end(), hi);
    return static_cast<double>(last - first) / atoms_.size();
}

std::complex<double> EmpiricalMeasure::stieltjes(std::complex<double> z) const {
    if (z.imag() == 0.0)
        throw std::domain_error("stieltjes transform requires Im z != 0");
    std::complex<double> acc = 0.0;
    for (double v : atoms_) acc += 1.0 / (v - z);
    return acc / static_cast<double>(atoms_.size());
}

double ks_distance(const EmpiricalMeasure& measure,
                   const std::function<double(double)>& reference_cdf) {
    const auto& atoms = measure.atoms();
    const double n = static_cast<double>(atoms.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < atoms.size()) {
        std::size_t j = i;
        while (j + 1 < atoms.size() && atoms[j + 1] == atoms[i]) ++j;
        double x = atoms[i];
        double ref = reference_cdf(x);
        // left limit taken numerically so step references compare their own
        // jumps correctly; for continuous references this equals ref
        double ref_left =
            reference_cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
        double below = static_cast<double>(i) / n;      // F_n(x-)
        double above = static_cast<double>(j + 1) / n;  // F_n(x)
        d = std::max({d, std::abs(above - ref), std::abs(below - ref_left)});
        i = j + 1;
    }
    return d;
}

}  // namespace bandspec
