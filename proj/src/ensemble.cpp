#include "bandspec/ensemble.hpp"

#include <cmath>
#include <stdexcept>

#include "bandspec/errors.hpp"

namespace bandspec {

std::string to_string(EntryDistribution d) {
    switch (d) {
        case EntryDistribution::iid_gaussian: return "iid_gaussian";
        case EntryDistribution::iid_rademacher: return "iid_rademacher";
        case EntryDistribution::sphere_columns: return "sphere_columns";
        case EntryDistribution::iid_pareto_symmetric: return "iid_pareto_symmetric";
    }
    throw std::logic_error("unknown distribution");
}

EntryDistribution entry_distribution_from_string(const std::string& s) {
    if (s == "iid_gaussian") return EntryDistribution::iid_gaussian;
    if (s == "iid_rademacher") return EntryDistribution::iid_rademacher;
    if (s == "sphere_columns") return EntryDistribution::sphere_columns;
    if (s == "iid_pareto_symmetric") return EntryDistribution::iid_pareto_symmetric;
    throw ConfigError("unknown entry distribution: " + s);
}

void EnsembleSpec::validate() const {
    if (n < 1) throw ConfigError("ensemble dimension n must be >= 1");
    if (band_width < 1) throw ConfigError("band_width must be >= 1");
    if (nu_n() < 0.5)
        throw ConfigError("nu_n = n/(2 band_width) must be >= 1/2, got " +
                          std::to_string(nu_n()));
    if (distribution == EntryDistribution::iid_pareto_symmetric && !(tail_index > 2.0))
        throw ConfigError("iid_pareto_symmetric requires tail_index > 2");
}

double pareto_scale(double tail_index) {
    if (!(tail_index > 2.0)) throw std::invalid_argument("tail_index must be > 2");
    return std::sqrt((tail_index - 2.0) / tail_index);
}

std::vector<double> draw_column_vector(EntryDistribution distribution,
                                       double tail_index, int n, RngStream& stream) {
    if (n < 1) throw std::invalid_argument("vector length must be >= 1");
    std::vector<double> a(n);
    switch (distribution) {
        case EntryDistribution::iid_gaussian:
            for (double& x : a) x = stream.normal();
            break;
        case EntryDistribution::iid_rademacher:
            for (double& x : a) x = stream.rademacher();
            break;
        case EntryDistribution::sphere_columns: {
            double norm2 = 0.0;
            for (double& x : a) {
                x = stream.normal();
                norm2 += x * x;
            }
            double scale = std::sqrt(static_cast<double>(n) / norm2);
            for (double& x : a) x *= scale;
            break;
        }
        case EntryDistribution::iid_pareto_symmetric: {
            double x0 = pareto_scale(tail_index);
            for (double& x : a) {
                double mag = x0 * std::pow(stream.uniform_open01(), -1.0 / tail_index);
                x = stream.rademacher() * mag;
            }
            break;
        }
    }
    return a;
}

DenseMatrix sample_matrix(const EnsembleSpec& spec, uint32_t replica) {
    spec.validate();
    const int n = spec.n;
    const double inv_sqrt_b = 1.0 / std::sqrt(static_cast<double>(spec.band_width));
    DenseMatrix a(n);
    for (int k = 0; k < n; ++k) {
        RngStream stream(spec.seed, replica, static_cast<uint32_t>(k));
        std::vector<double> col =
            draw_column_vector(spec.distribution, spec.tail_index, n, stream);
        for (int j = 0; j < n; ++j) {
            double v = spec.profile.evaluate(static_cast<double>(j - k) / spec.band_width);
            a(j, k) = (v == 0.0) ? 0.0 : inv_sqrt_b * v * col[j];
        }
    }
    return a;
}

BandMask band_mask(int n, int band_width, const BandProfile& profile) {
    if (n < 1 || band_width < 1)
        throw std::invalid_argument("band_mask requires n >= 1 and band_width >= 1");
    BandMask mask;
    mask.n = n;
    mask.cells.assign(static_cast<std::size_t>(n) * n, 0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            mask.cells[static_cast<std::size_t>(j) * n + k] =
                profile.evaluate(static_cast<double>(j - k) / band_width) != 0.0;
    return mask;
}

}  // namespace bandspec
