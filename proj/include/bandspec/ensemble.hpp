#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bandspec/matrix.hpp"
#include "bandspec/profile.hpp"
#include "bandspec/rng.hpp"

namespace bandspec {

enum class EntryDistribution {
    iid_gaussian,
    iid_rademacher,
    sphere_columns,         // uniform on the sphere of radius sqrt(n)
    iid_pareto_symmetric,   // symmetrized Pareto, unit variance
};

std::string to_string(EntryDistribution d);
EntryDistribution entry_distribution_from_string(const std::string& s);

// Full description of one random band-matrix ensemble: the entry matrix is
// A_jk = band_width^{-1/2} v((j-k)/band_width) a_jk with column vectors a_k
// drawn independently from the chosen per-column law.
struct EnsembleSpec {
    int n = 0;
    int band_width = 0;
    BandProfile profile;
    EntryDistribution distribution = EntryDistribution::iid_gaussian;
    double tail_index = 3.0;  // only used by iid_pareto_symmetric
    uint64_t seed = 0;

    double nu_n() const { return static_cast<double>(n) / (2.0 * band_width); }

    // Throws ConfigError when an invariant fails (band_width >= 1,
    // nu_n >= 1/2, Pareto tail index > 2 so the 2+eps moment exists).
    void validate() const;
};

// One sample of the column vector a_k: isotropic (zero mean, identity
// covariance) and unconditional for every implemented law.
std::vector<double> draw_column_vector(EntryDistribution distribution,
                                       double tail_index, int n, RngStream& stream);

// Scale parameter of the symmetrized Pareto with unit variance:
// density ~ |x|^{-(1+alpha)} for |x| >= x0, x0 = sqrt((alpha-2)/alpha).
double pareto_scale(double tail_index);

// Draws the full matrix. Column k of replica r consumes the stream keyed
// (seed, r, k), so identical specs give bitwise-identical matrices no
// matter how replicas are distributed over workers.
DenseMatrix sample_matrix(const EnsembleSpec& spec, uint32_t replica = 0);

struct BandMask {
    int n = 0;
    std::vector<uint8_t> cells;
    bool operator()(int i, int j) const {
        return cells[static_cast<std::size_t>(i) * n + j] != 0;
    }
};

// mask(j,k) = (v((j-k)/band_width) != 0); sample_matrix is exactly zero
// wherever the mask is false.
BandMask band_mask(int n, int band_width, const BandProfile& profile);

}  // namespace bandspec
