#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandspec/ensemble.hpp"
#include "bandspec/profile.hpp"
#include "bandspec/solver.hpp"
#include "bandspec/spectra.hpp"

namespace bandspec {

enum class ExperimentKind {
    sample,
    spectrum,
    solve,
    density,
    compare,
    moments,
    concentration,
    corollary,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

enum class ReferenceLaw { triangular, quarter_circle, solver };

std::string to_string(ReferenceLaw law);
ReferenceLaw reference_law_from_string(const std::string& s);

// Band-width schedules are expressions over n; only the documented forms
// are accepted: "n", "n/2", "ceil(sqrt(n))", "ceil(n/(2*nu))" (with the
// config's nu), or a positive integer literal.
int resolve_band_width(const std::string& expression, int n, double nu);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::compare;
    BandProfile profile;
    EntryDistribution distribution = EntryDistribution::iid_gaussian;
    double tail_index = 3.0;
    uint64_t seed = 0;

    std::vector<int> n_schedule;
    std::string bn_schedule = "n";
    double nu = 0.5;  // parameter for the ceil(n/(2*nu)) schedule
    int replicas = 1;
    std::optional<uint32_t> replica_index;  // for `sample`/`spectrum`

    ReferenceLaw reference = ReferenceLaw::triangular;
    std::optional<double> reference_w2;  // quarter-circle scale override
    double interval_lo = 0.0, interval_hi = 1.0;  // Delta for counting

    std::vector<std::complex<double>> z_list;
    std::vector<double> lambda_grid;
    std::vector<double> epsilon_schedule = {4e-3, 2e-3, 1e-3};
    int grid_size = 800;
    double tolerance = 1e-10;
    int histogram_bins = 0;  // 0 = no histogram

    std::string out_path;
    std::string format = "csv";
    int workers = 0;  // 0 = hardware concurrency
    bool allow_large = false;

    void validate() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct CompareRow {
    int n = 0;
    int band_width = 0;
    double ks = 0.0;
    std::array<double, 4> moment_rel_err{};  // k = 1..4, relative
    double delta_mean = 0.0;  // replica mean of N_n(Delta)
    double delta_var = 0.0;   // replica variance (unbiased)
    uint64_t spec_hash = 0;
    double runtime_sec = 0.0;  // in-memory only; never emitted
};

struct ComparisonReport {
    std::string reference;
    std::vector<CompareRow> rows;
    double slope = 0.0;             // concentration: d log(var) / d log(n)
    std::string slope_flag;         // "", "ok" or "low-confidence"
};

// For each scheduled n: samples R replicas, pools their eigenvalues,
// compares against the reference law (KS distance, moment errors) and
// tabulates the counting statistics on Delta.
ComparisonReport run_compare(const ExperimentConfig& config);

// Across-replica variance of N_n(Delta) per scheduled n, plus the fitted
// slope of log-variance against log n.
ComparisonReport run_concentration(const ExperimentConfig& config);

struct CorollaryRow {
    std::complex<double> z;
    std::complex<double> aggregate;
    std::complex<double> f_qc;
    double deviation = 0.0;
};

struct CorollaryReport {
    bool periodic = false;
    double sup_deviation = 0.0;
    bool consistent = false;  // verdict matches the periodicity dichotomy
    double w2 = 0.0;
    std::vector<CorollaryRow> rows;
};

// Quarter-circle dichotomy check: a periodic v^2 must reproduce f_qc within
// 1e-6 across the z list, a non-periodic one must deviate by at least 1e-3.
CorollaryReport run_corollary_test(const BandProfile& profile, double nu,
                                   std::span<const std::complex<double>> z_list,
                                   int grid_size = 800, double tol = 1e-10);

// One replica's spectrum with provenance (spec hash + replica index).
SpectralSample spectral_sample(const EnsembleSpec& spec, uint32_t replica);

// Pooled eigenvalues of R replicas at (n, band_width); parallel over
// replicas, reduced in replica order. Also returns per-replica counting
// statistics for Delta = [lo, hi].
struct PooledSpectra {
    std::vector<double> eigenvalues;          // pooled, sorted
    std::vector<double> replica_interval_mass;  // N_n(Delta) per replica
};
PooledSpectra pooled_spectra(const EnsembleSpec& spec, int replicas,
                             double interval_lo, double interval_hi, int workers);

// Reference CDF + first four moments for a law.
struct ReferenceStatistics {
    std::function<double(double)> cdf;
    std::array<double, 4> moments{};
    std::string name;
};
ReferenceStatistics make_reference(const ExperimentConfig& config);

std::string report_csv(const ComparisonReport& report);
nlohmann::json report_json(const ComparisonReport& report);
std::string corollary_csv(const CorollaryReport& report);
nlohmann::json corollary_json(const CorollaryReport& report);

// Deterministic parallel map: calls fn(i) for i in [0, count) on a worker
// pool; results land in index order so worker count never changes output.
void parallel_for_index(int count, int workers, const std::function<void(int)>& fn);

int default_worker_count();

}  // namespace bandspec
