#include "bandspec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <thread>

#include "bandspec/errors.hpp"
#include "bandspec/io.hpp"
#include "bandspec/spectra.hpp"
#include "bandspec/trilaw.hpp"

namespace bandspec {

namespace {

constexpr int kDefaultMaxN = 4000;
constexpr int kDefaultMaxReplicas = 500;
constexpr double kPeriodicAgreementTol = 1e-6;
constexpr double kNonPeriodicGapMin = 1e-3;

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::sample: return "sample";
        case ExperimentKind::spectrum: return "spectrum";
        case ExperimentKind::solve: return "solve";
        case ExperimentKind::density: return "density";
        case ExperimentKind::compare: return "compare";
        case ExperimentKind::moments: return "moments";
        case ExperimentKind::concentration: return "concentration";
        case ExperimentKind::corollary: return "corollary";
    }
    throw std::logic_error("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    for (auto k : {ExperimentKind::sample, ExperimentKind::spectrum,
                   ExperimentKind::solve, ExperimentKind::density,
                   ExperimentKind::compare, ExperimentKind::moments,
                   ExperimentKind::concentration, ExperimentKind::corollary})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown experiment kind: " + s);
}

std::string to_string(ReferenceLaw law) {
    switch (law) {
        case ReferenceLaw::triangular: return "triangular";
        case ReferenceLaw::quarter_circle: return "quarter_circle";
        case ReferenceLaw::solver: return "solver";
    }
    throw std::logic_error("unknown reference law");
}

ReferenceLaw reference_law_from_string(const std::string& s) {
    for (auto l : {ReferenceLaw::triangular, ReferenceLaw::quarter_circle,
                   ReferenceLaw::solver})
        if (to_string(l) == s) return l;
    throw ConfigError("unknown reference law: " + s);
}

int resolve_band_width(const std::string& expression, int n, double nu) {
    std::string e;
    for (char c : expression)
        if (c != ' ') e += c;

    long b;
    if (e == "n") {
        b = n;
    } else if (e == "n/2") {
        b = n / 2;
    } else if (e == "ceil(sqrt(n))") {
        b = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(n))));
    } else if (e == "ceil(n/(2*nu))") {
        if (!(nu > 0.0)) throw ConfigError("schedule ceil(n/(2*nu)) requires nu > 0");
        b = static_cast<long>(std::ceil(n / (2.0 * nu)));
    } else if (!e.empty() && e.find_first_not_of("0123456789") == std::string::npos) {
        b = std::stol(e);
    } else {
        throw ConfigError("unsupported band-width schedule: " + expression);
    }
    if (b < 1) throw ConfigError("schedule produced band_width < 1 at n = " +
                                 std::to_string(n));
    double nu_n = n / (2.0 * static_cast<double>(b));
    if (nu_n < 0.5)
        throw ConfigError("schedule produced nu_n < 1/2 at n = " + std::to_string(n));
    return static_cast<int>(b);
}

void ExperimentConfig::validate() const {
    if (replicas < 1) throw ConfigError("replicas must be >= 1");
    if (n_schedule.empty() &&
        (kind == ExperimentKind::compare || kind == ExperimentKind::concentration ||
         kind == ExperimentKind::sample || kind == ExperimentKind::spectrum))
        throw ConfigError("n_schedule must not be empty");
    if (kind == ExperimentKind::concentration && n_schedule.size() < 2)
        throw ConfigError("concentration requires two or more n values");
    for (int n : n_schedule) {
        if (n < 1) throw ConfigError("scheduled n must be >= 1");
        if (!allow_large && n > kDefaultMaxN)
            throw ConfigError("scheduled n exceeds the desk-scale cap " +
                              std::to_string(kDefaultMaxN) +
                              " (pass allow_large to override)");
        resolve_band_width(bn_schedule, n, nu);  // throws on bad schedules
    }
    if (!allow_large && replicas > kDefaultMaxReplicas)
        throw ConfigError("replicas exceed the desk-scale cap " +
                          std::to_string(kDefaultMaxReplicas) +
                          " (pass allow_large to override)");
    if (interval_lo > interval_hi) throw ConfigError("interval must have lo <= hi");
    if (grid_size < 64) throw ConfigError("grid_size must be >= 64");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (format != "csv" && format != "json")
        throw ConfigError("format must be csv or json");
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        if (j.contains("kind"))
            c.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
        c.profile = profile_from_json(j.at("profile"));
        if (j.contains("distribution"))
            c.distribution =
                entry_distribution_from_string(j.at("distribution").get<std::string>());
        if (j.contains("tail_index")) c.tail_index = j.at("tail_index").get<double>();
        if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
        if (j.contains("n_schedule"))
            c.n_schedule = j.at("n_schedule").get<std::vector<int>>();
        if (j.contains("bn_schedule"))
            c.bn_schedule = j.at("bn_schedule").get<std::string>();
        if (j.contains("nu")) c.nu = j.at("nu").get<double>();
        if (j.contains("replicas")) c.replicas = j.at("replicas").get<int>();
        if (j.contains("replica_index"))
            c.replica_index = j.at("replica_index").get<uint32_t>();
        if (j.contains("reference"))
            c.reference = reference_law_from_string(j.at("reference").get<std::string>());
        if (j.contains("reference_w2"))
            c.reference_w2 = j.at("reference_w2").get<double>();
        if (j.contains("interval")) {
            c.interval_lo = j.at("interval").at(0).get<double>();
            c.interval_hi = j.at("interval").at(1).get<double>();
        }
        if (j.contains("z_list")) {
            for (const auto& zv : j.at("z_list"))
                c.z_list.emplace_back(zv.at(0).get<double>(), zv.at(1).get<double>());
        }
        if (j.contains("lambda_grid")) {
            const auto& lg = j.at("lambda_grid");
            if (lg.is_array()) {
                c.lambda_grid = lg.get<std::vector<double>>();
            } else {
                double lo = lg.at("min").get<double>();
                double hi = lg.at("max").get<double>();
                int count = lg.at("count").get<int>();
                if (count < 2 || !(hi > lo)) throw ConfigError("bad lambda_grid");
                for (int i = 0; i < count; ++i)
                    c.lambda_grid.push_back(lo + (hi - lo) * i / (count - 1));
            }
        }
        if (j.contains("epsilon_schedule"))
            c.epsilon_schedule = j.at("epsilon_schedule").get<std::vector<double>>();
        if (j.contains("grid_size")) c.grid_size = j.at("grid_size").get<int>();
        if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
        if (j.contains("histogram_bins"))
            c.histogram_bins = j.at("histogram_bins").get<int>();
        if (j.contains("out")) c.out_path = j.at("out").get<std::string>();
        if (j.contains("format")) c.format = j.at("format").get<std::string>();
        if (j.contains("workers")) c.workers = j.at("workers").get<int>();
        if (j.contains("allow_large")) c.allow_large = j.at("allow_large").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
    c.validate();
    return c;
}

int default_worker_count() {
    if (const char* env = std::getenv("BANDSPEC_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for_index(int count, int workers, const std::function<void(int)>& fn) {
    if (workers <= 0) workers = default_worker_count();
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

SpectralSample spectral_sample(const EnsembleSpec& spec, uint32_t replica) {
    SpectralSample sample;
    sample.values = symmetric_eigenvalues(gram(sample_matrix(spec, replica)));
    sample.spec_hash = ensemble_spec_hash(spec);
    sample.replica = replica;
    return sample;
}

PooledSpectra pooled_spectra(const EnsembleSpec& spec, int replicas,
                             double interval_lo, double interval_hi, int workers) {
    spec.validate();
    std::vector<std::vector<double>> per_replica(replicas);
    parallel_for_index(replicas, workers, [&](int r) {
        DenseMatrix a = sample_matrix(spec, static_cast<uint32_t>(r));
        per_replica[r] = symmetric_eigenvalues(gram(a));
    });

    PooledSpectra out;
    out.eigenvalues.reserve(static_cast<std::size_t>(spec.n) * replicas);
    out.replica_interval_mass.reserve(replicas);
    for (int r = 0; r < replicas; ++r) {
        EmpiricalMeasure m(per_replica[r]);
        out.replica_interval_mass.push_back(m.count_in(interval_lo, interval_hi));
        out.eigenvalues.insert(out.eigenvalues.end(), per_replica[r].begin(),
                               per_replica[r].end());
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    return out;
}

namespace {

// CDF table for the triangular law, built once from the parametric form:
// much cheaper than per-point adaptive quadrature when evaluating at every
// pooled eigenvalue.
class TriangularCdfTable {
public:
    explicit TriangularCdfTable(int points = 8192) {
        using std::numbers::pi;
        lambda_.resize(points);
        cdf_.resize(points);
        std::vector<double> eta(points), g(points);
        for (int i = 0; i < points; ++i) {
            eta[i] = pi * (i + 0.5) / points;  // midpoints; integrand smooth
            auto p = parametric_eval(eta[i]);
            lambda_[i] = p.first;
            g[i] = p.second;
        }
        // cdf(lambda(eta)) = int_eta^pi g, accumulated from the right
        double h = pi / points;
        double acc = 0.0;
        for (int i = points - 1; i >= 0; --i) {
            acc += g[i] * h;
            cdf_[i] = acc;
        }
        // lambda decreases in eta; flip both so lambda_ ascends
        std::reverse(lambda_.begin(), lambda_.end());
        std::reverse(cdf_.begin(), cdf_.end());
    }

    double operator()(double x) const {
        using std::numbers::e;
        if (x <= 0.0) return 0.0;
        if (x >= e) return 1.0;
        auto it = std::lower_bound(lambda_.begin(), lambda_.end(), x);
        if (it == lambda_.begin()) return 0.0;
        if (it == lambda_.end()) return 1.0;
        std::size_t i = static_cast<std::size_t>(it - lambda_.begin());
        double w = (x - lambda_[i - 1]) / (lambda_[i] - lambda_[i - 1]);
        return cdf_[i - 1] * (1.0 - w) + cdf_[i] * w;
    }

private:
    static std::pair<double, double> parametric_eval(double eta) {
        double s = std::sin(eta);
        double lambda = std::exp(eta * std::cos(eta) / s) * s / eta;
        double g =
            (1.0 + s * s / (eta * eta) - std::sin(2.0 * eta) / eta) / std::numbers::pi;
        return {lambda, g};
    }

    std::vector<double> lambda_;
    std::vector<double> cdf_;
};

double quarter_circle_moment(int k, double w2) {
    static constexpr double catalan[] = {1.0, 2.0, 5.0, 14.0};
    return catalan[k - 1] * std::pow(w2, k);
}

}  // namespace

ReferenceStatistics make_reference(const ExperimentConfig& config) {
    ReferenceStatistics ref;
    switch (config.reference) {
        case ReferenceLaw::triangular: {
            auto table = std::make_shared<TriangularCdfTable>();
            ref.cdf = [table](double x) { return (*table)(x); };
            for (int k = 1; k <= 4; ++k) ref.moments[k - 1] = triangular_moment(k).value();
            ref.name = "triangular";
            break;
        }
        case ReferenceLaw::quarter_circle: {
            double w2 = config.reference_w2
                            ? *config.reference_w2
                            : squared_l2_norm(config.profile,
                                              std::numeric_limits<double>::infinity());
            if (!(w2 > 0.0)) throw ConfigError("quarter-circle reference needs w2 > 0");
            ref.cdf = [w2](double x) { return quarter_circle_cdf(x, w2); };
            for (int k = 1; k <= 4; ++k) ref.moments[k - 1] = quarter_circle_moment(k, w2);
            ref.name = "quarter_circle";
            break;
        }
        case ReferenceLaw::solver: {
            if (config.lambda_grid.size() < 2)
                throw ConfigError("solver reference requires a lambda_grid");
            auto op = std::make_shared<BandIntegralOperator>(config.profile, config.nu,
                                                             config.grid_size);
            double w2 = squared_l2_norm(config.profile, config.nu);
            auto transform = [op, w2, tol = config.tolerance](std::complex<double> z) {
                GridSolution warm;
                bool have = false;
                std::complex<double> result;
                for (auto zs : continuation_path(z, w2)) {
                    warm = have ? solve_fixed_point(*op, zs, tol, &warm)
                                : solve_fixed_point(*op, zs, tol, nullptr);
                    have = true;
                }
                result = aggregate(warm);
                return result;
            };
            SpectralDensity density = density_from_transform(
                transform, config.lambda_grid, config.epsilon_schedule);
            // CDF and moments by trapezoid on the density grid
            auto grid = std::make_shared<std::vector<double>>(density.lambda);
            auto cum = std::make_shared<std::vector<double>>(grid->size(), 0.0);
            for (std::size_t i = 1; i < grid->size(); ++i)
                (*cum)[i] = (*cum)[i - 1] + 0.5 * ((*grid)[i] - (*grid)[i - 1]) *
                                                (density.rho[i] + density.rho[i - 1]);
            double total = cum->back();
            for (int k = 1; k <= 4; ++k) {
                double acc = 0.0;
                for (std::size_t i = 1; i < grid->size(); ++i)
                    acc += 0.5 * ((*grid)[i] - (*grid)[i - 1]) *
                           (std::pow((*grid)[i], k) * density.rho[i] +
                            std::pow((*grid)[i - 1], k) * density.rho[i - 1]);
                ref.moments[k - 1] = acc;
            }
            ref.cdf = [grid, cum, total](double x) {
                if (x <= grid->front()) return 0.0;
                if (x >= grid->back()) return 1.0;
                auto it = std::upper_bound(grid->begin(), grid->end(), x);
                std::size_t i = static_cast<std::size_t>(it - grid->begin());
                double w = (x - (*grid)[i - 1]) / ((*grid)[i] - (*grid)[i - 1]);
                double c = (*cum)[i - 1] * (1.0 - w) + (*cum)[i] * w;
                (void)total;
                return std::min(c, 1.0);
            };
            ref.name = "solver";
            break;
        }
    }
    return ref;
}

namespace {

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(xs.size() - 1);
}

double sample_mean(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    return mean / static_cast<double>(xs.size());
}

}  // namespace

ComparisonReport run_compare(const ExperimentConfig& config) {
    config.validate();
    ReferenceStatistics ref = make_reference(config);

    ComparisonReport report;
    report.reference = ref.name;
    for (int n : config.n_schedule) {
        auto t0 = std::chrono::steady_clock::now();
        EnsembleSpec spec;
        spec.n = n;
        spec.band_width = resolve_band_width(config.bn_schedule, n, config.nu);
        spec.profile = config.profile;
        spec.distribution = config.distribution;
        spec.tail_index = config.tail_index;
        spec.seed = config.seed;

        PooledSpectra pooled = pooled_spectra(spec, config.replicas, config.interval_lo,
                                              config.interval_hi, config.workers);
        EmpiricalMeasure measure(pooled.eigenvalues);

        CompareRow row;
        row.n = n;
        row.band_width = spec.band_width;
        row.ks = ks_distance(measure, ref.cdf);
        for (int k = 1; k <= 4; ++k) {
            double mu = ref.moments[k - 1];
            row.moment_rel_err[k - 1] =
                std::abs(measure.moment(k) - mu) / std::max(std::abs(mu), 1e-300);
        }
        row.delta_mean = sample_mean(pooled.replica_interval_mass);
        row.delta_var = sample_variance(pooled.replica_interval_mass);
        row.spec_hash = ensemble_spec_hash(spec);
        row.runtime_sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.rows.push_back(row);
    }
    return report;
}

ComparisonReport run_concentration(const ExperimentConfig& config) {
    config.validate();
    if (config.n_schedule.size() < 2)
        throw ConfigError("concentration requires two or more n values");

    ComparisonReport report;
    report.reference = "concentration";
    for (int n : config.n_schedule) {
        auto t0 = std::chrono::steady_clock::now();
        EnsembleSpec spec;
        spec.n = n;
        spec.band_width = resolve_band_width(config.bn_schedule, n, config.nu);
        spec.profile = config.profile;
        spec.distribution = config.distribution;
        spec.tail_index = config.tail_index;
        spec.seed = config.seed;

        PooledSpectra pooled = pooled_spectra(spec, config.replicas, config.interval_lo,
                                              config.interval_hi, config.workers);
        CompareRow row;
        row.n = n;
        row.band_width = spec.band_width;
        row.delta_mean = sample_mean(pooled.replica_interval_mass);
        row.delta_var = sample_variance(pooled.replica_interval_mass);
        row.spec_hash = ensemble_spec_hash(spec);
        row.runtime_sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.rows.push_back(row);
    }

    // least-squares slope of log var against log n
    std::vector<double> lx, ly;
    for (const auto& row : report.rows) {
        if (row.delta_var > 0.0) {
            lx.push_back(std::log(static_cast<double>(row.n)));
            ly.push_back(std::log(row.delta_var));
        }
    }
    if (lx.size() >= 2) {
        double mx = sample_mean(lx), my = sample_mean(ly);
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxx += (lx[i] - mx) * (lx[i] - mx);
            sxy += (lx[i] - mx) * (ly[i] - my);
        }
        report.slope = sxy / sxx;
    }
    report.slope_flag = config.replicas < 10 ? "low-confidence" : "ok";
    return report;
}

CorollaryReport run_corollary_test(const BandProfile& profile, double nu,
                                   std::span<const std::complex<double>> z_list,
                                   int grid_size, double tol) {
    if (z_list.empty()) throw ConfigError("corollary test requires a z list");
    CorollaryReport report;
    report.periodic = is_periodic_square(profile, nu, 0.0);
    report.w2 = squared_l2_norm(profile, nu);

    BandIntegralOperator op(profile, nu, grid_size);
    for (std::complex<double> z : z_list) {
        GridSolution solution;
        if (z.imag() >= contraction_k0(report.w2)) {
            solution = solve_fixed_point(op, z, tol, nullptr);
        } else {
            GridSolution warm;
            bool have = false;
            for (auto zs : continuation_path(z, report.w2)) {
                warm = solve_fixed_point(op, zs, tol, have ? &warm : nullptr);
                have = true;
            }
            solution = std::move(warm);
        }
        CorollaryRow row;
        row.z = z;
        row.aggregate = aggregate(solution);
        row.f_qc = solve_quarter_circle_transform(z, report.w2);
        row.deviation = std::abs(row.aggregate - row.f_qc);
        report.sup_deviation = std::max(report.sup_deviation, row.deviation);
        report.rows.push_back(row);
    }
    report.consistent = report.periodic
                            ? report.sup_deviation <= kPeriodicAgreementTol
                            : report.sup_deviation >= kNonPeriodicGapMin;
    return report;
}

std::string report_csv(const ComparisonReport& report) {
    std::string out =
        "n,band_width,ks,moment_err_1,moment_err_2,moment_err_3,moment_err_4,"
        "delta_mean,delta_var,reference,spec_hash,slope,slope_flag\n";
    char hash[32];
    for (const auto& row : report.rows) {
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(row.spec_hash));
        out += std::to_string(row.n) + ',' + std::to_string(row.band_width) + ',';
        out += format_double(row.ks) + ',';
        for (double err : row.moment_rel_err) out += format_double(err) + ',';
        out += format_double(row.delta_mean) + ',' + format_double(row.delta_var) + ',';
        out += report.reference + ',';
        out += hash;
        out += ',' + format_double(report.slope) + ',' + report.slope_flag + '\n';
    }
    return out;
}

nlohmann::json report_json(const ComparisonReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    char hash[32];
    for (const auto& row : report.rows) {
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(row.spec_hash));
        rows.push_back({{"n", row.n},
                        {"band_width", row.band_width},
                        {"ks", row.ks},
                        {"moment_errors", row.moment_rel_err},
                        {"delta_mean", row.delta_mean},
                        {"delta_var", row.delta_var},
                        {"spec_hash", hash}});
    }
    return {{"reference", report.reference},
            {"rows", rows},
            {"slope", report.slope},
            {"slope_flag", report.slope_flag}};
}

std::string corollary_csv(const CorollaryReport& report) {
    std::string out =
        "re_z,im_z,re_aggregate,im_aggregate,re_fqc,im_fqc,deviation,periodic,"
        "consistent\n";
    for (const auto& row : report.rows) {
        out += format_double(row.z.real()) + ',' + format_double(row.z.imag()) + ',';
        out += format_double(row.aggregate.real()) + ',' +
               format_double(row.aggregate.imag()) + ',';
        out += format_double(row.f_qc.real()) + ',' + format_double(row.f_qc.imag()) +
               ',';
        out += format_double(row.deviation) + ',';
        out += (report.periodic ? "true," : "false,");
        out += (report.consistent ? "true\n" : "false\n");
    }
    return out;
}

nlohmann::json corollary_json(const CorollaryReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows)
        rows.push_back({{"z", {row.z.real(), row.z.imag()}},
                        {"aggregate", {row.aggregate.real(), row.aggregate.imag()}},
                        {"f_qc", {row.f_qc.real(), row.f_qc.imag()}},
                        {"deviation", row.deviation}});
    return {{"periodic", report.periodic},
            {"sup_deviation", report.sup_deviation},
            {"consistent", report.consistent},
            {"w2", report.w2},
            {"rows", rows}};
}

}  // namespace bandspec
