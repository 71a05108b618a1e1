// bandspec: sample random band matrices, compute their spectral statistics
// and compare against the limiting laws (fixed-point solver, quarter-circle,
// triangular). Subcommands share one JSON config format; see README.

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bandspec/errors.hpp"
#include "bandspec/harness.hpp"
#include "bandspec/io.hpp"
#include "bandspec/matrix.hpp"
#include "bandspec/solver.hpp"
#include "bandspec/spectra.hpp"
#include "bandspec/trilaw.hpp"

namespace {

using namespace bandspec;
using nlohmann::json;

struct CliOverrides {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::string seed_text;
    int workers = -1;
    bool allow_large = false;
};

ExperimentConfig load_config(const CliOverrides& cli, ExperimentKind kind) {
    std::ifstream in(cli.config_path);
    if (!in) throw IoError("cannot open config", cli.config_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (j.contains("kind")) {
        auto declared = experiment_kind_from_string(j.at("kind").get<std::string>());
        if (declared != kind)
            throw ConfigError("config kind '" + to_string(declared) +
                              "' does not match subcommand '" + to_string(kind) + "'");
    }
    if (cli.allow_large) j["allow_large"] = true;
    ExperimentConfig config = ExperimentConfig::from_json(j);
    config.kind = kind;
    if (!cli.seed_text.empty()) config.seed = std::stoull(cli.seed_text);
    if (!cli.out_path.empty()) config.out_path = cli.out_path;
    if (!cli.format.empty()) config.format = cli.format;
    if (cli.workers >= 0) config.workers = cli.workers;
    config.validate();
    return config;
}

void emit_or_print(const std::string& bytes, const std::string& path) {
    if (path.empty()) {
        std::cout << bytes;
    } else {
        write_text_file(path, bytes);
        std::cerr << "wrote " << path << "\n";
    }
}

EnsembleSpec spec_for(const ExperimentConfig& config, int n) {
    EnsembleSpec spec;
    spec.n = n;
    spec.band_width = resolve_band_width(config.bn_schedule, n, config.nu);
    spec.profile = config.profile;
    spec.distribution = config.distribution;
    spec.tail_index = config.tail_index;
    spec.seed = config.seed;
    return spec;
}

int run_sample(const ExperimentConfig& config) {
    EnsembleSpec spec = spec_for(config, config.n_schedule.front());
    DenseMatrix a = sample_matrix(spec, config.replica_index.value_or(0));
    emit_or_print(matrix_csv(a), config.out_path);
    return 0;
}

int run_spectrum(const ExperimentConfig& config) {
    EnsembleSpec spec = spec_for(config, config.n_schedule.front());
    SpectralSample sample = spectral_sample(spec, config.replica_index.value_or(0));
    std::fprintf(stderr, "spec_hash=%016llx replica=%u\n",
                 static_cast<unsigned long long>(sample.spec_hash), sample.replica);
    if (config.histogram_bins > 0) {
        double hi = sample.values.back();
        emit_or_print(histogram_csv(sample.values, config.histogram_bins, 0.0, hi),
                      config.out_path);
    } else {
        emit_or_print(sample_csv(sample.values), config.out_path);
    }
    return 0;
}

int run_solve(const ExperimentConfig& config) {
    if (config.z_list.empty()) throw ConfigError("solve requires a z_list");
    double w2 = squared_l2_norm(config.profile, config.nu);
    std::string csv = "re_z,im_z,re_f,im_f,iterations,residual\n";
    json checkpoints = json::array();
    BandIntegralOperator op(config.profile, config.nu, config.grid_size);
    for (auto z : config.z_list) {
        GridSolution solution;
        GridSolution warm;
        bool have = false;
        for (auto zs : continuation_path(std::complex<double>(z.real(),
                                                              std::abs(z.imag())),
                                         w2)) {
            warm = solve_fixed_point(op, zs, config.tolerance, have ? &warm : nullptr);
            have = true;
        }
        solution = std::move(warm);
        std::complex<double> f = aggregate(solution);
        if (z.imag() < 0.0) f = std::conj(f);
        csv += format_double(z.real()) + ',' + format_double(z.imag()) + ',';
        csv += format_double(f.real()) + ',' + format_double(f.imag()) + ',';
        csv += std::to_string(solution.iterations) + ',' +
               format_double(solution.residual) + '\n';
        if (config.format == "json") checkpoints.push_back(grid_solution_to_json(solution));
    }
    if (config.format == "json") {
        emit_or_print(checkpoints.dump(2) + "\n", config.out_path);
    } else {
        emit_or_print(csv, config.out_path);
    }
    return 0;
}

int run_density(const ExperimentConfig& config) {
    if (config.lambda_grid.empty()) throw ConfigError("density requires a lambda_grid");
    SpectralDensity density;
    switch (config.reference) {
        case ReferenceLaw::triangular: {
            auto transform = [&](std::complex<double> z) {
                return triangular_transform(z, 1e-12);
            };
            density = density_from_transform(transform, config.lambda_grid,
                                             config.epsilon_schedule);
            density.support_lo = 0.0;
            density.support_hi = std::numbers::e;
            break;
        }
        case ReferenceLaw::quarter_circle: {
            double w2 = config.reference_w2
                            ? *config.reference_w2
                            : squared_l2_norm(config.profile,
                                              std::numeric_limits<double>::infinity());
            auto transform = [w2](std::complex<double> z) {
                return solve_quarter_circle_transform(z, w2);
            };
            density = density_from_transform(transform, config.lambda_grid,
                                             config.epsilon_schedule);
            density.support_lo = 0.0;
            density.support_hi = 4.0 * w2;
            break;
        }
        case ReferenceLaw::solver: {
            BandIntegralOperator op(config.profile, config.nu, config.grid_size);
            double w2 = squared_l2_norm(config.profile, config.nu);
            auto transform = [&](std::complex<double> z) {
                GridSolution warm;
                bool have = false;
                for (auto zs : continuation_path(z, w2)) {
                    warm = solve_fixed_point(op, zs, config.tolerance,
                                             have ? &warm : nullptr);
                    have = true;
                }
                return aggregate(warm);
            };
            density = density_from_transform(transform, config.lambda_grid,
                                             config.epsilon_schedule);
            break;
        }
    }
    emit_or_print(density_csv(density), config.out_path);
    return 0;
}

int run_moments_cmd(const ExperimentConfig& config) {
    std::string out = "k,exact,value\n";
    for (int k = 1; k <= 8; ++k) {
        Rational m = triangular_moment(k);
        out += std::to_string(k) + "," + std::to_string(k) + "^" + std::to_string(k) +
               "/" + std::to_string(k + 1) + "! = " + m.str() + "," +
               format_double(m.value()) + '\n';
    }
    auto coeffs = expansion_coefficients(config.profile, config.nu);
    out += "a1,," + format_double(coeffs.a1) + '\n';
    out += "a2_paper,," + format_double(coeffs.a2_paper) + '\n';
    out += "mu2,," + format_double(coeffs.mu2) + '\n';
    emit_or_print(out, config.out_path);
    return 0;
}

int run_compare_cmd(const ExperimentConfig& config) {
    ComparisonReport report = run_compare(config);
    for (const auto& row : report.rows)
        std::fprintf(stderr, "n=%d: ks=%.4g (%.2fs)\n", row.n, row.ks, row.runtime_sec);
    emit_or_print(config.format == "json" ? report_json(report).dump(2) + "\n"
                                          : report_csv(report),
                  config.out_path);
    return 0;
}

int run_concentration_cmd(const ExperimentConfig& config) {
    ComparisonReport report = run_concentration(config);
    for (const auto& row : report.rows)
        std::fprintf(stderr, "n=%d: var=%.4g (%.2fs)\n", row.n, row.delta_var,
                     row.runtime_sec);
    emit_or_print(config.format == "json" ? report_json(report).dump(2) + "\n"
                                          : report_csv(report),
                  config.out_path);
    return 0;
}

int run_corollary_cmd(const ExperimentConfig& config) {
    if (config.z_list.empty()) throw ConfigError("corollary requires a z_list");
    CorollaryReport report = run_corollary_test(config.profile, config.nu,
                                                config.z_list, config.grid_size,
                                                config.tolerance);
    std::fprintf(stderr, "periodic=%s sup_deviation=%.4g consistent=%s\n",
                 report.periodic ? "true" : "false", report.sup_deviation,
                 report.consistent ? "true" : "false");
    emit_or_print(config.format == "json" ? corollary_json(report).dump(2) + "\n"
                                          : corollary_csv(report),
                  config.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random band matrix spectra vs. limiting laws"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOverrides cli;
    app.add_option("--workers", cli.workers, "worker thread count")
        ->envname("BANDSPEC_WORKERS");
    app.add_flag("--allow-large", cli.allow_large, "lift desk-scale caps");

    struct Sub {
        ExperimentKind kind;
        CLI::App* cmd;
    };
    std::vector<Sub> subs;
    for (auto kind :
         {ExperimentKind::sample, ExperimentKind::spectrum, ExperimentKind::solve,
          ExperimentKind::density, ExperimentKind::compare, ExperimentKind::moments,
          ExperimentKind::concentration, ExperimentKind::corollary}) {
        CLI::App* cmd = app.add_subcommand(to_string(kind));
        cmd->add_option("--config", cli.config_path, "JSON config file")->required();
        cmd->add_option("--out", cli.out_path, "output path (default stdout)");
        cmd->add_option("--format", cli.format, "csv or json");
        cmd->add_option("--seed", cli.seed_text, "master seed override");
        subs.push_back({kind, cmd});
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& sub : subs) {
            if (!sub.cmd->parsed()) continue;
            ExperimentConfig config = load_config(cli, sub.kind);
            switch (sub.kind) {
                case ExperimentKind::sample: return run_sample(config);
                case ExperimentKind::spectrum: return run_spectrum(config);
                case ExperimentKind::solve: return run_solve(config);
                case ExperimentKind::density: return run_density(config);
                case ExperimentKind::compare: return run_compare_cmd(config);
                case ExperimentKind::moments: return run_moments_cmd(config);
                case ExperimentKind::concentration: return run_concentration_cmd(config);
                case ExperimentKind::corollary: return run_corollary_cmd(config);
            }
        }
        throw ConfigError("no subcommand given");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "numeric non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
