#include "bandspec/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "bandspec/errors.hpp"

namespace bandspec {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

double parse_number(const std::string& text, std::size_t& pos) {
    std::size_t consumed = 0;
    double v = std::stod(text.substr(pos), &consumed);
    pos += consumed;
    return v;
}

void expect_char(const std::string& text, std::size_t& pos, char c) {
    if (pos >= text.size() || text[pos] != c)
        throw ConfigError("bad profile literal near position " + std::to_string(pos) +
                          " in: " + text);
    ++pos;
}

}  // namespace

BandProfile parse_profile_literal(const std::string& text) {
    try {
        if (text.rfind("indicator:", 0) == 0) {
            std::size_t pos = 10;
            double a = parse_number(text, pos);
            expect_char(text, pos, ',');
            double b = parse_number(text, pos);
            if (pos != text.size()) throw ConfigError("trailing text in: " + text);
            return make_indicator_profile(a, b);
        }
        if (text.rfind("pieces:[", 0) == 0) {
            std::size_t pos = 8;
            std::vector<ProfilePiece> pieces;
            while (pos < text.size() && text[pos] != ']') {
                expect_char(text, pos, '(');
                double a = parse_number(text, pos);
                expect_char(text, pos, ',');
                double b = parse_number(text, pos);
                expect_char(text, pos, ',');
                double c = parse_number(text, pos);
                expect_char(text, pos, ')');
                pieces.push_back({a, b, c});
                if (pos < text.size() && text[pos] == ',') ++pos;
            }
            expect_char(text, pos, ']');
            if (pos != text.size()) throw ConfigError("trailing text in: " + text);
            return BandProfile(std::move(pieces));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad profile literal: ") + e.what());
    }
    throw ConfigError("profile literal must start with 'indicator:' or 'pieces:[', got: " +
                      text);
}

json profile_to_json(const BandProfile& profile) {
    json pieces = json::array();
    for (const auto& p : profile.pieces())
        pieces.push_back(json::array({p.lo, p.hi, p.value}));
    return json{{"pieces", pieces},
                {"support", json::array({profile.support_lo(), profile.support_hi()})}};
}

BandProfile profile_from_json(const json& j) {
    if (j.is_string()) return parse_profile_literal(j.get<std::string>());
    if (!j.contains("pieces")) throw ConfigError("profile JSON needs a 'pieces' field");
    std::vector<ProfilePiece> pieces;
    for (const auto& p : j.at("pieces"))
        pieces.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                          p.at(2).get<double>()});
    try {
        return BandProfile(std::move(pieces));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad profile JSON: ") + e.what());
    }
}

json ensemble_spec_to_json(const EnsembleSpec& spec) {
    json j{{"n", spec.n},
           {"band_width", spec.band_width},
           {"profile", profile_to_json(spec.profile)},
           {"distribution", to_string(spec.distribution)},
           {"seed", spec.seed}};
    if (spec.distribution == EntryDistribution::iid_pareto_symmetric)
        j["tail_index"] = spec.tail_index;
    return j;
}

EnsembleSpec ensemble_spec_from_json(const json& j) {
    EnsembleSpec spec;
    spec.n = j.at("n").get<int>();
    spec.band_width = j.at("band_width").get<int>();
    spec.profile = profile_from_json(j.at("profile"));
    spec.distribution =
        entry_distribution_from_string(j.at("distribution").get<std::string>());
    if (j.contains("tail_index")) spec.tail_index = j.at("tail_index").get<double>();
    spec.seed = j.at("seed").get<uint64_t>();
    spec.validate();
    return spec;
}

uint64_t ensemble_spec_hash(const EnsembleSpec& spec) {
    return fnv1a64(ensemble_spec_to_json(spec).dump());
}

json grid_solution_to_json(const GridSolution& s) {
    json values = json::array();
    for (const auto& v : s.values) values.push_back(json::array({v.real(), v.imag()}));
    return json{{"nu", s.nu},
                {"grid_size", s.grid.size()},
                {"z", json::array({s.z.real(), s.z.imag()})},
                {"values", values},
                {"iterations", s.iterations},
                {"residual", s.residual}};
}

GridSolution grid_solution_from_json(const json& j) {
    GridSolution s;
    s.nu = j.at("nu").get<double>();
    std::size_t g = j.at("grid_size").get<std::size_t>();
    s.z = {j.at("z").at(0).get<double>(), j.at("z").at(1).get<double>()};
    for (const auto& v : j.at("values"))
        s.values.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    if (s.values.size() != g) throw ConfigError("grid solution size mismatch");
    s.iterations = j.at("iterations").get<int>();
    s.residual = j.at("residual").get<double>();
    s.grid.resize(g);
    for (std::size_t i = 0; i < g; ++i)
        s.grid[i] = -s.nu + 2.0 * s.nu * static_cast<double>(i) / (g - 1);
    return s;
}

void write_text_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing", path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed", path);
}

std::string density_csv(const SpectralDensity& density) {
    std::string out = "lambda,rho,epsilon_used,flag\n";
    for (std::size_t i = 0; i < density.lambda.size(); ++i) {
        // hard-edge rows keep rho = 0 in the file; the flag is the marker
        out += format_double(density.lambda[i]);
        out += ',';
        out += format_double(std::isfinite(density.rho[i]) ? density.rho[i] : 0.0);
        out += ',';
        out += format_double(density.epsilon_used[i]);
        out += ',';
        out += to_string(density.flags[i]);
        out += '\n';
    }
    return out;
}

std::string sample_csv(const std::vector<double>& values) {
    std::string out = "lambda\n";
    for (double v : values) {
        out += format_double(v);
        out += '\n';
    }
    return out;
}

std::string histogram_csv(const std::vector<double>& values, int bins, double lo,
                          double hi) {
    if (bins < 1 || !(hi > lo)) throw std::invalid_argument("bad histogram request");
    std::vector<long> counts(bins, 0);
    const double width = (hi - lo) / bins;
    for (double v : values) {
        if (v < lo || v > hi) continue;
        int b = std::min(static_cast<int>((v - lo) / width), bins - 1);
        ++counts[b];
    }
    std::string out = "bin_lo,bin_hi,count\n";
    for (int b = 0; b < bins; ++b) {
        out += format_double(lo + b * width);
        out += ',';
        out += format_double(lo + (b + 1) * width);
        out += ',';
        out += std::to_string(counts[b]);
        out += '\n';
    }
    return out;
}

std::string matrix_csv(const DenseMatrix& m) {
    std::string out;
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

}  // namespace bandspec
