#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandspec/ensemble.hpp"
#include "bandspec/profile.hpp"
#include "bandspec/solver.hpp"

namespace bandspec {

// Fixed float formatting for all emitted files: %.12g, LF line endings,
// stable field order, so identical inputs give identical bytes.
std::string format_double(double v);

uint64_t fnv1a64(const std::string& bytes);

// Profile config-file literals: "indicator:a,b" or
// "pieces:[(a1,b1,c1),(a2,b2,c2),...]".
BandProfile parse_profile_literal(const std::string& text);

nlohmann::json profile_to_json(const BandProfile& profile);
BandProfile profile_from_json(const nlohmann::json& j);

nlohmann::json ensemble_spec_to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_spec_from_json(const nlohmann::json& j);

// Hash of the canonical JSON serialization; recorded in every report row
// so a run can be replayed from its output.
uint64_t ensemble_spec_hash(const EnsembleSpec& spec);

nlohmann::json grid_solution_to_json(const GridSolution& solution);
GridSolution grid_solution_from_json(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& bytes);

std::string density_csv(const SpectralDensity& density);
std::string sample_csv(const std::vector<double>& values);  // one column
std::string histogram_csv(const std::vector<double>& values, int bins,
                          double lo, double hi);
std::string matrix_csv(const DenseMatrix& m);

}  // namespace bandspec
