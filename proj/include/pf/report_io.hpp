#pragma once

#include "pf/diagnostics.hpp"
#include "pf/field.hpp"
#include "pf/phase_space.hpp"
#include "pf/weyl.hpp"

// vendored single-header nlohmann/json
#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pf {

using json = nlohmann::ordered_json;

json to_json(const StructureReport& rep);
json to_json(const DecayReport& rep);
json to_json(const ClassifyResult& res);
json to_json(const MembershipReport& rep);

std::string csv_diag_field(const DiagField& field);
std::string csv_matrix_elements(const std::vector<MatrixElementSample>& samples);

// Binary field container: "PFG1" magic, little-endian 64-bit header words,
// complex64 payload.
void write_field_binary(const GstftField& field, const std::string& path);
GstftField read_field_binary(const std::string& path);
std::string csv_field(const GstftField& field);

// FNV-1a of the canonical config text; embedded in every report.
std::uint64_t config_hash(const std::string& canonical);

// Atomic file write (temp + rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace pf
