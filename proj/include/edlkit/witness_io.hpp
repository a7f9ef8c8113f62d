#pragma once

// Witness JSON: {"n", "label", "terms": [{"pauli", "coeff"}], "family", "alpha", "p_noise"}.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "edlkit/witness.hpp"

namespace edl {

nlohmann::json witness_to_json(const Witness& w);
/// Throws std::invalid_argument on schema violations.
Witness witness_from_json(const nlohmann::json& j);

Witness read_witness_file(const std::filesystem::path& path);
void write_witness_file(const std::filesystem::path& path, const Witness& w);

/// Row-major array of [re, im] pairs.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace edl
