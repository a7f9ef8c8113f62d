#pragma once

// CSV and JSON formats for expectation tables, count files and simulation manifests.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "edlkit/measure.hpp"

namespace edl {

/// One CSV record split on commas outside double quotes; "" inside quotes is a literal quote.
std::vector<std::string> split_csv_line(const std::string& line);
/// Quotes the field when it contains a comma, quote or whitespace.
std::string csv_field(const std::string& text);

/// Header `operator,value,sigma`. Blank lines and lines starting with '#' are skipped.
/// Errors name the line number.
std::vector<ExpectationRecord> read_expectations_csv(std::istream& in, int num_qubits);
std::vector<ExpectationRecord> read_expectations_csv(const std::filesystem::path& path, int num_qubits);
void write_expectations_csv(std::ostream& out, const std::vector<ExpectationRecord>& records);

/// Header `outcome,count`; outcomes absent from the file count zero.
CountTable read_counts_csv(std::istream& in, const MeasurementSetting& setting);
void write_counts_csv(std::ostream& out, const CountTable& table);

struct CountManifestEntry {
  MeasurementSetting setting;
  std::string file;  ///< relative to the manifest directory
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};

struct CountManifest {
  int num_qubits = 0;
  std::uint64_t seed = 0;
  std::string generator = "mt19937_64";
  std::vector<CountManifestEntry> settings;
};

nlohmann::json manifest_to_json(const CountManifest& m);
CountManifest manifest_from_json(const nlohmann::json& j);

/// Writes one count CSV per table plus manifest.json into dir.
void write_count_directory(const std::filesystem::path& dir, const std::vector<CountTable>& tables,
                           std::uint64_t seed, const std::vector<std::uint64_t>& setting_seeds);
/// Reads manifest.json (or the given manifest file) and every listed count file.
std::vector<CountTable> read_count_directory(const std::filesystem::path& dir_or_manifest);

}  // namespace edl
