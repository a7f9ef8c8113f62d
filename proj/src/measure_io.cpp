#include "edlkit/measure_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace edl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

double parse_number(const std::string& text, std::size_t line, const char* what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::invalid_argument("line " + std::to_string(line) + ": bad " + what + " \"" + t + "\"");
  }
  return v;
}

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool skippable(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r' && c != '\n') {
      fields.back().push_back(c);
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote in CSV line \"" + line + "\"");
  return fields;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\" \t") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<ExpectationRecord> read_expectations_csv(std::istream& in, int num_qubits) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<ExpectationRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto fields = split_csv_line(line);
    if (!header) {
      if (fields.size() != 3 || trim(fields[0]) != "operator" || trim(fields[1]) != "value" ||
          trim(fields[2]) != "sigma") {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": expected header operator,value,sigma");
      }
      header = true;
      continue;
    }
    if (fields.size() != 3) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                                  std::to_string(fields.size()) + " (quote operators that contain commas)");
    }
    ExpectationRecord r;
    try {
      r.op = parse_operator(fields[0], num_qubits);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
    r.value = parse_number(fields[1], line_no, "value");
    r.sigma = parse_number(fields[2], line_no, "sigma");
    if (r.sigma < 0) throw std::invalid_argument("line " + std::to_string(line_no) + ": negative sigma");
    records.push_back(std::move(r));
  }
  if (!header) throw std::invalid_argument("expectation table is empty");
  return records;
}

std::vector<ExpectationRecord> read_expectations_csv(const std::filesystem::path& path, int num_qubits) {
  auto in = open_input(path);
  return read_expectations_csv(in, num_qubits);
}

void write_expectations_csv(std::ostream& out, const std::vector<ExpectationRecord>& records) {
  out << "operator,value,sigma\n";
  for (const auto& r : records) {
    out << csv_field(r.op.str()) << ',' << full_precision(r.value) << ',' << full_precision(r.sigma) << '\n';
  }
}

CountTable read_counts_csv(std::istream& in, const MeasurementSetting& setting) {
  const int n = setting.num_qubits();
  CountTable t{setting, std::vector<std::uint64_t>(std::size_t{1} << n, 0), 0};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto fields = split_csv_line(line);
    if (!header) {
      if (fields.size() != 2 || trim(fields[0]) != "outcome" || trim(fields[1]) != "count") {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": expected header outcome,count");
      }
      header = true;
      continue;
    }
    if (fields.size() != 2) throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 2 fields");
    const std::string outcome = trim(fields[0]);
    if (static_cast<int>(outcome.size()) != n) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": outcome \"" + outcome + "\" has wrong length");
    }
    const std::string count_text = trim(fields[1]);
    std::uint64_t c = 0;
    const auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), c);
    if (count_text.empty() || ec != std::errc() || ptr != count_text.data() + count_text.size()) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": bad count \"" + count_text + "\"");
    }
    t.counts[outcome_index(outcome)] += c;
    t.shots += c;
  }
  if (t.shots == 0) throw std::invalid_argument("count table has no events");
  return t;
}

void write_counts_csv(std::ostream& out, const CountTable& table) {
  out << "outcome,count\n";
  const int n = table.setting.num_qubits();
  for (std::uint32_t o = 0; o < table.counts.size(); ++o) out << outcome_string(o, n) << ',' << table.counts[o] << '\n';
}

nlohmann::json manifest_to_json(const CountManifest& m) {
  nlohmann::json settings = nlohmann::json::array();
  for (const auto& e : m.settings) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : e.setting.axes()) {
      if (a) {
        axes.push_back({(*a)[0], (*a)[1], (*a)[2]});
      } else {
        axes.push_back(nullptr);
      }
    }
    settings.push_back({{"label", e.setting.str()}, {"axes", axes}, {"file", e.file}, {"shots", e.shots},
                        {"seed", e.seed}});
  }
  return {{"n", m.num_qubits}, {"generator", m.generator}, {"seed", m.seed}, {"settings", settings}};
}

CountManifest manifest_from_json(const nlohmann::json& j) {
  CountManifest m;
  try {
    m.num_qubits = j.at("n").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.generator = j.value("generator", std::string("mt19937_64"));
    for (const auto& s : j.at("settings")) {
      std::vector<QubitAxis> axes;
      for (const auto& a : s.at("axes")) {
        if (a.is_null()) {
          axes.emplace_back();
        } else {
          axes.push_back(BlochAxis{a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()});
        }
      }
      if (static_cast<int>(axes.size()) != m.num_qubits) throw std::invalid_argument("setting has wrong qubit count");
      m.settings.push_back({MeasurementSetting(std::move(axes)), s.at("file").get<std::string>(),
                            s.value("shots", std::uint64_t{0}), s.value("seed", std::uint64_t{0})});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed count manifest: ") + e.what());
  }
  return m;
}

void write_count_directory(const std::filesystem::path& dir, const std::vector<CountTable>& tables,
                           std::uint64_t seed, const std::vector<std::uint64_t>& setting_seeds) {
  if (tables.empty()) throw std::invalid_argument("no count tables to write");
  std::filesystem::create_directories(dir);
  CountManifest m;
  m.num_qubits = tables.front().setting.num_qubits();
  m.seed = seed;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "setting_%02zu.csv", i);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    write_counts_csv(out, tables[i]);
    m.settings.push_back({tables[i].setting, name, tables[i].shots, i < setting_seeds.size() ? setting_seeds[i] : 0});
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  out << manifest_to_json(m).dump(2) << '\n';
}

std::vector<CountTable> read_count_directory(const std::filesystem::path& dir_or_manifest) {
  const bool is_dir = std::filesystem::is_directory(dir_or_manifest);
  const std::filesystem::path manifest_path = is_dir ? dir_or_manifest / "manifest.json" : dir_or_manifest;
  auto in = open_input(manifest_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(manifest_path.string() + ": " + e.what());
  }
  const CountManifest m = manifest_from_json(j);
  std::vector<CountTable> tables;
  for (const auto& e : m.settings) {
    auto file = open_input(manifest_path.parent_path() / e.file);
    tables.push_back(read_counts_csv(file, e.setting));
  }
  return tables;
}

}  // namespace edl
