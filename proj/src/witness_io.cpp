#include "edlkit/witness_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace edl {

using nlohmann::json;

json witness_to_json(const Witness& w) {
  json j;
  j["n"] = w.expr.num_qubits();
  j["label"] = w.label;
  json terms = json::array();
  for (const auto& [p, c] : w.expr.terms()) terms.push_back({{"pauli", p.str()}, {"coeff", c}});
  j["terms"] = std::move(terms);
  json family = json::array();
  for (const auto& s : w.family.subsets()) family.push_back(s.qubits());
  j["family"] = std::move(family);
  j["alpha"] = w.alpha ? json(*w.alpha) : json(nullptr);
  j["p_noise"] = w.p_noise ? json(*w.p_noise) : json(nullptr);
  if (w.target_state) j["target_state"] = to_string(*w.target_state);
  return j;
}

Witness witness_from_json(const json& j) {
  try {
    if (!j.is_object()) throw std::invalid_argument("witness JSON must be an object");
    const int n = j.at("n").get<int>();
    Witness w;
    w.expr = ObservableExpr(n);
    for (const auto& t : j.at("terms")) {
      const auto word = t.at("pauli").get<std::string>();
      if (static_cast<int>(word.size()) != n) {
        throw std::invalid_argument("Pauli key \"" + word + "\" does not have n = " + std::to_string(n) + " letters");
      }
      w.expr.add(PauliString::parse(word), t.at("coeff").get<double>());
    }
    std::vector<QubitSubset> family;
    for (const auto& s : j.at("family")) {
      QubitSubset subset(s.get<std::vector<int>>());
      if (subset.empty() || subset.max_qubit() > n) throw std::invalid_argument("family member out of range");
      family.push_back(std::move(subset));
    }
    w.family = SubsetFamily(std::move(family));
    w.label = j.value("label", std::string());
    if (j.contains("alpha") && !j["alpha"].is_null()) w.alpha = j["alpha"].get<double>();
    if (j.contains("p_noise") && !j["p_noise"].is_null()) w.p_noise = j["p_noise"].get<double>();
    if (j.contains("target_state") && !j["target_state"].is_null()) {
      w.target_state = parse_named_state(j["target_state"].get<std::string>());
    }
    return w;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed witness JSON: ") + e.what());
  }
}

Witness read_witness_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open witness file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return witness_from_json(j);
}

void write_witness_file(const std::filesystem::path& path, const Witness& w) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << witness_to_json(w).dump(2) << '\n';
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != rows) throw std::invalid_argument("matrix JSON is not square");
    for (Eigen::Index c = 0; c < rows; ++c) {
      const auto& e = row.at(static_cast<std::size_t>(c));
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace edl
