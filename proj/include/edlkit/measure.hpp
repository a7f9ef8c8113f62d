#pragma once

// Local measurement settings, counting statistics and expectation-value estimation.
//
// A ProductOperator assigns each qubit either the identity or a unit Bloch axis a,
// standing for a . (X, Y, Z). Outcome strings use '+' / '-' per qubit, qubit 1 first.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edlkit/observable.hpp"
#include "edlkit/states.hpp"

namespace edl {

using BlochAxis = std::array<double, 3>;
using QubitAxis = std::optional<BlochAxis>;

inline constexpr double kAxisNormTolerance = 1e-10;
inline constexpr double kAxisEqualTolerance = 1e-9;

BlochAxis axis_of(PauliLetter letter);  ///< X, Y, Z only

class ProductOperator {
 public:
  ProductOperator() = default;
  /// Every present axis must have unit norm within 1e-10.
  explicit ProductOperator(std::vector<QubitAxis> axes);
  static ProductOperator identity(int num_qubits);
  static ProductOperator from_pauli(const PauliString& p);

  int num_qubits() const { return static_cast<int>(axes_.size()); }
  const std::vector<QubitAxis>& axes() const { return axes_; }
  bool is_identity() const;

  /// Sign-folded form: each axis flipped so its first nonzero component is positive.
  /// Returns (sign, folded) with *this == sign * folded.
  std::pair<double, ProductOperator> canonical() const;
  /// Pauli string when every axis is +X, +Y or +Z.
  std::optional<PauliString> as_pauli() const;
  ObservableExpr to_expr() const;
  std::string str() const;

  /// Axis-wise equality within 1e-9 (no sign folding).
  bool approx_equal(const ProductOperator& other) const;
  /// Order: identity first, then axes by descending components (X before Y before Z).
  static bool less(const ProductOperator& a, const ProductOperator& b);

 private:
  std::vector<QubitAxis> axes_;
};

/// Linear combination of product operators, merged on canonical form.
class ProductSum {
 public:
  ProductSum() = default;
  explicit ProductSum(int num_qubits) : n_(num_qubits) {}
  static ProductSum from_expr(const ObservableExpr& expr);

  int num_qubits() const { return n_; }
  void add(const ProductOperator& op, double coeff);
  ProductSum& operator+=(const ProductSum& other);
  ProductSum& operator*=(double s);
  /// Terms stored canonically (folded operator, signed coefficient).
  const std::vector<std::pair<ProductOperator, double>>& terms() const { return terms_; }
  double identity_coefficient() const;
  ObservableExpr to_expr() const;

 private:
  int n_ = 0;
  std::vector<std::pair<ProductOperator, double>> terms_;
};

/// (sum_j c_j O_j)^{tensor n} expanded, where each O_j is the identity or a unit axis.
ProductSum tensor_power(int num_qubits, const std::vector<std::pair<double, QubitAxis>>& single_qubit);

class MeasurementSetting {
 public:
  MeasurementSetting() = default;
  explicit MeasurementSetting(std::vector<QubitAxis> axes);
  static MeasurementSetting from_operator(const ProductOperator& op) { return MeasurementSetting(op.axes()); }

  int num_qubits() const { return static_cast<int>(axes_.size()); }
  const std::vector<QubitAxis>& axes() const { return axes_; }
  /// +1 / -1 when every non-identity qubit of op is measured along +-its axis, else nullopt.
  std::optional<double> coverage_sign(const ProductOperator& op) const;
  std::string str() const;

 private:
  std::vector<QubitAxis> axes_;
};

struct SettingPlan {
  MeasurementSetting setting;
  std::vector<ProductOperator> covered;
};

/// Greedy first-fit grouping of the non-identity terms after lexicographic sorting.
std::vector<SettingPlan> plan_settings(const ObservableExpr& expr);
std::vector<SettingPlan> plan_settings(const ProductSum& expr);

struct FidelityDecomposition {
  std::vector<SettingPlan> settings;  ///< the published setting list, terms assigned first-fit
  ProductSum reconstruction;          ///< equals |psi><psi|
};

FidelityDecomposition fidelity_settings(NamedState state);

/// Tr(rho Pi_o) per outcome index; qubit q's outcome is bit (n - q), 0 meaning '+'.
/// Identity qubits report every event as '+'.
std::vector<double> outcome_probabilities(const DensityMatrix& rho, const MeasurementSetting& s);

std::string outcome_string(std::uint32_t index, int num_qubits);
/// Inverse of outcome_string; throws on malformed text.
std::uint32_t outcome_index(std::string_view text);

struct CountTable {
  MeasurementSetting setting;
  std::vector<std::uint64_t> counts;
  std::uint64_t shots = 0;
};

/// Multinomial draw via sequential binomials on std::mt19937_64(seed).
CountTable sample_counts(const DensityMatrix& rho, const MeasurementSetting& s, std::uint64_t shots,
                         std::uint64_t seed);

struct ExpectationRecord {
  ProductOperator op;
  double value = 0.0;
  double sigma = 0.0;
};

/// Frequencies-based estimate from the first covering table; sigma = sqrt((1 - v^2) / shots).
std::vector<ExpectationRecord> estimate_expectations(const std::vector<CountTable>& tables,
                                                     const std::vector<ProductOperator>& operators);
/// Same, with exact probabilities standing in for frequencies (sigma reported as 0).
ExpectationRecord exact_expectation(const DensityMatrix& rho, const MeasurementSetting& s, const ProductOperator& op);

struct CombinedValue {
  double value = 0.0;
  double sigma = 0.0;
};

/// identity coefficient + sum c * record.value; sigma combined in quadrature.
/// Throws std::invalid_argument on a missing or duplicated match.
CombinedValue combine(const std::vector<ExpectationRecord>& records, const ProductSum& expr);
CombinedValue combine(const std::vector<ExpectationRecord>& records, const ObservableExpr& expr);

/// Operator grammar of the expectation tables:
///   n-letter word over IXYZ | indexed factors "X1X2" | "[(A+-B)/r2]x<n>" | "[(A+-B)/r2]_i,j,..."
/// with whitespace ignored. Errors carry the character position.
ProductOperator parse_operator(std::string_view text, int num_qubits);

/// Swaps the roles of |0> and |1> on every qubit (conjugation by X on all qubits):
/// axis (x, y, z) becomes (x, -y, -z).
std::vector<ExpectationRecord> relabel_logical_bits(const std::vector<ExpectationRecord>& records);

}  // namespace edl
