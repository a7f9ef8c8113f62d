#pragma once

// Witnesses: Pauli expressions with support metadata, noise tolerance and
// validity sampling over pure biseparable states.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edlkit/observable.hpp"
#include "edlkit/states.hpp"

namespace edl {

class SubsetFamily {
 public:
  SubsetFamily() = default;
  /// Deduplicates; keeps first-seen order. Sets uniform_size when all sizes agree.
  explicit SubsetFamily(std::vector<QubitSubset> subsets);

  /// Comma-separated digit strings, e.g. "12,23,34". Whitespace ignored.
  static SubsetFamily parse(std::string_view text);
  /// Every k-subset of {1..n}, lexicographic.
  static SubsetFamily all_of_size(int num_qubits, int k);

  const std::vector<QubitSubset>& subsets() const { return subsets_; }
  std::optional<int> uniform_size() const { return uniform_size_; }
  bool empty() const { return subsets_.empty(); }
  std::size_t size() const { return subsets_.size(); }

  /// True if some member includes `s`.
  bool covers(const QubitSubset& s) const;
  /// True if every member of `other` is included in some member of this family.
  bool covers(const SubsetFamily& other) const;
  int max_qubit() const;

  /// Same members in sorted order, for order-insensitive comparison.
  SubsetFamily sorted() const;
  std::string str() const;
  bool operator==(const SubsetFamily& other) const { return subsets_ == other.subsets_; }

 private:
  std::vector<QubitSubset> subsets_;
  std::optional<int> uniform_size_;
};

struct Witness {
  ObservableExpr expr;
  std::optional<NamedState> target_state;
  SubsetFamily family;
  std::optional<double> alpha;
  std::optional<double> p_noise;
  std::string label;
};

/// Maximal supports of the non-identity terms, sorted.
SubsetFamily support(const ObservableExpr& expr);

/// Qubits on which the Pauli string acts nontrivially.
QubitSubset support(const PauliString& p);

/// White-noise tolerance t / (t - m) with t = Tr(W rho), m = Tr(W) / 2^n; absent when t >= 0.
std::optional<double> p_noise(const ObservableExpr& expr, const DensityMatrix& rho);
std::optional<double> p_noise(const Witness& w, const DensityMatrix& rho);

/// lambda I - |psi><psi| with lambda = schmidt_lambda_max(psi).
Witness projector_witness(const PureState& psi);

/// Minimum of <a b|W|a b> over `trials` draws of a uniform canonical bipartition and
/// Haar-random pure factors. Trial i uses the stream derive_seed(seed, i), so the
/// result does not depend on the thread count.
double sample_biseparable_min(const ObservableExpr& expr, std::int64_t trials, std::uint64_t seed);
/// Single-threaded reference with the same contract.
double sample_biseparable_min_serial(const ObservableExpr& expr, std::int64_t trials, std::uint64_t seed);

}  // namespace edl
