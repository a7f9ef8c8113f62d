#pragma once

// Dense complex linear algebra and Pauli-string algebra for small qubit
// registers. Qubit 1 is the most significant tensor factor: basis index b reads
// as the bit string q1 q2 ... qn, so qubit q lives in bit (n - q).

#include <complex>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace edl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr int kMaxQubits = 10;

/// Number of qubits n such that 2^n == dim. Throws std::invalid_argument otherwise.
int qubits_for_dim(Eigen::Index dim);

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(PauliLetter letter);
PauliLetter pauli_letter_from_char(char c);

/// An n-qubit Pauli word. letters[0] acts on qubit 1.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<PauliLetter> letters);

  /// Parses an n-character word over {I,X,Y,Z}, qubit 1 leftmost.
  static PauliString parse(std::string_view word);
  static PauliString identity(int num_qubits);
  /// Inverse of symplectic_index().
  static PauliString from_symplectic(std::uint32_t index, int num_qubits);

  int num_qubits() const { return static_cast<int>(letters_.size()); }
  /// Letter on qubit q (1-based).
  PauliLetter at(int qubit) const { return letters_.at(static_cast<std::size_t>(qubit - 1)); }
  const std::vector<PauliLetter>& letters() const { return letters_; }

  bool is_identity() const;
  int weight() const;
  /// Bit (n - q) set iff the letter on qubit q flips the computational basis (X or Y).
  std::uint32_t x_mask() const;
  /// Bit (n - q) set iff the letter on qubit q carries a phase (Z or Y).
  std::uint32_t z_mask() const;
  /// (x_mask << n) | z_mask; the index used by the fast Pauli kernels.
  std::uint32_t symplectic_index() const;

  std::string str() const;

  auto operator<=>(const PauliString&) const = default;
  bool operator==(const PauliString&) const = default;

 private:
  std::vector<PauliLetter> letters_;
};

/// Sorted, duplicate-free set of 1-based qubit labels.
class QubitSubset {
 public:
  QubitSubset() = default;
  QubitSubset(std::initializer_list<int> qubits);
  explicit QubitSubset(std::vector<int> qubits);

  /// Digit string such as "124".
  static QubitSubset parse(std::string_view digits);
  /// Inverse of mask().
  static QubitSubset from_mask(std::uint32_t mask, int num_qubits);

  const std::vector<int>& qubits() const { return qubits_; }
  std::size_t size() const { return qubits_.size(); }
  bool empty() const { return qubits_.empty(); }
  bool contains(int qubit) const;
  /// True if every qubit of `other` is in this subset.
  bool includes(const QubitSubset& other) const;
  int max_qubit() const { return qubits_.empty() ? 0 : qubits_.back(); }

  /// Bit (n - q) set for every member q.
  std::uint32_t mask(int num_qubits) const;
  QubitSubset complement(int num_qubits) const;
  std::string str() const;

  auto operator<=>(const QubitSubset&) const = default;
  bool operator==(const QubitSubset&) const = default;

 private:
  std::vector<int> qubits_;
};

/// A|A^c with the canonical side A containing qubit 1.
struct Bipartition {
  int num_qubits = 0;
  QubitSubset part;
  QubitSubset complement;

  std::string str() const;
  bool operator==(const Bipartition&) const = default;
};

/// The 2^(n-1) - 1 canonical bipartitions, ordered by |A| then lexicographically.
std::vector<Bipartition> canonical_bipartitions(int num_qubits);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix pauli_matrix(PauliLetter letter);
ComplexMatrix pauli_to_matrix(const PauliString& p);

/// Packs the bits of `index` selected by `mask` into a dense integer, keeping their order.
std::uint32_t pack_bits(std::uint32_t index, std::uint32_t mask);

/// Transposes the tensor indices of the qubits in `subset`.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const QubitSubset& subset);

/// Traces out every qubit not in `keep`. The kept qubits retain their order.
ComplexMatrix partial_trace(const ComplexMatrix& m, const QubitSubset& keep);

/// Largest entrywise deviation |m - m^dagger|.
double hermiticity_defect(const ComplexMatrix& m);

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  ComplexMatrix vectors;    // columns
};

/// Dense Hermitian eigensolver. Rejects inputs whose Hermiticity defect exceeds 1e-10.
EigenDecomposition hermitian_eigen(const ComplexMatrix& m);

double min_eigenvalue(const ComplexMatrix& hermitian);

}  // namespace edl
