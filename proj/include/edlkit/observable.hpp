#pragma once

// Real linear combinations of Pauli strings.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "edlkit/states.hpp"
#include "edlkit/tensor.hpp"

namespace edl {

/// Coefficients of a single-qubit Hermitian operator in the basis (I, X, Y, Z).
using QubitOperator = std::array<double, 4>;

class ObservableExpr {
 public:
  ObservableExpr() = default;
  explicit ObservableExpr(int num_qubits);

  /// Single-term expression coeff * p.
  static ObservableExpr term(const PauliString& p, double coeff = 1.0);
  static ObservableExpr identity(int num_qubits, double coeff = 1.0);
  /// Expands a Hermitian matrix in the Pauli basis, dropping |c| < drop_below.
  static ObservableExpr from_matrix(const ComplexMatrix& m, double drop_below = 1e-12);
  /// Tensor product of one single-qubit operator per qubit, qubit 1 first.
  static ObservableExpr product(const std::vector<QubitOperator>& factors);

  int num_qubits() const { return n_; }
  const std::map<PauliString, double>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Adds coeff to the coefficient of p; exact zeros are erased.
  void add(const PauliString& p, double coeff);
  double coefficient(const PauliString& p) const;
  double identity_coefficient() const;
  /// Tr of the matrix realization: 2^n times the identity coefficient.
  double trace() const;

  ComplexMatrix to_matrix() const;
  /// Removes terms with |c| <= threshold.
  ObservableExpr pruned(double threshold) const;

  ObservableExpr& operator+=(const ObservableExpr& other);
  ObservableExpr& operator*=(double scale);
  friend ObservableExpr operator+(ObservableExpr a, const ObservableExpr& b) { return a += b; }
  friend ObservableExpr operator-(ObservableExpr a, const ObservableExpr& b) {
    ObservableExpr nb = b;
    nb *= -1.0;
    return a += nb;
  }
  friend ObservableExpr operator*(double s, ObservableExpr a) { return a *= s; }

  /// Human-readable "+0.25 XXII -0.125 ZZII ..." form.
  std::string str() const;

 private:
  void check_qubits(int n) const;

  int n_ = 0;
  std::map<PauliString, double> terms_;
};

/// Sum of c_P Tr(P rho). Throws on qubit-count mismatch.
double evaluate(const ObservableExpr& expr, const DensityMatrix& rho);
double evaluate(const ObservableExpr& expr, const PureState& psi);

/// Maximum absolute coefficient difference over the union of terms.
double max_coefficient_difference(const ObservableExpr& a, const ObservableExpr& b);

}  // namespace edl
