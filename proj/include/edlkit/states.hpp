#pragma once

// Named multiqubit states, density matrices and the white-noise channel.

#include <string>
#include <string_view>

#include "edlkit/tensor.hpp"

namespace edl {

enum class NamedState { W3, W4, D4, C4 };

/// Accepts "W3", "w3", ... Throws std::invalid_argument on unknown names.
NamedState parse_named_state(std::string_view name);
std::string to_string(NamedState state);
int num_qubits(NamedState state);

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdTolerance = -1e-10;

class PureState {
 public:
  /// Amplitudes must have unit norm within 1e-12 and power-of-two length.
  explicit PureState(ComplexVector amplitudes);
  /// Normalizes first; rejects the zero vector.
  static PureState normalized(ComplexVector amplitudes);

  int num_qubits() const { return n_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::string_view bits) const;

 private:
  int n_ = 0;
  ComplexVector amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-10), unit trace (1e-10) and min eigenvalue >= -1e-10.
  explicit DensityMatrix(ComplexMatrix matrix);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return n_; }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  int n_ = 0;
  ComplexMatrix matrix_;
};

PureState make_state(NamedState name);

/// (1 - p) rho + p I / 2^n. Throws for p outside [0, 1].
DensityMatrix white_noise(const DensityMatrix& rho, double p);

/// <psi|rho|psi>.
double fidelity(const DensityMatrix& rho, const PureState& psi);

/// Largest eigenvalue of any single-side marginal, maximized over canonical bipartitions.
double schmidt_lambda_max(const PureState& psi);

}  // namespace edl
