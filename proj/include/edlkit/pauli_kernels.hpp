#pragma once

// Fast transforms between dense operators and Pauli coordinates.
//
// Pauli strings are addressed by their symplectic index s = (x << n) | z, so
// P_s[r, c] = i^{|x & z|} (-1)^{z . c} when r == c ^ x. Every routine here
// works through Walsh-Hadamard transforms over the z index.

#include <cstdint>
#include <vector>

#include "edlkit/tensor.hpp"

namespace edl {

/// In-place unnormalized Walsh-Hadamard transform; size must be a power of two.
void walsh_hadamard(Complex* data, std::size_t size);

/// Phase i^{|x & z|} of the Pauli string with symplectic index s.
Complex pauli_phase(std::uint32_t s, int num_qubits);

/// +1 or -1: the sign Pauli s picks up under partial transposition of the qubits in `mask`
/// (one factor of -1 per Y letter inside the mask).
double transpose_sign(std::uint32_t s, int num_qubits, std::uint32_t mask);

/// coords[s] = Tr(P_s m) for all 4^n symplectic indices.
ComplexVector pauli_coordinates(const ComplexMatrix& m);

/// Inverse direction: sum over s of a[s] P_s.
ComplexMatrix from_pauli_coordinates(const ComplexVector& a, int num_qubits);
ComplexMatrix from_pauli_coordinates(const Eigen::VectorXd& a, int num_qubits);

/// K(s, t) = Re Tr(P_s x P_t y) for all pairs of symplectic indices (4^n x 4^n).
/// Parallel over blocks of x-masks.
Eigen::MatrixXd pauli_kernel(const ComplexMatrix& x, const ComplexMatrix& y);

/// Same contract as pauli_kernel, single-threaded.
Eigen::MatrixXd pauli_kernel_serial(const ComplexMatrix& x, const ComplexMatrix& y);

/// Dense O(16^n d) reference that multiplies explicit Pauli matrices. Test use only.
Eigen::MatrixXd pauli_kernel_reference(const ComplexMatrix& x, const ComplexMatrix& y);

}  // namespace edl
