#include "edlkit/states.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace edl {

NamedState parse_named_state(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "W3") return NamedState::W3;
  if (upper == "W4") return NamedState::W4;
  if (upper == "D4") return NamedState::D4;
  if (upper == "C4") return NamedState::C4;
  throw std::invalid_argument("unknown state name \"" + std::string(name) + "\" (expected W3, W4, D4 or C4)");
}

std::string to_string(NamedState state) {
  switch (state) {
    case NamedState::W3: return "W3";
    case NamedState::W4: return "W4";
    case NamedState::D4: return "D4";
    case NamedState::C4: return "C4";
  }
  return "?";
}

int num_qubits(NamedState state) { return state == NamedState::W3 ? 3 : 4; }

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  n_ = qubits_for_dim(amplitudes_.size());
  if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  return PureState(amplitudes / norm);
}

Complex PureState::amplitude(std::string_view bits) const {
  if (static_cast<int>(bits.size()) != n_) throw std::invalid_argument("bit string length mismatch");
  Eigen::Index index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit strings use only 0 and 1");
    index = (index << 1) | (c - '0');
  }
  return amplitudes_(index);
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("density matrix must be square");
  n_ = qubits_for_dim(matrix_.rows());
  if (hermiticity_defect(matrix_) > kHermitianTolerance) throw std::invalid_argument("density matrix is not Hermitian");
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw std::invalid_argument("density matrix trace is " + std::to_string(tr) + ", expected 1");
  }
  if (min_eigenvalue(matrix_) < kPsdTolerance) throw std::invalid_argument("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

namespace {

PureState from_kets(int n, std::initializer_list<std::pair<const char*, double>> kets) {
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
  for (const auto& [bits, amp] : kets) {
    Eigen::Index index = 0;
    for (const char* c = bits; *c; ++c) index = (index << 1) | (*c - '0');
    v(index) = amp;
  }
  return PureState::normalized(std::move(v));
}

}  // namespace

PureState make_state(NamedState name) {
  switch (name) {
    case NamedState::W3: return from_kets(3, {{"001", 1}, {"010", 1}, {"100", 1}});
    case NamedState::W4: return from_kets(4, {{"0001", 1}, {"0010", 1}, {"0100", 1}, {"1000", 1}});
    case NamedState::D4:
      return from_kets(4, {{"0011", 1}, {"0101", 1}, {"0110", 1}, {"1001", 1}, {"1010", 1}, {"1100", 1}});
    case NamedState::C4: return from_kets(4, {{"0000", 1}, {"0011", 1}, {"1100", 1}, {"1111", -1}});
  }
  throw std::invalid_argument("unknown state");
}

DensityMatrix white_noise(const DensityMatrix& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise weight must lie in [0, 1]");
  const Eigen::Index dim = rho.matrix().rows();
  ComplexMatrix m = (1.0 - p) * rho.matrix();
  m.diagonal().array() += p / static_cast<double>(dim);
  return DensityMatrix(std::move(m));
}

double fidelity(const DensityMatrix& rho, const PureState& psi) {
  if (rho.num_qubits() != psi.num_qubits()) throw std::invalid_argument("fidelity: qubit count mismatch");
  return psi.amplitudes().dot(rho.matrix() * psi.amplitudes()).real();
}

double schmidt_lambda_max(const PureState& psi) {
  if (psi.num_qubits() < 2) throw std::invalid_argument("Schmidt coefficients need at least two qubits");
  const ComplexMatrix proj = psi.amplitudes() * psi.amplitudes().adjoint();
  double best = 0.0;
  for (const Bipartition& bp : canonical_bipartitions(psi.num_qubits())) {
    const ComplexMatrix marginal = partial_trace(proj, bp.part);
    best = std::max(best, hermitian_eigen(marginal).values.maxCoeff());
  }
  return best;
}

}  // namespace edl
