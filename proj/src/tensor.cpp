#include "edlkit/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace edl {

int qubits_for_dim(Eigen::Index dim) {
  if (dim < 1 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

char to_char(PauliLetter letter) {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(letter)];
}

PauliLetter pauli_letter_from_char(char c) {
  switch (c) {
    case 'I': return PauliLetter::I;
    case 'X': return PauliLetter::X;
    case 'Y': return PauliLetter::Y;
    case 'Z': return PauliLetter::Z;
    default: throw std::invalid_argument(std::string("not a Pauli letter: '") + c + "'");
  }
}

PauliString::PauliString(std::vector<PauliLetter> letters) : letters_(std::move(letters)) {
  if (letters_.empty() || letters_.size() > static_cast<std::size_t>(kMaxQubits)) {
    throw std::invalid_argument("Pauli string length must be in 1..10");
  }
}

PauliString PauliString::parse(std::string_view word) {
  std::vector<PauliLetter> letters;
  letters.reserve(word.size());
  for (char c : word) letters.push_back(pauli_letter_from_char(c));
  return PauliString(std::move(letters));
}

PauliString PauliString::identity(int num_qubits) {
  return PauliString(std::vector<PauliLetter>(static_cast<std::size_t>(num_qubits), PauliLetter::I));
}

PauliString PauliString::from_symplectic(std::uint32_t index, int num_qubits) {
  const std::uint32_t x = index >> num_qubits;
  const std::uint32_t z = index & ((1u << num_qubits) - 1u);
  std::vector<PauliLetter> letters(static_cast<std::size_t>(num_qubits));
  for (int q = 1; q <= num_qubits; ++q) {
    const std::uint32_t bit = 1u << (num_qubits - q);
    const bool xb = x & bit, zb = z & bit;
    letters[static_cast<std::size_t>(q - 1)] =
        xb ? (zb ? PauliLetter::Y : PauliLetter::X) : (zb ? PauliLetter::Z : PauliLetter::I);
  }
  return PauliString(std::move(letters));
}

bool PauliString::is_identity() const {
  return std::all_of(letters_.begin(), letters_.end(), [](PauliLetter l) { return l == PauliLetter::I; });
}

int PauliString::weight() const {
  return static_cast<int>(std::count_if(letters_.begin(), letters_.end(),
                                        [](PauliLetter l) { return l != PauliLetter::I; }));
}

std::uint32_t PauliString::x_mask() const {
  std::uint32_t mask = 0;
  const int n = num_qubits();
  for (int q = 1; q <= n; ++q) {
    const PauliLetter l = at(q);
    if (l == PauliLetter::X || l == PauliLetter::Y) mask |= 1u << (n - q);
  }
  return mask;
}

std::uint32_t PauliString::z_mask() const {
  std::uint32_t mask = 0;
  const int n = num_qubits();
  for (int q = 1; q <= n; ++q) {
    const PauliLetter l = at(q);
    if (l == PauliLetter::Z || l == PauliLetter::Y) mask |= 1u << (n - q);
  }
  return mask;
}

std::uint32_t PauliString::symplectic_index() const {
  return (x_mask() << num_qubits()) | z_mask();
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (PauliLetter l : letters_) s.push_back(to_char(l));
  return s;
}

QubitSubset::QubitSubset(std::initializer_list<int> qubits) : QubitSubset(std::vector<int>(qubits)) {}

QubitSubset::QubitSubset(std::vector<int> qubits) : qubits_(std::move(qubits)) {
  std::sort(qubits_.begin(), qubits_.end());
  qubits_.erase(std::unique(qubits_.begin(), qubits_.end()), qubits_.end());
  if (!qubits_.empty() && (qubits_.front() < 1 || qubits_.back() > kMaxQubits)) {
    throw std::invalid_argument("qubit labels must lie in 1..10");
  }
}

QubitSubset QubitSubset::parse(std::string_view digits) {
  std::vector<int> qubits;
  for (char c : digits) {
    if (c < '1' || c > '9') {
      throw std::invalid_argument("bad qubit label '" + std::string(1, c) + "' in subset \"" +
                                  std::string(digits) + "\"");
    }
    qubits.push_back(c - '0');
  }
  if (qubits.empty()) throw std::invalid_argument("empty subset");
  return QubitSubset(std::move(qubits));
}

QubitSubset QubitSubset::from_mask(std::uint32_t mask, int num_qubits) {
  std::vector<int> qubits;
  for (int q = 1; q <= num_qubits; ++q) {
    if (mask & (1u << (num_qubits - q))) qubits.push_back(q);
  }
  return QubitSubset(std::move(qubits));
}

bool QubitSubset::contains(int qubit) const {
  return std::binary_search(qubits_.begin(), qubits_.end(), qubit);
}

bool QubitSubset::includes(const QubitSubset& other) const {
  return std::includes(qubits_.begin(), qubits_.end(), other.qubits_.begin(), other.qubits_.end());
}

std::uint32_t QubitSubset::mask(int num_qubits) const {
  std::uint32_t m = 0;
  for (int q : qubits_) {
    if (q > num_qubits) {
      throw std::out_of_range("qubit " + std::to_string(q) + " outside a " + std::to_string(num_qubits) +
                              "-qubit register");
    }
    m |= 1u << (num_qubits - q);
  }
  return m;
}

QubitSubset QubitSubset::complement(int num_qubits) const {
  return from_mask(~mask(num_qubits) & ((1u << num_qubits) - 1u), num_qubits);
}

std::string QubitSubset::str() const {
  std::string s;
  for (int q : qubits_) s += std::to_string(q);
  return s;
}

std::string Bipartition::str() const { return part.str() + "|" + complement.str(); }

std::vector<Bipartition> canonical_bipartitions(int num_qubits) {
  if (num_qubits < 2) throw std::invalid_argument("bipartitions need at least two qubits");
  std::vector<Bipartition> out;
  const std::uint32_t full = (1u << num_qubits) - 1u;
  const std::uint32_t first = 1u << (num_qubits - 1);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    if (!(mask & first)) continue;
    QubitSubset part = QubitSubset::from_mask(mask, num_qubits);
    out.push_back({num_qubits, part, part.complement(num_qubits)});
  }
  std::sort(out.begin(), out.end(), [](const Bipartition& a, const Bipartition& b) {
    if (a.part.size() != b.part.size()) return a.part.size() < b.part.size();
    return a.part < b.part;
  });
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix pauli_matrix(PauliLetter letter) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (letter) {
    case PauliLetter::I: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case PauliLetter::X: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case PauliLetter::Y: m(0, 1) = Complex(0, -1); m(1, 0) = Complex(0, 1); break;
    case PauliLetter::Z: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return m;
}

ComplexMatrix pauli_to_matrix(const PauliString& p) {
  // P[r, c] = i^{|x & z|} (-1)^{z . c} delta(r, c ^ x)
  const int n = p.num_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  const std::uint32_t x = p.x_mask(), z = p.z_mask();
  static constexpr Complex kPhase[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex phase = kPhase[std::popcount(x & z) % 4];
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(dim); ++c) {
    const double sign = (std::popcount(z & c) & 1) ? -1.0 : 1.0;
    m(c ^ x, c) = phase * sign;
  }
  return m;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const QubitSubset& subset) {
  const int n = qubits_for_dim(m.rows());
  if (m.cols() != m.rows()) throw std::invalid_argument("partial_transpose needs a square matrix");
  const std::uint32_t mask = subset.mask(n);
  const auto dim = static_cast<std::uint32_t>(m.rows());
  ComplexMatrix out(m.rows(), m.cols());
  for (std::uint32_t r = 0; r < dim; ++r) {
    for (std::uint32_t c = 0; c < dim; ++c) {
      const std::uint32_t r2 = (r & ~mask) | (c & mask);
      const std::uint32_t c2 = (c & ~mask) | (r & mask);
      out(r2, c2) = m(r, c);
    }
  }
  return out;
}

std::uint32_t pack_bits(std::uint32_t index, std::uint32_t mask) {
  std::uint32_t out = 0;
  int pos = 0;
  for (int b = 0; b < 32 && mask >> b; ++b) {
    if (mask & (1u << b)) {
      if (index & (1u << b)) out |= 1u << pos;
      ++pos;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const QubitSubset& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace needs a nonempty set of kept qubits");
  const int n = qubits_for_dim(m.rows());
  const std::uint32_t keep_mask = keep.mask(n);
  const std::uint32_t dim = static_cast<std::uint32_t>(m.rows());
  const Eigen::Index out_dim = Eigen::Index{1} << keep.size();
  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  for (std::uint32_t r = 0; r < dim; ++r) {
    for (std::uint32_t c = 0; c < dim; ++c) {
      if ((r & ~keep_mask) != (c & ~keep_mask)) continue;
      out(pack_bits(r, keep_mask), pack_bits(c, keep_mask)) += m(r, c);
    }
  }
  return out;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

EigenDecomposition hermitian_eigen(const ComplexMatrix& m) {
  const double defect = hermiticity_defect(m);
  if (!(defect <= kHermitianTolerance)) {
    throw std::invalid_argument("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
  const ComplexMatrix sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace edl
