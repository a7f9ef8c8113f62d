#include "edlkit/pauli_kernels.hpp"

#include <bit>
#include <stdexcept>

#include "edlkit/parallel.hpp"

namespace edl {

namespace {

constexpr Complex kIPowers[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expected a square matrix");
}

// Fills one (xs, xt) block of the kernel: out(zs, zt) for every pair of z masks.
void kernel_block(const ComplexMatrix& x, const ComplexMatrix& y, int n, std::uint32_t xs,
                  std::uint32_t xt, std::vector<Complex>& g, Eigen::MatrixXd& out) {
  const std::uint32_t dim = 1u << n;
  // g[b][e] = x[b, e ^ xt] * y[e, b ^ xs]; then a 2D transform over (b, e).
  for (std::uint32_t b = 0; b < dim; ++b) {
    for (std::uint32_t e = 0; e < dim; ++e) g[b * dim + e] = x(b, e ^ xt) * y(e, b ^ xs);
  }
  for (std::uint32_t b = 0; b < dim; ++b) walsh_hadamard(&g[b * dim], dim);
  std::vector<Complex> column(dim);
  for (std::uint32_t e = 0; e < dim; ++e) {
    for (std::uint32_t b = 0; b < dim; ++b) column[b] = g[b * dim + e];
    walsh_hadamard(column.data(), dim);
    for (std::uint32_t b = 0; b < dim; ++b) g[b * dim + e] = column[b];
  }
  for (std::uint32_t zs = 0; zs < dim; ++zs) {
    const std::uint32_t s = (xs << n) | zs;
    const Complex ps = kIPowers[std::popcount(xs & zs) & 3];
    for (std::uint32_t zt = 0; zt < dim; ++zt) {
      const std::uint32_t t = (xt << n) | zt;
      const Complex pt = kIPowers[std::popcount(xt & zt) & 3];
      out(s, t) = (ps * pt * g[zs * dim + zt]).real();
    }
  }
}

Eigen::MatrixXd kernel_impl(const ComplexMatrix& x, const ComplexMatrix& y, bool parallel) {
  check_square(x);
  check_square(y);
  if (x.rows() != y.rows()) throw std::invalid_argument("pauli_kernel: dimension mismatch");
  const int n = qubits_for_dim(x.rows());
  const std::uint32_t dim = 1u << n;
  const auto size = static_cast<Eigen::Index>(dim) * dim;
  Eigen::MatrixXd out(size, size);
  const auto pairs = static_cast<std::int64_t>(dim) * dim;
#pragma omp parallel if (parallel) num_threads(max_threads())
  {
    std::vector<Complex> g(static_cast<std::size_t>(dim) * dim);
#pragma omp for schedule(static)
    for (std::int64_t p = 0; p < pairs; ++p) {
      kernel_block(x, y, n, static_cast<std::uint32_t>(p / dim), static_cast<std::uint32_t>(p % dim), g, out);
    }
  }
  return out;
}

}  // namespace

void walsh_hadamard(Complex* data, std::size_t size) {
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t i = 0; i < size; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const Complex a = data[j], b = data[j + h];
        data[j] = a + b;
        data[j + h] = a - b;
      }
    }
  }
}

Complex pauli_phase(std::uint32_t s, int num_qubits) {
  const std::uint32_t x = s >> num_qubits;
  const std::uint32_t z = s & ((1u << num_qubits) - 1u);
  return kIPowers[std::popcount(x & z) & 3];
}

double transpose_sign(std::uint32_t s, int num_qubits, std::uint32_t mask) {
  const std::uint32_t x = s >> num_qubits;
  const std::uint32_t z = s & ((1u << num_qubits) - 1u);
  return (std::popcount(x & z & mask) & 1) ? -1.0 : 1.0;
}

ComplexVector pauli_coordinates(const ComplexMatrix& m) {
  check_square(m);
  const int n = qubits_for_dim(m.rows());
  const std::uint32_t dim = 1u << n;
  ComplexVector coords(static_cast<Eigen::Index>(dim) * dim);
  std::vector<Complex> v(dim);
  for (std::uint32_t x = 0; x < dim; ++x) {
    // Tr(P m) = phase * sum_c (-1)^{z.c} m[c, c ^ x]
    for (std::uint32_t c = 0; c < dim; ++c) v[c] = m(c, c ^ x);
    walsh_hadamard(v.data(), dim);
    for (std::uint32_t z = 0; z < dim; ++z) coords((x << n) | z) = kIPowers[std::popcount(x & z) & 3] * v[z];
  }
  return coords;
}

ComplexMatrix from_pauli_coordinates(const ComplexVector& a, int num_qubits) {
  const std::uint32_t dim = 1u << num_qubits;
  if (a.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw std::invalid_argument("from_pauli_coordinates: expected 4^n coefficients");
  }
  ComplexMatrix m(dim, dim);
  std::vector<Complex> u(dim);
  for (std::uint32_t x = 0; x < dim; ++x) {
    for (std::uint32_t z = 0; z < dim; ++z) u[z] = a((x << num_qubits) | z) * kIPowers[std::popcount(x & z) & 3];
    walsh_hadamard(u.data(), dim);
    for (std::uint32_t c = 0; c < dim; ++c) m(c ^ x, c) = u[c];
  }
  return m;
}

ComplexMatrix from_pauli_coordinates(const Eigen::VectorXd& a, int num_qubits) {
  return from_pauli_coordinates(ComplexVector(a.cast<Complex>()), num_qubits);
}

Eigen::MatrixXd pauli_kernel(const ComplexMatrix& x, const ComplexMatrix& y) { return kernel_impl(x, y, true); }

Eigen::MatrixXd pauli_kernel_serial(const ComplexMatrix& x, const ComplexMatrix& y) {
  return kernel_impl(x, y, false);
}

Eigen::MatrixXd pauli_kernel_reference(const ComplexMatrix& x, const ComplexMatrix& y) {
  check_square(x);
  const int n = qubits_for_dim(x.rows());
  const std::uint32_t count = 1u << (2 * n);
  std::vector<ComplexMatrix> paulis;
  paulis.reserve(count);
  for (std::uint32_t s = 0; s < count; ++s) paulis.push_back(pauli_to_matrix(PauliString::from_symplectic(s, n)));
  Eigen::MatrixXd out(count, count);
  for (std::uint32_t s = 0; s < count; ++s) {
    const ComplexMatrix left = paulis[s] * x;
    for (std::uint32_t t = 0; t < count; ++t) out(s, t) = (left * paulis[t] * y).trace().real();
  }
  return out;
}

}  // namespace edl
