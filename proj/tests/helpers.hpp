#pragma once

#include <random>

#include "edlkit/states.hpp"

namespace edl::test {

inline ComplexMatrix random_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const double re = g(rng);
      const double im = g(rng);
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

inline ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(dim, rng);
  return 0.5 * (a + a.adjoint());
}

inline DensityMatrix random_density(int n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(1 << n, rng);
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

}  // namespace edl::test
