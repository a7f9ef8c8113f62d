#include <doctest.h>

#include "edlkit/tensor.hpp"
#include "helpers.hpp"

using namespace edl;

TEST_CASE("Pauli strings round-trip through the symplectic index") {
  for (int n = 1; n <= 3; ++n) {
    for (std::uint32_t s = 0; s < (1u << (2 * n)); ++s) {
      const PauliString p = PauliString::from_symplectic(s, n);
      CHECK(p.symplectic_index() == s);
      CHECK(PauliString::parse(p.str()) == p);
    }
  }
  CHECK(PauliString::parse("XYZI").x_mask() == 0b1100);
  CHECK(PauliString::parse("XYZI").z_mask() == 0b0110);
  CHECK_THROWS_AS(PauliString::parse("XQ"), std::invalid_argument);
  CHECK_THROWS_AS(PauliString::parse(""), std::invalid_argument);
}

TEST_CASE("Pauli matrices are orthogonal and match kron products") {
  for (int n = 1; n <= 3; ++n) {
    const std::uint32_t count = 1u << (2 * n);
    std::vector<ComplexMatrix> mats;
    for (std::uint32_t s = 0; s < count; ++s) {
      const PauliString p = PauliString::from_symplectic(s, n);
      ComplexMatrix k = ComplexMatrix::Identity(1, 1);
      for (PauliLetter l : p.letters()) k = kron(k, pauli_matrix(l));
      CHECK((pauli_to_matrix(p) - k).norm() < 1e-14);
      mats.push_back(k);
    }
    for (std::uint32_t a = 0; a < count; ++a) {
      for (std::uint32_t b = 0; b < count; ++b) {
        const Complex tr = (mats[a] * mats[b]).trace();
        CHECK(std::abs(tr - Complex(a == b ? double(1 << n) : 0.0, 0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("partial transpose of a Pauli string flips the sign of masked Y letters") {
  for (int n = 1; n <= 3; ++n) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      const QubitSubset subset = QubitSubset::from_mask(mask, n);
      for (std::uint32_t s = 0; s < (1u << (2 * n)); ++s) {
        const PauliString p = PauliString::from_symplectic(s, n);
        int ys = 0;
        for (int q = 1; q <= n; ++q) ys += (p.at(q) == PauliLetter::Y && subset.contains(q));
        const ComplexMatrix m = pauli_to_matrix(p);
        CHECK((partial_transpose(m, subset) - (ys % 2 ? -1.0 : 1.0) * m).norm() < 1e-14);
      }
    }
  }
}

TEST_CASE("partial transpose over everything is the full transpose") {
  std::mt19937_64 rng(3);
  const ComplexMatrix m = test::random_matrix(8, rng);
  CHECK((partial_transpose(m, QubitSubset{1, 2, 3}) - m.transpose()).norm() < 1e-14);
  CHECK((partial_transpose(m, QubitSubset{}) - m).norm() < 1e-14);
  // Transposing A then A^c is the full transpose.
  CHECK((partial_transpose(partial_transpose(m, QubitSubset{2}), QubitSubset{1, 3}) - m.transpose()).norm() < 1e-14);
}

TEST_CASE("partial trace of a product state") {
  ComplexMatrix a(2, 2), b(2, 2);
  a << 0.7, Complex(0, 0.1), Complex(0, -0.1), 0.3;
  b << 0.4, 0.2, 0.2, 0.6;
  const ComplexMatrix ab = kron(a, b);
  CHECK((partial_trace(ab, QubitSubset{1}) - a).norm() < 1e-14);
  CHECK((partial_trace(ab, QubitSubset{2}) - b).norm() < 1e-14);
  CHECK_THROWS(partial_trace(ab, QubitSubset{}));
}

TEST_CASE("bipartitions are canonical and complete") {
  for (int n = 2; n <= 5; ++n) {
    const auto cuts = canonical_bipartitions(n);
    CHECK(cuts.size() == (1u << (n - 1)) - 1);
    for (const auto& c : cuts) {
      CHECK(c.part.contains(1));
      CHECK(c.part.size() + c.complement.size() == static_cast<std::size_t>(n));
    }
  }
  CHECK(canonical_bipartitions(3).front().str() == "1|23");
  CHECK_THROWS(canonical_bipartitions(1));
}

TEST_CASE("subset parsing and masks") {
  CHECK(QubitSubset::parse("31").str() == "13");
  CHECK(QubitSubset::parse("13").mask(4) == 0b1010);
  CHECK_THROWS_AS(QubitSubset::parse("1x"), std::invalid_argument);
  CHECK_THROWS_AS(QubitSubset{5}.mask(4), std::out_of_range);
  CHECK(pack_bits(0b1011, 0b1010) == 0b11);
}

TEST_CASE("Hermitian eigensolver rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m << 1, 2, 0, 1;
  CHECK_THROWS_AS(hermitian_eigen(m), std::invalid_argument);
  ComplexMatrix h(2, 2);
  h << 2, Complex(0, 1), Complex(0, -1), 2;
  CHECK(min_eigenvalue(h) == doctest::Approx(1.0));
}
