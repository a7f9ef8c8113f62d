#include <doctest.h>

#include "edlkit/observable.hpp"
#include "helpers.hpp"

using namespace edl;

TEST_CASE("from_matrix and to_matrix are inverse") {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 3; ++n) {
    const ComplexMatrix h = test::random_hermitian(1 << n, rng);
    const ObservableExpr e = ObservableExpr::from_matrix(h);
    CHECK((e.to_matrix() - h).norm() < 1e-12);
    CHECK(e.trace() == doctest::Approx(h.trace().real()));
  }
}

TEST_CASE("evaluate matches the matrix trace") {
  std::mt19937_64 rng(22);
  const DensityMatrix rho = test::random_density(3, rng);
  const ComplexMatrix h = test::random_hermitian(8, rng);
  const ObservableExpr e = ObservableExpr::from_matrix(h);
  CHECK(evaluate(e, rho) == doctest::Approx((h * rho.matrix()).trace().real()).epsilon(1e-12));
  CHECK_THROWS(evaluate(ObservableExpr::identity(2), rho));
}

TEST_CASE("arithmetic and term bookkeeping") {
  ObservableExpr a = ObservableExpr::term(PauliString::parse("XX"), 0.5);
  a += ObservableExpr::term(PauliString::parse("ZZ"), 0.25);
  a += ObservableExpr::term(PauliString::parse("XX"), -0.5);
  CHECK(a.size() == 1);  // exact cancellation removes the term
  CHECK(a.coefficient(PauliString::parse("ZZ")) == 0.25);
  const ObservableExpr b = 2.0 * a - ObservableExpr::identity(2);
  CHECK(b.identity_coefficient() == -1.0);
  CHECK(b.trace() == -4.0);
  CHECK(max_coefficient_difference(a, b) == doctest::Approx(1.0));
  CHECK(b.pruned(0.6).size() == 1);
  CHECK_THROWS(a += ObservableExpr::identity(3));
}

TEST_CASE("product expands single-qubit factors") {
  // (X + Z) (x) I
  const ObservableExpr e = ObservableExpr::product({{0, 1, 0, 1}, {1, 0, 0, 0}});
  CHECK(e.size() == 2);
  CHECK(e.coefficient(PauliString::parse("XI")) == 1.0);
  CHECK(e.coefficient(PauliString::parse("ZI")) == 1.0);
}
