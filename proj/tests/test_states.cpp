#include <doctest.h>

#include <cmath>

#include "edlkit/states.hpp"
#include "helpers.hpp"

using namespace edl;

TEST_CASE("named states have the expected amplitudes") {
  const PureState w3 = make_state(NamedState::W3);
  CHECK(std::abs(w3.amplitude("001") - 1 / std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(w3.amplitude("011")) == 0.0);
  const PureState d4 = make_state(NamedState::D4);
  CHECK(std::abs(d4.amplitude("0110") - 1 / std::sqrt(6.0)) < 1e-15);
  CHECK(std::abs(d4.amplitude("0111")) == 0.0);
  const PureState c4 = make_state(NamedState::C4);
  CHECK(std::abs(c4.amplitude("1111") + 0.5) < 1e-15);
  CHECK(std::abs(c4.amplitude("0011") - 0.5) < 1e-15);
  CHECK(make_state(NamedState::W4).num_qubits() == 4);
}

TEST_CASE("state names parse case-insensitively") {
  CHECK(parse_named_state("d4") == NamedState::D4);
  CHECK(parse_named_state("C4") == NamedState::C4);
  CHECK(to_string(NamedState::W3) == "W3");
  CHECK_THROWS_AS(parse_named_state("ghz"), std::invalid_argument);
}

TEST_CASE("density matrices are validated") {
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{bad}, std::invalid_argument);  // trace 2
  ComplexMatrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
  ComplexVector v(2);
  v << 1, 1;
  CHECK_THROWS_AS(PureState{v}, std::invalid_argument);
  CHECK(PureState::normalized(v).amplitudes().norm() == doctest::Approx(1.0));
}

TEST_CASE("white noise interpolates towards the maximally mixed state") {
  const PureState psi = make_state(NamedState::W3);
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  CHECK(fidelity(white_noise(rho, 0.0), psi) == doctest::Approx(1.0));
  CHECK(fidelity(white_noise(rho, 1.0), psi) == doctest::Approx(1.0 / 8));
  CHECK(fidelity(white_noise(rho, 0.5), psi) == doctest::Approx(0.5 + 0.5 / 8));
  CHECK_THROWS_AS(white_noise(rho, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(white_noise(rho, -0.1), std::invalid_argument);
}

TEST_CASE("maximal Schmidt coefficients") {
  CHECK(schmidt_lambda_max(make_state(NamedState::W3)) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(schmidt_lambda_max(make_state(NamedState::W4)) == doctest::Approx(3.0 / 4).epsilon(1e-12));
  CHECK(schmidt_lambda_max(make_state(NamedState::D4)) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(schmidt_lambda_max(make_state(NamedState::C4)) == doctest::Approx(1.0 / 2).epsilon(1e-12));
  ComplexVector prod = ComplexVector::Zero(4);
  prod(0) = 1;
  CHECK(schmidt_lambda_max(PureState(prod)) == doctest::Approx(1.0));
}
