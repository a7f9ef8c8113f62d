#include <doctest.h>

#include "edlkit/witness.hpp"
#include "helpers.hpp"

using namespace edl;

TEST_CASE("subset families") {
  const SubsetFamily f = SubsetFamily::parse("12,23,21");
  CHECK(f.size() == 2);
  CHECK(f.uniform_size() == 2);
  CHECK(f.covers(QubitSubset{2}));
  CHECK_FALSE(f.covers(QubitSubset{1, 3}));
  CHECK(f.str() == "12,23");
  CHECK(SubsetFamily::all_of_size(4, 2).size() == 6);
  CHECK(SubsetFamily::all_of_size(4, 3).covers(SubsetFamily::parse("12,34")));
  CHECK_FALSE(SubsetFamily::parse("1,23").uniform_size().has_value());
  CHECK_THROWS_AS(SubsetFamily::parse("12,,3"), std::invalid_argument);
  CHECK_THROWS_AS(SubsetFamily::parse(""), std::invalid_argument);
}

TEST_CASE("support keeps maximal sets only") {
  ObservableExpr e = ObservableExpr::identity(4, 1.0 / 16);
  e.add(PauliString::parse("XXII"), 0.1);
  e.add(PauliString::parse("ZIII"), 0.1);
  e.add(PauliString::parse("IZZI"), 0.1);
  CHECK(support(e).str() == "12,23");
  CHECK(support(PauliString::parse("IXIY")).str() == "24");
}

TEST_CASE("projector witness constants") {
  const PureState d4 = make_state(NamedState::D4);
  const Witness w = projector_witness(d4);
  CHECK(w.expr.trace() == doctest::Approx(16 * 2.0 / 3 - 1));
  CHECK(evaluate(w.expr, d4) == doctest::Approx(2.0 / 3 - 1));
  REQUIRE(w.p_noise.has_value());
  CHECK(*w.p_noise == doctest::Approx(0.35556).epsilon(1e-4));
  CHECK(*projector_witness(make_state(NamedState::C4)).p_noise == doctest::Approx(8.0 / 15));
}

TEST_CASE("p_noise is where the noisy value crosses zero") {
  const PureState w3 = make_state(NamedState::W3);
  const DensityMatrix rho = DensityMatrix::from_pure(w3);
  const Witness w = projector_witness(w3);
  const double p = *p_noise(w.expr, rho);
  CHECK(std::abs(evaluate(w.expr, white_noise(rho, p))) < 1e-12);
  CHECK_FALSE(p_noise(ObservableExpr::identity(3, 1.0 / 8), rho).has_value());
}

TEST_CASE("biseparable sampling: parallel equals serial and respects the witness bound") {
  const Witness w = projector_witness(make_state(NamedState::W3));
  const double par = sample_biseparable_min(w.expr, 4000, 99);
  const double ser = sample_biseparable_min_serial(w.expr, 4000, 99);
  CHECK(par == ser);
  CHECK(par >= -1e-12);
  CHECK(par < 0.2);
  CHECK(sample_biseparable_min(w.expr, 4000, 100) != par);
}
