#include <doctest.h>

#include <cmath>

#include "edlkit/catalog.hpp"
#include "edlkit/robustness.hpp"

using namespace edl;

TEST_CASE("theta grids") {
  CHECK(default_theta_grid().size() == 121);
  CHECK(parse_theta_grid("0:0.6:0.005").size() == 121);
  CHECK(parse_theta_grid("0:1:0.5") == std::vector<double>{0, 0.5, 1});
  CHECK_THROWS_AS(parse_theta_grid("0:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_theta_grid("0:1:x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_theta_grid("1:0:0.1"), std::invalid_argument);
  CHECK(parse_misalignment_mode("y_only") == MisalignmentMode::YOnly);
  CHECK(parse_misalignment_mode("all") == MisalignmentMode::AllAxes);
  CHECK_THROWS_AS(parse_misalignment_mode("x"), std::invalid_argument);
}

TEST_CASE("misalignment rotates single-qubit axes termwise") {
  const double t = 0.3, c = std::cos(t), s = std::sin(t);
  const ObservableExpr y = ObservableExpr::term(PauliString::parse("Y"));
  const ObservableExpr my = misalign_expr(y, {t, MisalignmentMode::AllAxes});
  CHECK(my.coefficient(PauliString::parse("Y")) == doctest::Approx(c));
  CHECK(my.coefficient(PauliString::parse("Z")) == doctest::Approx(s));
  const ObservableExpr x = ObservableExpr::term(PauliString::parse("XI"));
  CHECK(max_coefficient_difference(misalign_expr(x, {t, MisalignmentMode::YOnly}), x) == 0.0);
  const Witness w = load_paper_witness(NamedState::D4, 5);
  CHECK(max_coefficient_difference(misalign_expr(w.expr, {0.0, MisalignmentMode::AllAxes}), w.expr) < 1e-15);
  CHECK(misalign_expr(w.expr, {0.4, MisalignmentMode::AllAxes}).trace() == doctest::Approx(1.0));
}

TEST_CASE("tolerance curves start at the aligned p_noise and the parallel sweep is exact") {
  const PureState d4 = make_state(NamedState::D4);
  const DensityMatrix rho = DensityMatrix::from_pure(d4);
  const Witness w = load_paper_witness(NamedState::D4, 5);
  const auto grid = theta_grid(0, 0.6, 0.05);
  const ToleranceCurve par = tolerance_curve(w, rho, grid, MisalignmentMode::AllAxes);
  const ToleranceCurve ser = tolerance_curve_serial(w, rho, grid, MisalignmentMode::AllAxes);
  CHECK(par.tolerances == ser.tolerances);
  CHECK(*par.tolerances.front() == doctest::Approx(*p_noise(w.expr, rho)).epsilon(1e-12));
  CHECK(std::abs(*par.tolerances.front() - *w.p_noise) < 2e-3);
  CHECK(curves_to_csv(par, ser).rfind("theta,tolerance_a,tolerance_b\n", 0) == 0);
}

TEST_CASE("crossover between the EDL witness and the projector") {
  const PureState d4 = make_state(NamedState::D4);
  const DensityMatrix rho = DensityMatrix::from_pure(d4);
  const Witness w = load_paper_witness(NamedState::D4, 5);
  const Witness p = projector_witness(d4);
  CHECK(crossover(w, p, rho, MisalignmentMode::AllAxes) == doctest::Approx(0.2649).epsilon(2e-3));
  CHECK(crossover(w, p, rho, MisalignmentMode::YOnly) == doctest::Approx(0.2937).epsilon(2e-3));
  CHECK_THROWS_AS(crossover(w, w, rho, MisalignmentMode::AllAxes), std::domain_error);
}
