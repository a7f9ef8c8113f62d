#include <doctest.h>

#include "edlkit/catalog.hpp"
#include "edlkit/sdp.hpp"

using namespace edl;

namespace {

DensityMatrix pure(NamedState s) { return DensityMatrix::from_pure(make_state(s)); }

double alpha(NamedState s, const char* family) { return synthesize(pure(s), SubsetFamily::parse(family)).solution.alpha; }

}  // namespace

TEST_CASE("LMI solver: scalar problems") {
  // minimize -y  s.t. (1 - y) I >= 0  ->  y = 1
  LmiProblem p;
  p.num_qubits = 1;
  p.f0 = {ComplexMatrix::Identity(2, 2)};
  p.variables = {{{0, 0, -1.0}}};
  p.cost = Eigen::VectorXd::Constant(1, -1.0);
  p.globals = {0};
  p.y0 = Eigen::VectorXd::Zero(1);
  const LmiResult r = solve_lmi(p, {});
  CHECK(r.y(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.primal_objective == doctest::Approx(-1.0).epsilon(1e-6));

  // minimize y  s.t. y I + Z >= 0  ->  y = 1
  LmiProblem q;
  q.num_qubits = 1;
  q.f0 = {pauli_to_matrix(PauliString::parse("Z"))};
  q.variables = {{{0, 0, 1.0}}};
  q.cost = Eigen::VectorXd::Constant(1, 1.0);
  q.globals = {0};
  q.y0 = Eigen::VectorXd::Constant(1, 2.0);
  const LmiResult rq = solve_lmi(q, {});
  CHECK(rq.y(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rq.dual_objective == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("LMI solver reports non-convergence") {
  LmiProblem p;
  p.num_qubits = 1;
  p.f0 = {ComplexMatrix::Identity(2, 2)};
  p.variables = {{{0, 0, -1.0}}};
  p.cost = Eigen::VectorXd::Constant(1, -1.0);
  p.globals = {0};
  p.y0 = Eigen::VectorXd::Zero(1);
  SolverTolerances tol;
  tol.max_iter = 1;
  CHECK_THROWS_AS(solve_lmi(p, tol), SolverError);
  p.y0 = Eigen::VectorXd::Constant(1, 5.0);  // infeasible start
  CHECK_THROWS_AS(solve_lmi(p, {}), SolverError);
  p.y0 = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(solve_lmi(p, {}), std::invalid_argument);
}

TEST_CASE("synthesis reproduces independent SDP optima") {
  CHECK(alpha(NamedState::W3, "12,23") == doctest::Approx(-0.02854).epsilon(2e-3));
  CHECK(alpha(NamedState::W3, "12,23,13") == doctest::Approx(-0.05458).epsilon(2e-3));
  CHECK(alpha(NamedState::C4, "123,124,134,234") == doctest::Approx(-0.0625).epsilon(1e-5));
  CHECK(alpha(NamedState::C4, "124,134") == doctest::Approx(-0.03125).epsilon(1e-4));
  CHECK(alpha(NamedState::C4, "123,134") == doctest::Approx(-0.03125).epsilon(1e-4));
  CHECK(alpha(NamedState::C4, "123,134,234") == doctest::Approx(-0.041667).epsilon(1e-4));
  CHECK(alpha(NamedState::D4, "12,23,34") == doctest::Approx(-0.00653).epsilon(5e-3));
  CHECK(alpha(NamedState::D4, "12,13,14") == doctest::Approx(-0.00928).epsilon(5e-3));
  CHECK(alpha(NamedState::D4, "12,23,34,14") == doctest::Approx(-0.01170).epsilon(5e-3));
  CHECK(alpha(NamedState::W4, "12,23,34") == doctest::Approx(-0.004678).epsilon(5e-3));
}

TEST_CASE("single-body families never detect") {
  const SynthesisResult r = synthesize(pure(NamedState::W3), SubsetFamily::parse("1,2,3"));
  CHECK_FALSE(r.detected);
  CHECK_FALSE(r.p_noise.has_value());
  CHECK(r.solution.alpha == doctest::Approx(1.0 / 12).epsilon(1e-5));
}

TEST_CASE("synthesized witnesses are certified by their own decomposition") {
  const SynthesisResult r = synthesize(pure(NamedState::W3), SubsetFamily::parse("12,23"));
  const auto& sol = r.solution;
  CHECK(sol.witness_expr.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(SubsetFamily::parse("12,23").covers(support(sol.witness_expr)));
  CHECK(sol.certificates.size() == 3);
  CHECK(certificate_residual(sol.witness_expr, sol.certificates) < 1e-9);
  CHECK(certificate_min_eigenvalue(sol.certificates) > -1e-8);
  CHECK(evaluate(sol.witness_expr, make_state(NamedState::W3)) == doctest::Approx(sol.alpha).epsilon(1e-9));
  CHECK(r.p_noise.value() == doctest::Approx(p_noise_from_alpha(sol.alpha, 3)));
}

TEST_CASE("verification separates witnesses from non-witnesses") {
  const Witness proj = projector_witness(make_state(NamedState::D4));
  CHECK(verify_witness(proj.expr).has_value());
  CHECK(witness_margin(proj.expr) > -1e-8);
  // 1/2^n - |D4><D4| has negative expectation on a product state's neighbourhood: not a witness.
  const PureState d4 = make_state(NamedState::D4);
  const ObservableExpr bad =
      ObservableExpr::from_matrix(ComplexMatrix::Identity(16, 16) * 0.3 - d4.amplitudes() * d4.amplitudes().adjoint());
  CHECK_FALSE(verify_witness(bad).has_value());
  CHECK(witness_margin(bad) < -1e-3);
  CHECK_THROWS_AS(verify_witness(ObservableExpr::term(PauliString::parse("ZZ"))), std::invalid_argument);
}

TEST_CASE("EDL search") {
  CHECK(edl_search(pure(NamedState::W3)) == 2);
  CHECK(edl_search(pure(NamedState::C4)) == 3);
  CHECK(edl_search(DensityMatrix::maximally_mixed(3)) == 4);
}
