#include "edlkit/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "edlkit/parallel.hpp"
#include "edlkit/pauli_kernels.hpp"

namespace edl {

namespace {

std::uint32_t support_mask(std::uint32_t s, int n) { return (s >> n) | (s & ((1u << n) - 1u)); }

}  // namespace

SdpProblem make_sdp_problem(const DensityMatrix& rho, const SubsetFamily& family) {
  const int n = rho.num_qubits();
  if (n < 2) throw std::invalid_argument("witness synthesis needs at least two qubits");
  if (family.empty()) throw std::invalid_argument("subset family is empty");
  if (family.max_qubit() > n) throw std::invalid_argument("subset family refers to a qubit beyond n");
  std::vector<std::uint32_t> masks;
  for (const auto& s : family.subsets()) masks.push_back(s.mask(n));

  SdpProblem p;
  p.num_qubits = n;
  p.family = family;
  p.bipartitions = canonical_bipartitions(n);
  p.identity_coefficient = std::ldexp(1.0, -n);
  const ComplexVector coords = pauli_coordinates(rho.matrix());
  std::vector<double> target;
  for (std::uint32_t s = 1; s < (1u << (2 * n)); ++s) {
    const std::uint32_t sm = support_mask(s, n);
    if (std::any_of(masks.begin(), masks.end(), [sm](std::uint32_t m) { return (sm & ~m) == 0; })) {
      p.free_coords.push_back(PauliString::from_symplectic(s, n));
      target.push_back(coords(s).real());
    }
  }
  p.target_vector = Eigen::Map<Eigen::VectorXd>(target.data(), static_cast<Eigen::Index>(target.size()));
  return p;
}

double p_noise_from_alpha(double alpha, int num_qubits) {
  const double scaled = std::ldexp(alpha, num_qubits);
  return scaled / (scaled - 1.0);
}

SynthesisResult synthesize(const DensityMatrix& rho, const SubsetFamily& family, const SolverTolerances& tol) {
  const SdpProblem sp = make_sdp_problem(rho, family);
  const int n = sp.num_qubits;
  const Eigen::Index dim = Eigen::Index{1} << n;
  const std::uint32_t num_paulis = 1u << (2 * n);
  const auto m = static_cast<int>(sp.free_coords.size());
  const auto num_cuts = static_cast<int>(sp.bipartitions.size());

  // Blocks 2A and 2A+1 hold P_A and Q_A. Variables: witness coordinates first,
  // then every Pauli coordinate of Q_A for each bipartition.
  LmiProblem lp;
  lp.num_qubits = n;
  lp.objective_offset = sp.identity_coefficient;
  const int num_vars = m + num_cuts * static_cast<int>(num_paulis);
  lp.variables.resize(static_cast<std::size_t>(num_vars));
  lp.cost = Eigen::VectorXd::Zero(num_vars);
  lp.y0 = Eigen::VectorXd::Zero(num_vars);
  for (int a = 0; a < num_cuts; ++a) {
    lp.f0.push_back(sp.identity_coefficient * ComplexMatrix::Identity(dim, dim));
    lp.f0.push_back(ComplexMatrix::Zero(dim, dim));
  }
  for (int k = 0; k < m; ++k) {
    const std::uint32_t s = sp.free_coords[static_cast<std::size_t>(k)].symplectic_index();
    for (int a = 0; a < num_cuts; ++a) lp.variables[static_cast<std::size_t>(k)].push_back({2 * a, s, 1.0});
    lp.cost(k) = sp.target_vector(k);
    lp.globals.push_back(k);
  }
  for (int a = 0; a < num_cuts; ++a) {
    const std::uint32_t mask = sp.bipartitions[static_cast<std::size_t>(a)].part.mask(n);
    LmiGroup group;
    group.blocks = {2 * a, 2 * a + 1};
    for (std::uint32_t s = 0; s < num_paulis; ++s) {
      const int v = m + a * static_cast<int>(num_paulis) + static_cast<int>(s);
      lp.variables[static_cast<std::size_t>(v)] = {{2 * a, s, -transpose_sign(s, n, mask)}, {2 * a + 1, s, 1.0}};
      group.variables.push_back(v);
    }
    // Q_A = I / 2^(n+1) leaves P_A = I / 2^(n+1): strictly feasible.
    lp.y0(m + a * static_cast<int>(num_paulis)) = 0.5 * sp.identity_coefficient;
    lp.groups.push_back(std::move(group));
  }
  lp.z0_scale = 1.0;

  const LmiResult r = solve_lmi(lp, tol);

  SynthesisResult out;
  SdpSolution& sol = out.solution;
  sol.witness_expr = ObservableExpr::identity(n, sp.identity_coefficient);
  for (int k = 0; k < m; ++k) sol.witness_expr.add(sp.free_coords[static_cast<std::size_t>(k)], r.y(k));
  sol.alpha = r.primal_objective;
  sol.duality_gap = r.relative_gap;
  sol.iterations = r.iterations;
  for (int a = 0; a < num_cuts; ++a) {
    sol.certificates.push_back({sp.bipartitions[static_cast<std::size_t>(a)], r.slack[static_cast<std::size_t>(2 * a)],
                                r.slack[static_cast<std::size_t>(2 * a + 1)]});
  }
  out.detected = sol.alpha < -kDetectThreshold;
  if (out.detected) out.p_noise = p_noise_from_alpha(sol.alpha, n);
  return out;
}

BipartitionMargin certify_bipartition(const ObservableExpr& expr, const Bipartition& cut, const SolverTolerances& tol) {
  const int n = expr.num_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  const std::uint32_t num_paulis = 1u << (2 * n);
  const std::uint32_t mask = cut.part.mask(n);
  const ComplexMatrix w = expr.to_matrix();

  // Variables: Pauli coordinates of Q (local), then t (global). Maximize t.
  LmiProblem lp;
  lp.num_qubits = n;
  lp.f0 = {ComplexMatrix::Zero(dim, dim), w};
  const int t_index = static_cast<int>(num_paulis);
  lp.variables.resize(num_paulis + 1);
  LmiGroup group;
  group.blocks = {0, 1};
  for (std::uint32_t s = 0; s < num_paulis; ++s) {
    lp.variables[s] = {{0, s, 1.0}, {1, s, -transpose_sign(s, n, mask)}};
    group.variables.push_back(static_cast<int>(s));
  }
  lp.variables[num_paulis] = {{0, 0, -1.0}, {1, 0, -1.0}};
  lp.groups.push_back(std::move(group));
  lp.globals = {t_index};
  lp.cost = Eigen::VectorXd::Zero(t_index + 1);
  lp.cost(t_index) = -1.0;
  lp.y0 = Eigen::VectorXd::Zero(t_index + 1);
  lp.y0(t_index) = std::min(min_eigenvalue(w), 0.0) - 1.0;
  lp.z0_scale = 1.0 / static_cast<double>(dim);

  const LmiResult r = solve_lmi(lp, tol);
  BipartitionMargin out;
  out.margin = r.y(t_index);
  const ComplexMatrix shift = out.margin * ComplexMatrix::Identity(dim, dim);
  out.certificate = {cut, r.slack[1] + shift, r.slack[0] + shift};
  return out;
}

namespace {

std::vector<BipartitionMargin> all_margins(const ObservableExpr& expr, const SolverTolerances& requested) {
  // The margin is compared against -feas, so its duality gap has to sit well below that.
  SolverTolerances tol = requested;
  tol.gap = std::min(tol.gap, 0.1 * tol.feas);
  if (expr.num_qubits() < 2) throw std::invalid_argument("verification needs at least two qubits");
  if (!(expr.trace() > 0.0)) throw std::invalid_argument("verify_witness requires Tr(W) > 0");
  const std::vector<Bipartition> cuts = canonical_bipartitions(expr.num_qubits());
  std::vector<BipartitionMargin> out(cuts.size());
  std::vector<std::string> errors(cuts.size());
  std::vector<double> gaps(cuts.size(), 0.0);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    try {
      out[i] = certify_bipartition(expr, cuts[i], tol);
    } catch (const SolverError& e) {
      errors[i] = e.what();
      gaps[i] = e.last_gap();
    }
  }
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (!errors[i].empty()) throw SolverError(cuts[i].str() + ": " + errors[i], gaps[i], tol.max_iter);
  }
  return out;
}

}  // namespace

std::optional<std::vector<BipartitionCertificate>> verify_witness(const ObservableExpr& expr,
                                                                  const SolverTolerances& tol) {
  std::vector<BipartitionCertificate> certs;
  for (auto& m : all_margins(expr, tol)) {
    if (m.margin < -tol.feas) return std::nullopt;
    certs.push_back(std::move(m.certificate));
  }
  return certs;
}

double witness_margin(const ObservableExpr& expr, const SolverTolerances& tol) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& m : all_margins(expr, tol)) worst = std::min(worst, m.margin);
  return worst;
}

double certificate_residual(const ObservableExpr& expr, const std::vector<BipartitionCertificate>& certs) {
  const ComplexMatrix w = expr.to_matrix();
  double worst = 0.0;
  for (const auto& c : certs) {
    worst = std::max(worst, (w - c.p - partial_transpose(c.q, c.cut.part)).norm());
  }
  return worst;
}

double certificate_min_eigenvalue(const std::vector<BipartitionCertificate>& certs) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : certs) worst = std::min({worst, min_eigenvalue(c.p), min_eigenvalue(c.q)});
  return worst;
}

int edl_search(const DensityMatrix& rho, const SolverTolerances& tol) {
  const int n = rho.num_qubits();
  for (int k = 1; k <= n; ++k) {
    if (synthesize(rho, SubsetFamily::all_of_size(n, k), tol).detected) return k;
  }
  return n + 1;
}

}  // namespace edl
