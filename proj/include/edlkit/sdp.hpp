#pragma once

// Witness synthesis over a subset family, PPT-mixer verification and EDL search.
//
//   alpha(rho, S) = min Tr(W rho)  s.t.  Tr W = 1,  W supported on S,
//                   W = P_A + Q_A^{T_A},  P_A, Q_A >= 0  for every bipartition A|A^c.

#include <optional>
#include <vector>

#include "edlkit/lmi.hpp"
#include "edlkit/witness.hpp"

namespace edl {

inline constexpr double kDetectThreshold = 1e-6;

struct BipartitionCertificate {
  Bipartition cut;
  ComplexMatrix p;  ///< P_A >= 0
  ComplexMatrix q;  ///< Q_A >= 0, with W = P_A + Q_A^{T_A}
};

struct SdpProblem {
  int num_qubits = 0;
  SubsetFamily family;
  std::vector<PauliString> free_coords;  ///< non-identity Paulis supported inside some family member
  Eigen::VectorXd target_vector;         ///< Tr(P rho) per free coordinate
  std::vector<Bipartition> bipartitions;
  double identity_coefficient = 0.0;     ///< 1 / 2^n
};

struct SdpSolution {
  ObservableExpr witness_expr;
  double alpha = 0.0;
  std::vector<BipartitionCertificate> certificates;
  double duality_gap = 0.0;
  int iterations = 0;
};

struct SynthesisResult {
  SdpSolution solution;
  bool detected = false;
  std::optional<double> p_noise;
};

/// Builds the coordinate description. Throws std::invalid_argument for empty or out-of-range families.
SdpProblem make_sdp_problem(const DensityMatrix& rho, const SubsetFamily& family);

SynthesisResult synthesize(const DensityMatrix& rho, const SubsetFamily& family,
                           const SolverTolerances& tol = {});

/// 2^n alpha / (2^n alpha - 1).
double p_noise_from_alpha(double alpha, int num_qubits);

/// Largest t with Q - tI >= 0 and W - Q^{T_A} - tI >= 0 for one bipartition.
struct BipartitionMargin {
  BipartitionCertificate certificate;
  double margin = 0.0;
};
BipartitionMargin certify_bipartition(const ObservableExpr& expr, const Bipartition& cut,
                                      const SolverTolerances& tol = {});

/// PPT-mixer certificates for every canonical bipartition, or nullopt if some
/// bipartition's margin falls below -tol.feas. Requires Tr(expr) > 0.
std::optional<std::vector<BipartitionCertificate>> verify_witness(const ObservableExpr& expr,
                                                                  const SolverTolerances& tol = {});

/// Smallest margin over all canonical bipartitions (parallel over bipartitions).
double witness_margin(const ObservableExpr& expr, const SolverTolerances& tol = {});

/// max over A of |W - P_A - Q_A^{T_A}|_F.
double certificate_residual(const ObservableExpr& expr, const std::vector<BipartitionCertificate>& certs);
/// min eigenvalue over every P_A and Q_A.
double certificate_min_eigenvalue(const std::vector<BipartitionCertificate>& certs);

/// Smallest k for which the all-k-subsets family detects rho; n + 1 if none does.
int edl_search(const DensityMatrix& rho, const SolverTolerances& tol = {});

}  // namespace edl
