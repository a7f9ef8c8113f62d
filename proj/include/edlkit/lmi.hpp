#pragma once

// Primal-dual interior-point solver for linear matrix inequalities whose
// coefficient matrices are scaled Pauli strings:
//
//   minimize  c^T y   subject to  S_b = F0_b + sum_i y_i F_ib  >= 0  for every block b,
//
// with F_ib = sum of coeff * P_pauli over the variable's terms in block b.
// Variables split into globals (any block) and per-group locals (only that
// group's blocks); the Schur system is block-arrow and is reduced group by group.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "edlkit/tensor.hpp"

namespace edl {

struct SolverTolerances {
  double gap = 1e-7;   ///< relative duality gap
  double feas = 1e-8;  ///< relative dual infeasibility
  int max_iter = 200;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_gap, int iterations)
      : std::runtime_error(what), last_gap_(last_gap), iterations_(iterations) {}
  double last_gap() const { return last_gap_; }
  int iterations() const { return iterations_; }

 private:
  double last_gap_;
  int iterations_;
};

struct LmiTerm {
  int block;
  std::uint32_t pauli;  ///< symplectic index
  double coeff;
};

struct LmiGroup {
  std::vector<int> blocks;
  std::vector<int> variables;
};

struct LmiProblem {
  int num_qubits = 0;
  std::vector<ComplexMatrix> f0;                ///< one per block, all 2^n x 2^n
  std::vector<std::vector<LmiTerm>> variables;  ///< terms per variable
  Eigen::VectorXd cost;
  std::vector<int> globals;
  std::vector<LmiGroup> groups;
  Eigen::VectorXd y0;        ///< must make every S_b positive definite
  double z0_scale = 1.0;     ///< dual start Z_b = z0_scale * I
  double objective_offset = 0.0;
};

struct LmiResult {
  Eigen::VectorXd y;
  std::vector<ComplexMatrix> slack;  ///< S_b at y
  std::vector<ComplexMatrix> dual;   ///< Z_b
  double primal_objective = 0.0;     ///< c^T y + offset
  double dual_objective = 0.0;       ///< -sum Tr(F0_b Z_b) + offset
  double relative_gap = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
};

/// Throws SolverError when the tolerances are not met within max_iter iterations.
LmiResult solve_lmi(const LmiProblem& problem, const SolverTolerances& tol);

}  // namespace edl
