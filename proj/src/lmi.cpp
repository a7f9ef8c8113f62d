#include "edlkit/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "edlkit/parallel.hpp"
#include "edlkit/pauli_kernels.hpp"

namespace edl {

namespace {

constexpr double kStepFraction = 0.95;

// Cholesky with an LDLT fallback for nearly singular Schur blocks late in the run.
class SpdSolver {
 public:
  void compute(const Eigen::MatrixXd& m) {
    llt_.compute(m);
    use_llt_ = llt_.info() == Eigen::Success;
    if (!use_llt_) ldlt_.compute(m);
  }
  template <typename Rhs>
  Eigen::MatrixXd solve(const Rhs& rhs) const {
    return use_llt_ ? Eigen::MatrixXd(llt_.solve(rhs)) : Eigen::MatrixXd(ldlt_.solve(rhs));
  }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  bool use_llt_ = true;
};

struct BlockTerm {
  int variable;
  std::uint32_t pauli;
  double coeff;
};

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Largest alpha with x + alpha * dx >= 0, or +inf if every alpha works.
double max_step(const Eigen::LLT<ComplexMatrix>& x_chol, const ComplexMatrix& dx) {
  const ComplexMatrix a = x_chol.matrixL().solve(dx);
  const ComplexMatrix b = x_chol.matrixL().solve(ComplexMatrix(a.adjoint()));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian_part(b), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues()(0);
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

class Solver {
 public:
  Solver(const LmiProblem& p, const SolverTolerances& tol) : p_(p), tol_(tol) {
    n_ = p.num_qubits;
    dim_ = Eigen::Index{1} << n_;
    num_paulis_ = std::uint32_t{1} << (2 * n_);
    num_blocks_ = static_cast<int>(p.f0.size());
    num_vars_ = static_cast<int>(p.variables.size());
    validate();
    block_terms_.resize(static_cast<std::size_t>(num_blocks_));
    for (int i = 0; i < num_vars_; ++i) {
      for (const LmiTerm& t : p.variables[static_cast<std::size_t>(i)]) {
        block_terms_[static_cast<std::size_t>(t.block)].push_back({i, t.pauli, t.coeff});
      }
    }
  }

  LmiResult run() {
    Eigen::VectorXd y = p_.y0;
    std::vector<ComplexMatrix> z(static_cast<std::size_t>(num_blocks_),
                                 p_.z0_scale * ComplexMatrix::Identity(dim_, dim_));
    const double total_dim = static_cast<double>(num_blocks_) * static_cast<double>(dim_);
    const double cost_norm = p_.cost.norm();
    double rel_gap = std::numeric_limits<double>::infinity();
    double dinf = std::numeric_limits<double>::infinity();

    for (int iter = 0;; ++iter) {
      const std::vector<ComplexMatrix> s = slack(y, true);
      std::vector<Eigen::LLT<ComplexMatrix>> s_chol(static_cast<std::size_t>(num_blocks_));
      std::vector<ComplexMatrix> s_inv(static_cast<std::size_t>(num_blocks_));
      for (int b = 0; b < num_blocks_; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        s_chol[ub].compute(s[ub]);
        if (s_chol[ub].info() != Eigen::Success) {
          throw SolverError("slack matrix lost positive definiteness", rel_gap, iter);
        }
        s_inv[ub] = s_chol[ub].solve(ComplexMatrix::Identity(dim_, dim_));
        s_inv[ub] = hermitian_part(s_inv[ub]);
      }

      double sz = 0.0, f0z = 0.0;
      for (int b = 0; b < num_blocks_; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        sz += (s[ub] * z[ub]).trace().real();
        f0z += (p_.f0[ub] * z[ub]).trace().real();
      }
      const double mu = sz / total_dim;
      const double pobj = p_.cost.dot(y) + p_.objective_offset;
      const double dobj = -f0z + p_.objective_offset;
      const Eigen::VectorXd residual = p_.cost - apply(z);
      rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
      dinf = residual.norm() / (1.0 + cost_norm);

      if (rel_gap < tol_.gap && dinf < tol_.feas) {
        LmiResult r;
        r.y = y;
        r.slack = s;
        r.dual = z;
        r.primal_objective = pobj;
        r.dual_objective = dobj;
        r.relative_gap = rel_gap;
        r.dual_infeasibility = dinf;
        r.iterations = iter;
        return r;
      }
      if (iter >= tol_.max_iter) {
        throw SolverError("interior-point method did not converge in " + std::to_string(tol_.max_iter) +
                              " iterations (relative gap " + std::to_string(rel_gap) + ", dual infeasibility " +
                              std::to_string(dinf) + ")",
                          rel_gap, iter);
      }

      factor(s_inv, z);

      std::vector<Eigen::LLT<ComplexMatrix>> z_chol(static_cast<std::size_t>(num_blocks_));
      for (int b = 0; b < num_blocks_; ++b) z_chol[static_cast<std::size_t>(b)].compute(z[static_cast<std::size_t>(b)]);

      // Predictor (affine scaling) direction.
      const Eigen::VectorXd dy_aff = solve(-p_.cost);
      const std::vector<ComplexMatrix> ds_aff = slack(dy_aff, false);
      std::vector<ComplexMatrix> dz_aff(static_cast<std::size_t>(num_blocks_));
      for (int b = 0; b < num_blocks_; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        dz_aff[ub] = -z[ub] - hermitian_part(s_inv[ub] * ds_aff[ub] * z[ub]);
      }
      const auto [ap_aff, ad_aff] = step_lengths(s_chol, ds_aff, z_chol, dz_aff);
      double sz_aff = 0.0;
      for (int b = 0; b < num_blocks_; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        sz_aff += ((s[ub] + ap_aff * ds_aff[ub]) * (z[ub] + ad_aff * dz_aff[ub])).trace().real();
      }
      const double mu_aff = std::max(sz_aff, 0.0) / total_dim;
      const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

      // Corrector: centering plus second-order term.
      std::vector<ComplexMatrix> corr(static_cast<std::size_t>(num_blocks_));
      std::vector<ComplexMatrix> target(static_cast<std::size_t>(num_blocks_));
      for (int b = 0; b < num_blocks_; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        corr[ub] = hermitian_part(s_inv[ub] * ds_aff[ub] * dz_aff[ub]);
        target[ub] = sigma * mu * s_inv[ub] - corr[ub];
      }
      const Eigen::VectorXd dy = solve(apply(target) - p_.cost);
      const std::vector<ComplexMatrix> ds = slack(dy, false);
      std::vector<ComplexMatrix> dz(static_cast<std::size_t>(num_blocks_));
      for (int b = 0; b < num_blocks_; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        dz[ub] = target[ub] - z[ub] - hermitian_part(s_inv[ub] * ds[ub] * z[ub]);
      }
      const auto [ap, ad] = step_lengths(s_chol, ds, z_chol, dz);
      y += ap * dy;
      for (int b = 0; b < num_blocks_; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        z[ub] = hermitian_part(z[ub] + ad * dz[ub]);
      }
    }
  }

 private:
  void validate() const {
    if (n_ < 1 || n_ > 6) throw std::invalid_argument("LMI solver supports 1..6 qubits");
    if (p_.cost.size() != num_vars_ || p_.y0.size() != num_vars_) {
      throw std::invalid_argument("LMI cost/start vector size mismatch");
    }
    for (const auto& f : p_.f0) {
      if (f.rows() != dim_ || f.cols() != dim_) throw std::invalid_argument("LMI block dimension mismatch");
    }
    std::vector<int> owner(static_cast<std::size_t>(num_vars_), -2);
    for (int g : p_.globals) owner.at(static_cast<std::size_t>(g)) = -1;
    for (std::size_t gi = 0; gi < p_.groups.size(); ++gi) {
      for (int v : p_.groups[gi].variables) {
        if (owner.at(static_cast<std::size_t>(v)) != -2) throw std::invalid_argument("LMI variable assigned twice");
        owner[static_cast<std::size_t>(v)] = static_cast<int>(gi);
        for (const LmiTerm& t : p_.variables[static_cast<std::size_t>(v)]) {
          const auto& blocks = p_.groups[gi].blocks;
          if (std::find(blocks.begin(), blocks.end(), t.block) == blocks.end()) {
            throw std::invalid_argument("local LMI variable touches a block outside its group");
          }
        }
      }
    }
    for (int i = 0; i < num_vars_; ++i) {
      if (owner[static_cast<std::size_t>(i)] == -2) throw std::invalid_argument("LMI variable not assigned");
      for (const LmiTerm& t : p_.variables[static_cast<std::size_t>(i)]) {
        if (t.block < 0 || t.block >= num_blocks_ || t.pauli >= num_paulis_) {
          throw std::invalid_argument("LMI term out of range");
        }
      }
    }
  }

  // F0 + A*(y) when with_f0, else A*(y).
  std::vector<ComplexMatrix> slack(const Eigen::VectorXd& y, bool with_f0) const {
    std::vector<ComplexMatrix> out(static_cast<std::size_t>(num_blocks_));
    for (int b = 0; b < num_blocks_; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      Eigen::VectorXd a = Eigen::VectorXd::Zero(num_paulis_);
      for (const BlockTerm& t : block_terms_[ub]) a(t.pauli) += t.coeff * y(t.variable);
      out[ub] = from_pauli_coordinates(a, n_);
      if (with_f0) out[ub] += p_.f0[ub];
      out[ub] = hermitian_part(out[ub]);
    }
    return out;
  }

  // A(R)_i = sum over terms of coeff * Re Tr(P R_b).
  Eigen::VectorXd apply(const std::vector<ComplexMatrix>& r) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(num_vars_);
    for (int b = 0; b < num_blocks_; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      if (block_terms_[ub].empty()) continue;
      const ComplexVector coords = pauli_coordinates(r[ub]);
      for (const BlockTerm& t : block_terms_[ub]) out(t.variable) += t.coeff * coords(t.pauli).real();
    }
    return out;
  }

  double schur_entry(int i, int j) const {
    double v = 0.0;
    for (const LmiTerm& ti : p_.variables[static_cast<std::size_t>(i)]) {
      const Eigen::MatrixXd& k = kernels_[static_cast<std::size_t>(ti.block)];
      for (const LmiTerm& tj : p_.variables[static_cast<std::size_t>(j)]) {
        if (ti.block == tj.block) v += ti.coeff * tj.coeff * k(ti.pauli, tj.pauli);
      }
    }
    return v;
  }

  void factor(const std::vector<ComplexMatrix>& s_inv, const std::vector<ComplexMatrix>& z) {
    kernels_.assign(static_cast<std::size_t>(num_blocks_), Eigen::MatrixXd());
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (int b = 0; b < num_blocks_; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      if (!block_terms_[ub].empty()) kernels_[ub] = pauli_kernel_serial(s_inv[ub], z[ub]);
    }

    const auto m = static_cast<Eigen::Index>(p_.globals.size());
    const auto num_groups = static_cast<int>(p_.groups.size());
    local_.assign(static_cast<std::size_t>(num_groups), SpdSolver());
    cross_.assign(static_cast<std::size_t>(num_groups), Eigen::MatrixXd());
    std::vector<Eigen::MatrixXd> contribution(static_cast<std::size_t>(num_groups));

#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (int g = 0; g < num_groups; ++g) {
      const auto ug = static_cast<std::size_t>(g);
      const auto& vars = p_.groups[ug].variables;
      const auto l = static_cast<Eigen::Index>(vars.size());
      Eigen::MatrixXd local(l, l);
      for (Eigen::Index a = 0; a < l; ++a) {
        for (Eigen::Index b = 0; b <= a; ++b) {
          local(a, b) = local(b, a) = schur_entry(vars[static_cast<std::size_t>(a)], vars[static_cast<std::size_t>(b)]);
        }
      }
      local_[ug].compute(local);
      Eigen::MatrixXd cross(m, l);
      for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index a = 0; a < l; ++a) {
          cross(k, a) = schur_entry(p_.globals[static_cast<std::size_t>(k)], vars[static_cast<std::size_t>(a)]);
        }
      }
      if (m > 0) contribution[ug] = cross * local_[ug].solve(cross.transpose());
      cross_[ug] = std::move(cross);
    }

    if (m > 0) {
      Eigen::MatrixXd reduced(m, m);
      for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b <= a; ++b) {
          reduced(a, b) = reduced(b, a) =
              schur_entry(p_.globals[static_cast<std::size_t>(a)], p_.globals[static_cast<std::size_t>(b)]);
        }
      }
      for (const auto& c : contribution) reduced -= c;  // fixed order keeps results thread-count independent
      reduced = 0.5 * (reduced + reduced.transpose());
      reduced_.compute(reduced);
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    const auto m = static_cast<Eigen::Index>(p_.globals.size());
    const auto num_groups = p_.groups.size();
    std::vector<Eigen::VectorXd> local_rhs(num_groups);
    for (std::size_t g = 0; g < num_groups; ++g) {
      const auto& vars = p_.groups[g].variables;
      local_rhs[g].resize(static_cast<Eigen::Index>(vars.size()));
      for (std::size_t a = 0; a < vars.size(); ++a) local_rhs[g](static_cast<Eigen::Index>(a)) = rhs(vars[a]);
    }
    Eigen::VectorXd dy_global(m);
    if (m > 0) {
      Eigen::VectorXd r(m);
      for (Eigen::Index k = 0; k < m; ++k) r(k) = rhs(p_.globals[static_cast<std::size_t>(k)]);
      for (std::size_t g = 0; g < num_groups; ++g) r -= cross_[g] * local_[g].solve(local_rhs[g]);
      dy_global = reduced_.solve(r);
    }
    Eigen::VectorXd dy(num_vars_);
    for (Eigen::Index k = 0; k < m; ++k) dy(p_.globals[static_cast<std::size_t>(k)]) = dy_global(k);
    for (std::size_t g = 0; g < num_groups; ++g) {
      Eigen::VectorXd r = local_rhs[g];
      if (m > 0) r -= cross_[g].transpose() * dy_global;
      const Eigen::VectorXd sol = local_[g].solve(r);
      const auto& vars = p_.groups[g].variables;
      for (std::size_t a = 0; a < vars.size(); ++a) dy(vars[a]) = sol(static_cast<Eigen::Index>(a));
    }
    return dy;
  }

  std::pair<double, double> step_lengths(const std::vector<Eigen::LLT<ComplexMatrix>>& s_chol,
                                         const std::vector<ComplexMatrix>& ds,
                                         const std::vector<Eigen::LLT<ComplexMatrix>>& z_chol,
                                         const std::vector<ComplexMatrix>& dz) const {
    double ap = std::numeric_limits<double>::infinity();
    double ad = std::numeric_limits<double>::infinity();
    for (int b = 0; b < num_blocks_; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      ap = std::min(ap, max_step(s_chol[ub], ds[ub]));
      ad = std::min(ad, max_step(z_chol[ub], dz[ub]));
    }
    return {std::min(1.0, kStepFraction * ap), std::min(1.0, kStepFraction * ad)};
  }

  const LmiProblem& p_;
  SolverTolerances tol_;
  int n_ = 0;
  Eigen::Index dim_ = 0;
  std::uint32_t num_paulis_ = 0;
  int num_blocks_ = 0;
  int num_vars_ = 0;
  std::vector<std::vector<BlockTerm>> block_terms_;
  std::vector<Eigen::MatrixXd> kernels_;
  std::vector<SpdSolver> local_;
  std::vector<Eigen::MatrixXd> cross_;
  SpdSolver reduced_;
};

}  // namespace

LmiResult solve_lmi(const LmiProblem& problem, const SolverTolerances& tol) {
  return Solver(problem, tol).run();
}

}  // namespace edl
