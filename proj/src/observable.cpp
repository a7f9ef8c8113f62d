#include "edlkit/observable.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "edlkit/pauli_kernels.hpp"

namespace edl {

ObservableExpr::ObservableExpr(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) throw std::invalid_argument("qubit count must be in 1..10");
}

ObservableExpr ObservableExpr::term(const PauliString& p, double coeff) {
  ObservableExpr e(p.num_qubits());
  e.add(p, coeff);
  return e;
}

ObservableExpr ObservableExpr::identity(int num_qubits, double coeff) {
  return term(PauliString::identity(num_qubits), coeff);
}

ObservableExpr ObservableExpr::from_matrix(const ComplexMatrix& m, double drop_below) {
  const int n = qubits_for_dim(m.rows());
  const ComplexVector coords = pauli_coordinates(m);
  const double dim = static_cast<double>(m.rows());
  ObservableExpr e(n);
  for (Eigen::Index s = 0; s < coords.size(); ++s) {
    const double c = coords(s).real() / dim;
    if (std::abs(c) >= drop_below && c != 0.0) {
      e.add(PauliString::from_symplectic(static_cast<std::uint32_t>(s), n), c);
    }
  }
  return e;
}

ObservableExpr ObservableExpr::product(const std::vector<QubitOperator>& factors) {
  const int n = static_cast<int>(factors.size());
  ObservableExpr e(n);
  std::vector<PauliLetter> letters(factors.size());
  // Depth-first expansion over the nonzero letters of every factor.
  auto expand = [&](auto&& self, std::size_t q, double coeff) -> void {
    if (q == factors.size()) {
      e.add(PauliString(letters), coeff);
      return;
    }
    for (int l = 0; l < 4; ++l) {
      if (factors[q][l] == 0.0) continue;
      letters[q] = static_cast<PauliLetter>(l);
      self(self, q + 1, coeff * factors[q][l]);
    }
  };
  expand(expand, 0, 1.0);
  return e;
}

void ObservableExpr::check_qubits(int n) const {
  if (n != n_) {
    throw std::invalid_argument("qubit count mismatch: " + std::to_string(n) + " vs " + std::to_string(n_));
  }
}

void ObservableExpr::add(const PauliString& p, double coeff) {
  check_qubits(p.num_qubits());
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.emplace(p, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double ObservableExpr::coefficient(const PauliString& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? 0.0 : it->second;
}

double ObservableExpr::identity_coefficient() const { return n_ ? coefficient(PauliString::identity(n_)) : 0.0; }

double ObservableExpr::trace() const { return std::ldexp(identity_coefficient(), n_); }

ComplexMatrix ObservableExpr::to_matrix() const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(Eigen::Index{1} << (2 * n_));
  for (const auto& [p, c] : terms_) a(p.symplectic_index()) = c;
  return from_pauli_coordinates(a, n_);
}

ObservableExpr ObservableExpr::pruned(double threshold) const {
  ObservableExpr e(n_);
  for (const auto& [p, c] : terms_) {
    if (std::abs(c) > threshold) e.terms_.emplace(p, c);
  }
  return e;
}

ObservableExpr& ObservableExpr::operator+=(const ObservableExpr& other) {
  if (n_ == 0) n_ = other.n_;
  for (const auto& [p, c] : other.terms_) add(p, c);
  return *this;
}

ObservableExpr& ObservableExpr::operator*=(double scale) {
  if (scale == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [p, c] : terms_) c *= scale;
  return *this;
}

std::string ObservableExpr::str() const {
  std::string out;
  char buf[64];
  for (const auto& [p, c] : terms_) {
    std::snprintf(buf, sizeof buf, "%s%+.6g %s", out.empty() ? "" : " ", c, p.str().c_str());
    out += buf;
  }
  return out.empty() ? "0" : out;
}

double evaluate(const ObservableExpr& expr, const DensityMatrix& rho) {
  if (expr.num_qubits() != rho.num_qubits()) throw std::invalid_argument("evaluate: qubit count mismatch");
  const ComplexVector coords = pauli_coordinates(rho.matrix());
  double value = 0.0;
  for (const auto& [p, c] : expr.terms()) value += c * coords(p.symplectic_index()).real();
  return value;
}

double evaluate(const ObservableExpr& expr, const PureState& psi) {
  return evaluate(expr, DensityMatrix::from_pure(psi));
}

double max_coefficient_difference(const ObservableExpr& a, const ObservableExpr& b) {
  double worst = 0.0;
  for (const auto& [p, c] : a.terms()) worst = std::max(worst, std::abs(c - b.coefficient(p)));
  for (const auto& [p, c] : b.terms()) worst = std::max(worst, std::abs(c - a.coefficient(p)));
  return worst;
}

}  // namespace edl
