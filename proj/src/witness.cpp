#include "edlkit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "edlkit/parallel.hpp"

namespace edl {

SubsetFamily::SubsetFamily(std::vector<QubitSubset> subsets) {
  for (auto& s : subsets) {
    if (s.empty()) throw std::invalid_argument("subset families cannot contain the empty set");
    if (std::find(subsets_.begin(), subsets_.end(), s) == subsets_.end()) subsets_.push_back(std::move(s));
  }
  if (!subsets_.empty()) {
    const auto k = subsets_.front().size();
    if (std::all_of(subsets_.begin(), subsets_.end(), [k](const QubitSubset& s) { return s.size() == k; })) {
      uniform_size_ = static_cast<int>(k);
    }
  }
}

SubsetFamily SubsetFamily::parse(std::string_view text) {
  std::vector<QubitSubset> subsets;
  std::string current;
  auto flush = [&] {
    if (current.empty()) throw std::invalid_argument("empty subset in family \"" + std::string(text) + "\"");
    subsets.push_back(QubitSubset::parse(current));
    current.clear();
  };
  for (char c : text) {
    if (c == ' ' || c == '\t') continue;
    if (c == ',') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return SubsetFamily(std::move(subsets));
}

SubsetFamily SubsetFamily::all_of_size(int num_qubits, int k) {
  if (k < 1 || k > num_qubits) throw std::invalid_argument("subset size out of range");
  std::vector<QubitSubset> out;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    out.emplace_back(pick);
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == num_qubits - k + i + 1) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return SubsetFamily(std::move(out));
}

bool SubsetFamily::covers(const QubitSubset& s) const {
  return std::any_of(subsets_.begin(), subsets_.end(), [&](const QubitSubset& m) { return m.includes(s); });
}

bool SubsetFamily::covers(const SubsetFamily& other) const {
  return std::all_of(other.subsets_.begin(), other.subsets_.end(), [&](const QubitSubset& s) { return covers(s); });
}

int SubsetFamily::max_qubit() const {
  int m = 0;
  for (const auto& s : subsets_) m = std::max(m, s.max_qubit());
  return m;
}

SubsetFamily SubsetFamily::sorted() const {
  std::vector<QubitSubset> v = subsets_;
  std::sort(v.begin(), v.end());
  return SubsetFamily(std::move(v));
}

std::string SubsetFamily::str() const {
  std::string out;
  for (const auto& s : subsets_) {
    if (!out.empty()) out += ',';
    out += s.str();
  }
  return out;
}

QubitSubset support(const PauliString& p) {
  std::vector<int> qubits;
  for (int q = 1; q <= p.num_qubits(); ++q) {
    if (p.at(q) != PauliLetter::I) qubits.push_back(q);
  }
  return QubitSubset(std::move(qubits));
}

SubsetFamily support(const ObservableExpr& expr) {
  std::vector<QubitSubset> supports;
  for (const auto& [p, c] : expr.terms()) {
    if (!p.is_identity()) supports.push_back(support(p));
  }
  std::sort(supports.begin(), supports.end());
  supports.erase(std::unique(supports.begin(), supports.end()), supports.end());
  std::vector<QubitSubset> maximal;
  for (const auto& s : supports) {
    const bool absorbed = std::any_of(supports.begin(), supports.end(),
                                      [&](const QubitSubset& t) { return t != s && t.includes(s); });
    if (!absorbed) maximal.push_back(s);
  }
  return SubsetFamily(std::move(maximal));
}

std::optional<double> p_noise(const ObservableExpr& expr, const DensityMatrix& rho) {
  const double t = evaluate(expr, rho);
  if (!(t < 0.0)) return std::nullopt;
  const double m = expr.identity_coefficient();
  return t / (t - m);
}

std::optional<double> p_noise(const Witness& w, const DensityMatrix& rho) { return p_noise(w.expr, rho); }

Witness projector_witness(const PureState& psi) {
  const double lambda = schmidt_lambda_max(psi);
  const int n = psi.num_qubits();
  const Eigen::Index dim = psi.amplitudes().size();
  const ComplexMatrix m = lambda * ComplexMatrix::Identity(dim, dim) - psi.amplitudes() * psi.amplitudes().adjoint();
  Witness w;
  w.expr = ObservableExpr::from_matrix(m);
  w.family = SubsetFamily({QubitSubset::from_mask((1u << n) - 1u, n)});
  w.label = "projector";
  w.p_noise = p_noise(w.expr, DensityMatrix::from_pure(psi));
  return w;
}

namespace {

ComplexVector haar_vector(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss;
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

struct BiseparableSampler {
  int n;
  ComplexMatrix w;
  std::vector<Bipartition> cuts;

  explicit BiseparableSampler(const ObservableExpr& expr)
      : n(expr.num_qubits()), w(expr.to_matrix()), cuts(canonical_bipartitions(expr.num_qubits())) {}

  double trial(std::uint64_t seed, std::int64_t index) const {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(index)));
    std::uniform_int_distribution<std::size_t> pick(0, cuts.size() - 1);
    const Bipartition& cut = cuts[pick(rng)];
    const std::uint32_t mask_a = cut.part.mask(n);
    const std::uint32_t mask_b = cut.complement.mask(n);
    const ComplexVector a = haar_vector(rng, Eigen::Index{1} << cut.part.size());
    const ComplexVector b = haar_vector(rng, Eigen::Index{1} << cut.complement.size());
    const auto dim = static_cast<std::uint32_t>(w.rows());
    ComplexVector psi(dim);
    for (std::uint32_t i = 0; i < dim; ++i) psi(i) = a(pack_bits(i, mask_a)) * b(pack_bits(i, mask_b));
    return psi.dot(w * psi).real();
  }
};

void check_trials(const ObservableExpr& expr, std::int64_t trials) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (expr.num_qubits() < 2) throw std::invalid_argument("biseparable sampling needs at least two qubits");
}

}  // namespace

double sample_biseparable_min(const ObservableExpr& expr, std::int64_t trials, std::uint64_t seed) {
  check_trials(expr, trials);
  const BiseparableSampler sampler(expr);
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : best) schedule(static) num_threads(max_threads())
  for (std::int64_t i = 0; i < trials; ++i) best = std::min(best, sampler.trial(seed, i));
  return best;
}

double sample_biseparable_min_serial(const ObservableExpr& expr, std::int64_t trials, std::uint64_t seed) {
  check_trials(expr, trials);
  const BiseparableSampler sampler(expr);
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < trials; ++i) best = std::min(best, sampler.trial(seed, i));
  return best;
}

}  // namespace edl
