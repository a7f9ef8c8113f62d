#include "edlkit/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

namespace edl {

namespace {

constexpr double kZeroComponent = 1e-12;
constexpr double kDropCoefficient = 1e-14;

double axis_norm(const BlochAxis& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

bool axes_equal(const BlochAxis& a, const BlochAxis& b) {
  return std::abs(a[0] - b[0]) <= kAxisEqualTolerance && std::abs(a[1] - b[1]) <= kAxisEqualTolerance &&
         std::abs(a[2] - b[2]) <= kAxisEqualTolerance;
}

BlochAxis negated(const BlochAxis& a) { return {-a[0], -a[1], -a[2]}; }

void check_axes(const std::vector<QubitAxis>& axes) {
  if (axes.empty() || axes.size() > static_cast<std::size_t>(kMaxQubits)) {
    throw std::invalid_argument("operators act on 1..10 qubits");
  }
  for (const auto& a : axes) {
    if (a && std::abs(axis_norm(*a) - 1.0) > kAxisNormTolerance) {
      throw std::invalid_argument("measurement axis is not a unit vector");
    }
  }
}

// Name of a composite axis (e_A +- e_B) / sqrt(2), if it is one.
std::optional<std::string> composite_name(const BlochAxis& a) {
  static constexpr char kLetters[] = {'X', 'Y', 'Z'};
  const double h = std::numbers::sqrt2 / 2;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      for (double sign : {1.0, -1.0}) {
        BlochAxis c{0, 0, 0};
        c[static_cast<std::size_t>(i)] = h;
        c[static_cast<std::size_t>(j)] = sign * h;
        if (axes_equal(a, c) && (i < j || sign < 0)) {
          return std::string("(") + kLetters[i] + (sign > 0 ? '+' : '-') + kLetters[j] + ")/r2";
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<char> pauli_name(const BlochAxis& a) {
  static constexpr char kLetters[] = {'X', 'Y', 'Z'};
  for (int l = 0; l < 3; ++l) {
    BlochAxis e{0, 0, 0};
    e[static_cast<std::size_t>(l)] = 1.0;
    if (axes_equal(a, e)) return kLetters[l];
  }
  return std::nullopt;
}

std::string axis_token(const BlochAxis& a) {
  if (auto p = pauli_name(a)) return std::string(1, *p);
  if (auto c = composite_name(a)) return "[" + *c + "]";
  char buf[96];
  std::snprintf(buf, sizeof buf, "[(%.6gX%+.6gY%+.6gZ)]", a[0], a[1], a[2]);
  return buf;
}

}  // namespace

BlochAxis axis_of(PauliLetter letter) {
  switch (letter) {
    case PauliLetter::X: return {1, 0, 0};
    case PauliLetter::Y: return {0, 1, 0};
    case PauliLetter::Z: return {0, 0, 1};
    case PauliLetter::I: break;
  }
  throw std::invalid_argument("the identity has no Bloch axis");
}

ProductOperator::ProductOperator(std::vector<QubitAxis> axes) : axes_(std::move(axes)) { check_axes(axes_); }

ProductOperator ProductOperator::identity(int num_qubits) {
  return ProductOperator(std::vector<QubitAxis>(static_cast<std::size_t>(num_qubits)));
}

ProductOperator ProductOperator::from_pauli(const PauliString& p) {
  std::vector<QubitAxis> axes;
  for (PauliLetter l : p.letters()) axes.push_back(l == PauliLetter::I ? QubitAxis{} : QubitAxis{axis_of(l)});
  return ProductOperator(std::move(axes));
}

bool ProductOperator::is_identity() const {
  return std::none_of(axes_.begin(), axes_.end(), [](const QubitAxis& a) { return a.has_value(); });
}

std::pair<double, ProductOperator> ProductOperator::canonical() const {
  double sign = 1.0;
  ProductOperator out = *this;
  for (auto& a : out.axes_) {
    if (!a) continue;
    for (double c : *a) {
      if (std::abs(c) <= kZeroComponent) continue;
      if (c < 0) {
        *a = negated(*a);
        sign = -sign;
      }
      break;
    }
  }
  return {sign, out};
}

std::optional<PauliString> ProductOperator::as_pauli() const {
  std::vector<PauliLetter> letters;
  for (const auto& a : axes_) {
    if (!a) {
      letters.push_back(PauliLetter::I);
      continue;
    }
    const auto name = pauli_name(*a);
    if (!name) return std::nullopt;
    letters.push_back(pauli_letter_from_char(*name));
  }
  return PauliString(std::move(letters));
}

ObservableExpr ProductOperator::to_expr() const {
  std::vector<QubitOperator> factors;
  for (const auto& a : axes_) factors.push_back(a ? QubitOperator{0, (*a)[0], (*a)[1], (*a)[2]} : QubitOperator{1, 0, 0, 0});
  return ObservableExpr::product(factors);
}

std::string ProductOperator::str() const {
  if (auto p = as_pauli()) return p->str();
  // Runs of one repeated axis print as a single group: "[(X+Z)/r2]_1,2", or "x<n>" when uniform.
  const int n = num_qubits();
  const auto first = std::find_if(axes_.begin(), axes_.end(), [](const QubitAxis& a) { return a.has_value(); });
  const bool uniform = std::all_of(axes_.begin(), axes_.end(),
                                   [&](const QubitAxis& a) { return a && axes_equal(*a, **first); });
  if (uniform) return axis_token(**first) + "x" + std::to_string(n);
  std::string out;
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  for (int q = 0; q < n; ++q) {
    const auto& a = axes_[static_cast<std::size_t>(q)];
    if (!a || done[static_cast<std::size_t>(q)]) continue;
    const std::string token = axis_token(*a);
    if (token.size() == 1) {
      out += token + std::to_string(q + 1);
      continue;
    }
    out += token + "_";
    bool first_index = true;
    for (int r = q; r < n; ++r) {
      const auto& b = axes_[static_cast<std::size_t>(r)];
      if (b && axes_equal(*a, *b)) {
        done[static_cast<std::size_t>(r)] = true;
        if (!first_index) out += ',';
        out += std::to_string(r + 1);
        first_index = false;
      }
    }
  }
  return out.empty() ? std::string(static_cast<std::size_t>(n), 'I') : out;
}

bool ProductOperator::approx_equal(const ProductOperator& other) const {
  if (axes_.size() != other.axes_.size()) return false;
  for (std::size_t q = 0; q < axes_.size(); ++q) {
    const auto& a = axes_[q];
    const auto& b = other.axes_[q];
    if (a.has_value() != b.has_value()) return false;
    if (a && !axes_equal(*a, *b)) return false;
  }
  return true;
}

bool ProductOperator::less(const ProductOperator& a, const ProductOperator& b) {
  const std::size_t n = std::min(a.axes_.size(), b.axes_.size());
  for (std::size_t q = 0; q < n; ++q) {
    const auto& x = a.axes_[q];
    const auto& y = b.axes_[q];
    if (x.has_value() != y.has_value()) return !x.has_value();
    if (!x) continue;
    for (std::size_t c = 0; c < 3; ++c) {
      if (std::abs((*x)[c] - (*y)[c]) > kAxisEqualTolerance) return (*x)[c] > (*y)[c];
    }
  }
  return a.axes_.size() < b.axes_.size();
}

ProductSum ProductSum::from_expr(const ObservableExpr& expr) {
  ProductSum s(expr.num_qubits());
  for (const auto& [p, c] : expr.terms()) s.add(ProductOperator::from_pauli(p), c);
  return s;
}

void ProductSum::add(const ProductOperator& op, double coeff) {
  if (n_ == 0) n_ = op.num_qubits();
  if (op.num_qubits() != n_) throw std::invalid_argument("ProductSum: qubit count mismatch");
  const auto [sign, folded] = op.canonical();
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->first.approx_equal(folded)) {
      it->second += sign * coeff;
      if (std::abs(it->second) < kDropCoefficient) terms_.erase(it);
      return;
    }
  }
  if (std::abs(coeff) >= kDropCoefficient) terms_.emplace_back(folded, sign * coeff);
}

ProductSum& ProductSum::operator+=(const ProductSum& other) {
  for (const auto& [op, c] : other.terms_) add(op, c);
  return *this;
}

ProductSum& ProductSum::operator*=(double s) {
  for (auto& t : terms_) t.second *= s;
  return *this;
}

double ProductSum::identity_coefficient() const {
  for (const auto& [op, c] : terms_) {
    if (op.is_identity()) return c;
  }
  return 0.0;
}

ObservableExpr ProductSum::to_expr() const {
  ObservableExpr out(n_);
  for (const auto& [op, c] : terms_) {
    ObservableExpr e = op.to_expr();
    e *= c;
    out += e;
  }
  return out;
}

ProductSum tensor_power(int num_qubits, const std::vector<std::pair<double, QubitAxis>>& single_qubit) {
  ProductSum out(num_qubits);
  std::vector<QubitAxis> axes(static_cast<std::size_t>(num_qubits));
  auto expand = [&](auto&& self, int q, double coeff) -> void {
    if (q == num_qubits) {
      out.add(ProductOperator(axes), coeff);
      return;
    }
    for (const auto& [c, axis] : single_qubit) {
      axes[static_cast<std::size_t>(q)] = axis;
      self(self, q + 1, coeff * c);
    }
  };
  expand(expand, 0, 1.0);
  return out;
}

MeasurementSetting::MeasurementSetting(std::vector<QubitAxis> axes) : axes_(std::move(axes)) { check_axes(axes_); }

std::optional<double> MeasurementSetting::coverage_sign(const ProductOperator& op) const {
  if (op.num_qubits() != num_qubits()) return std::nullopt;
  double sign = 1.0;
  for (std::size_t q = 0; q < axes_.size(); ++q) {
    const auto& a = op.axes()[q];
    if (!a) continue;
    const auto& s = axes_[q];
    if (!s) return std::nullopt;
    if (axes_equal(*a, *s)) continue;
    if (axes_equal(*a, negated(*s))) {
      sign = -sign;
      continue;
    }
    return std::nullopt;
  }
  return sign;
}

std::string MeasurementSetting::str() const { return ProductOperator(axes_).str(); }

std::vector<SettingPlan> plan_settings(const ProductSum& expr) {
  std::vector<ProductOperator> ops;
  for (const auto& [op, c] : expr.terms()) {
    if (!op.is_identity()) ops.push_back(op);
  }
  std::stable_sort(ops.begin(), ops.end(), ProductOperator::less);
  std::vector<std::vector<QubitAxis>> open;
  std::vector<SettingPlan> plans;
  for (const auto& op : ops) {
    std::size_t target = open.size();
    for (std::size_t i = 0; i < open.size() && target == open.size(); ++i) {
      bool fits = true;
      for (std::size_t q = 0; q < op.axes().size() && fits; ++q) {
        const auto& a = op.axes()[q];
        const auto& s = open[i][q];
        fits = !a || !s || axes_equal(*a, *s);
      }
      if (fits) target = i;
    }
    if (target == open.size()) {
      open.emplace_back(op.axes().size());
      plans.emplace_back();
    }
    for (std::size_t q = 0; q < op.axes().size(); ++q) {
      if (op.axes()[q]) open[target][q] = op.axes()[q];
    }
    plans[target].covered.push_back(op);
  }
  for (std::size_t i = 0; i < plans.size(); ++i) plans[i].setting = MeasurementSetting(open[i]);
  return plans;
}

std::vector<SettingPlan> plan_settings(const ObservableExpr& expr) { return plan_settings(ProductSum::from_expr(expr)); }

namespace {

constexpr double kH = std::numbers::sqrt2 / 2;

QubitAxis pauli_axis(char c) { return axis_of(pauli_letter_from_char(c)); }

// Unit axis (e_a + sign e_b) / sqrt(2).
BlochAxis composite_axis(char a, char b, double sign) {
  BlochAxis out{0, 0, 0};
  const BlochAxis ea = axis_of(pauli_letter_from_char(a));
  const BlochAxis eb = axis_of(pauli_letter_from_char(b));
  for (std::size_t i = 0; i < 3; ++i) out[i] = kH * (ea[i] + sign * eb[i]);
  return out;
}

MeasurementSetting uniform_setting(int n, const BlochAxis& axis) {
  return MeasurementSetting(std::vector<QubitAxis>(static_cast<std::size_t>(n), axis));
}

MeasurementSetting word_setting(std::string_view word) {
  std::vector<QubitAxis> axes;
  for (char c : word) axes.push_back(pauli_axis(c));
  return MeasurementSetting(std::move(axes));
}

// Sum of coefficient_by_weight[|T|] * Z_T over every subset T.
ProductSum z_weight_sum(int n, const std::vector<double>& coefficient_by_weight) {
  ProductSum out(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const double c = coefficient_by_weight[static_cast<std::size_t>(std::popcount(mask))];
    if (c == 0.0) continue;
    std::vector<QubitAxis> axes(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      if (mask & (1u << (n - 1 - q))) axes[static_cast<std::size_t>(q)] = BlochAxis{0, 0, 1};
    }
    out.add(ProductOperator(axes), c);
  }
  return out;
}

// (I + Z + sign B)^{tensor n} = (I + sqrt2 A)^{tensor n} with A the composite axis.
ProductSum identity_plus_composite(int n, char b, double sign) {
  return tensor_power(n, {{1.0, QubitAxis{}}, {std::numbers::sqrt2, composite_axis('Z', b, sign)}});
}

ProductSum word_term(std::string_view word, double coeff) {
  std::vector<QubitAxis> axes;
  for (char c : word) axes.push_back(c == 'I' ? QubitAxis{} : pauli_axis(c));
  ProductSum s(static_cast<int>(word.size()));
  s.add(ProductOperator(std::move(axes)), coeff);
  return s;
}

std::vector<SettingPlan> assign(const std::vector<MeasurementSetting>& settings, const ProductSum& reconstruction) {
  std::vector<SettingPlan> plans;
  for (const auto& s : settings) plans.push_back({s, {}});
  for (const auto& [op, c] : reconstruction.terms()) {
    if (op.is_identity()) continue;
    bool placed = false;
    for (auto& plan : plans) {
      if (plan.setting.coverage_sign(op)) {
        plan.covered.push_back(op);
        placed = true;
        break;
      }
    }
    if (!placed) throw std::logic_error("fidelity term " + op.str() + " is not covered by any listed setting");
  }
  return plans;
}

}  // namespace

FidelityDecomposition fidelity_settings(NamedState state) {
  std::vector<MeasurementSetting> settings;
  ProductSum r;
  switch (state) {
    case NamedState::W3: {
      const int n = 3;
      settings = {uniform_setting(n, {0, 0, 1}), uniform_setting(n, composite_axis('Z', 'X', 1)),
                  uniform_setting(n, composite_axis('Z', 'X', -1)), uniform_setting(n, composite_axis('Z', 'Y', 1)),
                  uniform_setting(n, composite_axis('Z', 'Y', -1))};
      r = z_weight_sum(n, {-1, -3, -5, -7});
      for (char b : {'X', 'Y'}) {
        for (double sign : {1.0, -1.0}) r += identity_plus_composite(n, b, sign);
      }
      r *= 1.0 / 24;
      break;
    }
    case NamedState::W4: {
      const int n = 4;
      settings = {uniform_setting(n, {1, 0, 0}),
                  uniform_setting(n, {0, 1, 0}),
                  uniform_setting(n, {0, 0, 1}),
                  uniform_setting(n, composite_axis('Z', 'X', 1)),
                  uniform_setting(n, composite_axis('Z', 'X', -1)),
                  uniform_setting(n, composite_axis('Z', 'Y', 1)),
                  uniform_setting(n, composite_axis('Z', 'Y', -1))};
      r = z_weight_sum(n, {0, -2, -4, -6, -8});
      r += word_term("XXXX", -2);
      r += word_term("YYYY", -2);
      for (char b : {'X', 'Y'}) {
        for (double sign : {1.0, -1.0}) r += identity_plus_composite(n, b, sign);
      }
      r *= 1.0 / 64;
      break;
    }
    case NamedState::D4: {
      const int n = 4;
      settings = {uniform_setting(n, {1, 0, 0}),
                  uniform_setting(n, {0, 1, 0}),
                  uniform_setting(n, {0, 0, 1}),
                  uniform_setting(n, composite_axis('X', 'Y', 1)),
                  uniform_setting(n, composite_axis('X', 'Y', -1)),
                  uniform_setting(n, composite_axis('X', 'Z', 1)),
                  uniform_setting(n, composite_axis('X', 'Z', -1)),
                  uniform_setting(n, composite_axis('Y', 'Z', 1)),
                  uniform_setting(n, composite_axis('Y', 'Z', -1))};
      r = ProductSum(n);
      // 4B + 2(B+I) + 2(B-I) for B = X, Y; 16Z - (Z+I) - (Z-I).
      const std::pair<char, std::array<double, 2>> pauli_parts[] = {{'X', {4, 2}}, {'Y', {4, 2}}, {'Z', {16, -1}}};
      for (const auto& [b, w] : pauli_parts) {
        const QubitAxis axis = pauli_axis(b);
        ProductSum pure = tensor_power(n, {{1.0, axis}});
        pure *= w[0];
        r += pure;
        for (double sign : {1.0, -1.0}) {
          ProductSum shifted = tensor_power(n, {{1.0, axis}, {sign, QubitAxis{}}});
          shifted *= w[1];
          r += shifted;
        }
      }
      // (A + sign B)^{tensor 4} = 4 * [(A + sign B)/sqrt2]^{tensor 4}.
      const std::tuple<char, char, double> composite_parts[] = {{'X', 'Z', -2}, {'Y', 'Z', -2}, {'X', 'Y', 1}};
      for (const auto& [a, b, w] : composite_parts) {
        for (double sign : {1.0, -1.0}) {
          ProductSum c = tensor_power(n, {{1.0, composite_axis(a, b, sign)}});
          c *= 4.0 * w;
          r += c;
        }
      }
      r *= 1.0 / 96;
      break;
    }
    case NamedState::C4: {
      for (const char* w : {"ZZZZ", "ZZXX", "XXZZ", "YYZZ", "ZZYY", "XYYX", "YXXY", "XYXY", "YXYX"}) {
        settings.push_back(word_setting(w));
      }
      r = ProductSum(4);
      const std::pair<const char*, double> words[] = {
          {"IIII", 1}, {"ZZII", 1}, {"XXZI", 1},  {"IZXX", 1},  {"IIZZ", 1},  {"YYZI", -1}, {"ZIXX", 1}, {"ZZZZ", 1},
          {"XYYX", 1}, {"XXIZ", 1}, {"IZYY", -1}, {"YXYX", 1},  {"YYIZ", -1}, {"ZIYY", -1}, {"XYXY", 1}, {"YXXY", 1}};
      for (const auto& [w, c] : words) r += word_term(w, c);
      r *= 1.0 / 16;
      break;
    }
  }
  FidelityDecomposition out;
  out.settings = assign(settings, r);
  out.reconstruction = std::move(r);
  return out;
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho, const MeasurementSetting& s) {
  const int n = rho.num_qubits();
  if (s.num_qubits() != n) throw std::invalid_argument("setting and state have different qubit counts");
  // Rows of each single-qubit rotation are <+a| and <-a|.
  ComplexMatrix u = ComplexMatrix::Identity(1, 1);
  std::uint32_t identity_mask = 0;
  for (int q = 0; q < n; ++q) {
    const auto& a = s.axes()[static_cast<std::size_t>(q)];
    ComplexMatrix uq = ComplexMatrix::Identity(2, 2);
    if (a) {
      ComplexMatrix obs = (*a)[0] * pauli_matrix(PauliLetter::X) + (*a)[1] * pauli_matrix(PauliLetter::Y) +
                          (*a)[2] * pauli_matrix(PauliLetter::Z);
      const EigenDecomposition e = hermitian_eigen(obs);  // ascending: -1 then +1
      uq.row(0) = e.vectors.col(1).adjoint();
      uq.row(1) = e.vectors.col(0).adjoint();
    } else {
      identity_mask |= 1u << (n - 1 - q);
    }
    u = kron(u, uq);
  }
  const ComplexMatrix rotated = u * rho.matrix() * u.adjoint();
  const auto dim = static_cast<std::uint32_t>(rotated.rows());
  std::vector<double> p(dim, 0.0);
  for (std::uint32_t i = 0; i < dim; ++i) p[i & ~identity_mask] += std::max(0.0, rotated(i, i).real());
  return p;
}

std::string outcome_string(std::uint32_t index, int num_qubits) {
  std::string s(static_cast<std::size_t>(num_qubits), '+');
  for (int q = 0; q < num_qubits; ++q) {
    if (index & (1u << (num_qubits - 1 - q))) s[static_cast<std::size_t>(q)] = '-';
  }
  return s;
}

std::uint32_t outcome_index(std::string_view text) {
  if (text.empty() || text.size() > static_cast<std::size_t>(kMaxQubits)) {
    throw std::invalid_argument("outcome strings have 1..10 characters");
  }
  std::uint32_t index = 0;
  for (char c : text) {
    if (c != '+' && c != '-') throw std::invalid_argument("outcome \"" + std::string(text) + "\" must use + and -");
    index = (index << 1) | (c == '-' ? 1u : 0u);
  }
  return index;
}

CountTable sample_counts(const DensityMatrix& rho, const MeasurementSetting& s, std::uint64_t shots,
                         std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be positive");
  const std::vector<double> p = outcome_probabilities(rho, s);
  std::mt19937_64 rng(seed);
  CountTable t{s, std::vector<std::uint64_t>(p.size(), 0), shots};
  std::uint64_t remaining = shots;
  double mass = 0.0;
  for (double v : p) mass += v;
  for (std::size_t k = 0; k < p.size() && remaining > 0; ++k) {
    if (k + 1 == p.size()) {
      t.counts[k] = remaining;
      break;
    }
    const double q = mass > 0.0 ? std::clamp(p[k] / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::uint64_t> draw(remaining, q);
    const std::uint64_t c = draw(rng);
    t.counts[k] = c;
    remaining -= c;
    mass -= p[k];
  }
  return t;
}

namespace {

double signed_sum(const std::vector<double>& weights, const ProductOperator& op, double sign) {
  const int n = op.num_qubits();
  std::uint32_t mask = 0;
  for (int q = 0; q < n; ++q) {
    if (op.axes()[static_cast<std::size_t>(q)]) mask |= 1u << (n - 1 - q);
  }
  double v = 0.0;
  for (std::uint32_t o = 0; o < weights.size(); ++o) v += ((std::popcount(o & mask) & 1) ? -1.0 : 1.0) * weights[o];
  return sign * v;
}

}  // namespace

std::vector<ExpectationRecord> estimate_expectations(const std::vector<CountTable>& tables,
                                                     const std::vector<ProductOperator>& operators) {
  std::vector<ExpectationRecord> out;
  for (const auto& op : operators) {
    if (op.is_identity()) {
      out.push_back({op, 1.0, 0.0});
      continue;
    }
    bool found = false;
    for (const auto& t : tables) {
      const auto sign = t.setting.coverage_sign(op);
      if (!sign) continue;
      std::vector<double> freq(t.counts.size());
      for (std::size_t o = 0; o < t.counts.size(); ++o) {
        freq[o] = static_cast<double>(t.counts[o]) / static_cast<double>(t.shots);
      }
      const double v = signed_sum(freq, op, *sign);
      out.push_back({op, v, std::sqrt(std::max(0.0, 1.0 - v * v) / static_cast<double>(t.shots))});
      found = true;
      break;
    }
    if (!found) throw std::invalid_argument("operator " + op.str() + " is not covered by any count table");
  }
  return out;
}

ExpectationRecord exact_expectation(const DensityMatrix& rho, const MeasurementSetting& s, const ProductOperator& op) {
  const auto sign = s.coverage_sign(op);
  if (!sign) throw std::invalid_argument("operator " + op.str() + " is not covered by setting " + s.str());
  return {op, signed_sum(outcome_probabilities(rho, s), op, *sign), 0.0};
}

CombinedValue combine(const std::vector<ExpectationRecord>& records, const ProductSum& expr) {
  std::vector<std::pair<double, ProductOperator>> folded;
  for (const auto& r : records) folded.push_back(r.op.canonical());
  CombinedValue out;
  double variance = 0.0;
  for (const auto& [op, c] : expr.terms()) {
    if (op.is_identity()) {
      out.value += c;
      continue;
    }
    int matches = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!folded[i].second.approx_equal(op)) continue;
      ++matches;
      out.value += c * folded[i].first * records[i].value;
      variance += (c * records[i].sigma) * (c * records[i].sigma);
    }
    if (matches == 0) throw std::invalid_argument("no expectation record for operator " + op.str());
    if (matches > 1) throw std::invalid_argument("operator " + op.str() + " appears in several records");
  }
  out.sigma = std::sqrt(variance);
  return out;
}

CombinedValue combine(const std::vector<ExpectationRecord>& records, const ObservableExpr& expr) {
  return combine(records, ProductSum::from_expr(expr));
}

namespace {

class OperatorParser {
 public:
  OperatorParser(std::string_view text, int n) : n_(n) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (!std::isspace(static_cast<unsigned char>(text[i]))) chars_.push_back({text[i], i});
    }
    axes_.resize(static_cast<std::size_t>(n));
  }

  ProductOperator parse() {
    if (n_ < 1 || n_ > kMaxQubits) throw std::invalid_argument("operator qubit count must be in 1..10");
    if (chars_.empty()) fail(0, "empty operator");
    const bool word = std::all_of(chars_.begin(), chars_.end(), [](const auto& c) {
      return c.first == 'I' || c.first == 'X' || c.first == 'Y' || c.first == 'Z';
    });
    if (word) return parse_word();
    while (pos_ < chars_.size()) {
      const char c = peek();
      if (c == 'X' || c == 'Y' || c == 'Z') {
        parse_indexed();
      } else if (c == '[') {
        parse_group();
      } else {
        fail(position(), std::string("unexpected character '") + c + "'");
      }
    }
    return ProductOperator(axes_);
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& what) const {
    throw std::invalid_argument("operator syntax error at position " + std::to_string(at) + ": " + what);
  }
  std::size_t position() const { return pos_ < chars_.size() ? chars_[pos_].second : (chars_.empty() ? 0 : chars_.back().second + 1); }
  char peek() const { return pos_ < chars_.size() ? chars_[pos_].first : '\0'; }
  void expect(char c) {
    if (peek() != c) fail(position(), std::string("expected '") + c + "'");
    ++pos_;
  }
  int read_qubit() {
    const std::size_t at = position();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(at, "expected a qubit index");
    const int q = peek() - '0';
    ++pos_;
    if (q < 1 || q > n_) fail(at, "qubit index " + std::to_string(q) + " outside 1.." + std::to_string(n_));
    return q;
  }
  void set_axis(int q, const BlochAxis& a, std::size_t at) {
    auto& slot = axes_[static_cast<std::size_t>(q - 1)];
    if (slot) fail(at, "qubit " + std::to_string(q) + " assigned twice");
    slot = a;
  }

  ProductOperator parse_word() {
    if (chars_.size() == 1 && chars_[0].first == 'I') return ProductOperator::identity(n_);
    if (static_cast<int>(chars_.size()) != n_) {
      fail(0, "Pauli word has " + std::to_string(chars_.size()) + " letters, expected " + std::to_string(n_));
    }
    for (int q = 0; q < n_; ++q) {
      const char c = chars_[static_cast<std::size_t>(q)].first;
      if (c != 'I') axes_[static_cast<std::size_t>(q)] = axis_of(pauli_letter_from_char(c));
    }
    return ProductOperator(axes_);
  }

  void parse_indexed() {
    const std::size_t at = position();
    const char letter = peek();
    ++pos_;
    set_axis(read_qubit(), axis_of(pauli_letter_from_char(letter)), at);
  }

  char read_letter() {
    const char c = peek();
    if (c != 'X' && c != 'Y' && c != 'Z') fail(position(), "expected X, Y or Z");
    ++pos_;
    return c;
  }

  void parse_group() {
    const std::size_t at = position();
    expect('[');
    expect('(');
    const char a = read_letter();
    double sign = 0.0;
    if (peek() == '+') sign = 1.0;
    if (peek() == '-') sign = -1.0;
    if (sign == 0.0) fail(position(), "expected '+' or '-'");
    ++pos_;
    const char b = read_letter();
    expect(')');
    double scale = 1.0;
    if (peek() == '/') {
      ++pos_;
      expect('r');
      expect('2');
      scale = 1.0 / std::numbers::sqrt2;
    }
    expect(']');
    BlochAxis axis{0, 0, 0};
    const BlochAxis ea = axis_of(pauli_letter_from_char(a));
    const BlochAxis eb = axis_of(pauli_letter_from_char(b));
    for (std::size_t i = 0; i < 3; ++i) axis[i] = scale * (ea[i] + sign * eb[i]);
    if (std::abs(axis_norm(axis) - 1.0) > kAxisNormTolerance) fail(at, "composite axis is not a unit vector");
    if (peek() == 'x') {
      ++pos_;
      const std::size_t count_at = position();
      std::string digits;
      while (std::isdigit(static_cast<unsigned char>(peek()))) digits.push_back(chars_[pos_++].first);
      if (digits.empty()) fail(count_at, "expected a repeat count");
      if (std::stoi(digits) != n_) fail(count_at, "tensor power " + digits + " does not match n = " + std::to_string(n_));
      for (int q = 1; q <= n_; ++q) set_axis(q, axis, at);
    } else if (peek() == '_') {
      ++pos_;
      set_axis(read_qubit(), axis, at);
      while (peek() == ',') {
        ++pos_;
        set_axis(read_qubit(), axis, at);
      }
    } else {
      fail(position(), "expected 'x<n>' or '_<qubits>' after a composite factor");
    }
  }

  int n_;
  std::vector<std::pair<char, std::size_t>> chars_;
  std::size_t pos_ = 0;
  std::vector<QubitAxis> axes_;
};

}  // namespace

ProductOperator parse_operator(std::string_view text, int num_qubits) { return OperatorParser(text, num_qubits).parse(); }

std::vector<ExpectationRecord> relabel_logical_bits(const std::vector<ExpectationRecord>& records) {
  std::vector<ExpectationRecord> out;
  for (const auto& r : records) {
    std::vector<QubitAxis> axes = r.op.axes();
    for (auto& a : axes) {
      if (a) *a = BlochAxis{(*a)[0], -(*a)[1], -(*a)[2]};
    }
    out.push_back({ProductOperator(std::move(axes)), r.value, r.sigma});
  }
  return out;
}

}  // namespace edl
