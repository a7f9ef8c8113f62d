#include "edlkit/robustness.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "edlkit/parallel.hpp"

namespace edl {

MisalignmentMode parse_misalignment_mode(std::string_view text) {
  if (text == "all" || text == "all_axes") return MisalignmentMode::AllAxes;
  if (text == "y" || text == "y_only") return MisalignmentMode::YOnly;
  throw std::invalid_argument("unknown misalignment mode \"" + std::string(text) + "\" (use all or y_only)");
}

std::string to_string(MisalignmentMode mode) { return mode == MisalignmentMode::AllAxes ? "all_axes" : "y_only"; }

bool MisalignmentSpec::out_of_sweep_range() const { return theta < 0.0 || theta > std::numbers::pi / 2; }

ObservableExpr misalign_expr(const ObservableExpr& expr, const MisalignmentSpec& spec) {
  const double c = std::cos(spec.theta), s = std::sin(spec.theta);
  const bool all = spec.mode == MisalignmentMode::AllAxes;
  // Rows: image of I, X, Y, Z in the (I, X, Y, Z) basis.
  const QubitOperator images[4] = {
      {1, 0, 0, 0},
      all ? QubitOperator{0, c, s, 0} : QubitOperator{0, 1, 0, 0},
      {0, 0, c, s},
      all ? QubitOperator{0, s, 0, c} : QubitOperator{0, 0, 0, 1},
  };
  ObservableExpr out(expr.num_qubits());
  for (const auto& [p, coeff] : expr.terms()) {
    std::vector<QubitOperator> factors;
    factors.reserve(static_cast<std::size_t>(p.num_qubits()));
    for (PauliLetter l : p.letters()) factors.push_back(images[static_cast<int>(l)]);
    ObservableExpr term = ObservableExpr::product(factors);
    term *= coeff;
    out += term;
  }
  return out;
}

std::vector<double> theta_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) throw std::invalid_argument("theta grid needs step > 0 and stop >= start");
  std::vector<double> grid;
  for (long i = 0;; ++i) {
    const double t = start + static_cast<double>(i) * step;
    if (t > stop + 1e-9) break;
    grid.push_back(t);
  }
  return grid;
}

std::vector<double> parse_theta_grid(std::string_view text) {
  std::vector<double> parts;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("bad theta grid \"" + std::string(text) + "\" (expected start:stop:step)");
    }
  }
  if (parts.size() != 3) throw std::invalid_argument("theta grid must be start:stop:step");
  return theta_grid(parts[0], parts[1], parts[2]);
}

std::vector<double> default_theta_grid() { return theta_grid(0.0, 0.6, 0.005); }

namespace {

std::optional<double> tolerance_at(const Witness& w, const DensityMatrix& rho, double theta, MisalignmentMode mode) {
  return p_noise(misalign_expr(w.expr, {theta, mode}), rho);
}

ToleranceCurve curve_impl(const Witness& w, const DensityMatrix& rho, const std::vector<double>& grid,
                          MisalignmentMode mode, bool parallel) {
  if (grid.empty()) throw std::invalid_argument("theta grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("theta grid must be ascending");
  }
  ToleranceCurve curve;
  curve.thetas = grid;
  curve.tolerances.resize(grid.size());
  curve.witness_label = w.label;
  const auto count = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for if (parallel) schedule(dynamic) num_threads(max_threads())
  for (std::int64_t i = 0; i < count; ++i) {
    curve.tolerances[static_cast<std::size_t>(i)] = tolerance_at(w, rho, grid[static_cast<std::size_t>(i)], mode);
  }
  return curve;
}

}  // namespace

ToleranceCurve tolerance_curve(const Witness& w, const DensityMatrix& rho, const std::vector<double>& grid,
                               MisalignmentMode mode) {
  return curve_impl(w, rho, grid, mode, true);
}

ToleranceCurve tolerance_curve_serial(const Witness& w, const DensityMatrix& rho, const std::vector<double>& grid,
                                      MisalignmentMode mode) {
  return curve_impl(w, rho, grid, mode, false);
}

double tolerance_difference(const Witness& a, const Witness& b, const DensityMatrix& rho, double theta,
                            MisalignmentMode mode) {
  return tolerance_at(a, rho, theta, mode).value_or(0.0) - tolerance_at(b, rho, theta, mode).value_or(0.0);
}

double crossover(const Witness& a, const Witness& b, const DensityMatrix& rho, MisalignmentMode mode) {
  constexpr int kScanPoints = 157;  // roughly 0.005 rad spacing on (0, pi/4)
  const double hi_end = std::numbers::pi / 4;
  std::vector<double> thetas(kScanPoints), diffs(kScanPoints);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (int i = 0; i < kScanPoints; ++i) {
    thetas[static_cast<std::size_t>(i)] = hi_end * (i + 1) / (kScanPoints + 1);
    diffs[static_cast<std::size_t>(i)] = tolerance_difference(a, b, rho, thetas[static_cast<std::size_t>(i)], mode);
  }
  int changes = 0;
  std::size_t bracket = 0;
  for (std::size_t i = 1; i < diffs.size(); ++i) {
    if ((diffs[i - 1] < 0.0) != (diffs[i] < 0.0)) {
      ++changes;
      bracket = i;
    }
  }
  if (changes == 0) throw std::domain_error("tolerance curves do not cross on (0, pi/4)");
  if (changes > 1) throw std::domain_error("tolerance curves cross more than once on (0, pi/4)");
  double lo = thetas[bracket - 1], hi = thetas[bracket];
  const bool lo_negative = diffs[bracket - 1] < 0.0;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    if ((tolerance_difference(a, b, rho, mid, mode) < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string curves_to_csv(const ToleranceCurve& a, const ToleranceCurve& b) {
  if (a.thetas != b.thetas) throw std::invalid_argument("curves use different theta grids");
  std::ostringstream out;
  out.precision(6);
  out << "theta,tolerance_a,tolerance_b\n";
  for (std::size_t i = 0; i < a.thetas.size(); ++i) {
    out << a.thetas[i] << ',';
    if (a.tolerances[i]) out << *a.tolerances[i];
    out << ',';
    if (b.tolerances[i]) out << *b.tolerances[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace edl
