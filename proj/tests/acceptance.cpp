// Acceptance suite: one PASS/FAIL line per criterion on stdout, details on stderr.
//
// Usage: edlkit_acceptance [--allow-fail=1,3]
// Exit status is 0 when every criterion passes or only allowed ones fail.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "edlkit/catalog.hpp"
#include "edlkit/measure.hpp"
#include "edlkit/measure_io.hpp"
#include "edlkit/parallel.hpp"
#include "edlkit/robustness.hpp"
#include "edlkit/sdp.hpp"

using namespace edl;

namespace {

// Tolerances, pinned.
constexpr double kAlphaTol = 1e-3;
constexpr double kPnoiseTol = 2e-3;
constexpr double kSolveSeconds = 2.0;
constexpr double kCatalogValueTol = 5e-4;
constexpr double kTraceTol = 1e-9;
constexpr double kCertEigTol = -1e-8;
constexpr double kCertResidualTol = 1e-7;
constexpr std::int64_t kBiseparableSamples = 100000;
constexpr double kBiseparableTol = -1e-6;
constexpr double kSchmidtTol = 1e-10;
constexpr double kProjectorPnoiseTol = 1e-3;
constexpr double kCrossoverTol = 0.02;
constexpr double kSweepSeconds = 5.0;
constexpr double kEdlSeconds = 30.0;
constexpr double kReconstructionTol = 1e-10;
constexpr double kFidelityTol = 0.002;
constexpr double kD4WitnessTol = 1.5e-3;
constexpr double kC4WitnessTol = 1e-3;
constexpr double kW3FidelityTol = 0.01;
constexpr std::uint64_t kShots = 100000;
constexpr int kRepetitions = 50;
constexpr double kSigmaBand = 5.0;
constexpr double kSigmaScalingTol = 0.10;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void detail(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void detail(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  std::fputs("    ", stderr);
  std::vfprintf(stderr, fmt, args);
  std::fputc('\n', stderr);
  va_end(args);
}

DensityMatrix pure(NamedState s) { return DensityMatrix::from_pure(make_state(s)); }

std::string label(const PaperWitnessEntry& e) { return paper_witness_label(e.state, e.id); }

// 1. Synthesis reproduces the published alpha and p_noise values.
bool criterion_1() {
  bool ok = true;
  double slowest = 0.0;
  for (const auto& e : paper_witness_entries()) {
    const SubsetFamily family = load_paper_witness(e.state, e.id).family;
    const auto t0 = std::chrono::steady_clock::now();
    const SynthesisResult r = synthesize(pure(e.state), family);
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    const double pn = r.p_noise.value_or(NAN);
    const bool good = std::abs(r.solution.alpha - e.alpha) <= kAlphaTol && std::abs(pn - e.p_noise) <= kPnoiseTol;
    ok = ok && good;
    detail("%-6s family %-16s alpha %.5f (published %.4f)  p_noise %.4f (published %.4f)  %.2fs %s", label(e).c_str(),
           family.str().c_str(), r.solution.alpha, e.alpha, pn, e.p_noise, dt, good ? "" : "<-- outside tolerance");
  }
  detail("slowest solve %.2fs (limit %.1fs)", slowest, kSolveSeconds);
  return ok && slowest < kSolveSeconds;
}

// 2. Catalog witnesses: value on target, trace, support inside family.
bool criterion_2() {
  bool ok = true;
  for (const auto& e : paper_witness_entries()) {
    const Witness w = load_paper_witness(e.state, e.id);
    const double value = evaluate(w.expr, make_state(e.state));
    const bool good = std::abs(value - e.alpha) <= kCatalogValueTol && std::abs(w.expr.trace() - 1.0) <= kTraceTol &&
                      w.family.covers(support(w.expr));
    ok = ok && good;
    detail("%-6s value %.5f (published %.4f) trace %.12f family %s %s", label(e).c_str(), value, e.alpha,
           w.expr.trace(), w.family.str().c_str(), good ? "" : "<--");
  }
  return ok;
}

// 3. Every bundled witness and both projectors admit PSD certificates.
bool criterion_3() {
  std::vector<std::pair<std::string, ObservableExpr>> witnesses;
  for (const auto& e : paper_witness_entries()) witnesses.emplace_back(label(e), load_paper_witness(e.state, e.id).expr);
  witnesses.emplace_back("D4_projector", projector_witness(make_state(NamedState::D4)).expr);
  witnesses.emplace_back("C4_projector", projector_witness(make_state(NamedState::C4)).expr);
  bool ok = true;
  for (const auto& [name, expr] : witnesses) {
    const double margin = witness_margin(expr);
    const auto certs = verify_witness(expr);
    bool good = certs.has_value();
    if (certs) {
      const double eig = certificate_min_eigenvalue(*certs);
      const double res = certificate_residual(expr, *certs);
      good = eig >= kCertEigTol && res <= kCertResidualTol;
      detail("%-13s margin %+.2e  min eig %+.2e  residual %.2e %s", name.c_str(), margin, eig, res, good ? "" : "<--");
    } else {
      detail("%-13s margin %+.2e  no certificate within -1e-8 <--", name.c_str(), margin);
    }
    ok = ok && good;
  }
  return ok;
}

// 4. No biseparable pure sample goes below zero.
bool criterion_4() {
  bool ok = true;
  std::uint64_t index = 0;
  for (const auto& e : paper_witness_entries()) {
    const Witness w = load_paper_witness(e.state, e.id);
    const double m = sample_biseparable_min(w.expr, kBiseparableSamples, derive_seed(4, index++));
    const bool good = m >= kBiseparableTol;
    ok = ok && good;
    detail("%-6s min over %lld samples %+.6f %s", label(e).c_str(), static_cast<long long>(kBiseparableSamples), m,
           good ? "" : "<--");
  }
  return ok;
}

// 5. Maximal Schmidt coefficients and the D4 projector tolerance.
bool criterion_5() {
  const std::pair<NamedState, double> expected[] = {
      {NamedState::W3, 2.0 / 3}, {NamedState::W4, 3.0 / 4}, {NamedState::D4, 2.0 / 3}, {NamedState::C4, 0.5}};
  bool ok = true;
  for (const auto& [s, v] : expected) {
    const double lambda = schmidt_lambda_max(make_state(s));
    ok = ok && std::abs(lambda - v) <= kSchmidtTol;
    detail("%s lambda_max %.12f (expected %.12f)", to_string(s).c_str(), lambda, v);
  }
  const double pn = projector_witness(make_state(NamedState::D4)).p_noise.value_or(NAN);
  detail("D4 projector p_noise %.5f (published 0.3556)", pn);
  return ok && std::abs(pn - 0.3556) <= kProjectorPnoiseTol;
}

// 6. Misalignment crossovers and the aligned end of the curve.
bool criterion_6() {
  const PureState d4 = make_state(NamedState::D4);
  const DensityMatrix rho = DensityMatrix::from_pure(d4);
  const Witness w5 = load_paper_witness(NamedState::D4, 5);
  const Witness proj = projector_witness(d4);
  const double all = crossover(w5, proj, rho, MisalignmentMode::AllAxes);
  const double y = crossover(w5, proj, rho, MisalignmentMode::YOnly);
  const auto t0 = std::chrono::steady_clock::now();
  const ToleranceCurve curve = tolerance_curve(w5, rho, default_theta_grid(), MisalignmentMode::AllAxes);
  const double dt = seconds_since(t0);
  const double start = curve.tolerances.front().value_or(NAN);
  const double published = paper_witness_entry(NamedState::D4, 5).p_noise;
  detail("crossover all_axes %.4f (0.26 +- 0.02)  y_only %.4f (0.29 +- 0.02)", all, y);
  detail("tolerance at theta=0: %.5f (published %.4f); %zu-point sweep %.2fs", start, published, curve.thetas.size(),
         dt);
  return std::abs(all - 0.26) <= kCrossoverTol && std::abs(y - 0.29) <= kCrossoverTol &&
         std::abs(start - published) <= kPnoiseTol && curve.thetas.size() == 121 && dt < kSweepSeconds;
}

// 7. Entanglement detection lengths.
bool criterion_7() {
  const std::pair<NamedState, int> expected[] = {
      {NamedState::W3, 2}, {NamedState::W4, 2}, {NamedState::D4, 2}, {NamedState::C4, 3}};
  bool ok = true;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [s, l] : expected) {
    const int got = edl_search(pure(s));
    ok = ok && got == l;
    detail("%s edl %d (expected %d)", to_string(s).c_str(), got, l);
  }
  const double dt = seconds_since(t0);
  detail("total %.2fs", dt);
  return ok && dt < kEdlSeconds;
}

// 8. Fidelity decompositions reconstruct the projectors.
bool criterion_8() {
  bool ok = true;
  for (NamedState s : {NamedState::W3, NamedState::W4, NamedState::D4, NamedState::C4}) {
    const FidelityDecomposition f = fidelity_settings(s);
    const PureState psi = make_state(s);
    const double err =
        (f.reconstruction.to_expr().to_matrix() - psi.amplitudes() * psi.amplitudes().adjoint()).norm();
    ok = ok && err <= kReconstructionTol;
    detail("%s %zu settings, Frobenius error %.2e", to_string(s).c_str(), f.settings.size(), err);
  }
  return ok;
}

CombinedValue ingest(const char* table, int n, const ProductSum& target, bool relabel) {
  const auto path = std::filesystem::path(EDLKIT_DATA_DIR) / "fixtures" / (std::string(table) + ".csv");
  auto records = read_expectations_csv(path, n);
  if (relabel) records = relabel_logical_bits(records);
  std::vector<ExpectationRecord> used;
  for (const auto& r : records) {
    const auto folded = r.op.canonical().second;
    for (const auto& [op, c] : target.terms()) {
      if (!op.is_identity() && op.approx_equal(folded)) {
        used.push_back(r);
        break;
      }
    }
  }
  return combine(used, target);
}

ProductSum witness_sum(NamedState s, int id) { return ProductSum::from_expr(load_paper_witness(s, id).expr); }

// 9. Ingestion of the transcribed expectation tables.
bool criterion_9() {
  bool ok = true;
  const CombinedValue fd = ingest("d4a", 4, fidelity_settings(NamedState::D4).reconstruction, false);
  ok = ok && std::abs(fd.value - 0.974) <= kFidelityTol;
  detail("D4a fidelity %.4f +- %.4f (published 0.974)", fd.value, fd.sigma);
  const double d4_published[] = {-0.00582, -0.00850, -0.0107, -0.0192, -0.0274};
  for (int id = 1; id <= 5; ++id) {
    const CombinedValue v = ingest("d4a", 4, witness_sum(NamedState::D4, id), false);
    const bool good = std::abs(v.value - d4_published[id - 1]) <= kD4WitnessTol;
    ok = ok && good;
    detail("D4a W%d %.5f +- %.5f (published %.5f) %s", id, v.value, v.sigma, d4_published[id - 1], good ? "" : "<--");
  }
  const CombinedValue fc = ingest("c4a", 4, fidelity_settings(NamedState::C4).reconstruction, false);
  const CombinedValue wc = ingest("c4a", 4, witness_sum(NamedState::C4, 4), false);
  ok = ok && std::abs(fc.value - 0.968) <= kFidelityTol && std::abs(wc.value + 0.0573) <= kC4WitnessTol;
  detail("C4a fidelity %.4f (published 0.968), W4 %.5f (published -0.0573)", fc.value, wc.value);
  const CombinedValue fw = ingest("w3a", 3, fidelity_settings(NamedState::W3).reconstruction, true);
  ok = ok && std::abs(fw.value - 0.982) <= kW3FidelityTol;
  detail("W3a fidelity %.4f +- %.4f (published 0.982, logical bits relabeled)", fw.value, fw.sigma);
  return ok;
}

CombinedValue simulate_once(const DensityMatrix& rho, const ProductSum& target, std::uint64_t shots,
                            std::uint64_t seed) {
  std::vector<CountTable> tables;
  std::uint64_t i = 0;
  for (const auto& plan : plan_settings(target)) tables.push_back(sample_counts(rho, plan.setting, shots, derive_seed(seed, i++)));
  std::vector<ProductOperator> ops;
  for (const auto& [op, c] : target.terms()) {
    if (!op.is_identity()) ops.push_back(op);
  }
  return combine(estimate_expectations(tables, ops), target);
}

// 10. Simulated statistics on the exact Dicke state.
bool criterion_10() {
  const DensityMatrix rho = pure(NamedState::D4);
  bool ok = true;
  for (int id = 1; id <= 5; ++id) {
    const ProductSum target = witness_sum(NamedState::D4, id);
    const double exact = evaluate(target.to_expr(), rho);
    double worst = 0.0;
    for (int rep = 0; rep < kRepetitions; ++rep) {
      const CombinedValue v = simulate_once(rho, target, kShots, derive_seed(1000 + id, rep));
      worst = std::max(worst, std::abs(v.value - exact) / v.sigma);
    }
    ok = ok && worst <= kSigmaBand;
    detail("D4 W%d exact %.5f, worst deviation over %d runs %.2f sigma", id, exact, kRepetitions, worst);
  }
  const ProductSum w5 = witness_sum(NamedState::D4, 5);
  const double s4 = simulate_once(rho, w5, 10000, 77).sigma;
  const double s6 = simulate_once(rho, w5, 1000000, 77).sigma;
  const double ratio = s4 / s6;
  detail("sigma(1e4) / sigma(1e6) = %.3f (expected 10)", ratio);
  return ok && std::abs(ratio / 10.0 - 1.0) <= kSigmaScalingTol;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> allowed;
  for (int i = 1; i < argc; ++i) {
    const char* prefix = "--allow-fail=";
    if (std::strncmp(argv[i], prefix, std::strlen(prefix)) != 0) {
      std::fprintf(stderr, "unknown argument %s\n", argv[i]);
      return 2;
    }
    std::stringstream list(argv[i] + std::strlen(prefix));
    std::string item;
    while (std::getline(list, item, ',')) allowed.insert(std::stoi(item));
  }

  const std::function<bool()> criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  const char* names[] = {"SDP regression",       "catalog regression",     "witness validity",
                         "biseparable sampling", "projector constants",    "misalignment crossovers",
                         "EDL search",           "fidelity decompositions", "ingestion regression",
                         "simulation statistics"};
  int unexpected = 0;
  for (int c = 0; c < 10; ++c) {
    std::fprintf(stderr, "criterion %d: %s\n", c + 1, names[c]);
    bool pass = false;
    try {
      pass = criteria[c]();
    } catch (const std::exception& e) {
      detail("exception: %s", e.what());
    }
    std::printf("%s %2d %s\n", pass ? "PASS" : "FAIL", c + 1, names[c]);
    std::fflush(stdout);
    if (!pass && !allowed.count(c + 1)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
