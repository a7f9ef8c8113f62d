// edlkit command-line front end.
//
// Exit codes: 0 success, 2 input error, 3 not detected, 4 solver failure.

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edlkit/catalog.hpp"
#include "edlkit/measure.hpp"
#include "edlkit/measure_io.hpp"
#include "edlkit/parallel.hpp"
#include "edlkit/robustness.hpp"
#include "edlkit/sdp.hpp"
#include "edlkit/witness_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNotDetected = 3;
constexpr int kExitSolver = 4;

// Thrown for bad user input that is not already an std::invalid_argument.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- configuration

struct RunConfig {
  edl::SolverTolerances tol;
  std::string theta = "0:0.6:0.005";
  std::uint64_t shots = 3000;
  std::uint64_t seed = 20240229;
  std::string format = "csv";
  int threads = 0;
};

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto strip = [](std::string s) {
      const auto l = s.find_first_not_of(" \t\r");
      if (l == std::string::npos) return std::string();
      return s.substr(l, s.find_last_not_of(" \t\r") - l + 1);
    };
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return kv;
}

template <class T>
T convert(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (in.fail() || !in.eof()) throw InputError("config key " + key + ": bad value \"" + text + "\"");
  return v;
}

// Flag-bound options; a flag counts as set only when present on the command line.
struct ConfigOptions {
  std::string config_path;
  RunConfig flags;
  std::map<std::string, CLI::Option*> bound;

  void add_to(CLI::App& app, bool solver, bool sweep, bool sampling) {
    app.add_option("--config", config_path, "key=value file (keys: gap, feas, max_iter, theta, shots, seed, format, "
                                            "threads); flags take precedence")
        ->check(CLI::ExistingFile);
    bound["format"] = app.add_option("--format", flags.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    bound["threads"] = app.add_option("--threads", flags.threads, "cap on worker threads (0 = EDLKIT_THREADS or all)");
    if (solver) {
      bound["gap"] = app.add_option("--gap", flags.tol.gap, "relative duality gap tolerance");
      bound["feas"] = app.add_option("--feas", flags.tol.feas, "dual infeasibility tolerance");
      bound["max_iter"] = app.add_option("--max-iter", flags.tol.max_iter, "interior-point iteration cap");
    }
    if (sweep) bound["theta"] = app.add_option("--theta", flags.theta, "sweep grid start:stop:step");
    if (sampling) {
      bound["shots"] = app.add_option("--shots", flags.shots, "events per setting");
      bound["seed"] = app.add_option("--seed", flags.seed, "64-bit seed");
    }
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path.empty()) {
      for (const auto& [key, value] : read_config_file(config_path)) {
        if (key == "gap") cfg.tol.gap = convert<double>(key, value);
        else if (key == "feas") cfg.tol.feas = convert<double>(key, value);
        else if (key == "max_iter") cfg.tol.max_iter = convert<int>(key, value);
        else if (key == "theta") cfg.theta = value;
        else if (key == "shots") cfg.shots = convert<std::uint64_t>(key, value);
        else if (key == "seed") cfg.seed = convert<std::uint64_t>(key, value);
        else if (key == "format") cfg.format = value;
        else if (key == "threads") cfg.threads = convert<int>(key, value);
        else throw InputError("unknown config key \"" + key + "\"");
      }
    }
    auto set = [&](const char* key) {
      const auto it = bound.find(key);
      return it != bound.end() && it->second->count() > 0;
    };
    if (set("gap")) cfg.tol.gap = flags.tol.gap;
    if (set("feas")) cfg.tol.feas = flags.tol.feas;
    if (set("max_iter")) cfg.tol.max_iter = flags.tol.max_iter;
    if (set("theta")) cfg.theta = flags.theta;
    if (set("shots")) cfg.shots = flags.shots;
    if (set("seed")) cfg.seed = flags.seed;
    if (set("format")) cfg.format = flags.format;
    if (set("threads")) cfg.threads = flags.threads;
    if (cfg.format != "csv" && cfg.format != "json") throw InputError("format must be csv or json");
    if (cfg.shots < 1) throw InputError("shots must be positive");
    if (cfg.threads > 0) edl::set_max_threads(cfg.threads);
    return cfg;
  }
};

// ---------------------------------------------------------------- output

using Field = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

class Report {
 public:
  Report& add(std::string key, Field value) {
    fields_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Report& add_optional(std::string key, const std::optional<double>& v) {
    return add(std::move(key), v ? Field(*v) : Field(std::monostate{}));
  }

  json to_json() const {
    json j = json::object();
    for (const auto& [k, v] : fields_) {
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) j[k] = nullptr;
            else j[k] = x;
          },
          v);
    }
    return j;
  }

  std::string to_csv() const {
    std::string header, row;
    for (const auto& [k, v] : fields_) {
      if (!header.empty()) {
        header += ',';
        row += ',';
      }
      header += k;
      row += edl::csv_field(text(v));
    }
    return header + "\n" + row + "\n";
  }

  static std::string text(const Field& v) {
    return std::visit(
        [](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, std::monostate>) return "";
          else if constexpr (std::is_same_v<T, double>) return six_digits(x);
          else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
          else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
          else return x;
        },
        v);
  }

  static std::string six_digits(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
  }

 private:
  std::vector<std::pair<std::string, Field>> fields_;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot write " + out_path);
  out << text;
}

void emit_report(const Report& r, const RunConfig& cfg, const std::string& out_path = {}) {
  emit(cfg.format == "json" ? r.to_json().dump(2) + "\n" : r.to_csv(), out_path);
}

// ---------------------------------------------------------------- inputs

edl::DensityMatrix load_state(const std::string& name, const std::string& file) {
  if (!name.empty() && !file.empty()) throw InputError("give either --state or --state-file, not both");
  if (!name.empty()) return edl::DensityMatrix::from_pure(edl::make_state(edl::parse_named_state(name)));
  if (file.empty()) throw InputError("a state is required (--state w3|w4|d4|c4 or --state-file)");
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(file + ": " + e.what());
  }
  if (j.contains("matrix")) return edl::DensityMatrix(edl::matrix_from_json(j.at("matrix")));
  if (j.contains("amplitudes")) {
    const edl::ComplexMatrix column = edl::matrix_from_json(json::array({j.at("amplitudes")}));
    edl::ComplexVector amps = column.row(0).transpose();
    return edl::DensityMatrix::from_pure(edl::PureState::normalized(amps));
  }
  throw InputError(file + ": expected a \"matrix\" or \"amplitudes\" field");
}

std::optional<std::pair<edl::NamedState, int>> parse_catalog_label(const std::string& text) {
  // "D4_W5", case-insensitive
  const auto us = text.find('_');
  if (us == std::string::npos || us + 2 > text.size()) return std::nullopt;
  if (std::toupper(static_cast<unsigned char>(text[us + 1])) != 'W') return std::nullopt;
  try {
    const edl::NamedState st = edl::parse_named_state(text.substr(0, us));
    std::size_t used = 0;
    const int id = std::stoi(text.substr(us + 2), &used);
    if (used != text.size() - us - 2) return std::nullopt;
    return std::make_pair(st, id);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// A witness file, a catalog label such as D4_W5, or "projector" (needs a pure target).
edl::Witness load_witness(const std::string& spec, const std::optional<edl::NamedState>& target) {
  if (spec.empty()) throw InputError("a witness is required");
  if (spec == "projector") {
    if (!target) throw InputError("the projector witness needs a named --state");
    edl::Witness w = edl::projector_witness(edl::make_state(*target));
    w.target_state = target;
    return w;
  }
  if (fs::exists(spec)) return edl::read_witness_file(spec);
  if (const auto label = parse_catalog_label(spec)) return edl::load_paper_witness(label->first, label->second);
  throw InputError("witness \"" + spec + "\" is neither a file nor a catalog label like D4_W5");
}

std::optional<edl::NamedState> optional_state(const std::string& name) {
  if (name.empty()) return std::nullopt;
  return edl::parse_named_state(name);
}

json certificates_json(const std::vector<edl::BipartitionCertificate>& certs) {
  json out = json::array();
  for (const auto& c : certs) {
    out.push_back({{"cut", c.cut.str()}, {"p", edl::matrix_to_json(c.p)}, {"q", edl::matrix_to_json(c.q)}});
  }
  return out;
}

// ---------------------------------------------------------------- commands

struct SynthArgs {
  std::string state, state_file, family, out;
  ConfigOptions config;
};

int cmd_synth(const SynthArgs& a) {
  const RunConfig cfg = a.config.resolve();
  const edl::DensityMatrix rho = load_state(a.state, a.state_file);
  const edl::SubsetFamily family = edl::SubsetFamily::parse(a.family);
  const edl::SynthesisResult r = edl::synthesize(rho, family, cfg.tol);
  const auto& sol = r.solution;
  const double residual = edl::certificate_residual(sol.witness_expr, sol.certificates);
  const double min_eig = edl::certificate_min_eigenvalue(sol.certificates);

  if (!a.out.empty()) {
    edl::Witness w;
    w.expr = sol.witness_expr;
    w.family = family;
    w.alpha = sol.alpha;
    w.p_noise = r.p_noise;
    w.label = "synth:" + family.str();
    if (!a.state.empty()) w.target_state = edl::parse_named_state(a.state);
    json j = edl::witness_to_json(w);
    j["certificates"] = certificates_json(sol.certificates);
    j["certificate_residual"] = residual;
    j["certificate_min_eigenvalue"] = min_eig;
    std::ofstream out(a.out);
    if (!out) throw InputError("cannot write " + a.out);
    out << j.dump(2) << '\n';
  }

  Report rep;
  rep.add("family", family.str())
      .add("alpha", sol.alpha)
      .add("detected", r.detected)
      .add_optional("p_noise", r.p_noise)
      .add("certificate_residual", residual)
      .add("certificate_min_eigenvalue", min_eig)
      .add("iterations", static_cast<std::int64_t>(sol.iterations));
  emit_report(rep, cfg);
  return r.detected ? kExitOk : kExitNotDetected;
}

struct EvalArgs {
  std::string witness, state, state_file;
  double noise = 0.0;
  ConfigOptions config;
};

int cmd_eval(const EvalArgs& a) {
  const RunConfig cfg = a.config.resolve();
  const auto target = optional_state(a.state);
  const edl::Witness w = load_witness(a.witness, target);
  const edl::DensityMatrix clean = load_state(a.state, a.state_file);
  if (clean.num_qubits() != w.expr.num_qubits()) throw InputError("witness and state have different qubit counts");
  const double value = edl::evaluate(w.expr, edl::white_noise(clean, a.noise));
  Report rep;
  rep.add("witness", w.label).add("noise", a.noise).add("value", value).add_optional("p_noise", edl::p_noise(w.expr, clean));
  emit_report(rep, cfg);
  return value < 0 ? kExitOk : kExitNotDetected;
}

struct RobustnessArgs {
  std::string witness, compare = "projector", state, mode = "all", out, summary;
  ConfigOptions config;
};

int cmd_robustness(const RobustnessArgs& a) {
  const RunConfig cfg = a.config.resolve();
  auto target = optional_state(a.state);
  edl::Witness wa = load_witness(a.witness, target);
  if (!target) target = wa.target_state;
  if (!target) throw InputError("no target state: pass --state or use a witness with a target_state");
  const edl::Witness wb = load_witness(a.compare, target);
  if (wa.label.empty()) wa.label = "a";
  const edl::DensityMatrix rho = edl::DensityMatrix::from_pure(edl::make_state(*target));
  const edl::MisalignmentMode mode = edl::parse_misalignment_mode(a.mode);
  const std::vector<double> grid = edl::parse_theta_grid(cfg.theta);

  const edl::ToleranceCurve ca = edl::tolerance_curve(wa, rho, grid, mode);
  const edl::ToleranceCurve cb = edl::tolerance_curve(wb, rho, grid, mode);
  std::optional<double> cross;
  std::string cross_note;
  try {
    cross = edl::crossover(wa, wb, rho, mode);
  } catch (const std::domain_error& e) {
    cross_note = e.what();
  }

  json summary = {{"witness_a", wa.label},   {"witness_b", wb.label},   {"state", edl::to_string(*target)},
                  {"mode", edl::to_string(mode)}, {"theta", cfg.theta},
                  {"crossover", cross ? json(*cross) : json(nullptr)}};
  if (!cross_note.empty()) summary["crossover_note"] = cross_note;

  if (cfg.format == "json") {
    json curve = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
      curve.push_back({{"theta", grid[i]}, {"tolerance_a", opt(ca.tolerances[i])}, {"tolerance_b", opt(cb.tolerances[i])}});
    }
    summary["curve"] = curve;
    emit(summary.dump(2) + "\n", a.out);
  } else {
    emit(edl::curves_to_csv(ca, cb), a.out);
    if (!a.summary.empty()) {
      std::ofstream s(a.summary);
      if (!s) throw InputError("cannot write " + a.summary);
      s << summary.dump(2) << '\n';
    }
    std::cerr << "crossover: " << (cross ? Report::six_digits(*cross) : "none (" + cross_note + ")") << '\n';
  }
  return kExitOk;
}

struct EdlArgs {
  std::string state, state_file;
  ConfigOptions config;
};

int cmd_edl(const EdlArgs& a) {
  const RunConfig cfg = a.config.resolve();
  const edl::DensityMatrix rho = load_state(a.state, a.state_file);
  const int l = edl::edl_search(rho, cfg.tol);
  const int n = rho.num_qubits();
  Report rep;
  rep.add("n", static_cast<std::int64_t>(n))
      .add("edl", l <= n ? Field(static_cast<std::int64_t>(l)) : Field(std::monostate{}))
      .add("detected", l <= n);
  emit_report(rep, cfg);
  return l <= n ? kExitOk : kExitNotDetected;
}

// Settings and target expression for simulate / estimate.
struct Target {
  edl::ProductSum expr;
  std::vector<edl::MeasurementSetting> settings;
  std::string label;
  std::optional<edl::NamedState> state;
};

Target resolve_target(const std::string& witness, const std::string& fidelity, const std::string& state) {
  if (witness.empty() == fidelity.empty()) throw InputError("give exactly one of --witness and --fidelity");
  Target t;
  if (!fidelity.empty()) {
    const edl::NamedState st = edl::parse_named_state(fidelity);
    edl::FidelityDecomposition f = edl::fidelity_settings(st);
    t.expr = f.reconstruction;
    for (auto& s : f.settings) t.settings.push_back(s.setting);
    t.label = "fidelity:" + edl::to_string(st);
    t.state = st;
    return t;
  }
  const auto named = optional_state(state);
  const edl::Witness w = load_witness(witness, named);
  t.expr = edl::ProductSum::from_expr(w.expr);
  for (auto& p : edl::plan_settings(t.expr)) t.settings.push_back(p.setting);
  t.label = w.label;
  t.state = named ? named : w.target_state;
  return t;
}

std::vector<edl::ProductOperator> non_identity_ops(const edl::ProductSum& s) {
  std::vector<edl::ProductOperator> ops;
  for (const auto& [op, c] : s.terms()) {
    if (!op.is_identity()) ops.push_back(op);
  }
  return ops;
}

struct SimulateArgs {
  std::string witness, fidelity, state, state_file, counts_dir;
  double noise = 0.0;
  ConfigOptions config;
};

int cmd_simulate(const SimulateArgs& a) {
  const RunConfig cfg = a.config.resolve();
  const Target t = resolve_target(a.witness, a.fidelity, a.state);
  edl::DensityMatrix rho = [&] {
    if (!a.state.empty() || !a.state_file.empty()) return load_state(a.state, a.state_file);
    if (!t.state) throw InputError("no state to simulate: pass --state or --state-file");
    return edl::DensityMatrix::from_pure(edl::make_state(*t.state));
  }();
  rho = edl::white_noise(rho, a.noise);
  if (rho.num_qubits() != t.expr.num_qubits()) throw InputError("target and state have different qubit counts");

  std::vector<edl::CountTable> tables(t.settings.size());
  std::vector<std::uint64_t> seeds(t.settings.size());
  for (std::size_t i = 0; i < t.settings.size(); ++i) seeds[i] = edl::derive_seed(cfg.seed, i);
#pragma omp parallel for schedule(dynamic) num_threads(edl::max_threads())
  for (std::size_t i = 0; i < t.settings.size(); ++i) {
    tables[i] = edl::sample_counts(rho, t.settings[i], cfg.shots, seeds[i]);
  }
  if (!a.counts_dir.empty()) edl::write_count_directory(a.counts_dir, tables, cfg.seed, seeds);

  const auto records = edl::estimate_expectations(tables, non_identity_ops(t.expr));
  const edl::CombinedValue v = edl::combine(records, t.expr);
  Report rep;
  rep.add("target", t.label)
      .add("value", v.value)
      .add("sigma", v.sigma)
      .add("exact", edl::evaluate(t.expr.to_expr(), rho))
      .add("settings", static_cast<std::int64_t>(t.settings.size()))
      .add("shots", static_cast<std::int64_t>(cfg.shots))
      .add("seed", std::to_string(cfg.seed))
      .add("generator", std::string("mt19937_64"));
  emit_report(rep, cfg);
  return kExitOk;
}

struct EstimateArgs {
  std::string expectations, counts, witness, fidelity, state;
  int qubits = 0;
  bool relabel = false;
  ConfigOptions config;
};

int cmd_estimate(const EstimateArgs& a) {
  const RunConfig cfg = a.config.resolve();
  if (a.expectations.empty() == a.counts.empty()) throw InputError("give exactly one of --expectations and --counts");
  const Target t = resolve_target(a.witness, a.fidelity, a.state);
  const int n = a.qubits > 0 ? a.qubits : t.expr.num_qubits();
  std::vector<edl::ExpectationRecord> records;
  if (!a.expectations.empty()) {
    records = edl::read_expectations_csv(fs::path(a.expectations), n);
  } else {
    records = edl::estimate_expectations(edl::read_count_directory(a.counts), non_identity_ops(t.expr));
  }
  if (a.relabel) records = edl::relabel_logical_bits(records);
  // Tables carry extra rows; keep only those the target needs.
  std::vector<edl::ExpectationRecord> used;
  for (const auto& r : records) {
    const auto folded = r.op.canonical().second;
    for (const auto& [op, c] : t.expr.terms()) {
      if (!op.is_identity() && op.approx_equal(folded)) {
        used.push_back(r);
        break;
      }
    }
  }
  const edl::CombinedValue v = edl::combine(used, t.expr);
  Report rep;
  rep.add("target", t.label)
      .add("value", v.value)
      .add("sigma", v.sigma)
      .add("records", static_cast<std::int64_t>(used.size()));
  emit_report(rep, cfg);
  return kExitOk;
}

struct VerifyArgs {
  std::string witness, state;
  ConfigOptions config;
};

int cmd_verify(const VerifyArgs& a) {
  const RunConfig cfg = a.config.resolve();
  const edl::Witness w = load_witness(a.witness, optional_state(a.state));
  const double margin = edl::witness_margin(w.expr, cfg.tol);
  const auto certs = edl::verify_witness(w.expr, cfg.tol);
  Report rep;
  rep.add("witness", w.label).add("valid", certs.has_value()).add("margin", margin);
  if (certs) {
    rep.add("certificate_residual", edl::certificate_residual(w.expr, *certs))
        .add("certificate_min_eigenvalue", edl::certificate_min_eigenvalue(*certs));
  }
  emit_report(rep, cfg);
  return certs ? kExitOk : kExitNotDetected;
}

struct CatalogArgs {
  std::string out;
  ConfigOptions config;
};

int cmd_catalog_export(const CatalogArgs& a) {
  a.config.resolve();
  fs::create_directories(a.out);
  for (const auto& e : edl::paper_witness_entries()) {
    const std::string label = edl::paper_witness_label(e.state, e.id);
    std::string file = label + ".json";
    for (char& c : file) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    edl::write_witness_file(fs::path(a.out) / file, edl::load_paper_witness(e.state, e.id));
  }
  std::cerr << "wrote " << edl::paper_witness_entries().size() << " witnesses to " << a.out << '\n';
  return kExitOk;
}

int cmd_catalog_list(const CatalogArgs& a) {
  const RunConfig cfg = a.config.resolve();
  if (cfg.format == "json") {
    json out = json::array();
    for (const auto& e : edl::paper_witness_entries()) {
      out.push_back({{"label", edl::paper_witness_label(e.state, e.id)}, {"alpha", e.alpha}, {"p_noise", e.p_noise},
                     {"family", edl::support(edl::load_paper_witness(e.state, e.id).expr).str()}});
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "label,alpha,p_noise,family\n";
  for (const auto& e : edl::paper_witness_entries()) {
    std::cout << edl::paper_witness_label(e.state, e.id) << ',' << Report::six_digits(e.alpha) << ','
              << Report::six_digits(e.p_noise) << ','
              << edl::csv_field(edl::support(edl::load_paper_witness(e.state, e.id).expr).str()) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EDL witness toolkit"};
  app.require_subcommand(1);
  std::function<int()> run;

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "synthesize an EDL witness by semidefinite programming");
  s->add_option("--state", synth.state, "named state: w3, w4, d4, c4");
  s->add_option("--state-file", synth.state_file, "JSON with \"matrix\" or \"amplitudes\" ([re, im] pairs)");
  s->add_option("--family", synth.family, "comma-separated subsets, e.g. 12,23,34")->required();
  s->add_option("--out", synth.out, "witness JSON with certificates");
  synth.config.add_to(*s, true, false, false);
  s->callback([&] { run = [&] { return cmd_synth(synth); }; });

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "evaluate a witness on a (noisy) state");
  e->add_option("--witness", eval.witness, "witness file, catalog label (D4_W5) or 'projector'")->required();
  e->add_option("--state", eval.state, "named state");
  e->add_option("--state-file", eval.state_file, "state JSON");
  e->add_option("--noise", eval.noise, "white-noise weight p")->check(CLI::Range(0.0, 1.0));
  eval.config.add_to(*e, false, false, false);
  e->callback([&] { run = [&] { return cmd_eval(eval); }; });

  RobustnessArgs rob;
  auto* r = app.add_subcommand("robustness", "white-noise tolerance under axis misalignment");
  r->add_option("--witness", rob.witness, "witness file or catalog label")->required();
  r->add_option("--compare", rob.compare, "second witness (default: projector)");
  r->add_option("--state", rob.state, "named target state (defaults to the witness target)");
  r->add_option("--mode", rob.mode, "all | y_only");
  r->add_option("--out", rob.out, "curve output path (stdout if absent)");
  r->add_option("--summary", rob.summary, "JSON summary path (csv format)");
  rob.config.add_to(*r, false, true, false);
  r->callback([&] { run = [&] { return cmd_robustness(rob); }; });

  EdlArgs edl_args;
  auto* l = app.add_subcommand("edl", "smallest subset size whose family detects the state");
  l->add_option("--state", edl_args.state, "named state");
  l->add_option("--state-file", edl_args.state_file, "state JSON");
  edl_args.config.add_to(*l, true, false, false);
  l->callback([&] { run = [&] { return cmd_edl(edl_args); }; });

  SimulateArgs sim;
  auto* m = app.add_subcommand("simulate", "simulate counting statistics and estimate a witness or fidelity");
  m->add_option("--witness", sim.witness, "witness file or catalog label");
  m->add_option("--fidelity", sim.fidelity, "named state whose fidelity decomposition is measured");
  m->add_option("--state", sim.state, "named state (defaults to the target)");
  m->add_option("--state-file", sim.state_file, "state JSON");
  m->add_option("--noise", sim.noise, "white-noise weight p")->check(CLI::Range(0.0, 1.0));
  m->add_option("--counts-dir", sim.counts_dir, "write count CSVs and manifest.json here");
  sim.config.add_to(*m, false, false, true);
  m->callback([&] { run = [&] { return cmd_simulate(sim); }; });

  EstimateArgs est;
  auto* t = app.add_subcommand("estimate", "combine measured expectations into a witness or fidelity value");
  t->add_option("--expectations", est.expectations, "CSV operator,value,sigma");
  t->add_option("--counts", est.counts, "count directory or manifest file");
  t->add_option("--witness", est.witness, "witness file or catalog label");
  t->add_option("--fidelity", est.fidelity, "named state");
  t->add_option("--state", est.state, "named state for 'projector'");
  t->add_option("--qubits", est.qubits, "qubit count of the table (defaults to the target's)");
  t->add_flag("--relabel-bits", est.relabel, "swap logical 0/1 on every qubit before combining");
  est.config.add_to(*t, false, false, false);
  t->callback([&] { run = [&] { return cmd_estimate(est); }; });

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "certify a witness by PPT-mixer decomposition");
  v->add_option("--witness", ver.witness, "witness file or catalog label")->required();
  v->add_option("--state", ver.state, "named state for 'projector'");
  ver.config.add_to(*v, true, false, false);
  v->callback([&] { run = [&] { return cmd_verify(ver); }; });

  CatalogArgs cat_export, cat_list;
  auto* c = app.add_subcommand("catalog", "published witness catalog");
  c->require_subcommand(1);
  auto* ce = c->add_subcommand("export", "write every catalog witness as JSON");
  ce->add_option("--out", cat_export.out, "output directory")->required();
  cat_export.config.add_to(*ce, false, false, false);
  ce->callback([&] { run = [&] { return cmd_catalog_export(cat_export); }; });
  auto* cl = c->add_subcommand("list", "list catalog witnesses");
  cat_list.config.add_to(*cl, false, false, false);
  cl->callback([&] { run = [&] { return cmd_catalog_list(cat_list); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    return run();
  } catch (const edl::SolverError& err) {
    std::cerr << "solver failure: " << err.what() << " (last gap " << err.last_gap() << " after " << err.iterations()
              << " iterations)\n";
    return kExitSolver;
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitInput;
  } catch (const std::logic_error& err) {
    // invalid_argument, out_of_range, domain_error
    std::cerr << "error: " << err.what() << '\n';
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitInput;
  }
}
