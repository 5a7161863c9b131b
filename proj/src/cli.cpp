#include "cgst/cli.hpp"

#include "cgst/bellspec.hpp"
#include "cgst/errors.hpp"
#include "cgst/io.hpp"
#include "cgst/lhv.hpp"
#include "cgst/parallel.hpp"
#include "cgst/quantum.hpp"
#include "cgst/sampler.hpp"
#include "cgst/sos.hpp"
#include "cgst/swap.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace cgst::cli {

namespace {

using io::Json;

struct RunConfig {
  int n = 2;
  int k = 3;
  std::string phases;
  std::string noise = "depolarizing:0";
  double jitter = 0.0;
  std::uint64_t seed = 0;
  std::string dims;
  int trials = 10;
  std::uint64_t rounds = 10000;
  int points = 11;
  std::string in;
  std::string state;
  std::string out;
  std::string table;
  std::string format;
  double tol = 0.0;
  int threads = 0;
  std::string config;
  std::uint64_t budget = lhv::kDefaultBudget;
  bool embed_state = false;
};

// Rows of named values; single-row reports print as one JSON object.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  bool tabular = false;
  Json extra;  // JSON-only payload merged into single-row output
};

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used > 0 && used == s.size() && std::isfinite(v), what + ": cannot parse '" + s + "'");
  return v;
}

std::vector<double> parse_phases(const RunConfig& cfg) {
  if (cfg.phases.empty()) return std::vector<double>(static_cast<std::size_t>(std::max(cfg.n, 0)), 0.0);
  std::vector<double> out;
  for (const auto& p : split(cfg.phases, ',')) out.push_back(parse_double(p, "--phases"));
  require(static_cast<int>(out.size()) == cfg.n, "--phases needs exactly n comma-separated values");
  return out;
}

PartyDims parse_dims(const RunConfig& cfg) {
  if (cfg.dims.empty()) return PartyDims::qubits(cfg.n);
  std::vector<int> dims;
  for (const auto& d : split(cfg.dims, ',')) {
    const double v = parse_double(d, "--dims");
    require(v == std::floor(v) && v >= 2 && v <= 1 << 14, "--dims entries must be integers >= 2");
    dims.push_back(static_cast<int>(v));
  }
  if (dims.size() == 1) dims.assign(static_cast<std::size_t>(cfg.n), dims.front());
  require(static_cast<int>(dims.size()) == cfg.n, "--dims needs one entry, or one per party");
  return PartyDims(dims);
}

bell::BellSpec make_spec(const RunConfig& cfg) { return bell::BellSpec::make(cfg.n, cfg.k, parse_phases(cfg)); }

Json classical_or_null(const bell::BellSpec& spec) {
  if (spec.n % 2 != 0 || spec.has_phases()) return nullptr;
  return bell::classical_bound(spec);
}

QuantumState default_state(const RunConfig& cfg, const bell::BellSpec& spec) {
  if (!cfg.state.empty()) return io::state_from_json(io::read_json(cfg.state));
  return quantum::rotated_singlet(spec.n, spec.phases);
}

struct NoisyRun {
  QuantumState state;
  quantum::MeasurementAngles angles;
};

// Applies the --noise model, then an extra --jitter of the measurement angles.
NoisyRun noisy(const QuantumState& clean, const RunConfig& cfg, const quantum::NoiseModel& noise) {
  auto r = quantum::apply_noise(clean, quantum::MeasurementAngles::equispaced(cfg.n, cfg.k), noise);
  if (cfg.jitter > 0.0) {
    const quantum::NoiseModel jitter{quantum::NoiseKind::angle_jitter, cfg.jitter, cfg.seed + 1};
    r.angles = quantum::jitter_angles(r.angles, jitter);
  }
  return {std::move(r.state), std::move(r.angles)};
}

std::string cell_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_cell(const Json& v) {
  std::string s = cell_text(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string render(const Report& r, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    if (!r.tabular && r.rows.size() == 1) {
      Json obj = r.extra.is_object() ? r.extra : Json::object();
      for (std::size_t c = 0; c < r.columns.size(); ++c) obj[r.columns[c]] = r.rows[0][c];
      os << obj.dump(2) << '\n';
    } else {
      Json arr = Json::array();
      for (const auto& row : r.rows) {
        Json obj = Json::object();
        for (std::size_t c = 0; c < r.columns.size(); ++c) obj[r.columns[c]] = row[c];
        arr.push_back(std::move(obj));
      }
      os << arr.dump(2) << '\n';
    }
  } else if (format == "csv") {
    for (std::size_t c = 0; c < r.columns.size(); ++c) os << (c ? "," : "") << r.columns[c];
    os << '\n';
    for (const auto& row : r.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
      os << '\n';
    }
  } else {
    for (std::size_t m = 0; m < r.rows.size(); ++m) {
      if (m) os << '\n';
      for (std::size_t c = 0; c < r.columns.size(); ++c)
        os << r.columns[c] << ": " << cell_text(r.rows[m][c]) << '\n';
    }
  }
  return os.str();
}

Report single(std::vector<std::pair<std::string, Json>> fields) {
  Report r;
  std::vector<Json> row;
  for (auto& [name, value] : fields) {
    r.columns.push_back(name);
    row.push_back(std::move(value));
  }
  r.rows.push_back(std::move(row));
  return r;
}

double tol_or(const CLI::App* sub, const RunConfig& cfg, double fallback) {
  return sub->count("--tol") ? cfg.tol : fallback;
}

std::vector<double> grid(double max, int points) {
  require(points >= 1, "--points must be >= 1");
  std::vector<double> g;
  for (int m = 0; m < points; ++m) g.push_back(points == 1 ? max : max * m / (points - 1));
  return g;
}

// Evaluates fn(m) for every grid point in parallel and returns the rows in order.
std::vector<std::vector<Json>> parallel_rows(std::size_t count,
                                             const std::function<std::vector<Json>(std::size_t)>& fn) {
  std::vector<std::vector<Json>> rows(count);
  std::vector<std::exception_ptr> errors(count);
  const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long m = 0; m < total; ++m) {
    try {
      rows[static_cast<std::size_t>(m)] = fn(static_cast<std::size_t>(m));
    } catch (...) {
      errors[static_cast<std::size_t>(m)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

// ---- commands ----

Report run_bounds(const RunConfig& cfg) {
  const auto spec = make_spec(cfg);
  const auto lhv = lhv::brute_force_min(spec, cfg.budget);
  Report r = single({{"n", spec.n},
                     {"k", spec.k},
                     {"classical", classical_or_null(spec)},
                     {"quantum", bell::quantum_bound(spec)},
                     {"brute_force", lhv.complete ? Json(lhv.min_value) : Json(nullptr)},
                     {"brute_force_complete", lhv.complete},
                     {"enumerated", lhv.enumerated}});
  r.extra = {{"phases", spec.phases}, {"witness", io::strategy_to_json(lhv.witness)}};
  return r;
}

Report run_simulate(const RunConfig& cfg) {
  const auto spec = make_spec(cfg);
  const auto noise = quantum::NoiseModel::parse(cfg.noise, cfg.seed);
  const QuantumState clean = default_state(cfg, spec);
  require(clean.parties() == spec.n && clean.dims().all_qubits(), "simulate: state must be n qubits");
  const NoisyRun run = noisy(clean, cfg, noise);
  const auto table = quantum::correlator_table(run.state, run.angles);
  if (!cfg.table.empty()) io::write_text(cfg.table, io::table_to_json(table, &spec.phases).dump(2) + "\n");
  const auto value = bell::bell_value(table, spec);
  Json lhs = nullptr, rhs = nullptr;
  if (!spec.has_phases() && cfg.jitter == 0.0 && noise.kind != quantum::NoiseKind::angle_jitter) {
    const auto eq = quantum::eq9_check(run.state, spec.k);
    lhs = eq.lhs;
    rhs = eq.rhs;
  }
  return single({{"n", spec.n},
                 {"k", spec.k},
                 {"noise", quantum::to_string(noise.kind)},
                 {"strength", noise.strength},
                 {"bell_value", value.value},
                 {"epsilon", bell::violation_deficit(value)},
                 {"quantum_bound", bell::quantum_bound(spec)},
                 {"classical_bound", classical_or_null(spec)},
                 {"shifted_value", lhs},
                 {"spin_prediction", rhs}});
}

Report run_sos_check(const CLI::App* sub, const RunConfig& cfg) {
  const auto spec = make_spec(cfg);
  const PartyDims dims = parse_dims(cfg);
  require(cfg.trials >= 1, "--trials must be >= 1");
  const double D = static_cast<double>(dims.total());
  const double threshold = tol_or(sub, cfg, 1e-10) * D;
  double max_residual = 0.0, max_reference_gap = 0.0, min_eig = INFINITY;
  for (int t = 0; t < cfg.trials; ++t) {
    const auto model = sos::random_blackbox(spec, dims, cfg.seed + static_cast<std::uint64_t>(t));
    const Operator bell = sos::bell_operator(model);
    max_residual = std::max(max_residual, sos::sos_identity_residual(model));
    max_reference_gap = std::max(max_reference_gap, (bell - sos::reference::bell_operator(model)).norm());
    min_eig = std::min(min_eig, hilbert::min_eigenvalue(bell));
  }
  const double qb = bell::quantum_bound(spec);
  const bool passed = max_residual <= threshold && max_reference_gap <= threshold && min_eig >= qb - threshold;
  Report r = single({{"n", spec.n},
                     {"k", spec.k},
                     {"dims", dims.values()},
                     {"trials", cfg.trials},
                     {"max_residual", max_residual},
                     {"max_reference_gap", max_reference_gap},
                     {"threshold", threshold},
                     {"min_eigenvalue", min_eig},
                     {"quantum_bound", qb},
                     {"passed", passed}});
  if (!passed) throw InvariantError("sos-check: identity residual or eigenvalue outside tolerance\n" + render(r, "text"));
  return r;
}

Report run_swap(const CLI::App* sub, const RunConfig& cfg) {
  const double slack = tol_or(sub, cfg, 1e-9);
  if (!cfg.in.empty()) {
    require(!cfg.state.empty(), "swap: --in MODEL needs --state STATE");
    const auto model = io::model_from_json(io::read_json(cfg.in));
    const auto state = io::state_from_json(io::read_json(cfg.state));
    const auto rep = swap::extraction_report(model, state);
    Report r;
    r.rows.emplace_back();
    const Json fields = io::extraction_to_json(rep, false);
    for (const auto& [key, value] : fields.items()) {
      r.columns.push_back(key);
      r.rows[0].push_back(value);
    }
    if (cfg.embed_state) r.extra = {{"extracted_state", io::state_to_json(rep.extracted_state)}};
    if (rep.jz2_plus_jx2 > rep.bound + slack) throw InvariantError("swap: robustness bound violated");
    return r;
  }
  const auto spec = make_spec(cfg);
  const auto noise = quantum::NoiseModel::parse(cfg.noise, cfg.seed);
  const QuantumState clean = default_state(cfg, spec);
  const NoisyRun run = noisy(clean, cfg, noise);
  const auto model = sos::qubit_model(spec, run.angles);
  const auto rep = swap::extraction_report(model, run.state);
  Json fidelity = nullptr;
  if (clean.is_pure()) fidelity = rep.extracted_state.expectation(clean.vector() * clean.vector().adjoint()).real();
  Report r = single({{"n", spec.n},
                     {"k", spec.k},
                     {"noise", quantum::to_string(noise.kind)},
                     {"strength", noise.strength},
                     {"jitter", cfg.jitter},
                     {"bell_value", rep.bell_value},
                     {"epsilon", rep.epsilon},
                     {"jz2_plus_jx2", rep.jz2_plus_jx2},
                     {"jsq", rep.jsq},
                     {"bound", rep.bound},
                     {"bound_satisfied", rep.bound_satisfied},
                     {"jz2_plus_jx2_max", rep.jz2_plus_jx2_max},
                     {"bound_vacuous", rep.bound_vacuous},
                     {"fidelity", fidelity}});
  if (cfg.embed_state) r.extra = {{"extracted_state", io::state_to_json(rep.extracted_state)}};
  if (rep.jz2_plus_jx2 > rep.bound + slack) throw InvariantError("swap: robustness bound violated");
  return r;
}

Report run_robustness_sweep(const CLI::App* sub, const RunConfig& cfg) {
  const double slack = tol_or(sub, cfg, 1e-9);
  const auto spec = make_spec(cfg);
  const auto top = quantum::NoiseModel::parse(cfg.noise, cfg.seed);
  const QuantumState clean = quantum::rotated_singlet(spec.n, spec.phases);
  const auto strengths = grid(top.strength, cfg.points);

  Report r;
  r.tabular = true;
  r.columns = {"n",  "k",   "noise", "strength", "jitter", "bell_value", "epsilon", "jz2_plus_jx2", "bound",
               "bound_satisfied", "bound_vacuous"};
  r.rows = parallel_rows(strengths.size(), [&](std::size_t m) {
    quantum::NoiseModel noise = top;
    noise.strength = strengths[m];
    const NoisyRun run = noisy(clean, cfg, noise);
    const auto rep = swap::extraction_report(sos::qubit_model(spec, run.angles), run.state);
    return std::vector<Json>{spec.n,      spec.k,          quantum::to_string(noise.kind), noise.strength,
                             cfg.jitter,  rep.bell_value,  rep.epsilon,                    rep.jz2_plus_jx2,
                             rep.bound,   rep.jz2_plus_jx2 <= rep.bound + slack,           rep.bound_vacuous};
  });
  for (const auto& row : r.rows)
    if (!row[9].get<bool>()) throw InvariantError("robustness-sweep: bound violated\n" + render(r, "csv"));
  return r;
}

Report run_phases(const CLI::App* sub, const RunConfig& cfg) {
  std::vector<double> phases;
  if (cfg.phases.empty()) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < cfg.n; ++i) phases.push_back(angle(rng));
  } else {
    phases = parse_phases(cfg);
  }
  const auto spec = bell::BellSpec::make(cfg.n, cfg.k, phases);
  const QuantumState state = cfg.state.empty() ? quantum::rotated_singlet(spec.n, spec.phases)
                                               : io::state_from_json(io::read_json(cfg.state));
  const auto value = bell::bell_value(quantum::correlator_table(state, quantum::MeasurementAngles::equispaced(spec.n, spec.k)), spec);
  const double stat = quantum::phase_statistic(state, spec.phases);
  const double tol = tol_or(sub, cfg, 1e-8);
  return single({{"n", spec.n},
                 {"k", spec.k},
                 {"phases", spec.phases},
                 {"bell_value", value.value},
                 {"quantum_bound", bell::quantum_bound(spec)},
                 {"epsilon", bell::violation_deficit(value)},
                 {"phase_statistic", stat},
                 {"phase_statistic_cosine_part", quantum::phase_statistic_cosine_part(state, spec.phases)},
                 {"self_tested", std::abs(value.value - bell::quantum_bound(spec)) <= tol && stat <= tol}});
}

Report run_sample(const RunConfig& cfg, std::ostream& out) {
  require(cfg.rounds >= 1, "--rounds must be >= 1");
  const auto spec = make_spec(cfg);
  const auto noise = quantum::NoiseModel::parse(cfg.noise, cfg.seed);
  const QuantumState clean = default_state(cfg, spec);
  const NoisyRun run = noisy(clean, cfg, noise);
  const auto records = sampler::sample_rounds(run.state, run.angles, cfg.rounds, cfg.seed);
  if (cfg.out.empty()) {
    for (const auto& rec : records) out << Json{{"s", rec.settings}, {"o", rec.outcomes}}.dump() << '\n';
    return {};
  }
  sampler::write_rounds(records, cfg.out);
  return single({{"n", spec.n}, {"k", spec.k}, {"rounds", cfg.rounds}, {"seed", cfg.seed}, {"path", cfg.out}});
}

Report run_estimate(const CLI::App* sub, RunConfig cfg) {
  require(!cfg.in.empty(), "estimate: --in ROUNDS.jsonl is required");
  const auto records = sampler::read_rounds(cfg.in);
  if (!sub->count("--n") && !records.empty()) cfg.n = static_cast<int>(records.front().settings.size());
  const auto spec = make_spec(cfg);
  const auto rep = sampler::estimate(records, spec);
  Report r = single({{"n", spec.n},
                     {"k", spec.k},
                     {"bell_hat", rep.bell_hat},
                     {"stderr", rep.stderr_},
                     {"rounds_used", rep.rounds_used},
                     {"quantum_bound", bell::quantum_bound(spec)},
                     {"classical_bound", classical_or_null(spec)}});
  const Json full = io::estimate_to_json(rep);
  r.extra = {{"counts", full["counts"]}, {"table_hat", full["table_hat"]}};
  return r;
}

Report run_sweep(const RunConfig& cfg) {
  const auto spec = make_spec(cfg);
  const auto top = quantum::NoiseModel::parse(cfg.noise, cfg.seed);
  const QuantumState clean = quantum::rotated_singlet(spec.n, spec.phases);
  const auto strengths = grid(top.strength, cfg.points);
  const Json classical = classical_or_null(spec);

  Report r;
  r.tabular = true;
  r.columns = {"n", "k", "noise", "strength", "bell_value", "epsilon", "classical_bound", "quantum_bound"};
  r.rows = parallel_rows(strengths.size(), [&](std::size_t m) {
    quantum::NoiseModel noise = top;
    noise.strength = strengths[m];
    const NoisyRun run = noisy(clean, cfg, noise);
    const auto value = bell::bell_value(quantum::correlator_table(run.state, run.angles), spec);
    return std::vector<Json>{spec.n,      spec.k,    quantum::to_string(noise.kind), noise.strength,
                             value.value, bell::violation_deficit(value), classical,   bell::quantum_bound(spec)};
  });
  return r;
}

// ---- option wiring ----

enum Flag : unsigned {
  kN = 1u << 0,
  kK = 1u << 1,
  kPhases = 1u << 2,
  kNoise = 1u << 3,
  kSeed = 1u << 4,
  kDims = 1u << 5,
  kTrials = 1u << 6,
  kRounds = 1u << 7,
  kIn = 1u << 8,
  kState = 1u << 9,
  kTol = 1u << 10,
  kBudget = 1u << 11,
  kPoints = 1u << 12,
  kJitter = 1u << 13,
  kTable = 1u << 14,
  kEmbed = 1u << 15,
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, unsigned flags,
                      RunConfig& cfg) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  if (flags & kN) sub->add_option("--n", cfg.n, "number of parties")->capture_default_str();
  if (flags & kK) sub->add_option("--k", cfg.k, "settings per party")->capture_default_str();
  if (flags & kPhases) sub->add_option("--phases", cfg.phases, "comma-separated phase per party (radians)");
  if (flags & kNoise) sub->add_option("--noise", cfg.noise, "kind:strength, kind in {depolarizing, dephasing, jitter}")->capture_default_str();
  if (flags & kJitter) sub->add_option("--jitter", cfg.jitter, "extra measurement-angle jitter on top of --noise");
  if (flags & kSeed) sub->add_option("--seed", cfg.seed, "seed for every random draw")->capture_default_str();
  if (flags & kDims) sub->add_option("--dims", cfg.dims, "box dimension, or one per party (comma-separated)");
  if (flags & kTrials) sub->add_option("--trials", cfg.trials, "number of seeded random models")->capture_default_str();
  if (flags & kRounds) sub->add_option("--rounds", cfg.rounds, "measurement rounds")->capture_default_str();
  if (flags & kPoints) sub->add_option("--points", cfg.points, "grid points from 0 to the --noise strength")->capture_default_str();
  if (flags & kIn) sub->add_option("--in", cfg.in, "input file");
  if (flags & kState) sub->add_option("--state", cfg.state, "state JSON file (default: the singlet)");
  if (flags & kTable) sub->add_option("--table", cfg.table, "also write the correlator table JSON here");
  if (flags & kTol) sub->add_option("--tol", cfg.tol, "override the default tolerance");
  if (flags & kBudget) sub->add_option("--budget", cfg.budget, "max strategy classes for the exhaustive search")->capture_default_str();
  if (flags & kEmbed) sub->add_flag("--embed-state", cfg.embed_state, "include the extracted state in JSON output");
  sub->add_option("--out", cfg.out, "write the report to this path instead of stdout");
  sub->add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_option("--threads", cfg.threads, "worker threads (0 = runtime default)")->envname("CGST_THREADS");
  sub->add_option("--config", cfg.config, "key=value file; explicit flags take precedence");
  return sub;
}

// Config entries become "--key=value" tokens placed right after the command
// name, so later command-line flags win under the take-last policy.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t m = 1; m < args.size(); ++m) {
    if (args[m] == "--config" && m + 1 < args.size()) path = args[m + 1];
    else if (args[m].rfind("--config=", 0) == 0) path = args[m].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open config file " + path);
  std::vector<std::string> injected;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, path + ":" + std::to_string(number) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    require(!key.empty() && key != "config", path + ":" + std::to_string(number) + ": invalid key");
    injected.push_back("--" + key + "=" + value);
  }
  args.insert(args.begin() + 1, injected.begin(), injected.end());
  return args;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Bell-inequality self-testing toolkit for many-body singlets", "cgst"};
  app.require_subcommand(1, 1);

  const unsigned model = kN | kK | kPhases;
  auto* bounds = add_command(app, "bounds", "classical, quantum and exhaustive LHV bounds", model | kBudget, cfg);
  auto* simulate = add_command(app, "simulate", "Bell value of a (noisy) qubit realization",
                               model | kNoise | kJitter | kSeed | kState | kTable, cfg);
  auto* sos_check = add_command(app, "sos-check", "sum-of-squares identity on seeded random black boxes",
                                model | kDims | kTrials | kSeed | kTol, cfg);
  auto* swap_cmd = add_command(app, "swap", "SWAP-isometry extraction report",
                               model | kNoise | kJitter | kSeed | kIn | kState | kTol | kEmbed, cfg);
  auto* robust = add_command(app, "robustness-sweep", "extraction reports over a noise grid",
                             model | kNoise | kJitter | kSeed | kPoints | kTol, cfg);
  auto* phases = add_command(app, "phases", "phase-twisted expression on the rotated singlet",
                             kN | kK | kPhases | kSeed | kState | kTol, cfg);
  auto* sample = add_command(app, "sample", "simulate measurement rounds as JSONL",
                             model | kNoise | kJitter | kSeed | kRounds | kState, cfg);
  auto* estimate = add_command(app, "estimate", "estimate the Bell value from a JSONL round file",
                               model | kIn, cfg);
  auto* sweep = add_command(app, "sweep", "CSV of Bell value against noise strength",
                            model | kNoise | kJitter | kSeed | kPoints, cfg);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return kValidationError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    if (cfg.threads > 0) set_threads(cfg.threads);
    require(cfg.threads >= 0, "--threads must be >= 0");
    Report report;
    std::string format = cfg.format;
    if (sub == bounds) report = run_bounds(cfg);
    else if (sub == simulate) report = run_simulate(cfg);
    else if (sub == sos_check) report = run_sos_check(sub, cfg);
    else if (sub == swap_cmd) report = run_swap(sub, cfg);
    else if (sub == robust) report = run_robustness_sweep(sub, cfg);
    else if (sub == phases) report = run_phases(sub, cfg);
    else if (sub == estimate) report = run_estimate(sub, cfg);
    else if (sub == sweep) report = run_sweep(cfg);
    else if (sub == sample) {
      report = run_sample(cfg, out);
      if (report.rows.empty()) return kOk;
      if (format.empty()) format = "json";
      out << render(report, format);
      return kOk;
    }
    if (format.empty()) format = report.tabular ? "csv" : "json";
    const std::string text = render(report, format);
    if (cfg.out.empty()) out << text;
    else io::write_text(cfg.out, text);
    return kOk;
  } catch (const InvariantError& e) {
    err << "invariant failure: " << e.what() << '\n';
    return kInvariantFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kInvariantFailure;
  }
}

}  // namespace cgst::cli
