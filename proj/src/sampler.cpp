#include "cgst/sampler.hpp"

#include "cgst/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace cgst::sampler {

using quantum::MeasurementAngles;

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stateless stream for one round: draw m is a pure function of (seed, round, m).
class RoundStream {
 public:
  RoundStream(std::uint64_t seed, std::uint64_t round) : key_(splitmix64(seed ^ splitmix64(round))) {}

  double uniform() { return static_cast<double>(splitmix64(key_ + counter_++) >> 11) * 0x1.0p-53; }

  int below(int bound) {
    const int v = static_cast<int>(uniform() * bound);
    return std::min(v, bound - 1);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct Setup {
  int n = 0;
  int k = 0;
  std::size_t outcomes = 0;
};

Setup check_inputs(const QuantumState& state, const MeasurementAngles& angles, std::uint64_t rounds,
                   const SampleOptions& options) {
  require(state.dims().all_qubits(), "sample_rounds: every party must be a qubit");
  require(angles.parties() == state.parties(), "sample_rounds: angle table has the wrong number of parties");
  require(rounds >= 1, "sample_rounds: rounds must be >= 1");
  Setup s{state.parties(), angles.settings(), state.dim()};
  require(s.k >= 1, "sample_rounds: no measurement settings");
  for (const auto& row : angles.angles) {
    require(static_cast<int>(row.size()) == s.k, "sample_rounds: ragged angle table");
    for (double t : row) require(std::isfinite(t), "sample_rounds: non-finite angle");
  }
  require(options.fixed_setting >= -1 && options.fixed_setting < s.k, "sample_rounds: fixed setting out of range");
  return s;
}

// Index of the tuple in base k, party 0 most significant.
std::size_t tuple_index(const std::vector<int>& settings, int k) {
  std::size_t idx = 0;
  for (int a : settings) idx = idx * static_cast<std::size_t>(k) + static_cast<std::size_t>(a);
  return idx;
}

std::vector<int> tuple_settings(std::size_t idx, int n, int k) {
  std::vector<int> settings(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    settings[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(k));
    idx /= static_cast<std::size_t>(k);
  }
  return settings;
}

// exp(i theta Y / 2)^dag rotates the measurement axis theta onto Z.
Operator unrotate(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Operator r(2, 2);
  r << c, s, -s, c;
  return r;
}

// Born probabilities of the 2^n outcome strings for one setting tuple, obtained by
// rotating each measured axis onto Z and reading the diagonal.
std::vector<double> cumulative_fast(const QuantumState& state, const MeasurementAngles& angles,
                                    const std::vector<int>& settings) {
  const PartyDims& dims = state.dims();
  const int n = state.parties();
  Eigen::VectorXd p;
  if (state.is_pure()) {
    Vector v = state.vector();
    for (int i = 0; i < n; ++i)
      v = hilbert::apply_local(unrotate(angles.angles[i][settings[i]]), i, dims, v);
    p = v.cwiseAbs2();
  } else {
    Matrix m = state.density();
    for (int i = 0; i < n; ++i)
      m = hilbert::apply_local_left(unrotate(angles.angles[i][settings[i]]), i, dims, m);
    m.adjointInPlace();
    for (int i = 0; i < n; ++i)
      m = hilbert::apply_local_left(unrotate(angles.angles[i][settings[i]]), i, dims, m);
    p = m.diagonal().real();
  }
  std::vector<double> cdf(static_cast<std::size_t>(p.size()));
  double acc = 0.0;
  for (Eigen::Index m = 0; m < p.size(); ++m) {
    acc += std::max(0.0, p(m));
    cdf[static_cast<std::size_t>(m)] = acc;
  }
  return cdf;
}

// Same probabilities as Tr[rho prod_i (1 + s_i O_i)/2] with embedded projectors.
std::vector<double> cumulative_direct(const QuantumState& state, const MeasurementAngles& angles,
                                      const std::vector<int>& settings) {
  const int n = state.parties();
  const Operator one = hilbert::identity(2);
  std::vector<double> cdf(state.dim());
  double acc = 0.0;
  for (std::size_t m = 0; m < state.dim(); ++m) {
    Operator proj = Operator::Identity(1, 1);
    for (int i = 0; i < n; ++i) {
      const double sign = ((m >> (n - 1 - i)) & 1) ? -1.0 : 1.0;
      const Operator o = quantum::measurement_observable(angles.angles[i][settings[i]]);
      proj = hilbert::kron(proj, 0.5 * (one + sign * o));
    }
    acc += std::max(0.0, state.expectation(proj).real());
    cdf[m] = acc;
  }
  return cdf;
}

std::vector<int> decode_outcomes(std::size_t m, int n) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = ((m >> (n - 1 - i)) & 1) ? -1 : 1;
  return out;
}

std::size_t pick(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<int> draw_settings(RoundStream& rng, int n, int k, const SampleOptions& options) {
  std::vector<int> settings(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int drawn = rng.below(k);
    settings[static_cast<std::size_t>(i)] = options.fixed_setting >= 0 ? options.fixed_setting : drawn;
  }
  return settings;
}

}  // namespace

std::vector<RoundRecord> sample_rounds(const QuantumState& state, const MeasurementAngles& angles,
                                       std::uint64_t rounds, std::uint64_t seed, SampleOptions options) {
  const Setup s = check_inputs(state, angles, rounds, options);
  std::size_t tuples = 1;
  for (int i = 0; i < s.n; ++i) {
    require(tuples <= (std::size_t{1} << 24) / static_cast<std::size_t>(s.k),
            "sample_rounds: too many setting tuples to tabulate");
    tuples *= static_cast<std::size_t>(s.k);
  }
  require(tuples <= (std::size_t{1} << 24) / s.outcomes, "sample_rounds: outcome table exceeds the cap");

  std::vector<std::vector<double>> table(tuples);
  const auto count = static_cast<long long>(tuples);
#pragma omp parallel for schedule(dynamic)
  for (long long t = 0; t < count; ++t) {
    const auto settings = tuple_settings(static_cast<std::size_t>(t), s.n, s.k);
    if (options.fixed_setting >= 0 &&
        std::any_of(settings.begin(), settings.end(), [&](int a) { return a != options.fixed_setting; }))
      continue;
    table[static_cast<std::size_t>(t)] = cumulative_fast(state, angles, settings);
  }

  std::vector<RoundRecord> out(rounds);
  const auto total = static_cast<long long>(rounds);
#pragma omp parallel for schedule(static)
  for (long long r = 0; r < total; ++r) {
    RoundStream rng(seed, static_cast<std::uint64_t>(r));
    RoundRecord rec;
    rec.settings = draw_settings(rng, s.n, s.k, options);
    const auto& cdf = table[tuple_index(rec.settings, s.k)];
    rec.outcomes = decode_outcomes(pick(cdf, rng.uniform()), s.n);
    out[static_cast<std::size_t>(r)] = std::move(rec);
  }
  return out;
}

namespace reference {

std::vector<RoundRecord> sample_rounds(const QuantumState& state, const MeasurementAngles& angles,
                                       std::uint64_t rounds, std::uint64_t seed, SampleOptions options) {
  const Setup s = check_inputs(state, angles, rounds, options);
  std::vector<RoundRecord> out;
  out.reserve(rounds);
  for (std::uint64_t r = 0; r < rounds; ++r) {
    RoundStream rng(seed, r);
    RoundRecord rec;
    rec.settings = draw_settings(rng, s.n, s.k, options);
    const auto cdf = cumulative_direct(state, angles, rec.settings);
    rec.outcomes = decode_outcomes(pick(cdf, rng.uniform()), s.n);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace reference

std::uint64_t EstimateReport::count(int i, int j, int a, int b) const {
  require(i >= 0 && j >= 0 && i < n && j < n && i != j && a >= 0 && b >= 0 && a < k && b < k,
          "EstimateReport::count: index out of range");
  if (i > j) {
    std::swap(i, j);
    std::swap(a, b);
  }
  const std::size_t pair = static_cast<std::size_t>(i) * static_cast<std::size_t>(2 * n - i - 1) / 2 +
                           static_cast<std::size_t>(j - i - 1);
  return counts[(pair * static_cast<std::size_t>(k) + static_cast<std::size_t>(a)) * static_cast<std::size_t>(k) +
                static_cast<std::size_t>(b)];
}

EstimateReport estimate(const std::vector<RoundRecord>& records, const bell::BellSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const int k = spec.k;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "estimate: round " + std::to_string(r);
    require(static_cast<int>(rec.settings.size()) == n && static_cast<int>(rec.outcomes.size()) == n,
            where + " does not have n entries");
    for (int i = 0; i < n; ++i) {
      require(rec.settings[static_cast<std::size_t>(i)] >= 0 && rec.settings[static_cast<std::size_t>(i)] < k,
              where + " has a setting outside [0, k)");
      const int o = rec.outcomes[static_cast<std::size_t>(i)];
      require(o == 1 || o == -1, where + " has an outcome other than +-1");
    }
  }

  const std::size_t pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  const std::size_t cells = pairs * static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
  std::vector<std::uint64_t> counts(cells, 0);
  std::vector<long long> sums(cells, 0);
  for (const auto& rec : records) {
    std::size_t pair = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++pair) {
        const std::size_t cell =
            (pair * static_cast<std::size_t>(k) + static_cast<std::size_t>(rec.settings[static_cast<std::size_t>(i)])) *
                static_cast<std::size_t>(k) +
            static_cast<std::size_t>(rec.settings[static_cast<std::size_t>(j)]);
        ++counts[cell];
        sums[cell] += rec.outcomes[static_cast<std::size_t>(i)] * rec.outcomes[static_cast<std::size_t>(j)];
      }
  }

  std::vector<std::string> empty;
  bell::CorrelatorTable table(n, k);
  double variance = 0.0;
  std::size_t pair = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++pair)
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          const std::size_t cell = (pair * static_cast<std::size_t>(k) + static_cast<std::size_t>(a)) *
                                       static_cast<std::size_t>(k) +
                                   static_cast<std::size_t>(b);
          if (counts[cell] == 0) {
            empty.push_back("(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(a) + "," +
                            std::to_string(b) + ")");
            continue;
          }
          const double c = static_cast<double>(counts[cell]);
          const double mean = static_cast<double>(sums[cell]) / c;
          table.set(i, j, a, b, mean);
          // (i,j,a,b) and its mirror carry the same weight and the same sample.
          const double w = 2.0 * bell::pair_weight(spec, i, j, a, b);
          variance += w * w * std::max(0.0, 1.0 - mean * mean) / c;
        }

  if (!empty.empty()) {
    std::string list;
    for (std::size_t m = 0; m < empty.size() && m < 8; ++m) list += (m ? " " : "") + empty[m];
    if (empty.size() > 8) list += " ...";
    throw ValidationError("estimate: " + std::to_string(empty.size()) + " empty cell(s) (i,j,a,b): " + list);
  }

  EstimateReport rep;
  rep.table_hat = table;
  rep.counts = std::move(counts);
  rep.bell_hat = bell::bell_value(table, spec).value;
  rep.stderr_ = std::sqrt(variance);
  rep.rounds_used = records.size();
  rep.n = n;
  rep.k = k;
  return rep;
}

void write_rounds(const std::vector<RoundRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), "write_rounds: cannot open " + path.string());
  for (const auto& rec : records) {
    const nlohmann::json line = {{"s", rec.settings}, {"o", rec.outcomes}};
    out << line.dump() << '\n';
  }
  require(static_cast<bool>(out), "write_rounds: write failed for " + path.string());
}

std::vector<RoundRecord> read_rounds(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "read_rounds: cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.empty()) return {};
  require(text.back() == '\n', "read_rounds: " + path.string() + " is truncated (no final newline)");

  std::vector<RoundRecord> records;
  std::istringstream lines(text);
  std::string line;
  std::size_t number = 0;
  std::size_t parties = 0;
  while (std::getline(lines, line)) {
    ++number;
    const std::string where = "read_rounds: line " + std::to_string(number) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(where + "malformed JSON (" + e.what() + ")");
    }
    require(j.is_object() && j.size() == 2 && j.contains("s") && j.contains("o"),
            where + "expected an object with exactly the keys \"s\" and \"o\"");
    const auto& s = j["s"];
    const auto& o = j["o"];
    require(s.is_array() && o.is_array(), where + "\"s\" and \"o\" must be arrays");
    require(!s.empty() && s.size() == o.size(), where + "\"s\" and \"o\" must have the same non-zero length");
    if (parties == 0) parties = s.size();
    require(s.size() == parties, where + "party count differs from earlier lines");
    RoundRecord rec;
    for (const auto& v : s) {
      require(v.is_number_integer() && v.get<long long>() >= 0, where + "settings must be non-negative integers");
      rec.settings.push_back(v.get<int>());
    }
    for (const auto& v : o) {
      require(v.is_number_integer() && (v.get<long long>() == 1 || v.get<long long>() == -1),
              where + "outcomes must be +1 or -1");
      rec.outcomes.push_back(v.get<int>());
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace cgst::sampler
