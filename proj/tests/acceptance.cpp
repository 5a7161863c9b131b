// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is non-zero if any criterion fails.

#include "cgst/bellspec.hpp"
#include "cgst/lhv.hpp"
#include "cgst/quantum.hpp"
#include "cgst/sampler.hpp"
#include "cgst/sos.hpp"
#include "cgst/swap.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace cgst;
using std::numbers::pi;

namespace {

constexpr double kBoundTol = 1e-9;         // criteria 1, 2, 4, 6, 10 (Bell value)
constexpr double kSosTolPerDim = 1e-10;    // criterion 3
constexpr double kFidelityTol = 1e-9;      // criterion 5
constexpr double kJsqTol = 1e-6;           // criterion 5
constexpr double kRobustSlack = 1e-9;      // criterion 7
constexpr double kRTarget = 752.0;         // criterion 7
constexpr double kRWindow = 0.5;           // criterion 7
constexpr double kRQuoted = 751.553;       // criterion 7, to the quoted digits
constexpr double kEpsilonCap = 0.2;        // criterion 7
constexpr double kNormTol = 1e-9;          // criterion 9
constexpr double kPhaseStatTol = 1e-8;     // criterion 10
constexpr double kStatSigmas = 4.0;        // criterion 11
constexpr double kStderrRatioTol = 0.2;    // criterion 11
constexpr double kInequalityTol = 1e-12;        // criterion 8, relative slack for rounding

constexpr double kTimeLimit1 = 60.0;
constexpr double kTimeLimit2 = 120.0;
constexpr double kTimeLimit3 = 60.0;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body, double time_limit = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit > 0.0 && secs > time_limit) {
    o.pass = false;
    o.detail += " [over time limit " + std::to_string(time_limit) + " s]";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %-34s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), secs);
  for (const auto& n : o.notes) std::printf("           note: %s\n", n.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome classical_bound() {
  Outcome o;
  double worst = 0.0;
  std::vector<std::pair<int, int>> cases;
  for (int n : {2, 4, 6})
    for (int k : {3, 4}) cases.emplace_back(n, k);
  cases.emplace_back(4, 5);
  for (auto [n, k] : cases) {
    const auto spec = bell::BellSpec::make(n, k);
    const auto r = lhv::brute_force_min(spec);
    const double gap = std::abs(r.min_value - bell::classical_bound(spec));
    worst = std::max(worst, gap);
    if (!r.complete || gap > kBoundTol) o.pass = false;
  }
  o.detail = "7 (n,k) cases, max |brute - closed form| = " + fmt("%.2e", worst);
  return o;
}

Outcome quantum_bound() {
  Outcome o;
  double worst_ideal = 0.0;
  for (int n : {2, 4})
    for (int k : {3, 4, 5}) {
      const auto spec = bell::BellSpec::make(n, k);
      const double e = hilbert::min_eigenvalue(sos::bell_operator(sos::ideal_qubit_model(spec)));
      worst_ideal = std::max(worst_ideal, std::abs(e + n * k));
    }
  double worst_margin = INFINITY;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const int k = 3 + static_cast<int>((seed / 3) % 3);
    std::vector<double> phases(static_cast<std::size_t>(n), 0.0);
    if (seed % 2)
      for (auto& p : phases) p = u(rng);
    std::vector<int> dims;
    for (int i = 0; i < n; ++i) dims.push_back(n == 4 ? 2 : 2 + static_cast<int>((seed + static_cast<std::uint64_t>(i)) % 2));
    const auto spec = bell::BellSpec::make(n, k, phases);
    const double e = hilbert::min_eigenvalue(sos::bell_operator(sos::random_blackbox(spec, PartyDims(dims), seed)));
    worst_margin = std::min(worst_margin, e + n * k);
  }
  o.pass = worst_ideal <= kBoundTol && worst_margin >= -kBoundTol;
  o.detail = "ideal max |lambda_min + nk| = " + fmt("%.2e", worst_ideal) +
             ", 200 random models min(lambda_min + nk) = " + fmt("%.3e", worst_margin);
  return o;
}

Outcome sos_identity() {
  Outcome o;
  double worst_ratio = 0.0;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-pi, pi);
  std::uniform_int_distribution<int> dim(2, 4);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 2 + static_cast<int>(seed % 2);
    const int k = 3 + static_cast<int>(seed % 4);
    std::vector<double> phases;
    std::vector<int> dims;
    for (int i = 0; i < n; ++i) {
      phases.push_back(u(rng));
      dims.push_back(dim(rng));
    }
    const auto m = sos::random_blackbox(bell::BellSpec::make(n, k, phases), PartyDims(dims), seed);
    const double ratio = sos::sos_identity_residual(m) / static_cast<double>(m.dims.total());
    worst_ratio = std::max(worst_ratio, ratio);
  }
  o.pass = worst_ratio <= kSosTolPerDim;
  o.detail = "50 models, max residual/dim = " + fmt("%.2e", worst_ratio);
  return o;
}

Outcome singlets_reach_bound() {
  Outcome o;
  double worst = 0.0;
  std::string dims;
  for (int n : {2, 4, 6}) {
    const std::size_t d = quantum::singlet_basis(n).dim();
    dims += (dims.empty() ? "" : ",") + std::to_string(d);
    if (d != quantum::singlet_dimension(n)) o.pass = false;
    for (int k : {3, 4, 5}) {
      const auto spec = bell::BellSpec::make(n, k);
      const auto angles = quantum::MeasurementAngles::equispaced(n, k);
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        QuantumState state = quantum::random_singlet(n, seed);
        if (seed % 2) {
          // alternate with seeded mixtures over the manifold
          std::mt19937_64 rng(seed);
          std::uniform_real_distribution<double> w(0.0, 1.0);
          std::vector<double> weights(d);
          double total = 0.0;
          for (auto& x : weights) total += (x = w(rng));
          for (auto& x : weights) x /= total;
          state = quantum::singlet_mixture(n, weights);
        }
        const double v = bell::bell_value(quantum::correlator_table(state, angles), spec).value;
        worst = std::max(worst, std::abs(v + n * k));
      }
    }
  }
  const bool dims_ok = dims == "1,2,5";
  o.pass = o.pass && dims_ok && worst <= kBoundTol;
  o.detail = "180 states, max |B + nk| = " + fmt("%.2e", worst) + ", manifold dims " + dims;
  return o;
}

Outcome swap_extraction() {
  Outcome o;
  double worst_fid = 0.0, worst_jsq = 0.0;
  auto check = [&](const QuantumState& out, const Vector& target) {
    worst_fid = std::max(worst_fid, 1.0 - testing::fidelity(out, target));
    worst_jsq = std::max(worst_jsq, out.expectation(hilbert::total_spin_squared(out.parties())).real());
  };
  for (int n : {2, 4})
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto spec = bell::BellSpec::make(n, 3 + static_cast<int>(seed % 2));
      const auto input = quantum::random_singlet(n, seed);
      check(swap::extract_state(sos::ideal_qubit_model(spec), input), input.vector());
    }
  std::mt19937_64 rng(5);
  for (int n : {2, 4})
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto spec = bell::BellSpec::make(n, 3);
      const Vector qubits = quantum::random_singlet(n, 100 + seed).vector();
      const auto state = testing::embedded_singlet(qubits, n, 2, rng);
      check(swap::extract_state(testing::embedded_model(spec, 2), state), qubits);
    }
  o.pass = worst_fid <= kFidelityTol && worst_jsq <= kJsqTol;
  o.detail = "qubit + dim-4 boxes, max infidelity = " + fmt("%.2e", worst_fid) + ", max <J^2> = " + fmt("%.2e", worst_jsq);
  return o;
}

Outcome eq9_scaling() {
  Outcome o;
  double worst = 0.0;
  for (double p : {0.01, 0.05, 0.1})
    for (int n : {2, 4})
      for (int k : {3, 4}) {
        const auto s = quantum::apply_channel(quantum::rotated_singlet(n, std::vector<double>(static_cast<std::size_t>(n), 0.0)),
                                              quantum::NoiseModel{quantum::NoiseKind::depolarizing_global, p, 0});
        const auto e = quantum::eq9_check(s, k);
        const double target = k * n * p;
        worst = std::max({worst, std::abs(e.lhs - target), std::abs(e.rhs - target)});
      }
  o.pass = worst <= kBoundTol;
  o.detail = "12 cases, max |side - knp| = " + fmt("%.2e", worst);
  return o;
}

Outcome robustness() {
  Outcome o;
  const auto c = swap::RobustnessConstants::standard();
  const bool constants_ok = c.alpha1 == 49.0 && std::abs(c.r - kRTarget) <= kRWindow && std::abs(c.r - kRQuoted) < 5e-4;
  int configs = 0, satisfied = 0, within_cap = 0;
  double max_eps = 0.0, min_slack = INFINITY;
  const std::vector<quantum::NoiseModel> noises = {
      {quantum::NoiseKind::depolarizing_global, 0.0, 0},  {quantum::NoiseKind::depolarizing_global, 0.05, 0},
      {quantum::NoiseKind::depolarizing_global, 0.12, 0}, {quantum::NoiseKind::dephasing_local, 0.02, 0},
      {quantum::NoiseKind::dephasing_local, 0.05, 0}};
  for (int n : {2, 4})
    for (int k : {3, 4})
      for (const auto& noise : noises)
        for (double jitter : {0.0, 0.04, 0.1}) {
          const auto spec = bell::BellSpec::make(n, k);
          const auto state = quantum::apply_channel(quantum::rotated_singlet(n, spec.phases), noise);
          const auto angles = quantum::jitter_angles(
              quantum::MeasurementAngles::equispaced(n, k),
              quantum::NoiseModel{quantum::NoiseKind::angle_jitter, jitter, static_cast<std::uint64_t>(configs)});
          const auto rep = swap::extraction_report(sos::qubit_model(spec, angles), state);
          ++configs;
          if (rep.epsilon <= kEpsilonCap) ++within_cap;
          if (rep.jz2_plus_jx2 <= rep.bound + kRobustSlack) ++satisfied;
          max_eps = std::max(max_eps, rep.epsilon);
          min_slack = std::min(min_slack, rep.bound - rep.jz2_plus_jx2);
        }
  o.pass = constants_ok && configs == 60 && within_cap == 60 && satisfied == 60;
  o.detail = "r = " + fmt("%.4f", c.r) + ", alpha1 = " + fmt("%.1f", c.alpha1) + ", " + std::to_string(satisfied) + "/" +
             std::to_string(configs) + " reports within bound, max eps = " + fmt("%.3f", max_eps);
  o.notes.push_back("smallest bound - <Jz^2+Jx^2> over the sweep: " + fmt("%.3e", min_slack));
  return o;
}

Outcome auxiliary_inequalities() {
  Outcome o;
  std::mt19937_64 rng(8080);
  std::uniform_int_distribution<int> small(1, 5), dim(2, 6);
  int fail_a = 0, fail_b = 0;
  for (int t = 0; t < 100; ++t) {
    // sum_i ||sum_a A_a^(i) v||^2 <= [sum_a sqrt(sum_i ||A_a^(i) v||^2)]^2
    const int parties = small(rng), settings = small(rng), d = dim(rng);
    const Vector v = testing::random_vector(d, rng);
    std::vector<std::vector<Vector>> images(static_cast<std::size_t>(parties));
    for (auto& row : images)
      for (int a = 0; a < settings; ++a) row.push_back(testing::random_operator(d, rng) * v);
    double lhs = 0.0;
    for (const auto& row : images) {
      Vector s = Vector::Zero(d);
      for (const auto& x : row) s += x;
      lhs += s.squaredNorm();
    }
    double root_sum = 0.0;
    for (int a = 0; a < settings; ++a) {
      double inner = 0.0;
      for (const auto& row : images) inner += row[static_cast<std::size_t>(a)].squaredNorm();
      root_sum += std::sqrt(inner);
    }
    if (lhs > root_sum * root_sum * (1 + kInequalityTol)) ++fail_a;
  }
  for (int t = 0; t < 100; ++t) {
    // ||sum_i A_i v||^2 <= K sum_i ||A_i v||^2
    const int K = small(rng) + 1, d = dim(rng);
    const Vector v = testing::random_vector(d, rng);
    Vector sum = Vector::Zero(d);
    double each = 0.0;
    for (int i = 0; i < K; ++i) {
      const Vector x = testing::random_operator(d, rng) * v;
      sum += x;
      each += x.squaredNorm();
    }
    if (sum.squaredNorm() > K * each * (1 + kInequalityTol)) ++fail_b;
  }
  o.pass = fail_a == 0 && fail_b == 0;
  o.detail = "failures: " + std::to_string(fail_a) + "/100 and " + std::to_string(fail_b) + "/100";
  return o;
}

Outcome norm_bounds() {
  Outcome o;
  const double limit = 4.0 / pi + kNormTol;
  double max_x = 0.0, max_z = 0.0, max_z_even = 0.0;
  int models = 0, z_over = 0;
  std::vector<std::string> odd_k;
  for (int k = 3; k <= 8; ++k) {
    double max_z_k = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto spec = bell::BellSpec::make(2, k);
      const auto m = seed == 0 ? sos::ideal_qubit_model(spec)
                               : sos::random_blackbox(spec, PartyDims({2 + static_cast<int>(seed % 3), 2}), seed);
      ++models;
      bool over = false;
      for (int i = 0; i < 2; ++i) {
        const auto l = sos::local_operators(m, i);
        const double nx = hilbert::spectral_norm(l.x), nz = hilbert::spectral_norm(l.z);
        max_x = std::max(max_x, nx);
        max_z_k = std::max(max_z_k, nz);
        if (nz > limit) over = true;
      }
      z_over += over;
    }
    max_z = std::max(max_z, max_z_k);
    if (k % 2 == 0) max_z_even = std::max(max_z_even, max_z_k);
    else
      odd_k.push_back("k=" + std::to_string(k) + ": max ||Z|| = " + fmt("%.4f", max_z_k) +
                      ", triangle bound (2/k) sum|cos| = " + fmt("%.4f", sos::norm_bounds(k).z_bound));
  }
  o.pass = max_x <= limit && max_z <= limit;
  o.detail = std::to_string(models) + " models, max ||X|| = " + fmt("%.4f", max_x) + ", max ||Z|| = " +
             fmt("%.4f", max_z) + " vs 4/pi = " + fmt("%.4f", 4.0 / pi);
  o.notes.push_back("X part holds for every k; Z exceeds 4/pi on " + std::to_string(z_over) +
                    " models, all with odd k (even-k max ||Z|| = " + fmt("%.4f", max_z_even) + ")");
  for (const auto& s : odd_k) o.notes.push_back(s);
  return o;
}

Outcome phases_variant() {
  Outcome o;
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(0.0, 2 * pi);
  double worst_value = 0.0, worst_literal = 0.0, worst_full = 0.0;
  for (int n : {2, 4})
    for (int t = 0; t < 10; ++t) {
      std::vector<double> phases;
      for (int i = 0; i < n; ++i) phases.push_back(u(rng));
      const auto spec = bell::BellSpec::make(n, 3, phases);
      const auto state = quantum::rotated_singlet(n, phases);
      const double v = bell::bell_value(quantum::correlator_table(state, quantum::MeasurementAngles::equispaced(n, 3)), spec).value;
      worst_value = std::max(worst_value, std::abs(v + 3 * n));
      worst_literal = std::max(worst_literal, std::abs(quantum::phase_statistic_cosine_part(state, phases)));
      worst_full = std::max(worst_full, std::abs(quantum::phase_statistic(state, phases)));
    }
  o.pass = worst_value <= kBoundTol && worst_literal <= kPhaseStatTol;
  o.detail = "20 phase vectors, max |B + nk| = " + fmt("%.2e", worst_value) +
             ", max sum cos(phi_i - phi_j)<XX+ZZ> = " + fmt("%.4f", worst_literal);
  o.notes.push_back("with the sin(phi_i - phi_j)<Z_i X_j - X_i Z_j> terms included, 4<J'x^2 + J'z^2> max = " +
                    fmt("%.2e", worst_full) + (worst_full <= kPhaseStatTol ? " (within 1e-8)" : " (above 1e-8)"));
  return o;
}

Outcome statistics() {
  Outcome o;
  const auto spec = bell::BellSpec::make(2, 3);
  const auto singlet = QuantumState::pure(testing::singlet2(), PartyDims::qubits(2));
  const auto angles = quantum::MeasurementAngles::equispaced(2, 3);
  const auto big = sampler::estimate(sampler::sample_rounds(singlet, angles, 100000, 7), spec);
  const auto small = sampler::estimate(sampler::sample_rounds(singlet, angles, 25000, 7), spec);
  const double ratio = small.stderr_ / big.stderr_;
  const bool accurate = std::abs(big.bell_hat + 6.0) <= kStatSigmas * big.stderr_;
  const bool scaling = std::abs(ratio - 2.0) <= kStderrRatioTol * 2.0;
  o.pass = accurate && scaling;
  o.detail = "bell_hat = " + fmt("%.4f", big.bell_hat) + " +- " + fmt("%.4f", big.stderr_) +
             ", stderr(25k)/stderr(100k) = " + fmt("%.3f", ratio);
  return o;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  report(1, "classical bound (brute force)", classical_bound, kTimeLimit1);
  report(2, "quantum bound (spectrum)", quantum_bound, kTimeLimit2);
  report(3, "SOS operator identity", sos_identity, kTimeLimit3);
  report(4, "singlet manifold reaches -nk", singlets_reach_bound);
  report(5, "SWAP extraction of singlets", swap_extraction);
  report(6, "shifted value = knp (depolarized)", eq9_scaling);
  report(7, "robustness bound and constants", robustness);
  report(8, "auxiliary vector inequalities", auxiliary_inequalities);
  report(9, "norm bounds ||X||, ||Z|| <= 4/pi", norm_bounds);
  report(10, "phase-twisted self-test statistic", phases_variant);
  report(11, "finite-statistics estimator", statistics);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
