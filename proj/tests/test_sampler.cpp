#include "cgst/errors.hpp"
#include "cgst/lhv.hpp"
#include "cgst/parallel.hpp"
#include "cgst/sampler.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace cgst;
using namespace cgst::sampler;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cgst_test_" + name);
}

QuantumState singlet() { return QuantumState::pure(testing::singlet2(), PartyDims::qubits(2)); }

}  // namespace

TEST_CASE("forced setting 0 on the singlet gives perfect anticorrelation") {
  const auto records = sample_rounds(singlet(), quantum::MeasurementAngles::equispaced(2, 3), 2000, 3, {0});
  for (const auto& r : records) {
    CHECK(r.settings == std::vector<int>{0, 0});
    CHECK(r.outcomes[0] * r.outcomes[1] == -1);
  }
}

TEST_CASE("maximally mixed state gives fair coins") {
  const auto mixed = QuantumState::mixed(Matrix::Identity(4, 4) / 4.0, PartyDims::qubits(2));
  const auto records = sample_rounds(mixed, quantum::MeasurementAngles::equispaced(2, 3), 40000, 1);
  double m0 = 0.0;
  for (const auto& r : records) m0 += r.outcomes[0];
  CHECK(std::abs(m0 / 40000) < 0.03);
  const auto est = estimate(records, bell::BellSpec::make(2, 3));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(std::abs(est.table_hat.at(0, 1, a, b)) < 0.06);
}

TEST_CASE("sampling is reproducible and thread-count independent") {
  const auto state = quantum::uniform_singlet(4);
  const auto angles = quantum::MeasurementAngles::equispaced(4, 3);
  set_threads(1);
  const auto a = sample_rounds(state, angles, 3000, 42);
  set_threads(3);
  const auto b = sample_rounds(state, angles, 3000, 42);
  set_threads(0);
  CHECK(a == b);
  CHECK(a != sample_rounds(state, angles, 3000, 43));
}

TEST_CASE("tabulated sampler matches the direct Born-rule reference") {
  std::mt19937_64 rng(8);
  const auto pure = testing::random_pure(PartyDims::qubits(3), rng);
  const auto mixed = quantum::apply_channel(pure, quantum::NoiseModel::parse("depolarizing:0.3"));
  const auto angles = quantum::jitter_angles(quantum::MeasurementAngles::equispaced(3, 4), quantum::NoiseModel::parse("jitter:0.1", 1));
  for (const auto* s : {&pure, &mixed}) CHECK(sample_rounds(*s, angles, 500, 9) == reference::sample_rounds(*s, angles, 500, 9));
}

TEST_CASE("sample_rounds validation") {
  const auto angles = quantum::MeasurementAngles::equispaced(2, 3);
  CHECK_THROWS_AS(sample_rounds(singlet(), angles, 0, 1), ValidationError);
  CHECK_THROWS_AS(sample_rounds(singlet(), quantum::MeasurementAngles::equispaced(3, 3), 5, 1), ValidationError);
  const auto qutrits = QuantumState::mixed(Matrix::Identity(9, 9) / 9.0, PartyDims({3, 3}));
  CHECK_THROWS_AS(sample_rounds(qutrits, angles, 5, 1), ValidationError);
}

TEST_CASE("estimate from deterministic rounds equals the strategy value") {
  const auto spec = bell::BellSpec::make(3, 3, {0.1, 0.7, -0.5});
  const lhv::Strategy s{{{1, -1, 1}, {-1, -1, 1}, {1, 1, -1}}};
  std::vector<RoundRecord> records;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        records.push_back({{a, b, c}, {s.outcomes[0][a], s.outcomes[1][b], s.outcomes[2][c]}});
  const auto rep = estimate(records, spec);
  CHECK(rep.bell_hat == doctest::Approx(lhv::strategy_value(s, spec)).epsilon(1e-12));
  CHECK(rep.stderr_ == 0.0);
  CHECK(rep.rounds_used == 27);
  CHECK(rep.count(0, 1, 2, 1) == 3);
  CHECK(rep.count(1, 0, 1, 2) == 3);
}

TEST_CASE("estimator accuracy on the singlet") {
  const auto spec = bell::BellSpec::make(2, 3);
  const auto angles = quantum::MeasurementAngles::equispaced(2, 3);
  const auto records = sample_rounds(singlet(), angles, 100000, 7);
  const auto rep = estimate(records, spec);
  CHECK(std::abs(rep.bell_hat + 6.0) <= 4 * rep.stderr_);
  CHECK(rep.stderr_ > 0.0);

  std::vector<RoundRecord> even, odd;
  for (std::size_t r = 0; r < records.size(); ++r) (r % 2 ? odd : even).push_back(records[r]);
  const auto re = estimate(even, spec), ro = estimate(odd, spec);
  CHECK(std::abs(re.bell_hat - ro.bell_hat) <= 6 * std::hypot(re.stderr_, ro.stderr_));
}

TEST_CASE("estimator coverage over seeds and stderr scaling") {
  const auto spec = bell::BellSpec::make(2, 3);
  const auto angles = quantum::MeasurementAngles::equispaced(2, 3);
  int covered = 0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto rep = estimate(sample_rounds(singlet(), angles, 20000, seed), spec);
    if (std::abs(rep.bell_hat + 6.0) <= 3 * rep.stderr_) ++covered;
  }
  CHECK(covered >= 18);

  // 16x the rounds should shrink the standard error 4x
  const double small = estimate(sample_rounds(singlet(), angles, 10000, 9), spec).stderr_;
  const double large = estimate(sample_rounds(singlet(), angles, 160000, 9), spec).stderr_;
  CHECK(small / large == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("estimate validation") {
  const auto spec = bell::BellSpec::make(2, 3);
  CHECK_THROWS_AS(estimate({}, spec), ValidationError);
  CHECK_THROWS_AS(estimate({{{0, 0}, {1, 1}}}, spec), ValidationError);  // empty cells
  CHECK_THROWS_AS(estimate({{{0, 3}, {1, 1}}}, spec), ValidationError);
  CHECK_THROWS_AS(estimate({{{0, 0, 0}, {1, 1, 1}}}, spec), ValidationError);
}

TEST_CASE("JSONL round trip") {
  const auto records = sample_rounds(quantum::uniform_singlet(4), quantum::MeasurementAngles::equispaced(4, 3), 1000, 5);
  const auto path = temp_file("rounds.jsonl");
  write_rounds(records, path);
  CHECK(read_rounds(path) == records);
  std::filesystem::remove(path);
}

TEST_CASE("JSONL parse errors name the line") {
  const auto path = temp_file("bad.jsonl");
  {
    std::ofstream f(path);
    f << "{\"s\":[0,1],\"o\":[1,-1]}\n{\"s\":[0,1],\"o\":[1,0]}\n";
  }
  try {
    read_rounds(path);
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  {
    std::ofstream f(path);
    f << "{\"s\":[0,1],\"o\":[1,-1]}\n{\"s\":[0,1],\"o\"";
  }
  CHECK_THROWS_AS(read_rounds(path), ValidationError);
  { std::ofstream f(path); }
  const auto empty = read_rounds(path);
  CHECK(empty.empty());
  CHECK_THROWS_AS(estimate(empty, bell::BellSpec::make(2, 3)), ValidationError);
  std::filesystem::remove(path);
}
