#include "cgst/errors.hpp"
#include "cgst/lhv.hpp"
#include "cgst/parallel.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace cgst;
using namespace cgst::lhv;

TEST_CASE("strategy values") {
  const auto spec = bell::BellSpec::make(2, 3);
  CHECK(strategy_value({{{1, 1, 1}, {1, 1, 1}}}, spec) == doctest::Approx(16.0 / 3).epsilon(1e-14));
  CHECK(strategy_value({{{1, 1, 1}, {-1, -1, -1}}}, spec) == doctest::Approx(-16.0 / 3).epsilon(1e-14));
  CHECK_THROWS_AS(strategy_value({{{1, 0, 1}, {1, 1, 1}}}, spec), ValidationError);
  CHECK_THROWS_AS(strategy_value({{{1, 1}, {1, 1}}}, spec), ValidationError);
}

TEST_CASE("strategy_value agrees with the table evaluation, including phases") {
  std::mt19937_64 rng(8);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 4;
    const int k = 3 + trial % 3;
    std::vector<double> phases(static_cast<std::size_t>(n), 0.0);
    if (trial % 2)
      for (auto& p : phases) p = u(rng);
    const auto spec = bell::BellSpec::make(n, k, phases);
    Strategy s;
    for (int i = 0; i < n; ++i) {
      s.outcomes.emplace_back();
      for (int a = 0; a < k; ++a) s.outcomes.back().push_back(coin(rng) ? 1 : -1);
    }
    const double direct = testing::direct_bell_value(testing::naive_table(s.outcomes, k), spec);
    CHECK(strategy_value(s, spec) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(bell::bell_value(deterministic_table(s, spec), spec).value == doctest::Approx(direct).epsilon(1e-12));

    Strategy flipped = s;
    for (auto& row : flipped.outcomes)
      for (auto& v : row) v = -v;
    CHECK(strategy_value(flipped, spec) == doctest::Approx(strategy_value(s, spec)).epsilon(1e-12));
  }
}

TEST_CASE("deterministic tables") {
  const auto spec = bell::BellSpec::make(2, 3);
  const auto ones = deterministic_table({{{1, 1, 1}, {1, 1, 1}}}, spec);
  const auto anti = deterministic_table({{{1, 1, 1}, {-1, -1, -1}}}, spec);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      CHECK(ones.at(0, 1, a, b) == 1.0);
      CHECK(anti.at(0, 1, a, b) == -1.0);
    }
}

TEST_CASE("class counts") {
  CHECK(class_count(bell::BellSpec::make(4, 3)) == 330);
  CHECK(class_count(bell::BellSpec::make(2, 3)) == 36);
  CHECK(class_count(bell::BellSpec::make(2, 3, {0.0, 0.5})) == 64);
  CHECK(class_count(bell::BellSpec::make(40, 8, std::vector<double>(40, 0.1))) == UINT64_MAX);
}

TEST_CASE("brute force reproduces the closed-form classical bound") {
  for (int n : {2, 4})
    for (int k : {3, 4, 5}) {
      const auto spec = bell::BellSpec::make(n, k);
      const auto r = brute_force_min(spec);
      CHECK(r.complete);
      CHECK(r.min_value == doctest::Approx(bell::classical_bound(spec)).epsilon(1e-12));
      CHECK(strategy_value(r.witness, spec) == doctest::Approx(r.min_value).epsilon(1e-12));
    }
}

TEST_CASE("brute force agrees with naive ordered enumeration") {
  // includes odd n and nonzero phases, where only the naive oracle applies
  const std::vector<bell::BellSpec> specs = {bell::BellSpec::make(2, 3), bell::BellSpec::make(3, 3),
                                             bell::BellSpec::make(2, 4), bell::BellSpec::make(3, 4, {0.3, -1.0, 2.2}),
                                             bell::BellSpec::make(2, 5, {0.0, 0.7})};
  for (const auto& spec : specs) {
    const double oracle = testing::naive_lhv_min(spec);
    CHECK(brute_force_min(spec).min_value == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(reference::brute_force_min(spec).min_value == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("parallel search matches the serial reference exactly") {
  const std::vector<bell::BellSpec> specs = {bell::BellSpec::make(4, 4), bell::BellSpec::make(5, 3),
                                             bell::BellSpec::make(3, 3, {0.1, 0.9, -0.4})};
  for (int threads : {1, 3}) {
    set_threads(threads);
    for (const auto& spec : specs) {
      const auto fast = brute_force_min(spec);
      const auto ref = reference::brute_force_min(spec);
      CHECK(fast.min_value == ref.min_value);
      CHECK(fast.witness == ref.witness);
      CHECK(fast.enumerated == ref.enumerated);
    }
  }
  set_threads(0);
}

TEST_CASE("budget stops the search") {
  const auto spec = bell::BellSpec::make(4, 4);
  const auto r = brute_force_min(spec, 10);
  CHECK_FALSE(r.complete);
  CHECK(r.enumerated <= 10);
  CHECK(r.min_value >= bell::classical_bound(spec) - 1e-12);
}
