#include "cgst/errors.hpp"
#include "cgst/io.hpp"
#include "cgst/quantum.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace cgst;
using io::Json;

TEST_CASE("correlator table JSON round trip") {
  const auto spec = bell::BellSpec::make(4, 3, {0.1, 0.2, 0.3, 0.4});
  const auto table = quantum::correlator_table(quantum::random_singlet(4, 1), quantum::MeasurementAngles::equispaced(4, 3));
  const auto loaded = io::table_from_json(Json::parse(io::table_to_json(table, &spec.phases).dump()));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) CHECK(loaded.table.at(i, j, a, b) == table.at(i, j, a, b));
  REQUIRE(loaded.phases);
  CHECK(*loaded.phases == spec.phases);
}

TEST_CASE("correlator table loader completes mirrors and rejects gaps") {
  Json j = {{"n", 2}, {"k", 3}, {"values", Json::array()}};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) j["values"].push_back({{"i", 0}, {"j", 1}, {"a", a}, {"b", b}, {"v", 0.1 * a - 0.05 * b}});
  const auto t = io::table_from_json(j).table;
  CHECK(t.at(1, 0, 1, 2) == doctest::Approx(0.15));

  Json gap = j;
  gap["values"].erase(gap["values"].begin());
  CHECK_THROWS_AS(io::table_from_json(gap), ValidationError);

  Json conflict = j;
  conflict["values"].push_back({{"i", 1}, {"j", 0}, {"a", 0}, {"b", 0}, {"v", 0.5}});
  CHECK_THROWS_AS(io::table_from_json(conflict), ValidationError);

  Json mirror_ok = j;
  mirror_ok["values"].push_back({{"i", 1}, {"j", 0}, {"a", 0}, {"b", 0}, {"v", 1e-10}});
  CHECK_NOTHROW(io::table_from_json(mirror_ok));
}

TEST_CASE("state JSON round trip") {
  std::mt19937_64 rng(2);
  const auto pure = testing::random_pure(PartyDims({2, 3}), rng);
  const auto back = io::state_from_json(Json::parse(io::state_to_json(pure).dump()));
  CHECK(back.is_pure());
  CHECK(back.dims() == pure.dims());
  CHECK((back.vector() - pure.vector()).norm() == 0.0);

  const auto mixed = quantum::apply_channel(quantum::uniform_singlet(4), quantum::NoiseModel::parse("dephasing:0.2"));
  const auto j = io::state_to_json(mixed);
  CHECK(j["kind"] == "mixed");
  CHECK_FALSE(j.contains("dims"));
  CHECK((io::state_from_json(j).density() - mixed.density()).norm() == 0.0);

  CHECK_THROWS_AS(io::state_from_json({{"n", 1}, {"kind", "pure"}, {"data", {{1.0, 0.0}}}}), ValidationError);
  CHECK_THROWS_AS(io::state_from_json({{"n", 1}, {"kind", "other"}, {"data", Json::array()}}), ValidationError);
}

TEST_CASE("black-box model JSON round trip and validation") {
  const auto m = sos::random_blackbox(bell::BellSpec::make(2, 3, {0.0, 0.4}), PartyDims({2, 3}), 8);
  const auto back = io::model_from_json(Json::parse(io::model_to_json(m).dump()));
  CHECK(back.spec.phases == m.spec.phases);
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 3; ++a) CHECK((back.observables[i][a] - m.observables[i][a]).norm() == 0.0);

  Json broken = io::model_to_json(m);
  broken["observables"][0][0][1] = {0.7, 0.0};
  CHECK_THROWS_AS(io::model_from_json(broken), ValidationError);
}

TEST_CASE("reports serialize at full precision") {
  const auto j = io::lhv_to_json(lhv::brute_force_min(bell::BellSpec::make(2, 3)));
  CHECK(Json::parse(j.dump())["min_value"].get<double>() == lhv::brute_force_min(bell::BellSpec::make(2, 3)).min_value);
  CHECK(j["witness"].size() == 2);
  const double third = 1.0 / 3.0;
  CHECK(Json::parse(Json(third).dump()).get<double>() == third);
}
