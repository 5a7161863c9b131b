#pragma once

// JSON encodings of the engine's data types. Complex numbers are [re, im]
// pairs; matrices are flat row-major lists of such pairs. Doubles are written
// with round-trip precision.

#include "cgst/bellspec.hpp"
#include "cgst/hilbert.hpp"
#include "cgst/lhv.hpp"
#include "cgst/sampler.hpp"
#include "cgst/sos.hpp"
#include "cgst/swap.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cgst::io {

using Json = nlohmann::json;

Json spec_to_json(const bell::BellSpec& spec);
bell::BellSpec spec_from_json(const Json& j);

// {"n", "k", "phases"?, "values": [{"i","j","a","b","v"}]} with one entry per
// ordered (i != j, a, b).
Json table_to_json(const bell::CorrelatorTable& table, const std::vector<double>* phases = nullptr);

struct LoadedTable {
  bell::CorrelatorTable table;
  std::optional<std::vector<double>> phases;
};

// Accepts either orientation of each pair; a cell missing in both orientations
// is an error, and orientations that disagree by more than 1e-9 are rejected.
LoadedTable table_from_json(const Json& j);

// {"n", "kind": "pure"|"mixed", "data", "dims"?}. Without "dims" every party is a qubit.
Json state_to_json(const QuantumState& state);
QuantumState state_from_json(const Json& j);

// {"spec", "dims", "observables": [[matrix per setting] per party]}. Loading runs
// the model's Hermiticity and involution checks.
Json model_to_json(const sos::BlackBoxModel& model);
sos::BlackBoxModel model_from_json(const Json& j);

Json strategy_to_json(const lhv::Strategy& s);
Json lhv_to_json(const lhv::LhvResult& r);
Json sos_report_to_json(const sos::SosReport& r);
Json extraction_to_json(const swap::ExtractionReport& r, bool embed_state = false);
Json estimate_to_json(const sampler::EstimateReport& r);

Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cgst::io
