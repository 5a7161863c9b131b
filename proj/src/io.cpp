#include "cgst/io.hpp"

#include "cgst/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cgst::io {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

const Json& field(const Json& j, const char* key, const std::string& ctx) {
  require(j.is_object(), ctx + ": expected a JSON object");
  require(j.contains(key), ctx + ": missing field \"" + key + "\"");
  return j.at(key);
}

int as_int(const Json& j, const std::string& what) {
  require(j.is_number_integer(), what + " must be an integer");
  return j.get<int>();
}

double as_double(const Json& j, const std::string& what) {
  require(j.is_number(), what + " must be a number");
  const double v = j.get<double>();
  require(std::isfinite(v), what + " must be finite");
  return v;
}

Json complex_list(const Complex* data, Eigen::Index count) {
  Json out = Json::array();
  for (Eigen::Index m = 0; m < count; ++m) out.push_back({data[m].real(), data[m].imag()});
  return out;
}

std::vector<Complex> parse_complex_list(const Json& j, const std::string& ctx) {
  require(j.is_array(), ctx + " must be an array of [re, im] pairs");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    require(e.is_array() && e.size() == 2, ctx + ": every entry must be an [re, im] pair");
    out.emplace_back(as_double(e[0], ctx + " entry"), as_double(e[1], ctx + " entry"));
  }
  return out;
}

Json matrix_to_json(const Matrix& m) {
  const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = m;
  return complex_list(rows.data(), rows.size());
}

Matrix matrix_from_json(const Json& j, Eigen::Index dim, const std::string& ctx) {
  const auto data = parse_complex_list(j, ctx);
  require(static_cast<Eigen::Index>(data.size()) == dim * dim,
          ctx + ": expected " + std::to_string(dim * dim) + " entries");
  Matrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = data[static_cast<std::size_t>(r * dim + c)];
  return m;
}

std::vector<double> parse_phases(const Json& j, const std::string& ctx) {
  require(j.is_array(), ctx + ": \"phases\" must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(as_double(v, ctx + " phase"));
  return out;
}

PartyDims parse_dims(const Json& j, const std::string& ctx) {
  require(j.is_array(), ctx + ": \"dims\" must be an array");
  std::vector<int> dims;
  for (const auto& v : j) dims.push_back(as_int(v, ctx + " dimension"));
  return PartyDims(dims);
}

}  // namespace

Json spec_to_json(const bell::BellSpec& spec) {
  return {{"n", spec.n}, {"k", spec.k}, {"phases", spec.phases}};
}

bell::BellSpec spec_from_json(const Json& j) {
  const std::string ctx = "spec";
  const int n = as_int(field(j, "n", ctx), "spec.n");
  const int k = as_int(field(j, "k", ctx), "spec.k");
  std::vector<double> phases;
  if (j.contains("phases")) phases = parse_phases(j.at("phases"), ctx);
  require(phases.empty() || static_cast<int>(phases.size()) == n, "spec: need one phase per party");
  return bell::BellSpec::make(n, k, phases);
}

Json table_to_json(const bell::CorrelatorTable& table, const std::vector<double>* phases) {
  Json values = Json::array();
  for (int i = 0; i < table.n(); ++i)
    for (int j = 0; j < table.n(); ++j) {
      if (i == j) continue;
      for (int a = 0; a < table.k(); ++a)
        for (int b = 0; b < table.k(); ++b)
          values.push_back({{"i", i}, {"j", j}, {"a", a}, {"b", b}, {"v", table.at(i, j, a, b)}});
    }
  Json out = {{"n", table.n()}, {"k", table.k()}};
  if (phases) out["phases"] = *phases;
  out["values"] = std::move(values);
  return out;
}

LoadedTable table_from_json(const Json& j) {
  const std::string ctx = "correlator table";
  const int n = as_int(field(j, "n", ctx), "table.n");
  const int k = as_int(field(j, "k", ctx), "table.k");
  require(n >= 2 && k >= 1, ctx + ": need n >= 2 and k >= 1");
  const Json& values = field(j, "values", ctx);
  require(values.is_array(), ctx + ": \"values\" must be an array");

  const auto N = static_cast<std::size_t>(n);
  const auto K = static_cast<std::size_t>(k);
  auto slot = [&](int i, int jj, int a, int b) {
    return ((static_cast<std::size_t>(i) * N + static_cast<std::size_t>(jj)) * K + static_cast<std::size_t>(a)) * K +
           static_cast<std::size_t>(b);
  };
  std::vector<std::optional<double>> seen(N * N * K * K);
  for (const auto& e : values) {
    const int i = as_int(field(e, "i", ctx), "entry.i");
    const int jj = as_int(field(e, "j", ctx), "entry.j");
    const int a = as_int(field(e, "a", ctx), "entry.a");
    const int b = as_int(field(e, "b", ctx), "entry.b");
    const double v = as_double(field(e, "v", ctx), "entry.v");
    require(i >= 0 && i < n && jj >= 0 && jj < n && i != jj && a >= 0 && a < k && b >= 0 && b < k,
            ctx + ": entry index out of range");
    auto& cell = seen[slot(i, jj, a, b)];
    require(!cell || *cell == v, ctx + ": conflicting duplicate entry");
    cell = v;
  }

  LoadedTable out{bell::CorrelatorTable(n, k), std::nullopt};
  for (int i = 0; i < n; ++i)
    for (int jj = i + 1; jj < n; ++jj)
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          const auto& fwd = seen[slot(i, jj, a, b)];
          const auto& bwd = seen[slot(jj, i, b, a)];
          const std::string cell = "(" + std::to_string(i) + "," + std::to_string(jj) + "," + std::to_string(a) +
                                   "," + std::to_string(b) + ")";
          require(fwd || bwd, ctx + ": missing entry " + cell);
          if (fwd && bwd)
            require(std::abs(*fwd - *bwd) <= 1e-9, ctx + ": entry " + cell + " disagrees with its mirror");
          out.table.set(i, jj, a, b, fwd ? *fwd : *bwd);
        }
  out.table.validate(1e-9);
  if (j.contains("phases")) {
    auto phases = parse_phases(j.at("phases"), ctx);
    require(static_cast<int>(phases.size()) == n, ctx + ": need one phase per party");
    out.phases = std::move(phases);
  }
  return out;
}

Json state_to_json(const QuantumState& state) {
  Json out = {{"n", state.parties()}, {"kind", state.is_pure() ? "pure" : "mixed"}};
  if (state.is_pure()) {
    const Vector& v = state.vector();
    out["data"] = complex_list(v.data(), v.size());
  } else {
    out["data"] = matrix_to_json(state.density());
  }
  if (!state.dims().all_qubits()) out["dims"] = state.dims().values();
  return out;
}

QuantumState state_from_json(const Json& j) {
  const std::string ctx = "state";
  const int n = as_int(field(j, "n", ctx), "state.n");
  require(n >= 1, ctx + ": n must be positive");
  const PartyDims dims = j.contains("dims") ? parse_dims(j.at("dims"), ctx) : PartyDims::qubits(n);
  require(dims.parties() == n, ctx + ": \"dims\" must list n dimensions");
  const Json& kind = field(j, "kind", ctx);
  require(kind.is_string(), ctx + ": \"kind\" must be a string");
  const auto D = static_cast<Eigen::Index>(dims.total());
  if (kind == "pure") {
    const auto data = parse_complex_list(field(j, "data", ctx), ctx + ".data");
    require(static_cast<Eigen::Index>(data.size()) == D, ctx + ": expected " + std::to_string(D) + " amplitudes");
    Vector v(D);
    for (Eigen::Index m = 0; m < D; ++m) v(m) = data[static_cast<std::size_t>(m)];
    return QuantumState::pure(std::move(v), dims);
  }
  require(kind == "mixed", ctx + ": \"kind\" must be \"pure\" or \"mixed\"");
  return QuantumState::mixed(matrix_from_json(field(j, "data", ctx), D, ctx + ".data"), dims);
}

Json model_to_json(const sos::BlackBoxModel& model) {
  Json obs = Json::array();
  for (const auto& party : model.observables) {
    Json list = Json::array();
    for (const auto& op : party) list.push_back(matrix_to_json(op));
    obs.push_back(std::move(list));
  }
  return {{"spec", spec_to_json(model.spec)}, {"dims", model.dims.values()}, {"observables", std::move(obs)}};
}

sos::BlackBoxModel model_from_json(const Json& j) {
  const std::string ctx = "model";
  sos::BlackBoxModel m{spec_from_json(field(j, "spec", ctx)), parse_dims(field(j, "dims", ctx), ctx), {}};
  const Json& obs = field(j, "observables", ctx);
  require(obs.is_array() && static_cast<int>(obs.size()) == m.spec.n, ctx + ": need one observable list per party");
  for (int i = 0; i < m.spec.n; ++i) {
    const Json& list = obs[static_cast<std::size_t>(i)];
    require(list.is_array(), ctx + ": observables[" + std::to_string(i) + "] must be an array");
    std::vector<Operator> ops;
    for (std::size_t a = 0; a < list.size(); ++a)
      ops.push_back(matrix_from_json(list[a], m.dims[i],
                                     ctx + ".observables[" + std::to_string(i) + "][" + std::to_string(a) + "]"));
    m.observables.push_back(std::move(ops));
  }
  m.validate();
  return m;
}

Json strategy_to_json(const lhv::Strategy& s) { return s.outcomes; }

Json lhv_to_json(const lhv::LhvResult& r) {
  return {{"min_value", r.min_value},
          {"witness", strategy_to_json(r.witness)},
          {"enumerated", r.enumerated},
          {"complete", r.complete}};
}

Json sos_report_to_json(const sos::SosReport& r) {
  return {{"identity_residual", r.identity_residual}, {"sz_norm2", r.sz_norm2},
          {"sx_norm2", r.sx_norm2},                   {"a_norm2", r.a_norm2},
          {"bell_expectation", r.bell_expectation},   {"reconstruction_gap", r.reconstruction_gap}};
}

Json extraction_to_json(const swap::ExtractionReport& r, bool embed_state) {
  Json out = {{"bell_value", r.bell_value},
              {"epsilon", r.epsilon},
              {"jz2_plus_jx2", r.jz2_plus_jx2},
              {"jsq", r.jsq},
              {"bound", r.bound},
              {"bound_satisfied", r.bound_satisfied},
              {"jz2_plus_jx2_max", r.jz2_plus_jx2_max},
              {"bound_vacuous", r.bound_vacuous}};
  if (embed_state) out["extracted_state"] = state_to_json(r.extracted_state);
  return out;
}

Json estimate_to_json(const sampler::EstimateReport& r) {
  Json counts = Json::array();
  for (int i = 0; i < r.n; ++i)
    for (int j = i + 1; j < r.n; ++j)
      for (int a = 0; a < r.k; ++a)
        for (int b = 0; b < r.k; ++b)
          counts.push_back({{"i", i}, {"j", j}, {"a", a}, {"b", b}, {"count", r.count(i, j, a, b)}});
  return {{"bell_hat", r.bell_hat},
          {"stderr", r.stderr_},
          {"rounds_used", r.rounds_used},
          {"counts", std::move(counts)},
          {"table_hat", table_to_json(r.table_hat)}};
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": malformed JSON (" + e.what() + ")");
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), "cannot open " + path.string() + " for writing");
  out << text;
  require(static_cast<bool>(out), "write failed for " + path.string());
}

}  // namespace cgst::io
