#include "cgst/quantum.hpp"

#include "cgst/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

namespace cgst::quantum {

using bell::CorrelatorTable;
using hilbert::Axis;
using std::numbers::pi;

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

std::size_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::size_t out = 1;
  for (int i = 1; i <= r; ++i) out = out * static_cast<std::size_t>(n - r + i) / static_cast<std::size_t>(i);
  return out;
}

void check_observables(const QuantumState& state, const LocalObservables& obs) {
  const auto& dims = state.dims();
  require(static_cast<int>(obs.size()) == dims.parties(),
          "observables: party count does not match the state");
  require(!obs.empty() && !obs.front().empty(), "observables: need at least one setting");
  const std::size_t k = obs.front().size();
  for (int i = 0; i < dims.parties(); ++i) {
    require(obs[static_cast<std::size_t>(i)].size() == k, "observables: ragged setting count");
    for (const auto& op : obs[static_cast<std::size_t>(i)]) {
      require(op.rows() == dims[i] && op.cols() == dims[i],
              "observables: operator dimension does not match party " + std::to_string(i));
    }
  }
}

std::vector<std::pair<int, int>> ordered_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return pairs;
}

Operator y_rotation(double phi) {
  // exp(+i phi Y / 2): conjugation maps Z cos t + X sin t to the direction t + phi.
  Operator r(2, 2);
  const double c = std::cos(phi / 2.0);
  const double s = std::sin(phi / 2.0);
  r << c, s, -s, c;
  return r;
}

}  // namespace

Operator measurement_observable(double theta) {
  return std::cos(theta) * hilbert::pauli_z() + std::sin(theta) * hilbert::pauli_x();
}

MeasurementAngles MeasurementAngles::equispaced(int n, int k) {
  require(n >= 1 && k >= 1, "equispaced angles need n >= 1 and k >= 1");
  MeasurementAngles m;
  std::vector<double> grid(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) grid[static_cast<std::size_t>(a)] = a * pi / k;
  m.angles.assign(static_cast<std::size_t>(n), grid);
  return m;
}

LocalObservables observables_from_angles(const MeasurementAngles& angles) {
  LocalObservables obs;
  for (const auto& party : angles.angles) {
    std::vector<Operator> ops;
    for (double theta : party) ops.push_back(measurement_observable(theta));
    obs.push_back(std::move(ops));
  }
  return obs;
}

// ---------------------------------------------------------------------------
// Singlet manifold

std::size_t singlet_dimension(int n) {
  require(n >= 2 && n % 2 == 0, "singlet manifold needs an even number of qubits");
  return binomial(n, n / 2) - binomial(n, n / 2 - 1);
}

SingletBasis singlet_basis(int n) {
  const std::size_t expected = singlet_dimension(n);
  const auto dims = PartyDims::qubits(n);
  const auto D = static_cast<Eigen::Index>(dims.total());

  const Eigen::MatrixXd jsq = hilbert::total_spin_squared(n).real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jsq);
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index m = 0; m < D; ++m)
    if (std::abs(es.eigenvalues()(m)) <= 1e-9) kernel.push_back(m);
  if (kernel.size() != expected) {
    throw InvariantError("singlet_basis: kernel of J^2 has dimension " + std::to_string(kernel.size()) +
                         ", expected " + std::to_string(expected));
  }
  Eigen::MatrixXd v(D, static_cast<Eigen::Index>(kernel.size()));
  for (std::size_t m = 0; m < kernel.size(); ++m) v.col(static_cast<Eigen::Index>(m)) = es.eigenvectors().col(kernel[m]);

  // Canonical basis: Gram-Schmidt over projected computational basis states.
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::Index x = 0; x < D && basis.size() < expected; ++x) {
    Eigen::VectorXd u = v * v.row(x).transpose();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) u -= b.dot(u) * b;
    const double norm = u.norm();
    if (norm > 1e-6) basis.push_back(u / norm);
  }

  struct Keyed {
    Eigen::VectorXd vec;
    double lead;
    Eigen::Index index;
  };
  std::vector<Keyed> keyed;
  for (auto& b : basis) {
    Eigen::Index lead = 0;
    while (lead < D && std::abs(b(lead)) <= 1e-12) ++lead;
    if (b(lead) < 0) b = -b;
    keyed.push_back({b, std::abs(b(lead)), lead});
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& l, const Keyed& r) {
    if (std::abs(l.lead - r.lead) > 1e-12) return l.lead > r.lead;
    return l.index < r.index;
  });

  SingletBasis out;
  out.n = n;
  for (const auto& k : keyed) out.basis.push_back(k.vec.cast<Complex>());
  return out;
}

QuantumState singlet_mixture(int n, std::span<const double> weights) {
  const SingletBasis sb = singlet_basis(n);
  require(weights.size() == sb.dim(), "singlet_mixture: need one weight per basis vector");
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), "singlet_mixture: weights must be non-negative");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, "singlet_mixture: weights must sum to 1");
  const auto D = sb.basis.front().size();
  Matrix rho = Matrix::Zero(D, D);
  for (std::size_t m = 0; m < sb.dim(); ++m) rho += weights[m] * sb.basis[m] * sb.basis[m].adjoint();
  return QuantumState::mixed(std::move(rho), PartyDims::qubits(n));
}

QuantumState singlet_superposition(int n, std::span<const Complex> coefficients) {
  const SingletBasis sb = singlet_basis(n);
  require(coefficients.size() == sb.dim(), "singlet_superposition: need one coefficient per basis vector");
  Vector psi = Vector::Zero(sb.basis.front().size());
  for (std::size_t m = 0; m < sb.dim(); ++m) psi += coefficients[m] * sb.basis[m];
  return QuantumState::pure(std::move(psi), PartyDims::qubits(n));
}

QuantumState uniform_singlet(int n) {
  const std::size_t d = singlet_dimension(n);
  std::vector<double> w(d, 1.0 / static_cast<double>(d));
  double total = 0.0;
  for (double x : w) total += x;
  w.back() += 1.0 - total;
  return singlet_mixture(n, w);
}

QuantumState random_singlet(int n, std::uint64_t seed) {
  const std::size_t d = singlet_dimension(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> c(d);
  double norm2 = 0.0;
  for (auto& z : c) {
    z = Complex(g(rng), g(rng));
    norm2 += std::norm(z);
  }
  for (auto& z : c) z /= std::sqrt(norm2);
  const SingletBasis sb = singlet_basis(n);
  Vector psi = Vector::Zero(sb.basis.front().size());
  for (std::size_t m = 0; m < d; ++m) psi += c[m] * sb.basis[m];
  psi.normalize();
  return QuantumState::pure(std::move(psi), PartyDims::qubits(n));
}

QuantumState rotated_singlet(const QuantumState& singlet, std::span<const double> phases) {
  const auto& dims = singlet.dims();
  require(dims.all_qubits(), "rotated_singlet: qubit parties required");
  require(static_cast<int>(phases.size()) == dims.parties(), "rotated_singlet: need one phase per party");
  if (singlet.is_pure()) {
    Vector psi = singlet.vector();
    for (int i = 0; i < dims.parties(); ++i)
      psi = hilbert::apply_local(y_rotation(phases[static_cast<std::size_t>(i)]), i, dims, psi);
    psi.normalize();
    return QuantumState::pure(std::move(psi), dims);
  }
  Matrix rho = singlet.density();
  for (int i = 0; i < dims.parties(); ++i) {
    const Operator r = y_rotation(phases[static_cast<std::size_t>(i)]);
    rho = hilbert::apply_local_left(r, i, dims, rho);
    rho = hilbert::apply_local_left(r, i, dims, Matrix(rho.adjoint())).adjoint();
  }
  return QuantumState::mixed(std::move(rho), dims);
}

QuantumState rotated_singlet(int n, std::span<const double> phases) {
  const SingletBasis sb = singlet_basis(n);
  return rotated_singlet(QuantumState::pure(sb.basis.front(), PartyDims::qubits(n)), phases);
}

// ---------------------------------------------------------------------------
// Correlators

CorrelatorTable correlator_table(const QuantumState& state, const LocalObservables& obs) {
  check_observables(state, obs);
  const int n = state.parties();
  const int k = static_cast<int>(obs.front().size());
  const auto pairs = ordered_pairs(n);
  CorrelatorTable table(n, k);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    const int keep[2] = {i, j};
    const Matrix rho = hilbert::partial_trace(state, keep).density();
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        const Operator ab = hilbert::kron(obs[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)],
                                          obs[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)]);
        table.set(i, j, a, b, (rho.transpose().cwiseProduct(ab)).sum().real());
      }
  }
  return table;
}

CorrelatorTable correlator_table(const QuantumState& state, const MeasurementAngles& angles) {
  require(state.dims().all_qubits(), "correlator_table: angle measurements need qubit parties");
  return correlator_table(state, observables_from_angles(angles));
}

namespace reference {

CorrelatorTable correlator_table(const QuantumState& state, const LocalObservables& obs) {
  check_observables(state, obs);
  const auto& dims = state.dims();
  const int n = state.parties();
  const int k = static_cast<int>(obs.front().size());
  CorrelatorTable table(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          const Operator op =
              hilbert::embed_local(obs[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)], i, dims) *
              hilbert::embed_local(obs[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)], j, dims);
          table.set(i, j, a, b, state.expectation(op).real());
        }
  return table;
}

}  // namespace reference

// ---------------------------------------------------------------------------
// Noise

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::depolarizing_global: return "depolarizing";
    case NoiseKind::dephasing_local: return "dephasing";
    case NoiseKind::angle_jitter: return "jitter";
  }
  return "unknown";
}

NoiseModel NoiseModel::parse(const std::string& text, std::uint64_t seed) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, "noise model must look like kind:strength, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  NoiseModel m;
  m.seed = seed;
  if (kind == "depolarizing" || kind == "depolarizing_global") {
    m.kind = NoiseKind::depolarizing_global;
  } else if (kind == "dephasing" || kind == "dephasing_local") {
    m.kind = NoiseKind::dephasing_local;
  } else if (kind == "jitter" || kind == "angle_jitter") {
    m.kind = NoiseKind::angle_jitter;
  } else {
    throw ValidationError("unknown noise kind '" + kind + "'");
  }
  try {
    std::size_t used = 0;
    const std::string value = text.substr(colon + 1);
    m.strength = std::stod(value, &used);
    require(used == value.size(), "trailing characters in noise strength");
  } catch (const std::logic_error&) {
    throw ValidationError("invalid noise strength in '" + text + "'");
  }
  m.validate();
  return m;
}

void NoiseModel::validate() const {
  require(std::isfinite(strength) && strength >= 0.0, "noise strength must be >= 0");
  if (kind != NoiseKind::angle_jitter) require(strength <= 1.0, "noise probability must be <= 1");
}

QuantumState apply_channel(const QuantumState& state, const NoiseModel& model) {
  model.validate();
  if (model.kind == NoiseKind::angle_jitter || model.strength == 0.0) return state;
  const auto& dims = state.dims();
  const double p = model.strength;
  Matrix rho = state.density();
  if (model.kind == NoiseKind::depolarizing_global) {
    const auto D = static_cast<Eigen::Index>(dims.total());
    rho = (1.0 - p) * rho + (p / static_cast<double>(D)) * Matrix::Identity(D, D);
  } else {
    require(dims.all_qubits(), "dephasing noise needs qubit parties");
    const Operator z = hilbert::pauli_z();
    for (int i = 0; i < dims.parties(); ++i) {
      const Matrix zr = hilbert::apply_local_left(z, i, dims, rho);
      const Matrix zrz = hilbert::apply_local_left(z, i, dims, Matrix(zr.adjoint())).adjoint();
      rho = (1.0 - p) * rho + p * zrz;
    }
  }
  return QuantumState::mixed(std::move(rho), dims);
}

MeasurementAngles jitter_angles(const MeasurementAngles& angles, const NoiseModel& model) {
  model.validate();
  if (model.kind != NoiseKind::angle_jitter || model.strength == 0.0) return angles;
  std::mt19937_64 rng(model.seed);
  std::uniform_real_distribution<double> delta(-model.strength, model.strength);
  MeasurementAngles out = angles;
  for (auto& party : out.angles)
    for (double& theta : party) theta += delta(rng);
  return out;
}

Realization apply_noise(const QuantumState& state, const MeasurementAngles& angles,
                        const NoiseModel& model) {
  return Realization{apply_channel(state, model), jitter_angles(angles, model)};
}

Eq9Check eq9_check(const QuantumState& state, int k) {
  const auto& dims = state.dims();
  require(dims.all_qubits(), "eq9_check: qubit parties required");
  const int n = dims.parties();
  const auto spec = bell::BellSpec::make(n, k);
  const auto table = correlator_table(state, MeasurementAngles::equispaced(n, k));
  Eq9Check out;
  out.lhs = bell::bell_value(table, spec).value + static_cast<double>(n) * k;
  const Operator jz = hilbert::collective_spin(n, Axis::z);
  const Operator jx = hilbert::collective_spin(n, Axis::x);
  out.rhs = 2.0 * k * (state.norm_squared(jz) + state.norm_squared(jx));
  return out;
}

Operator phased_collective_spin(std::span<const double> phases, hilbert::Axis axis) {
  require(axis != Axis::y, "phased_collective_spin: only x and z components are defined");
  const int n = static_cast<int>(phases.size());
  const auto dims = PartyDims::qubits(n);
  const auto D = static_cast<Eigen::Index>(dims.total());
  const Operator x = hilbert::pauli_x();
  const Operator z = hilbert::pauli_z();
  Operator j = Operator::Zero(D, D);
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(phases[static_cast<std::size_t>(i)]);
    const double s = std::sin(phases[static_cast<std::size_t>(i)]);
    const Operator local = axis == Axis::z ? Operator(c * z - s * x) : Operator(c * x + s * z);
    j += 0.5 * hilbert::embed_local(local, i, dims);
  }
  return j;
}

double phase_statistic(const QuantumState& state, std::span<const double> phases) {
  require(state.dims().all_qubits() && static_cast<int>(phases.size()) == state.parties(),
          "phase_statistic: need a qubit state and one phase per party");
  return 4.0 * (state.norm_squared(phased_collective_spin(phases, Axis::x)) +
                state.norm_squared(phased_collective_spin(phases, Axis::z)));
}

double phase_statistic_cosine_part(const QuantumState& state, std::span<const double> phases) {
  const auto& dims = state.dims();
  require(dims.all_qubits() && static_cast<int>(phases.size()) == dims.parties(),
          "phase_statistic_cosine_part: need a qubit state and one phase per party");
  const int n = dims.parties();
  std::vector<Operator> xs, zs;
  for (int i = 0; i < n; ++i) {
    xs.push_back(hilbert::embed_local(hilbert::pauli_x(), i, dims));
    zs.push_back(hilbert::embed_local(hilbert::pauli_z(), i, dims));
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double w = std::cos(phases[static_cast<std::size_t>(i)] - phases[static_cast<std::size_t>(j)]);
      const Operator op = xs[static_cast<std::size_t>(i)] * xs[static_cast<std::size_t>(j)] +
                          zs[static_cast<std::size_t>(i)] * zs[static_cast<std::size_t>(j)];
      total += w * state.expectation(op).real();
    }
  return total;
}

}  // namespace cgst::quantum
