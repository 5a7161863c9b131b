#include "cgst/sos.hpp"

#include "cgst/errors.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace cgst::sos {

using bell::BellSpec;
using std::numbers::pi;

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

const Operator& sigma(const BlackBoxModel& m, int i, int a) {
  return m.observables[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
}

Operator embedded_sum(const std::vector<Operator>& locals, const PartyDims& dims) {
  const auto D = static_cast<Eigen::Index>(dims.total());
  Operator out = Operator::Zero(D, D);
  for (int i = 0; i < dims.parties(); ++i)
    out += hilbert::embed_local(locals[static_cast<std::size_t>(i)], i, dims);
  return out;
}

void check_state(const BlackBoxModel& model, const QuantumState& state) {
  require(state.dims() == model.dims, "state does not live on the model's joint space");
}

}  // namespace

void BlackBoxModel::validate() const {
  spec.validate();
  require(dims.parties() == spec.n, "BlackBoxModel: dims list must have one entry per party");
  require(static_cast<int>(observables.size()) == spec.n,
          "BlackBoxModel: observables must have one list per party");
  for (int i = 0; i < spec.n; ++i) {
    const auto& list = observables[static_cast<std::size_t>(i)];
    require(static_cast<int>(list.size()) == spec.k,
            "BlackBoxModel: party " + std::to_string(i) + " needs k observables");
    const int d = dims[i];
    for (int a = 0; a < spec.k; ++a) {
      const Operator& op = list[static_cast<std::size_t>(a)];
      require(op.rows() == d && op.cols() == d,
              "BlackBoxModel: observable (" + std::to_string(i) + "," + std::to_string(a) +
                  ") has the wrong dimension");
      require(hilbert::is_hermitian(op, 1e-12 * d),
              "BlackBoxModel: observable (" + std::to_string(i) + "," + std::to_string(a) +
                  ") is not Hermitian");
      require(hilbert::is_involution(op, 1e-10 * d),
              "BlackBoxModel: observable (" + std::to_string(i) + "," + std::to_string(a) +
                  ") does not square to the identity");
    }
  }
}

BlackBoxModel qubit_model(const BellSpec& spec, const quantum::MeasurementAngles& angles) {
  spec.validate();
  require(angles.parties() == spec.n && angles.settings() == spec.k,
          "qubit_model: angle table does not match (n, k)");
  BlackBoxModel m{spec, PartyDims::qubits(spec.n), quantum::observables_from_angles(angles)};
  m.validate();
  return m;
}

BlackBoxModel ideal_qubit_model(const BellSpec& spec) {
  return qubit_model(spec, quantum::MeasurementAngles::equispaced(spec.n, spec.k));
}

BlackBoxModel random_blackbox(const BellSpec& spec, const PartyDims& dims, std::uint64_t seed) {
  spec.validate();
  require(dims.parties() == spec.n, "random_blackbox: dims must list one dimension per party");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::bernoulli_distribution coin(0.5);

  BlackBoxModel m{spec, dims, {}};
  for (int i = 0; i < spec.n; ++i) {
    const int d = dims[i];
    std::vector<Operator> list;
    for (int a = 0; a < spec.k; ++a) {
      Matrix g(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
      Eigen::HouseholderQR<Matrix> qr(g);
      Matrix q = qr.householderQ();
      const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (int c = 0; c < d; ++c) {
        const double mag = std::abs(r(c, c));
        if (mag > 0) q.col(c) *= r(c, c) / mag;
      }
      Eigen::VectorXcd signs(d);
      for (int r2 = 0; r2 < d; ++r2) signs(r2) = coin(rng) ? 1.0 : -1.0;
      Operator obs = q * signs.asDiagonal() * q.adjoint();
      list.push_back(0.5 * (obs + obs.adjoint()));
    }
    m.observables.push_back(std::move(list));
  }
  m.validate();
  return m;
}

LocalOperators local_operators(const BlackBoxModel& model, int party) {
  const int k = model.spec.k;
  const int d = model.dims[party];
  LocalOperators ops;
  ops.z = Operator::Zero(d, d);
  ops.x = Operator::Zero(d, d);
  for (int a = 0; a < k; ++a) {
    ops.z += (2.0 / k) * std::cos(a * pi / k) * sigma(model, party, a);
    ops.x += (2.0 / k) * std::sin(a * pi / k) * sigma(model, party, a);
  }
  for (int a = 0; a < k; ++a) {
    Operator op = sigma(model, party, a);
    for (int b = 0; b < k; ++b) op -= (2.0 / k) * std::cos(pi * (a - b) / k) * sigma(model, party, b);
    ops.a.push_back(std::move(op));
  }
  return ops;
}

DerivedOperators derive(const BlackBoxModel& model) {
  model.validate();
  DerivedOperators out;
  std::vector<Operator> z_terms, x_terms;
  for (int i = 0; i < model.spec.n; ++i) {
    out.local.push_back(local_operators(model, i));
    const auto& l = out.local.back();
    const double c = std::cos(model.spec.phase(i));
    const double s = std::sin(model.spec.phase(i));
    z_terms.push_back(c * l.z - s * l.x);
    x_terms.push_back(c * l.x + s * l.z);
  }
  out.sz = embedded_sum(z_terms, model.dims);
  out.sx = embedded_sum(x_terms, model.dims);
  return out;
}

Operator bell_operator(const BlackBoxModel& model) {
  model.validate();
  const int k = model.spec.k;
  const auto D = static_cast<Eigen::Index>(model.dims.total());
  Operator total = Operator::Zero(D, D);
  Operator self = Operator::Zero(D, D);
  for (int i = 0; i < model.spec.n; ++i) {
    Operator w = Operator::Zero(model.dims[i], model.dims[i]);
    for (int a = 0; a < k; ++a) w += std::polar(1.0, a * pi / k + model.spec.phase(i)) * sigma(model, i, a);
    const Operator local_self = w * w.adjoint() + w.adjoint() * w;
    total += hilbert::embed_local(w, i, model.dims);
    self += hilbert::embed_local(local_self, i, model.dims);
  }
  Operator b = (total * total.adjoint() + total.adjoint() * total - self) / static_cast<double>(k);
  return 0.5 * (b + b.adjoint());
}

Operator sos_operator(const BlackBoxModel& model) {
  const DerivedOperators d = derive(model);
  const int n = model.spec.n;
  const int k = model.spec.k;
  const auto D = static_cast<Eigen::Index>(model.dims.total());
  Operator sos = (k / 2.0) * (d.sz * d.sz + d.sx * d.sx);
  for (int i = 0; i < n; ++i) {
    Operator local = Operator::Zero(model.dims[i], model.dims[i]);
    for (const auto& a : d.local[static_cast<std::size_t>(i)].a) local += a * a;
    sos += hilbert::embed_local(local, i, model.dims);
  }
  sos -= static_cast<double>(n) * k * Operator::Identity(D, D);
  return sos;
}

namespace reference {

Operator bell_operator(const BlackBoxModel& model) {
  model.validate();
  const auto& spec = model.spec;
  const auto D = static_cast<Eigen::Index>(model.dims.total());
  Operator b = Operator::Zero(D, D);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.n; ++j) {
      if (i == j) continue;
      for (int a = 0; a < spec.k; ++a)
        for (int bb = 0; bb < spec.k; ++bb) {
          const double w = bell::pair_weight(spec, i, j, a, bb);
          b += w * hilbert::embed_pair(hilbert::kron(sigma(model, i, a), sigma(model, j, bb)), i, j,
                                       model.dims);
        }
    }
  return b;
}

}  // namespace reference

double sos_identity_residual(const BlackBoxModel& model) {
  return (bell_operator(model) - sos_operator(model)).norm();
}

SosReport sos_residual_norms(const BlackBoxModel& model, const QuantumState& state) {
  check_state(model, state);
  const DerivedOperators d = derive(model);
  const Operator bell = bell_operator(model);
  const int n = model.spec.n;
  const int k = model.spec.k;

  SosReport r;
  r.identity_residual = (bell - sos_operator(model)).norm();
  r.sz_norm2 = state.norm_squared(d.sz);
  r.sx_norm2 = state.norm_squared(d.sx);
  double a_total = 0.0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> row;
    for (const auto& a : d.local[static_cast<std::size_t>(i)].a) {
      row.push_back(state.norm_squared(hilbert::embed_local(a, i, model.dims)));
      a_total += row.back();
    }
    r.a_norm2.push_back(std::move(row));
  }
  r.bell_expectation = state.expectation(bell).real();
  const double shifted = r.bell_expectation + static_cast<double>(n) * k;
  r.reconstruction_gap = std::abs((k / 2.0) * (r.sz_norm2 + r.sx_norm2) + a_total - shifted);
  return r;
}

std::vector<PauliResiduals> pauli_relation_residuals(const BlackBoxModel& model,
                                                     const QuantumState& state) {
  check_state(model, state);
  model.validate();
  std::vector<PauliResiduals> out;
  for (int i = 0; i < model.spec.n; ++i) {
    const LocalOperators l = local_operators(model, i);
    const Operator one = hilbert::identity(model.dims[i]);
    PauliResiduals r;
    r.z_square = std::sqrt(std::max(0.0, state.norm_squared(hilbert::embed_local(l.z * l.z - one, i, model.dims))));
    r.x_square = std::sqrt(std::max(0.0, state.norm_squared(hilbert::embed_local(l.x * l.x - one, i, model.dims))));
    r.anticommutator =
        std::sqrt(std::max(0.0, state.norm_squared(hilbert::embed_local(l.z * l.x + l.x * l.z, i, model.dims))));
    out.push_back(r);
  }
  return out;
}

std::vector<std::vector<double>> measurement_selftest_residuals(const BlackBoxModel& model,
                                                                const QuantumState& state) {
  check_state(model, state);
  model.validate();
  const int k = model.spec.k;
  std::vector<std::vector<double>> out;
  for (int i = 0; i < model.spec.n; ++i) {
    const LocalOperators l = local_operators(model, i);
    std::vector<double> row;
    for (int a = 0; a < k; ++a) {
      const Operator diff = std::cos(a * pi / k) * l.z + std::sin(a * pi / k) * l.x - sigma(model, i, a);
      row.push_back(std::sqrt(std::max(0.0, state.norm_squared(hilbert::embed_local(diff, i, model.dims)))));
    }
    out.push_back(std::move(row));
  }
  return out;
}

NormBounds norm_bounds(int k) {
  require(k >= 3, "norm_bounds: k must be >= 3");
  const double h = std::sin(pi / (2.0 * k));
  NormBounds b;
  b.x_bound = std::sin(pi / k) / (k * h * h);
  double abs_cos = 0.0;
  for (int a = 0; a < k; ++a) abs_cos += std::abs(std::cos(a * pi / k));
  b.z_bound = 2.0 / k * abs_cos;
  return b;
}

Operator r_operator(const LocalOperators& ops, const Operator& sigma_a, int a, int k) {
  const Complex phase = std::polar(1.0, a * pi / k);
  return 2.0 * phase * sigma_a - (ops.z + Complex(0, 1) * ops.x);
}

}  // namespace cgst::sos
