#include "cgst/swap.hpp"

#include "cgst/bellspec.hpp"
#include "cgst/errors.hpp"
#include "cgst/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <string>

namespace cgst::swap {

using sos::BlackBoxModel;

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

void check_inputs(const BlackBoxModel& model, const QuantumState& state) {
  model.validate();
  require(state.dims() == model.dims, "extract_state: state does not live on the model's space");
  const int n = model.spec.n;
  require(n < 62, "extract_state: too many parties");
  const std::size_t ancillas = std::size_t{1} << n;
  require(ancillas <= hilbert::dimension_cap() / model.dims.total(),
          "extract_state: ancillas (x) boxes exceed the dimension cap");
}

Operator controlled(const Operator& target) {
  const auto d = target.rows();
  Operator c = Operator::Identity(2 * d, 2 * d);
  c.bottomRightCorner(d, d) = target;
  return c;
}

// Columns of ancilla-state |s> (x) box for the map  box -> Phi (|+> (x) box).
std::vector<Operator> kraus_blocks(const Operator& phi) {
  const auto d = phi.rows() / 2;
  const Operator v = (phi.leftCols(d) + phi.rightCols(d)) / std::sqrt(2.0);
  return {v.topRows(d), v.bottomRows(d)};
}

// Square root factor L with rho = L L^dag (columns scaled eigenvectors).
Matrix state_factor(const QuantumState& state) {
  if (state.is_pure()) return state.vector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(state.density());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index m = 0; m < es.eigenvalues().size(); ++m)
    if (es.eigenvalues()(m) > 1e-15) keep.push_back(m);
  Matrix l(es.eigenvectors().rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    l.col(static_cast<Eigen::Index>(c)) = std::sqrt(es.eigenvalues()(keep[c])) * es.eigenvectors().col(keep[c]);
  return l;
}

Matrix hermitian_part(const Matrix& rho) { return 0.5 * (rho + rho.adjoint()); }

}  // namespace

RegularizedPair regularize(const BlackBoxModel& model) {
  model.validate();
  RegularizedPair pair;
  for (int i = 0; i < model.spec.n; ++i) {
    const sos::LocalOperators l = sos::local_operators(model, i);
    pair.z.push_back(hilbert::dichotomize(l.z));
    pair.x.push_back(hilbert::dichotomize(l.x));
  }
  return pair;
}

Operator partial_swap_unitary(const RegularizedPair& pair, int party) {
  require(party >= 0 && static_cast<std::size_t>(party) < pair.z.size(), "partial_swap_unitary: bad party");
  const Operator& z = pair.z[static_cast<std::size_t>(party)];
  const Operator& x = pair.x[static_cast<std::size_t>(party)];
  const auto d = static_cast<int>(z.rows());
  return controlled(x) * hilbert::kron(hilbert::hadamard(), hilbert::identity(d)) * controlled(z);
}

QuantumState extract_state(const BlackBoxModel& model, const QuantumState& state) {
  check_inputs(model, state);
  const int n = model.spec.n;
  const RegularizedPair pair = regularize(model);
  std::vector<std::vector<Operator>> blocks;
  for (int i = 0; i < n; ++i) blocks.push_back(kraus_blocks(partial_swap_unitary(pair, i)));

  // rho_hat[s, t] = Tr[K_s rho K_t^dag] with K_s = (x)_i K_{i, s_i}; with rho = L L^dag
  // this is the Frobenius product of K_t L and K_s L.
  const Matrix factor = state_factor(state);
  const long long count = 1LL << n;
  std::vector<Matrix> images(static_cast<std::size_t>(count));

#pragma omp parallel for schedule(static)
  for (long long s = 0; s < count; ++s) {
    Matrix w = factor;
    for (int i = 0; i < n; ++i) {
      const int bit = static_cast<int>((s >> (n - 1 - i)) & 1);
      w = hilbert::apply_local_left(blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(bit)], i,
                                    model.dims, w);
    }
    images[static_cast<std::size_t>(s)] = std::move(w);
  }

  Matrix rho = Matrix::Zero(count, count);
#pragma omp parallel for schedule(static)
  for (long long s = 0; s < count; ++s)
    for (long long t = 0; t <= s; ++t) {
      const Complex v = (images[static_cast<std::size_t>(t)].conjugate().cwiseProduct(images[static_cast<std::size_t>(s)])).sum();
      rho(s, t) = v;
      rho(t, s) = std::conj(v);
    }
  return QuantumState::mixed(hermitian_part(std::move(rho)), PartyDims::qubits(n));
}

namespace reference {

QuantumState extract_state(const BlackBoxModel& model, const QuantumState& state) {
  check_inputs(model, state);
  const int n = model.spec.n;
  const RegularizedPair pair = regularize(model);

  std::vector<int> joint(static_cast<std::size_t>(n), 2);
  for (int d : model.dims.values()) joint.push_back(d);
  const PartyDims dims(joint);
  const auto D = static_cast<Eigen::Index>(dims.total());

  Operator u = Operator::Identity(D, D);
  for (int i = 0; i < n; ++i) u = hilbert::embed_pair(partial_swap_unitary(pair, i), i, n + i, dims) * u;

  Vector plus = Vector::Constant(2, 1.0 / std::sqrt(2.0));
  Vector ancillas = Vector::Ones(1);
  for (int i = 0; i < n; ++i) ancillas = hilbert::kron(ancillas, plus);
  const Matrix anc_rho = ancillas * ancillas.adjoint();
  const Matrix joint_rho = u * hilbert::kron(anc_rho, state.density()) * u.adjoint();

  std::vector<int> keep(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) keep[static_cast<std::size_t>(i)] = i;
  const QuantumState reduced =
      hilbert::partial_trace(QuantumState::mixed(hermitian_part(joint_rho), dims), keep);
  return QuantumState::mixed(hermitian_part(reduced.density()), PartyDims::qubits(n));
}

}  // namespace reference

RobustnessConstants RobustnessConstants::from_alpha(double alpha) {
  require(alpha >= 0.0, "alpha must be non-negative");
  RobustnessConstants c;
  c.alpha = alpha;
  c.alpha0 = alpha;
  c.alpha1 = std::pow(1.0 + std::sqrt(alpha) / 2.0, 2);
  const double cross = std::sqrt(c.alpha0) + (1.0 + 8.0 / std::numbers::pi) * std::sqrt(c.alpha1);
  c.r = c.alpha1 + (c.alpha1 + cross * cross) / 2.0;
  return c;
}

double robustness_bound(int n, double epsilon) {
  require(n >= 1, "robustness_bound: n must be positive");
  require(std::isfinite(epsilon) && epsilon >= 0.0, "robustness_bound: epsilon must be >= 0");
  const double r = RobustnessConstants::standard().r;
  const double root = std::sqrt(2.0 / n) + std::sqrt(r);
  return static_cast<double>(n) * n * epsilon / 4.0 * root * root;
}

ExtractionReport extraction_report(const BlackBoxModel& model, const QuantumState& state) {
  model.validate();
  const auto table = quantum::correlator_table(state, model.observables);
  const auto value = bell::bell_value(table, model.spec);

  ExtractionReport rep{.bell_value = value.value,
                       .epsilon = bell::violation_deficit(value),
                       .extracted_state = extract_state(model, state)};
  const int n = model.spec.n;
  const auto& phases = model.spec.phases;
  const Operator jz = quantum::phased_collective_spin(phases, hilbert::Axis::z);
  const Operator jx = quantum::phased_collective_spin(phases, hilbert::Axis::x);
  const auto& out = rep.extracted_state;
  rep.jz2_plus_jx2 = out.norm_squared(jz) + out.norm_squared(jx);
  rep.jsq = out.expectation(hilbert::total_spin_squared(n)).real();
  rep.bound = robustness_bound(n, rep.epsilon);
  rep.bound_satisfied = rep.jz2_plus_jx2 <= rep.bound + 1e-9;
  Eigen::SelfAdjointEigenSolver<Matrix> es(jz * jz + jx * jx, Eigen::EigenvaluesOnly);
  rep.jz2_plus_jx2_max = es.eigenvalues().maxCoeff();
  rep.bound_vacuous = rep.bound >= rep.jz2_plus_jx2_max;
  return rep;
}

}  // namespace cgst::swap
