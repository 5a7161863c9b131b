#include "cgst/hilbert.hpp"

#include "cgst/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

namespace cgst::hilbert {

namespace {

std::atomic<std::size_t> g_dimension_cap{std::size_t{1} << 14};

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

}  // namespace

std::size_t dimension_cap() { return g_dimension_cap.load(); }

void set_dimension_cap(std::size_t cap) {
  require(cap >= 2, "dimension cap must be at least 2");
  g_dimension_cap.store(cap);
}

// ---------------------------------------------------------------------------
// PartyDims

PartyDims::PartyDims(std::vector<int> dims) : dims_(std::move(dims)) {
  require(!dims_.empty(), "PartyDims: at least one party required");
  std::size_t total = 1;
  for (int d : dims_) {
    require(d >= 2, "PartyDims: every local dimension must be >= 2, got " + std::to_string(d));
    if (total > dimension_cap() / static_cast<std::size_t>(d)) {
      throw ValidationError("PartyDims: joint dimension exceeds cap " +
                            std::to_string(dimension_cap()));
    }
    total *= static_cast<std::size_t>(d);
  }
  total_ = total;
}

PartyDims PartyDims::qubits(int n) {
  require(n >= 1, "qubit register needs n >= 1");
  return PartyDims(std::vector<int>(static_cast<std::size_t>(n), 2));
}

std::size_t PartyDims::stride(int party) const {
  require(party >= 0 && party < parties(), "party index out of range");
  std::size_t s = 1;
  for (int q = party + 1; q < parties(); ++q) s *= static_cast<std::size_t>(dims_[q]);
  return s;
}

bool PartyDims::all_qubits() const {
  return std::all_of(dims_.begin(), dims_.end(), [](int d) { return d == 2; });
}

// ---------------------------------------------------------------------------
// QuantumState

QuantumState QuantumState::pure(Vector psi, PartyDims dims) {
  require(static_cast<std::size_t>(psi.size()) == dims.total(),
          "pure state length does not match party dimensions");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw ValidationError("pure state is not normalized (norm " + std::to_string(norm) + ")");
  }
  return QuantumState(std::move(psi), std::move(dims));
}

QuantumState QuantumState::mixed(Matrix rho, PartyDims dims) {
  const auto d = dims.total();
  require(static_cast<std::size_t>(rho.rows()) == d && static_cast<std::size_t>(rho.cols()) == d,
          "density matrix shape does not match party dimensions");
  require(is_hermitian(rho, tolerance(d)), "density matrix is not Hermitian");
  Matrix herm = 0.5 * (rho + rho.adjoint());
  const double tr = herm.trace().real();
  if (std::abs(tr - 1.0) > 1e-12) {
    throw ValidationError("density matrix trace is " + std::to_string(tr) + ", expected 1");
  }
  const double lo = min_eigenvalue(herm);
  if (lo < -1e-10) {
    throw ValidationError("density matrix has negative eigenvalue " + std::to_string(lo));
  }
  return QuantumState(std::move(herm), std::move(dims));
}

const Vector& QuantumState::vector() const {
  if (const auto* v = std::get_if<Vector>(&data_)) return *v;
  throw ValidationError("state is mixed; no state vector available");
}

Matrix QuantumState::density() const {
  if (const auto* v = std::get_if<Vector>(&data_)) return (*v) * v->adjoint();
  return std::get<Matrix>(data_);
}

Complex QuantumState::expectation(const Operator& op) const {
  require(static_cast<std::size_t>(op.rows()) == dim(), "operator dimension mismatch");
  if (const auto* v = std::get_if<Vector>(&data_)) return v->dot(op * (*v));
  const auto& rho = std::get<Matrix>(data_);
  // Tr[rho op] = sum_xy rho_xy op_yx
  return (rho.transpose().cwiseProduct(op)).sum();
}

double QuantumState::norm_squared(const Operator& op) const {
  require(static_cast<std::size_t>(op.cols()) == dim(), "operator dimension mismatch");
  if (const auto* v = std::get_if<Vector>(&data_)) return (op * (*v)).squaredNorm();
  const auto& rho = std::get<Matrix>(data_);
  const Matrix o_rho = op * rho;
  return (o_rho.cwiseProduct(op.conjugate())).sum().real();
}

// ---------------------------------------------------------------------------
// Elementary operators

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator pauli_x() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Operator pauli_y() {
  Operator m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Operator pauli_z() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Operator hadamard() {
  Operator m(2, 2);
  const double h = 1.0 / std::sqrt(2.0);
  m << h, h, h, -h;
  return m;
}

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

bool is_hermitian(const Operator& op, double tol) {
  if (op.rows() != op.cols()) return false;
  return (op - op.adjoint()).norm() <= tol;
}

bool is_involution(const Operator& op, double tol) {
  if (op.rows() != op.cols()) return false;
  return (op * op - Operator::Identity(op.rows(), op.cols())).norm() <= tol;
}

double spectral_norm(const Operator& op) {
  if (op.size() == 0) return 0.0;
  Eigen::JacobiSVD<Operator> svd(op);
  return svd.singularValues()(0);
}

double min_eigenvalue(const Operator& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Embeddings

Operator embed_local(const Operator& op, int party, const PartyDims& dims) {
  require(party >= 0 && party < dims.parties(), "party index out of range");
  require(op.rows() == dims[party] && op.cols() == dims[party],
          "local operator dimension does not match party dimension");
  const auto right = static_cast<int>(dims.stride(party));
  const auto left = static_cast<int>(dims.total() / (static_cast<std::size_t>(right) * dims[party]));
  return kron(identity(left), kron(op, identity(right)));
}

Operator embed_pair(const Operator& op, int p, int q, const PartyDims& dims) {
  require(p >= 0 && p < dims.parties() && q >= 0 && q < dims.parties(),
          "party index out of range");
  require(p != q, "embed_pair needs two distinct parties");
  const int dp = dims[p];
  const int dq = dims[q];
  require(op.rows() == dp * dq && op.cols() == dp * dq,
          "pair operator dimension does not match party dimensions");
  const auto D = static_cast<Eigen::Index>(dims.total());
  const auto sp = static_cast<Eigen::Index>(dims.stride(p));
  const auto sq = static_cast<Eigen::Index>(dims.stride(q));
  Operator out = Operator::Zero(D, D);
  for (Eigen::Index x = 0; x < D; ++x) {
    const Eigen::Index xp = (x / sp) % dp;
    const Eigen::Index xq = (x / sq) % dq;
    const Eigen::Index base = x - xp * sp - xq * sq;
    const Eigen::Index col = xp * dq + xq;
    for (Eigen::Index yp = 0; yp < dp; ++yp) {
      for (Eigen::Index yq = 0; yq < dq; ++yq) {
        const Complex v = op(yp * dq + yq, col);
        if (v != Complex(0.0)) out(base + yp * sp + yq * sq, x) = v;
      }
    }
  }
  return out;
}

Vector apply_local(const Operator& op, int party, const PartyDims& dims, const Vector& psi) {
  require(party >= 0 && party < dims.parties(), "party index out of range");
  require(static_cast<std::size_t>(psi.size()) == dims.total(), "state length mismatch");
  const Eigen::Index d = dims[party];
  require(op.rows() == d && op.cols() == d, "local operator dimension mismatch");
  const auto stride = static_cast<Eigen::Index>(dims.stride(party));
  const Eigen::Index block = d * stride;
  Vector out(psi.size());
  Vector local(d);
  for (Eigen::Index base = 0; base < psi.size(); base += block) {
    for (Eigen::Index r = 0; r < stride; ++r) {
      for (Eigen::Index j = 0; j < d; ++j) local(j) = psi(base + j * stride + r);
      const Vector mapped = op * local;
      for (Eigen::Index j = 0; j < d; ++j) out(base + j * stride + r) = mapped(j);
    }
  }
  return out;
}

Matrix apply_local_left(const Operator& op, int party, const PartyDims& dims, const Matrix& m) {
  require(static_cast<std::size_t>(m.rows()) == dims.total(), "matrix row count mismatch");
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    out.col(c) = apply_local(op, party, dims, m.col(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partial trace

QuantumState partial_trace(const QuantumState& state, std::span<const int> keep) {
  const auto& dims = state.dims();
  require(!keep.empty(), "partial_trace: keep-set must be non-empty");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  require(std::adjacent_find(kept.begin(), kept.end()) == kept.end(),
          "partial_trace: duplicate party in keep-set");
  for (int p : kept) require(p >= 0 && p < dims.parties(), "partial_trace: party out of range");

  std::vector<bool> is_kept(static_cast<std::size_t>(dims.parties()), false);
  std::vector<int> kept_dims;
  for (int p : kept) {
    is_kept[static_cast<std::size_t>(p)] = true;
    kept_dims.push_back(dims[p]);
  }
  PartyDims out_dims(kept_dims);
  const auto dk = static_cast<Eigen::Index>(out_dims.total());
  const auto D = static_cast<Eigen::Index>(dims.total());
  const Eigen::Index dt = D / dk;

  // index[t * dk + a] = full index with kept digits a and traced digits t
  std::vector<Eigen::Index> index(static_cast<std::size_t>(D));
  for (Eigen::Index x = 0; x < D; ++x) {
    Eigen::Index rem = x;
    Eigen::Index a = 0, t = 0, ka = 1, kt = 1;
    for (int p = dims.parties() - 1; p >= 0; --p) {
      const int d = dims[p];
      const Eigen::Index digit = rem % d;
      rem /= d;
      if (is_kept[static_cast<std::size_t>(p)]) {
        a += digit * ka;
        ka *= d;
      } else {
        t += digit * kt;
        kt *= d;
      }
    }
    index[static_cast<std::size_t>(t * dk + a)] = x;
  }

  Matrix reduced = Matrix::Zero(dk, dk);
  if (state.is_pure()) {
    const Vector& psi = state.vector();
    Matrix amps(dk, dt);
    for (Eigen::Index t = 0; t < dt; ++t)
      for (Eigen::Index a = 0; a < dk; ++a) amps(a, t) = psi(index[static_cast<std::size_t>(t * dk + a)]);
    reduced = amps * amps.adjoint();
  } else {
    const Matrix rho = state.density();
    for (Eigen::Index t = 0; t < dt; ++t) {
      const Eigen::Index* row = &index[static_cast<std::size_t>(t * dk)];
      for (Eigen::Index a = 0; a < dk; ++a)
        for (Eigen::Index b = 0; b < dk; ++b) reduced(a, b) += rho(row[a], row[b]);
    }
  }
  return QuantumState::mixed(std::move(reduced), std::move(out_dims));
}

// ---------------------------------------------------------------------------
// Operator functions

Operator dichotomize(const Operator& h) {
  require(h.rows() == h.cols(), "dichotomize: operator must be square");
  require(is_hermitian(h, 1e-12 * static_cast<double>(std::max<Eigen::Index>(1, h.rows()))),
          "dichotomize: operator must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const auto& lambda = es.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  // Eigenvalues within rounding of zero take the sign(0) = +1 branch.
  const double zero = 1e-12 * scale;
  Eigen::VectorXd sign(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) sign(i) = lambda(i) >= -zero ? 1.0 : -1.0;
  const Matrix& v = es.eigenvectors();
  Operator u = v * sign.cast<Complex>().asDiagonal() * v.adjoint();
  return 0.5 * (u + u.adjoint());
}

Operator collective_spin(int n, Axis axis) {
  const auto dims = PartyDims::qubits(n);
  const Operator local = axis == Axis::x ? pauli_x() : axis == Axis::y ? pauli_y() : pauli_z();
  const auto D = static_cast<Eigen::Index>(dims.total());
  Operator j = Operator::Zero(D, D);
  for (int i = 0; i < n; ++i) j += 0.5 * embed_local(local, i, dims);
  return j;
}

Operator total_spin_squared(int n) {
  const Operator jx = collective_spin(n, Axis::x);
  const Operator jy = collective_spin(n, Axis::y);
  const Operator jz = collective_spin(n, Axis::z);
  return jx * jx + jy * jy + jz * jz;
}

}  // namespace cgst::hilbert
