#pragma once

// Dense finite-dimensional operator algebra on a product of parties.
//
// Basis convention: party 0 is the most significant digit of the mixed-radix
// basis index, so |b0 b1 ... b_{n-1}> has index ((b0*d1 + b1)*d2 + ...).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace cgst {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Operator = Matrix;

namespace hilbert {

// Largest joint Hilbert-space dimension any routine will materialize.
std::size_t dimension_cap();
void set_dimension_cap(std::size_t cap);

// Default comparison tolerance for operators of dimension `dim`.
inline double tolerance(std::size_t dim) { return 1e-10 * static_cast<double>(dim); }

class PartyDims {
 public:
  PartyDims() = default;
  explicit PartyDims(std::vector<int> dims);

  static PartyDims qubits(int n);

  int parties() const { return static_cast<int>(dims_.size()); }
  int operator[](int party) const { return dims_.at(static_cast<std::size_t>(party)); }
  const std::vector<int>& values() const { return dims_; }
  std::size_t total() const { return total_; }
  // Product of the dimensions of all parties after `party`.
  std::size_t stride(int party) const;
  bool all_qubits() const;

  friend bool operator==(const PartyDims&, const PartyDims&) = default;

 private:
  std::vector<int> dims_;
  std::size_t total_ = 0;
};

class QuantumState {
 public:
  // Validates ||psi|| = 1 within 1e-12.
  static QuantumState pure(Vector psi, PartyDims dims);
  // Validates Hermiticity, unit trace within 1e-12 and min eigenvalue >= -1e-10.
  static QuantumState mixed(Matrix rho, PartyDims dims);

  bool is_pure() const { return std::holds_alternative<Vector>(data_); }
  const PartyDims& dims() const { return dims_; }
  std::size_t dim() const { return dims_.total(); }
  int parties() const { return dims_.parties(); }

  // Throws ValidationError for mixed states.
  const Vector& vector() const;
  Matrix density() const;

  Complex expectation(const Operator& op) const;
  // <O^dag O>, i.e. ||O psi||^2 for pure states, Tr[rho O^dag O] for mixed ones.
  double norm_squared(const Operator& op) const;

 private:
  QuantumState(std::variant<Vector, Matrix> data, PartyDims dims)
      : data_(std::move(data)), dims_(std::move(dims)) {}

  std::variant<Vector, Matrix> data_;
  PartyDims dims_;
};

enum class Axis { x, y, z };

Operator identity(int dim);
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator hadamard();

Operator kron(const Operator& a, const Operator& b);

bool is_hermitian(const Operator& op, double tol);
bool is_involution(const Operator& op, double tol);  // op * op == 1
double spectral_norm(const Operator& op);
double min_eigenvalue(const Operator& hermitian);

// 1 x ... x op x ... x 1 with op in the slot of `party`.
Operator embed_local(const Operator& op, int party, const PartyDims& dims);

// Embeds `op`, acting on the ordered pair (p, q) with p's index as the more
// significant digit, into the full space. p and q need not be adjacent or ordered.
Operator embed_pair(const Operator& op, int p, int q, const PartyDims& dims);

// Applies a local operator to a state vector without forming the embedding.
Vector apply_local(const Operator& op, int party, const PartyDims& dims, const Vector& psi);
// Left-multiplies a matrix by the embedded local operator (acts on row indices).
Matrix apply_local_left(const Operator& op, int party, const PartyDims& dims, const Matrix& m);

// Reduced state on the kept parties, listed in ascending order in the output.
QuantumState partial_trace(const QuantumState& state, std::span<const int> keep);

// Sign of a Hermitian operator's spectrum, with sign(0) = +1.
Operator dichotomize(const Operator& h);

// J_axis = (1/2) sum_i sigma_axis^(i) on n qubits.
Operator collective_spin(int n, Axis axis);
// J_x^2 + J_y^2 + J_z^2 on n qubits.
Operator total_spin_squared(int n);

}  // namespace hilbert

using hilbert::PartyDims;
using hilbert::QuantumState;

}  // namespace cgst
