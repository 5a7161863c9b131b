#pragma once

// Black-box models and the sum-of-squares form of the shifted Bell operator:
//
//   B + nk 1 = (k/2)(S_z^2 + S_x^2) + sum_{i,a} (A_a^(i))^2
//
// which holds for any dichotomic observables, so it is checked here as a
// matrix identity on arbitrary finite-dimensional models.

#include "cgst/bellspec.hpp"
#include "cgst/hilbert.hpp"
#include "cgst/quantum.hpp"

#include <cstdint>
#include <vector>

namespace cgst::sos {

struct BlackBoxModel {
  bell::BellSpec spec;
  PartyDims dims;
  quantum::LocalObservables observables;  // observables[i][a] on dims[i]

  // Hermitian within 1e-12*d and involutive within 1e-10*d for every observable.
  void validate() const;
};

// Qubit boxes measured along the given planar angles.
BlackBoxModel qubit_model(const bell::BellSpec& spec, const quantum::MeasurementAngles& angles);
// Qubit boxes with theta_a = a pi / k.
BlackBoxModel ideal_qubit_model(const bell::BellSpec& spec);

// Each observable is U D U^dag with U from the QR factorization of a seeded
// complex Gaussian matrix and D a uniformly random +-1 diagonal.
BlackBoxModel random_blackbox(const bell::BellSpec& spec, const PartyDims& dims, std::uint64_t seed);

// Per-party operators, all on that party's local space.
struct LocalOperators {
  Operator z;               // (2/k) sum_a s_a cos(a pi/k)
  Operator x;               // (2/k) sum_a s_a sin(a pi/k)
  std::vector<Operator> a;  // A_a = s_a - (2/k) sum_b cos(pi(a-b)/k) s_b
};

LocalOperators local_operators(const BlackBoxModel& model, int party);

struct DerivedOperators {
  std::vector<LocalOperators> local;
  Operator sz;  // sum_i [cos phi_i Z_i - sin phi_i X_i]
  Operator sx;  // sum_i [cos phi_i X_i + sin phi_i Z_i]
};

DerivedOperators derive(const BlackBoxModel& model);

// Bell operator on the joint space, assembled from the phase-weighted
// collective sums W_i = e^{i phi_i} sum_a e^{i a pi/k} s_a^(i).
Operator bell_operator(const BlackBoxModel& model);

// (k/2)(S_z^2 + S_x^2) + sum_{i,a} (A_a^(i))^2 - nk 1.
Operator sos_operator(const BlackBoxModel& model);

namespace reference {
// Direct double sum over (i != j, a, b) of embedded correlator products.
Operator bell_operator(const BlackBoxModel& model);
}  // namespace reference

// Frobenius norm of (B + nk) - SOS.
double sos_identity_residual(const BlackBoxModel& model);

struct SosReport {
  double identity_residual = 0.0;
  double sz_norm2 = 0.0;                     // <S_z^2>
  double sx_norm2 = 0.0;                     // <S_x^2>
  std::vector<std::vector<double>> a_norm2;  // <(A_a^(i))^2>, [i][a]
  double bell_expectation = 0.0;             // <B>
  double reconstruction_gap = 0.0;
};

SosReport sos_residual_norms(const BlackBoxModel& model, const QuantumState& state);

struct PauliResiduals {
  double z_square = 0.0;        // ||(Z^2 - 1) psi||
  double x_square = 0.0;        // ||(X^2 - 1) psi||
  double anticommutator = 0.0;  // ||(ZX + XZ) psi||
};

std::vector<PauliResiduals> pauli_relation_residuals(const BlackBoxModel& model,
                                                     const QuantumState& state);

// [i][a] -> ||(Z cos(a pi/k) + X sin(a pi/k) - s_a)^(i) psi||.
std::vector<std::vector<double>> measurement_selftest_residuals(const BlackBoxModel& model,
                                                                const QuantumState& state);

struct NormBounds {
  double x_bound = 0.0;  // (2/k) sum_a sin(a pi/k) = sin(pi/k) / (k sin^2(pi/2k))
  double z_bound = 0.0;  // (2/k) sum_a |cos(a pi/k)|
};

// Triangle-inequality bounds on ||X^(i)|| and ||Z^(i)||. x_bound stays below
// 4/pi for every k; z_bound does so only for even k (k = 3 gives 4/3).
NormBounds norm_bounds(int k);

// R_a = 2 e^{i a pi/k} s_a - (Z + iX), on the local space of one party.
Operator r_operator(const LocalOperators& ops, const Operator& sigma_a, int a, int k);

}  // namespace cgst::sos
