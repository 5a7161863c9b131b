#pragma once

// Qubit realizations: planar measurements, the singlet manifold, noise
// families, and exact correlator tables.

#include "cgst/bellspec.hpp"
#include "cgst/hilbert.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cgst::quantum {

// Z cos(theta) + X sin(theta).
Operator measurement_observable(double theta);

struct MeasurementAngles {
  std::vector<std::vector<double>> angles;  // angles[i][a]

  // theta_a = a pi / k for every party.
  static MeasurementAngles equispaced(int n, int k);
  int parties() const { return static_cast<int>(angles.size()); }
  int settings() const { return angles.empty() ? 0 : static_cast<int>(angles.front().size()); }
};

// observables[i][a]: k dichotomic observables per party, on that party's space.
using LocalObservables = std::vector<std::vector<Operator>>;

LocalObservables observables_from_angles(const MeasurementAngles& angles);

struct SingletBasis {
  int n = 0;
  std::vector<Vector> basis;
  std::size_t dim() const { return basis.size(); }
};

// C(n, n/2) - C(n, n/2 - 1).
std::size_t singlet_dimension(int n);

// Orthonormal basis of the kernel of J^2. The basis is canonical: Gram-Schmidt
// of the projected computational basis states in index order, each vector's
// leading coefficient real positive, then ordered by descending magnitude of
// that coefficient and ascending leading index.
SingletBasis singlet_basis(int n);

// Mixture sum_m w_m |v_m><v_m| over the canonical basis.
QuantumState singlet_mixture(int n, std::span<const double> weights);
// Pure superposition sum_m c_m |v_m>.
QuantumState singlet_superposition(int n, std::span<const Complex> coefficients);
// Uniform mixture over the whole manifold.
QuantumState uniform_singlet(int n);
// Seeded random pure state in the manifold (complex Gaussian coefficients).
QuantumState random_singlet(int n, std::uint64_t seed);

// Rotates party i by angle phases[i] about the y axis in the direction that
// carries the measurement direction theta to theta + phases[i], so the state
// saturates the phase-twisted Bell expression under equispaced measurements.
QuantumState rotated_singlet(const QuantumState& singlet, std::span<const double> phases);
QuantumState rotated_singlet(int n, std::span<const double> phases);

// <s_a^(i) s_b^(j)> for all i != j. Parallel over pairs.
bell::CorrelatorTable correlator_table(const QuantumState& state, const LocalObservables& obs);
bell::CorrelatorTable correlator_table(const QuantumState& state, const MeasurementAngles& angles);

namespace reference {
// Tr[rho (s_a^(i) s_b^(j))] with full embedded operators, serially.
bell::CorrelatorTable correlator_table(const QuantumState& state, const LocalObservables& obs);
}  // namespace reference

enum class NoiseKind { depolarizing_global, dephasing_local, angle_jitter };

struct NoiseModel {
  NoiseKind kind = NoiseKind::depolarizing_global;
  double strength = 0.0;
  std::uint64_t seed = 0;

  // Accepts "kind:strength" with kind in {depolarizing, dephasing, jitter}.
  static NoiseModel parse(const std::string& text, std::uint64_t seed = 0);
  void validate() const;
};

std::string to_string(NoiseKind kind);

// depolarizing_global: (1-p) rho + p 1/D. dephasing_local: each party
// independently gets Z with probability p. angle_jitter leaves the state alone.
QuantumState apply_channel(const QuantumState& state, const NoiseModel& model);

// theta_a + delta, delta ~ U[-strength, strength] drawn once per (party, setting).
// Non-jitter models return the angles unchanged.
MeasurementAngles jitter_angles(const MeasurementAngles& angles, const NoiseModel& model);

struct Realization {
  QuantumState state;
  MeasurementAngles angles;
};

Realization apply_noise(const QuantumState& state, const MeasurementAngles& angles,
                        const NoiseModel& model);

struct Eq9Check {
  double lhs = 0.0;  // B + nk under equispaced measurements
  double rhs = 0.0;  // 2k <J_z^2 + J_x^2>
};

Eq9Check eq9_check(const QuantumState& state, int k);

// Phase-rotated collective spins
//   J'_z = (1/2) sum_i [cos phi_i Z_i - sin phi_i X_i]
//   J'_x = (1/2) sum_i [cos phi_i X_i + sin phi_i Z_i].
Operator phased_collective_spin(std::span<const double> phases, hilbert::Axis axis);

// 4 <J'_x^2 + J'_z^2>
//   = sum_ij cos(phi_i - phi_j) <X_i X_j + Z_i Z_j> + sin(phi_i - phi_j) <Z_i X_j - X_i Z_j>,
// the quantity pinned to zero by saturating the phase-twisted bound.
double phase_statistic(const QuantumState& state, std::span<const double> phases);

// Only the cosine-weighted part: sum_ij cos(phi_i - phi_j) <X_i X_j + Z_i Z_j>.
// Equals phase_statistic when all phases coincide; differs otherwise.
double phase_statistic_cosine_part(const QuantumState& state, std::span<const double> phases);

}  // namespace cgst::quantum
