#pragma once

// SWAP-isometry extraction of an n-qubit state from black-box models, and the
// robustness bound on <J_z^2 + J_x^2> of the extracted state.

#include "cgst/hilbert.hpp"
#include "cgst/sos.hpp"

#include <vector>

namespace cgst::swap {

// Sign-regularized Z and X per party; each squares to the identity.
struct RegularizedPair {
  std::vector<Operator> z;
  std::vector<Operator> x;
};

RegularizedPair regularize(const sos::BlackBoxModel& model);

// (cX)(H x 1)(cZ) on ancilla (x) box, ancilla as the leading factor and as control.
Operator partial_swap_unitary(const RegularizedPair& pair, int party);

// Attaches |+> ancillas to every box, applies the product of partial SWAPs and
// traces out the boxes. Ancillas form the leading factor of the joint space.
// Parallel over ancilla basis states.
QuantumState extract_state(const sos::BlackBoxModel& model, const QuantumState& state);

namespace reference {
// Same channel built from the full unitary on ancillas (x) boxes followed by a
// partial trace. Exponentially more memory; kept for cross-checking.
QuantumState extract_state(const sos::BlackBoxModel& model, const QuantumState& state);
}  // namespace reference

struct RobustnessConstants {
  double alpha = 0.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double r = 0.0;

  // alpha0 = alpha, alpha1 = (1 + sqrt(alpha)/2)^2,
  // r = alpha1 + [alpha1 + (sqrt(alpha0) + (1 + 8/pi) sqrt(alpha1))^2] / 2.
  static RobustnessConstants from_alpha(double alpha);
  static RobustnessConstants standard() { return from_alpha(144.0); }
};

// (n^2 eps / 4) (sqrt(2/n) + sqrt(r))^2.
double robustness_bound(int n, double epsilon);

struct ExtractionReport {
  double bell_value = 0.0;
  double epsilon = 0.0;
  QuantumState extracted_state;
  double jz2_plus_jx2 = 0.0;  // on the extracted state (phase-rotated axes if phases are set)
  double jsq = 0.0;           // <J^2>, diagnostic only
  double bound = 0.0;
  bool bound_satisfied = false;
  double jz2_plus_jx2_max = 0.0;  // largest eigenvalue of J_z^2 + J_x^2
  bool bound_vacuous = false;     // bound >= jz2_plus_jx2_max
};

ExtractionReport extraction_report(const sos::BlackBoxModel& model, const QuantumState& state);

}  // namespace cgst::swap
