#pragma once

// Independent oracles and fixtures shared by the unit and acceptance tests.
// Everything here is written from the definitions, without calling the fast
// paths it is used to check.

#include "cgst/bellspec.hpp"
#include "cgst/hilbert.hpp"
#include "cgst/lhv.hpp"
#include "cgst/sos.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace cgst::testing {

// B from the defining double sum over an explicit table.
inline double direct_bell_value(const bell::CorrelatorTable& t, const bell::BellSpec& spec) {
  double total = 0.0;
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.n; ++j) {
      if (i == j) continue;
      for (int a = 0; a < spec.k; ++a)
        for (int b = 0; b < spec.k; ++b)
          total += 2.0 / spec.k *
                   std::cos(std::numbers::pi * (a - b) / spec.k + spec.phases[static_cast<std::size_t>(i)] -
                            spec.phases[static_cast<std::size_t>(j)]) *
                   t.at(i, j, a, b);
    }
  return total;
}

// Deterministic table filled element by element.
inline bell::CorrelatorTable naive_table(const std::vector<std::vector<int>>& outcomes, int k) {
  const int n = static_cast<int>(outcomes.size());
  bell::CorrelatorTable t(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          t.set(i, j, a, b, outcomes[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] *
                                outcomes[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)]);
  return t;
}

// Minimum over all 2^(nk) ordered strategies, each evaluated through the full table.
inline double naive_lhv_min(const bell::BellSpec& spec) {
  const int bits = spec.n * spec.k;
  double best = INFINITY;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    std::vector<std::vector<int>> o(static_cast<std::size_t>(spec.n), std::vector<int>(static_cast<std::size_t>(spec.k)));
    for (int i = 0; i < spec.n; ++i)
      for (int a = 0; a < spec.k; ++a)
        o[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = ((code >> (i * spec.k + a)) & 1) ? 1 : -1;
    best = std::min(best, direct_bell_value(naive_table(o, spec.k), spec));
  }
  return best;
}

inline Operator random_operator(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Operator m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

inline Vector random_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(d);
  for (int r = 0; r < d; ++r) v(r) = Complex(g(rng), g(rng));
  return v.normalized();
}

inline QuantumState random_pure(const PartyDims& dims, std::mt19937_64& rng) {
  return QuantumState::pure(random_vector(static_cast<int>(dims.total()), rng), dims);
}

// Two-qubit singlet (|01> - |10>)/sqrt 2.
inline Vector singlet2() {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return v;
}

// <psi| rho |psi>.
inline double fidelity(const QuantumState& rho, const Vector& psi) {
  return (psi.adjoint() * rho.density() * psi)(0, 0).real();
}

// Boxes of dimension 2*junk holding a qubit (x) junk, with every observable acting
// on the qubit factor only.
inline sos::BlackBoxModel embedded_model(const bell::BellSpec& spec, int junk) {
  const auto ideal = sos::ideal_qubit_model(spec);
  sos::BlackBoxModel m{spec, PartyDims(std::vector<int>(static_cast<std::size_t>(spec.n), 2 * junk)), {}};
  for (const auto& party : ideal.observables) {
    std::vector<Operator> list;
    for (const auto& o : party) list.push_back(hilbert::kron(o, hilbert::identity(junk)));
    m.observables.push_back(std::move(list));
  }
  m.validate();
  return m;
}

// Singlet on the qubit factors, a fixed random state on the junk factors.
inline QuantumState embedded_singlet(const Vector& qubits, int n, int junk, std::mt19937_64& rng) {
  const int dim = 1 << n;
  Vector junk_state = testing::random_vector(static_cast<int>(std::pow(junk, n)), rng);
  // reorder (q_0..q_{n-1}, j_0..j_{n-1}) into (q_0 j_0, q_1 j_1, ...)
  Vector out = Vector::Zero(dim * junk_state.size());
  for (int q = 0; q < dim; ++q)
    for (Eigen::Index j = 0; j < junk_state.size(); ++j) {
      std::size_t index = 0;
      Eigen::Index jr = j;
      std::vector<int> jd(static_cast<std::size_t>(n));
      for (int i = n - 1; i >= 0; --i) {
        jd[static_cast<std::size_t>(i)] = static_cast<int>(jr % junk);
        jr /= junk;
      }
      for (int i = 0; i < n; ++i) {
        const int qb = (q >> (n - 1 - i)) & 1;
        index = index * static_cast<std::size_t>(2 * junk) + static_cast<std::size_t>(qb * junk + jd[static_cast<std::size_t>(i)]);
      }
      out(static_cast<Eigen::Index>(index)) = qubits(q) * junk_state(j);
    }
  return QuantumState::pure(out, PartyDims(std::vector<int>(static_cast<std::size_t>(n), 2 * junk)));
}

}  // namespace cgst::testing
