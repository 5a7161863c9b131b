#include "cgst/bellspec.hpp"

#include "cgst/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cgst::bell {

using std::numbers::pi;

BellSpec BellSpec::make(int n, int k, std::vector<double> phases) {
  BellSpec spec;
  spec.n = n;
  spec.k = k;
  if (phases.empty() && n > 0) phases.assign(static_cast<std::size_t>(n), 0.0);
  spec.phases = std::move(phases);
  spec.validate();
  return spec;
}

void BellSpec::validate() const {
  if (n < 2) throw ValidationError("BellSpec: need at least 2 parties, got " + std::to_string(n));
  if (k < 3) throw ValidationError("BellSpec: need k >= 3 settings, got " + std::to_string(k));
  if (phases.size() != static_cast<std::size_t>(n)) {
    throw ValidationError("BellSpec: expected " + std::to_string(n) + " phases, got " +
                          std::to_string(phases.size()));
  }
  for (double p : phases) {
    if (!std::isfinite(p)) throw ValidationError("BellSpec: non-finite phase");
  }
}

bool BellSpec::has_phases() const {
  for (double p : phases)
    if (p != 0.0) return true;
  return false;
}

double BellSpec::phase(int party) const {
  return phases.empty() ? 0.0 : phases.at(static_cast<std::size_t>(party));
}

BellMatrix bell_matrix(int k) {
  if (k < 3) throw ValidationError("bell_matrix: k must be >= 3");
  BellMatrix bm;
  bm.m.resize(k, k);
  bm.c.resize(k);
  bm.s.resize(k);
  const double norm = std::sqrt(2.0 / k);
  for (int a = 0; a < k; ++a) {
    bm.c(a) = norm * std::cos(a * pi / k);
    bm.s(a) = norm * std::sin(a * pi / k);
    for (int b = 0; b < k; ++b) bm.m(a, b) = (2.0 / k) * std::cos(pi * (a - b) / k);
  }
  return bm;
}

double pair_weight(const BellSpec& spec, int i, int j, int a, int b) {
  return (2.0 / spec.k) * std::cos(pi * (a - b) / spec.k + spec.phase(i) - spec.phase(j));
}

// ---------------------------------------------------------------------------

CorrelatorTable::CorrelatorTable(int n, int k)
    : n_(n), k_(k), values_(static_cast<std::size_t>(n) * n * k * k, 0.0) {
  if (n < 2 || k < 1) throw ValidationError("CorrelatorTable: invalid shape");
}

std::size_t CorrelatorTable::offset(int i, int j, int a, int b) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || i == j || a < 0 || a >= k_ || b < 0 || b >= k_) {
    throw ValidationError("CorrelatorTable: index (" + std::to_string(i) + "," + std::to_string(j) +
                          "," + std::to_string(a) + "," + std::to_string(b) + ") out of range");
  }
  return ((static_cast<std::size_t>(i) * n_ + j) * k_ + a) * k_ + b;
}

double CorrelatorTable::at(int i, int j, int a, int b) const { return values_[offset(i, j, a, b)]; }

void CorrelatorTable::set(int i, int j, int a, int b, double value) {
  values_[offset(i, j, a, b)] = value;
  values_[offset(j, i, b, a)] = value;
}

void CorrelatorTable::validate(double tol) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (i == j) continue;
      for (int a = 0; a < k_; ++a)
        for (int b = 0; b < k_; ++b) {
          const double v = at(i, j, a, b);
          if (!std::isfinite(v) || std::abs(v) > 1.0 + 1e-9) {
            throw ValidationError("CorrelatorTable: entry out of [-1, 1]");
          }
          if (std::abs(v - at(j, i, b, a)) > tol) {
            throw ValidationError("CorrelatorTable: mirror symmetry violated");
          }
        }
    }
}

CorrelatorTable& CorrelatorTable::operator+=(const CorrelatorTable& other) {
  if (other.n_ != n_ || other.k_ != k_) throw ValidationError("CorrelatorTable: shape mismatch");
  for (std::size_t x = 0; x < values_.size(); ++x) values_[x] += other.values_[x];
  return *this;
}

CorrelatorTable& CorrelatorTable::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

// ---------------------------------------------------------------------------

BellValue bell_value(const CorrelatorTable& table, const BellSpec& spec) {
  spec.validate();
  if (table.n() != spec.n || table.k() != spec.k) {
    throw ValidationError("bell_value: table shape (" + std::to_string(table.n()) + "," +
                          std::to_string(table.k()) + ") does not match spec (" +
                          std::to_string(spec.n) + "," + std::to_string(spec.k) + ")");
  }
  double total = 0.0;
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.n; ++j) {
      if (i == j) continue;
      for (int a = 0; a < spec.k; ++a)
        for (int b = 0; b < spec.k; ++b) total += pair_weight(spec, i, j, a, b) * table.at(i, j, a, b);
    }
  return BellValue{total, spec};
}

double classical_bound(const BellSpec& spec) {
  spec.validate();
  if (spec.n % 2 != 0) {
    throw ValidationError("classical_bound: closed form requires an even number of parties");
  }
  if (spec.has_phases()) {
    throw ValidationError(
        "classical_bound: no closed form with nonzero phases; use the brute-force oracle");
  }
  const double s = std::sin(pi / (2.0 * spec.k));
  return -2.0 * spec.n / (spec.k * s * s);
}

double quantum_bound(const BellSpec& spec) {
  spec.validate();
  return -static_cast<double>(spec.n) * spec.k;
}

double violation_deficit(const BellValue& b) {
  const double nk = static_cast<double>(b.spec.n) * b.spec.k;
  const double eps = (b.value + nk) / nk;
  if (eps < -1e-9) {
    throw InvariantError("Bell value " + std::to_string(b.value) + " lies below the quantum bound " +
                         std::to_string(-nk));
  }
  return eps < 0.0 ? 0.0 : eps;
}

}  // namespace cgst::bell
