#pragma once

// The permutation-invariant chained Bell expression on n parties with k
// dichotomic settings each, optionally twisted by per-party phases:
//
//   B = (2/k) sum_{a,b} sum_{i != j} <s_a^(i) s_b^(j)> cos[pi (a-b)/k + phi_i - phi_j]

#include <Eigen/Dense>

#include <vector>

namespace cgst::bell {

struct BellSpec {
  int n = 0;
  int k = 0;
  std::vector<double> phases;  // one angle per party, radians

  // Fills missing phases with zeros and validates.
  static BellSpec make(int n, int k, std::vector<double> phases = {});

  void validate() const;
  bool has_phases() const;
  double phase(int party) const;
};

// M_ab = (2/k) cos[pi (a-b)/k] = c c^T + s s^T.
struct BellMatrix {
  Eigen::MatrixXd m;
  Eigen::VectorXd c;
  Eigen::VectorXd s;
};

BellMatrix bell_matrix(int k);

// Coefficient multiplying <s_a^(i) s_b^(j)> in B.
double pair_weight(const BellSpec& spec, int i, int j, int a, int b);

// Two-body correlators <s_a^(i) s_b^(j)> for all ordered pairs i != j.
// set() writes the (i,j,a,b) entry and its mirror (j,i,b,a).
class CorrelatorTable {
 public:
  CorrelatorTable() = default;
  CorrelatorTable(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }

  double at(int i, int j, int a, int b) const;
  void set(int i, int j, int a, int b, double value);

  // Checks mirror symmetry within `tol` and range [-1-1e-9, 1+1e-9].
  void validate(double tol = 1e-12) const;

  CorrelatorTable& operator+=(const CorrelatorTable& other);
  CorrelatorTable& operator*=(double scale);
  friend CorrelatorTable operator+(CorrelatorTable a, const CorrelatorTable& b) { return a += b; }
  friend CorrelatorTable operator*(double s, CorrelatorTable t) { return t *= s; }

 private:
  std::size_t offset(int i, int j, int a, int b) const;

  int n_ = 0;
  int k_ = 0;
  std::vector<double> values_;
};

struct BellValue {
  double value = 0.0;
  BellSpec spec;
};

BellValue bell_value(const CorrelatorTable& table, const BellSpec& spec);

// -2n / (k sin^2(pi/2k)); requires even n and zero phases.
double classical_bound(const BellSpec& spec);

// -n k, for any phases.
double quantum_bound(const BellSpec& spec);

// (B + nk) / (nk). Values in (-1e-9, 0) are clipped to 0; anything lower
// means the quantum bound was broken and raises InvariantError.
double violation_deficit(const BellValue& b);

}  // namespace cgst::bell
