#include "cgst/lhv.hpp"

#include "cgst/errors.hpp"

#include <complex>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cgst::lhv {

using bell::BellSpec;
using bell::CorrelatorTable;

namespace {

constexpr double kTieTolerance = 1e-10;
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

// A strategy vector is encoded as a k-bit code with setting 0 in the most
// significant bit and +1 as a set bit, so code order equals lexicographic order.
int outcome(unsigned code, int a, int k) { return (code >> (k - 1 - a)) & 1u ? +1 : -1; }

struct ClassTable {
  std::vector<std::complex<double>> w;  // sum_a v_a e^{i a pi / k}
  std::vector<double> w_norm2;
  std::vector<std::complex<double>> rotation;  // e^{i phi_i}
  double scale = 0.0;                          // 2 / k
  bool multiset = true;
};

ClassTable make_class_table(const BellSpec& spec) {
  ClassTable t;
  const unsigned classes = 1u << spec.k;
  t.w.resize(classes);
  t.w_norm2.resize(classes);
  for (unsigned c = 0; c < classes; ++c) {
    std::complex<double> sum = 0.0;
    for (int a = 0; a < spec.k; ++a) {
      sum += static_cast<double>(outcome(c, a, spec.k)) *
             std::polar(1.0, a * std::numbers::pi / spec.k);
    }
    t.w[c] = sum;
    t.w_norm2[c] = std::norm(sum);
  }
  for (int i = 0; i < spec.n; ++i) t.rotation.push_back(std::polar(1.0, spec.phase(i)));
  t.scale = 2.0 / spec.k;
  t.multiset = !spec.has_phases();
  return t;
}

struct Best {
  double value = std::numeric_limits<double>::infinity();
  std::vector<unsigned> codes;
  std::uint64_t visited = 0;
  bool stopped = false;
};

void consider(Best& best, double value, const std::vector<unsigned>& codes) {
  if (value < best.value - kTieTolerance) {
    best.value = value;
    best.codes = codes;
  } else if (value <= best.value + kTieTolerance && codes < best.codes) {
    best.value = std::min(best.value, value);
    best.codes = codes;
  }
}

// Depth-first enumeration in lexicographic order of code sequences. For the
// multiset case each sequence is non-decreasing.
class Enumerator {
 public:
  Enumerator(const ClassTable& table, int n, int k, std::uint64_t budget)
      : table_(table), n_(n), classes_(1u << k), budget_(budget), codes_(static_cast<std::size_t>(n)) {}

  Best run_from(unsigned first) {
    best_ = Best{};
    codes_[0] = first;
    descend(1, table_.rotation[0] * table_.w[first], table_.w_norm2[first]);
    return best_;
  }

  Best run_all() {
    best_ = Best{};
    for (unsigned c = 0; c < classes_ && !best_.stopped; ++c) {
      codes_[0] = c;
      descend(1, table_.rotation[0] * table_.w[c], table_.w_norm2[c]);
    }
    return best_;
  }

 private:
  void descend(int depth, std::complex<double> sum, double self) {
    if (best_.stopped) return;
    if (depth == n_) {
      if (best_.visited >= budget_) {
        best_.stopped = true;
        return;
      }
      ++best_.visited;
      consider(best_, table_.scale * (std::norm(sum) - self), codes_);
      return;
    }
    const unsigned start = table_.multiset ? codes_[static_cast<std::size_t>(depth - 1)] : 0u;
    for (unsigned c = start; c < classes_ && !best_.stopped; ++c) {
      codes_[static_cast<std::size_t>(depth)] = c;
      descend(depth + 1, sum + table_.rotation[static_cast<std::size_t>(depth)] * table_.w[c],
              self + table_.w_norm2[c]);
    }
  }

  const ClassTable& table_;
  int n_;
  unsigned classes_;
  std::uint64_t budget_;
  std::vector<unsigned> codes_;
  Best best_;
};

Strategy decode(const std::vector<unsigned>& codes, int k) {
  Strategy s;
  for (unsigned c : codes) {
    std::vector<int> v(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) v[static_cast<std::size_t>(a)] = outcome(c, a, k);
    s.outcomes.push_back(std::move(v));
  }
  return s;
}

void check_enumerable(const BellSpec& spec) {
  spec.validate();
  if (spec.k > 20) throw ValidationError("brute_force_min: k too large to enumerate");
}

LhvResult to_result(const Best& best, int k) {
  LhvResult r;
  r.min_value = best.value;
  r.witness = decode(best.codes, k);
  r.enumerated = best.visited;
  r.complete = !best.stopped;
  return r;
}

}  // namespace

void Strategy::validate(const BellSpec& spec) const {
  if (outcomes.size() != static_cast<std::size_t>(spec.n)) {
    throw ValidationError("Strategy: expected " + std::to_string(spec.n) + " parties");
  }
  for (const auto& v : outcomes) {
    if (v.size() != static_cast<std::size_t>(spec.k)) {
      throw ValidationError("Strategy: expected " + std::to_string(spec.k) + " outcomes per party");
    }
    for (int x : v)
      if (x != 1 && x != -1) throw ValidationError("Strategy: outcomes must be +1 or -1");
  }
}

double strategy_value(const Strategy& s, const BellSpec& spec) {
  spec.validate();
  s.validate(spec);
  std::complex<double> total = 0.0;
  double self = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    std::complex<double> w = 0.0;
    for (int a = 0; a < spec.k; ++a) {
      w += static_cast<double>(s.outcomes[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)]) *
           std::polar(1.0, a * std::numbers::pi / spec.k);
    }
    total += std::polar(1.0, spec.phase(i)) * w;
    self += std::norm(w);
  }
  return (2.0 / spec.k) * (std::norm(total) - self);
}

CorrelatorTable deterministic_table(const Strategy& s, const BellSpec& spec) {
  spec.validate();
  s.validate(spec);
  CorrelatorTable table(spec.n, spec.k);
  for (int i = 0; i < spec.n; ++i)
    for (int j = i + 1; j < spec.n; ++j)
      for (int a = 0; a < spec.k; ++a)
        for (int b = 0; b < spec.k; ++b) {
          table.set(i, j, a, b,
                    static_cast<double>(s.outcomes[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] *
                                        s.outcomes[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)]));
        }
  return table;
}

std::uint64_t class_count(const BellSpec& spec) {
  spec.validate();
  if (spec.has_phases()) {
    const long long bits = static_cast<long long>(spec.n) * spec.k;
    return bits >= 64 ? kSaturated : (std::uint64_t{1} << bits);
  }
  if (spec.k >= 63) return kSaturated;
  // C(n + 2^k - 1, n)
  const unsigned __int128 m = (static_cast<unsigned __int128>(1) << spec.k) + spec.n - 1;
  unsigned __int128 result = 1;
  for (int i = 1; i <= spec.n; ++i) {
    result = result * (m - spec.n + i) / i;
    if (result > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(result);
}

LhvResult brute_force_min(const BellSpec& spec, std::uint64_t budget) {
  check_enumerable(spec);
  if (class_count(spec) > budget) return reference::brute_force_min(spec, budget);

  const ClassTable table = make_class_table(spec);
  const int classes = 1 << spec.k;
  std::vector<Best> branch(static_cast<std::size_t>(classes));

#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < classes; ++c) {
    Enumerator e(table, spec.n, spec.k, kSaturated);
    branch[static_cast<std::size_t>(c)] = e.run_from(static_cast<unsigned>(c));
  }

  // Reduction in branch order keeps the tie-break identical to the serial scan.
  Best best;
  for (const Best& b : branch) {
    best.visited += b.visited;
    if (!b.codes.empty()) consider(best, b.value, b.codes);
  }
  return to_result(best, spec.k);
}

namespace reference {

LhvResult brute_force_min(const BellSpec& spec, std::uint64_t budget) {
  check_enumerable(spec);
  const ClassTable table = make_class_table(spec);
  Enumerator e(table, spec.n, spec.k, budget);
  return to_result(e.run_all(), spec.k);
}

}  // namespace reference

}  // namespace cgst::lhv
