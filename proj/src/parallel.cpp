#include "cgst/parallel.hpp"

#include <omp.h>

namespace cgst {

namespace {
int default_threads() {
  static const int value = omp_get_max_threads();
  return value;
}
}  // namespace

void set_threads(int threads) {
  default_threads();
  omp_set_num_threads(threads < 1 ? default_threads() : threads);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace cgst
