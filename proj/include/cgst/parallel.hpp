#pragma once

namespace cgst {

// Caps the worker count of every OpenMP kernel in the library. Values < 1
// restore the runtime default.
void set_threads(int threads);
int max_threads();

}  // namespace cgst
