#pragma once

#include <exception>
#include <vector>

#include <omp.h>

#include "jsbl/model.hpp"

namespace jsbl {

/// Runs body(i) for i in [0, n). Parallel uses an OpenMP static schedule with
/// at most `threads` workers (0: OpenMP default). Each index must write only
/// its own outputs. The exception thrown by the lowest failing index is
/// rethrown, so error reporting does not depend on scheduling.
template <typename Body>
void parallel_for(Index n, Execution exec, Body&& body, int threads = 0) {
  if (exec == Execution::Serial || n < 2) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
  for (Index i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace jsbl
