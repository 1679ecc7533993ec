#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <utility>
#include <vector>

namespace denseval {

// Batch kernels run either as a plain serial loop (the reference used by the
// tests and the benchmark) or as an OpenMP parallel-for over independent
// items. Results are always written to per-index slots and reduced serially
// in index order, so both paths produce identical output.
enum class Execution { Serial, Parallel };

template <typename Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
#ifdef _OPENMP
  if (exec == Execution::Parallel) {
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace denseval
