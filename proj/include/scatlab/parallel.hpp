#pragma once

// Thin OpenMP helpers.  Every parallel loop in the library writes each
// iteration's result to its own slot, so results do not depend on the number
// of threads or on scheduling.

#include <cstddef>
#include <exception>
#include <vector>

namespace scatlab {

/// Sets the worker count for subsequent parallel regions; 0 restores the default.
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n) across the worker pool.  If any iterations
/// throw, the exception of the lowest failing index is rethrown after the loop.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace scatlab
