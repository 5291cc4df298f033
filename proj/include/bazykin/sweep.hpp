#pragma once

// Grid-sweep kernels. Every parallel kernel has a serial twin that runs the
// same per-cell function in index order; tests compare the two bit-for-bit.

#include <cstddef>
#include <vector>

namespace bazykin {

/// Thread cap for sweeps: BAZYKIN_THREADS when set to a positive integer,
/// otherwise the OpenMP default.
[[nodiscard]] int sweep_threads();

/// Inclusive linear grid lo..hi with n points (n >= 1; n == 1 yields lo).
[[nodiscard]] std::vector<double> linspace(double lo, double hi, std::size_t n);

template <class Cell, class F>
std::vector<Cell> serial_map(std::size_t n, const F& f) {
    std::vector<Cell> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
    return out;
}

template <class Cell, class F>
std::vector<Cell> parallel_map(std::size_t n, const F& f) {
    std::vector<Cell> out(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4) num_threads(sweep_threads())
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    }
    return out;
}

}  // namespace bazykin
