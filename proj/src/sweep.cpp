#include "bazykin/sweep.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

#include "bazykin/errors.hpp"

namespace bazykin {

int sweep_threads() {
    const int machine = omp_get_max_threads();
    if (const char* env = std::getenv("BAZYKIN_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap > 0) return cap;
        } catch (const std::exception&) {
            // unparsable values fall back to the machine default
        }
    }
    return machine > 0 ? machine : 1;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) throw InvalidInput("grid needs at least one point");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
    out[n - 1] = hi;
    return out;
}

}  // namespace bazykin
