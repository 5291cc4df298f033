#pragma once

// Shared helpers for the test programs: random admissible parameters and
// relative comparisons.

#include <algorithm>
#include <cmath>
#include <random>

#include "bazykin/model.hpp"

namespace bazykin::testing {

inline Parameters set_a(double xi = 0.0) { return {1.0, 1.0, xi, 4.0, 0.5, 8.0, 6.0}; }
inline Parameters set_b(double epsilon = 0.024) { return {15.0, 0.1, 0.45, 0.01, epsilon, 0.45, 0.28}; }

/// Admissible parameters with delta > m so predators can grow on prey.
inline Parameters random_parameters(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Parameters p;
    p.gamma = 0.5 + 14.5 * u(rng);
    p.alpha = 2.0 * u(rng);
    p.xi = 3.0 * u(rng);
    p.omega = 5.0 * u(rng);
    p.epsilon = 0.005 + u(rng);
    p.m = 0.1 + 0.9 * u(rng);
    p.delta = p.m + 0.05 + 3.0 * u(rng);
    return p;
}

inline State random_state(std::mt19937_64& rng, double x_max = 10.0, double y_max = 10.0) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    return {x_max * u(rng), y_max * u(rng)};
}

inline bool close_rel(double a, double b, double rel, double floor = 1.0) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace bazykin::testing
