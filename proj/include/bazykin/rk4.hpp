#pragma once

#include <array>
#include <cstddef>

namespace bazykin {

/// Classical fourth-order Runge-Kutta step for an autonomous system
/// y' = f(y). Generic over the scalar so that dual numbers propagate
/// sensitivities through the same arithmetic.
template <class Scalar, std::size_t N, class Field>
std::array<Scalar, N> rk4_step(const Field& f, const std::array<Scalar, N>& y, const Scalar& h) {
    using Vec = std::array<Scalar, N>;
    const auto axpy = [](const Vec& base, const Scalar& a, const Vec& k) {
        Vec out;
        for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + a * k[i];
        return out;
    };
    const Scalar half = h * 0.5;
    const Vec k1 = f(y);
    const Vec k2 = f(axpy(y, half, k1));
    const Vec k3 = f(axpy(y, half, k2));
    const Vec k4 = f(axpy(y, h, k3));
    Vec out;
    const Scalar sixth = h / 6.0;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

}  // namespace bazykin
