#pragma once

// Forward-mode dual numbers with a fixed number of tangent directions. Only
// the arithmetic the model's rational right-hand sides need is provided.

#include <array>
#include <cstddef>

namespace bazykin {

template <std::size_t N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    Dual() = default;
    Dual(double value) : v(value) {}  // NOLINT: implicit lift from constants is the point

    static Dual variable(double value, std::size_t direction) {
        Dual out(value);
        out.d[direction] = 1.0;
        return out;
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (std::size_t i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (std::size_t i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        for (std::size_t i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        const double inv = 1.0 / o.v;
        for (std::size_t i = 0; i < N; ++i) d[i] = (d[i] - v * inv * o.d[i]) * inv;
        v *= inv;
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
    friend Dual operator-(Dual a) {
        a.v = -a.v;
        for (auto& x : a.d) x = -x;
        return a;
    }
};

inline double value_of(double x) { return x; }
template <std::size_t N>
double value_of(const Dual<N>& x) {
    return x.v;
}

}  // namespace bazykin
