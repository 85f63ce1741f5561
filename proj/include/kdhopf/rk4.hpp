#pragma once

#include <array>
#include <cstddef>

namespace kdhopf {

// Classical fixed-step RK4 for small fixed-size systems.
template <class T, std::size_t N, class F>
std::array<T, N> rk4_step(F&& f, double t, const std::array<T, N>& y, double dt) {
    auto axpy = [](const std::array<T, N>& a, double s, const std::array<T, N>& b) {
        std::array<T, N> r;
        for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + s * b[i];
        return r;
    };
    const auto k1 = f(t, y);
    const auto k2 = f(t + 0.5 * dt, axpy(y, 0.5 * dt, k1));
    const auto k3 = f(t + 0.5 * dt, axpy(y, 0.5 * dt, k2));
    const auto k4 = f(t + dt, axpy(y, dt, k3));
    std::array<T, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace kdhopf
