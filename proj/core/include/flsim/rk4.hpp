#pragma once

#include <cstddef>
#include <vector>

namespace flsim {

// Classical fixed-step Runge-Kutta 4 with preallocated slope buffers.
// Derivative signature: f(t, y, dydt) with dydt sized like y.
class Rk4 {
public:
    explicit Rk4(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

    template <class Deriv>
    void step(std::vector<double>& y, double t, double dt, Deriv&& f) {
        const std::size_t n = y.size();
        f(t, y, k1_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
        f(t + 0.5 * dt, tmp_, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
        f(t + 0.5 * dt, tmp_, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
        f(t + dt, tmp_, k4_);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        }
    }

private:
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace flsim
