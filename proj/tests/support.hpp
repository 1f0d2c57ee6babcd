#pragma once

#include <random>

#include "paultrap/floquet.hpp"

namespace testing_support {

// Random drive with |lambda| <= bound on `axis`, drawn from a fixed-seed stream.
inline paultrap::DriveProfile stable_profile(std::mt19937_64& rng, paultrap::Axis axis, double bound = 0.95) {
    std::uniform_real_distribution<double> w(0.3, 6.0), duty(0.05, 0.45);
    for (;;) {
        const auto p = paultrap::unit_profile(w(rng), w(rng), axis, duty(rng));
        if (std::abs(paultrap::floquet_data(paultrap::transfer_data(p), p).lambda) <= bound) return p;
    }
}

inline paultrap::DriveProfile unstable_profile(std::mt19937_64& rng, paultrap::Axis axis) {
    std::uniform_real_distribution<double> w(0.3, 4.0), duty(0.05, 0.45);
    for (;;) {
        const auto p = paultrap::unit_profile(w(rng), w(rng), axis, duty(rng));
        const double l = paultrap::floquet_data(paultrap::transfer_data(p), p).lambda;
        if (std::abs(l) > 1.05 && std::abs(l) < 50) return p;
    }
}

}  // namespace testing_support
