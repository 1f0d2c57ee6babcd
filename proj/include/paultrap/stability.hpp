#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <thread>
#include <vector>

#include "paultrap/errors.hpp"
#include "paultrap/floquet.hpp"
#include "paultrap/numeric.hpp"

namespace paultrap {

/// Cells closer than this to |lambda| = 1 are reported as marginal.
inline constexpr double marginal_tolerance = 1e-9;

struct StabilityCell {
    double omega1_tau = 0;
    double omega2_tau = 0;
    double lambda_x = 0;
    double lambda_y = 0;
    bool x_stable = false;
    bool y_stable = false;
    bool marginal = false;
};

inline double stability_lambda(double omega1_tau, double omega2_tau, Axis axis, double duty) {
    const auto p = unit_profile(omega1_tau, omega2_tau, axis, duty);
    return floquet_data(transfer_data(p), p).lambda;
}

inline StabilityCell classify(double omega1_tau, double omega2_tau, double duty = 0.25) {
    StabilityCell c;
    c.omega1_tau = omega1_tau;
    c.omega2_tau = omega2_tau;
    c.lambda_x = stability_lambda(omega1_tau, omega2_tau, Axis::x, duty);
    c.lambda_y = stability_lambda(omega1_tau, omega2_tau, Axis::y, duty);
    c.x_stable = std::abs(c.lambda_x) <= 1.0;
    c.y_stable = std::abs(c.lambda_y) <= 1.0;
    c.marginal = std::abs(1 - std::abs(c.lambda_x)) < marginal_tolerance ||
                 std::abs(1 - std::abs(c.lambda_y)) < marginal_tolerance;
    return c;
}

/// Inclusive sample grid min, min + step, ..., <= max.
struct ScanRange {
    double min = 0;
    double max = 0;
    double step = 0;

    std::vector<double> values() const {
        if (!(step > 0) || !(max >= min)) throw domain_error("scan range needs step > 0 and max >= min");
        std::vector<double> v;
        const auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) v.push_back(min + static_cast<double>(i) * step);
        return v;
    }
};

/// Row-major grid (omega1 fastest). Zero frequencies are skipped since the
/// drive is undefined there. Rows are computed on `threads` workers and
/// written into their fixed slots, so output order never depends on timing.
inline std::vector<StabilityCell> stability_scan(const ScanRange& omega1, const ScanRange& omega2,
                                                 double duty = 0.25, unsigned threads = 0) {
    auto keep_positive = [](std::vector<double> v) {
        std::erase_if(v, [](double x) { return !(x > 0); });
        return v;
    };
    const auto xs = keep_positive(omega1.values());
    const auto ys = keep_positive(omega2.values());
    if (xs.size() < 2 || ys.size() < 2) throw domain_error("stability scan needs resolution >= 2 per axis");
    std::vector<StabilityCell> grid(xs.size() * ys.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(ys.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t j = w; j < ys.size(); j += threads)
                    for (std::size_t i = 0; i < xs.size(); ++i)
                        grid[j * xs.size() + i] = classify(xs[i], ys[j], duty);
            });
        }
    }
    return grid;
}

inline void write_stability_csv(std::ostream& os, const std::vector<StabilityCell>& grid) {
    const auto old = os.precision(9);
    os << "omega1_tau,omega2_tau,lambda_x,lambda_y,x_stable,y_stable\n";
    for (const auto& c : grid)
        os << c.omega1_tau << ',' << c.omega2_tau << ',' << c.lambda_x << ',' << c.lambda_y << ','
           << (c.x_stable ? 1 : 0) << ',' << (c.y_stable ? 1 : 0) << '\n';
    os.precision(old);
}

struct DivergenceReport {
    double measured_growth = 0;  // |(f, f')| after / before
    double predicted_growth = 0; // |p|^periods
    double multiplier = 0;       // dominant Floquet multiplier
};

/// Propagates the dominant monodromy eigenvector of an unstable drive with
/// RK4 and measures how much its phase-space norm grows.
inline DivergenceReport divergence_check(const DriveProfile& profile, int periods,
                                         double step_fraction = 1e-4) {
    const auto fd = floquet_data(transfer_data(profile), profile);
    if (fd.stable) throw contract_error("divergence_check called on a stable drive (|lambda| <= 1)");
    if (periods < 1) throw domain_error("periods must be positive");
    const double t0 = profile.tau2 - profile.tau;
    const double h = profile.tau * step_fraction;
    const auto m = numeric::transition_rk4(profile, t0, profile.tau, h);
    const double tr = 0.5 * m.trace();
    const double root = std::sqrt(std::max(0.0, tr * tr - m.det()));
    const double mu = tr >= 0 ? tr + root : tr - root;
    double v0 = m.b, v1 = mu - m.a;
    if (std::hypot(mu - m.d, m.c) > std::hypot(v0, v1)) {
        v0 = mu - m.d;
        v1 = m.c;
    }
    const double n0 = std::hypot(v0, v1);
    const auto end = numeric::propagate(profile, numeric::OdeState<double>{t0, v0 / n0, v1 / n0},
                                        t0 + periods * profile.tau, h);
    DivergenceReport rep;
    rep.measured_growth = std::hypot(end.f, end.df);
    rep.multiplier = std::max(std::abs(fd.p_plus), std::abs(fd.p_minus));
    rep.predicted_growth = std::pow(rep.multiplier, periods);
    return rep;
}

}  // namespace paultrap
