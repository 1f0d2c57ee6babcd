#pragma once

// Exact eigenfunctions of the quadratic invariant (hbar = 1):
//   psi_n(q, t) = (omega_I / g-)^{1/4} h_n(sqrt(omega_I / g-) q)
//                 * exp(-i g0 q^2 / (2 g-)) * exp(-i (n + 1/2) theta(t))
// where h_n is the normalized Hermite function.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <ostream>
#include <vector>

#include "paultrap/errors.hpp"
#include "paultrap/invariant.hpp"
#include "paultrap/numeric.hpp"
#include "paultrap/phase.hpp"

namespace paultrap {

/// Physicists' Hermite polynomial by the three-term recurrence.
inline double hermite(int n, double x) {
    if (n < 0) throw domain_error("Hermite degree must be non-negative");
    double prev = 1.0, cur = 2.0 * x;
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)), via the normalized recurrence
/// (no factorials, so large n never overflows).
inline double hermite_function(int n, double x) {
    if (n < 0) throw domain_error("Hermite degree must be non-negative");
    double prev = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
    if (n == 0) return prev;
    double cur = std::numbers::sqrt2 * x * prev;
    for (int k = 1; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Everything psi_n needs at one instant.
struct EigenFrame {
    GTriple g;
    double theta = 0;
    double omega_I = 0;
    double mass = 1;
};

inline EigenFrame eigen_frame(const InvariantSpec& spec, double t) {
    return {spec.at(t), theta(spec, t), spec.omega_I(), spec.mass()};
}

inline cplx psi(int n, double q, const EigenFrame& fr) {
    const double gm = fr.g.g_minus;
    if (!(gm > 0)) throw domain_error("g- must be positive");
    const double k = std::sqrt(fr.omega_I / gm);
    const double amp = std::sqrt(k) * hermite_function(n, k * q);
    const double ph = -fr.g.g_zero * q * q / (2 * gm) - (n + 0.5) * fr.theta;
    return std::polar(amp, ph);
}

inline cplx psi(int n, double q, double t, const InvariantSpec& spec) {
    return psi(n, q, eigen_frame(spec, t));
}

/// Half-width of the quadrature window: 12 standard deviations of |psi_0|^2.
inline double quadrature_half_width(const EigenFrame& fr) {
    return 12.0 * std::sqrt(fr.g.g_minus / (2 * fr.omega_I));
}

/// <psi_m | psi_n> at one instant by composite Gauss-Legendre (400 nodes).
inline cplx inner_product(int m, int n, const EigenFrame& fr) {
    const double L = quadrature_half_width(fr);
    return numeric::gauss_legendre(
        [&](double q) { return std::conj(psi(m, q, fr)) * psi(n, q, fr); }, -L, L, 20);
}

inline double norm(int n, const EigenFrame& fr) { return inner_product(n, n, fr).real(); }

struct ResidualGrid {
    std::vector<double> times;
    std::vector<double> positions;
    double dt = 1e-6;
    double dq = 1e-4;
};

using GTransform = std::function<GTriple(const GTriple&)>;

/// max |i psi_t - H psi| / max_q |psi| over the grid, by central differences.
/// `g_override` lets tests perturb the g-triple to probe sensitivity.
inline double schrodinger_residual(int n, const InvariantSpec& spec, const ResidualGrid& grid,
                                   const GTransform& g_override = {}) {
    const auto& prof = spec.profile();
    const double m = spec.mass();
    double worst = 0;
    for (double t : grid.times) {
        if (prof.near_boundary(t, 2 * grid.dt))
            throw domain_error("residual grid touches a segment boundary");
        const double th = theta(spec, t);
        auto frame_at = [&](double tt, double theta_tt) {
            EigenFrame fr{spec.at(tt), theta_tt, spec.omega_I(), m};
            if (g_override) fr.g = g_override(fr.g);
            return fr;
        };
        const auto f0 = frame_at(t, th);
        const auto fp = frame_at(t + grid.dt, th + theta_between(spec, t, t + grid.dt));
        const auto fm = frame_at(t - grid.dt, th - theta_between(spec, t - grid.dt, t));
        const double w2 = prof.omega_sq(t);
        double scale = 0, res = 0;
        for (double q : grid.positions) {
            const cplx c = psi(n, q, f0);
            const cplx dpsi_t = (psi(n, q, fp) - psi(n, q, fm)) / (2 * grid.dt);
            const cplx d2psi_q =
                (psi(n, q + grid.dq, f0) - 2.0 * c + psi(n, q - grid.dq, f0)) / (grid.dq * grid.dq);
            const cplx h_psi = -d2psi_q / (2 * m) + 0.5 * m * w2 * q * q * c;
            res = std::max(res, std::abs(cplx(0, 1) * dpsi_t - h_psi));
            scale = std::max(scale, std::abs(c));
        }
        if (scale > 0) worst = std::max(worst, res / scale);
    }
    return worst;
}

inline void write_density_csv(std::ostream& os, int n, const EigenFrame& fr, int samples) {
    const double L = quadrature_half_width(fr);
    const auto old = os.precision(9);
    os << "q,re,im,abs2\n";
    for (int i = 0; i < samples; ++i) {
        const double q = -L + 2 * L * i / (samples - 1);
        const cplx v = psi(n, q, fr);
        os << q << ',' << v.real() << ',' << v.imag() << ',' << std::norm(v) << '\n';
    }
    os.precision(old);
}

}  // namespace paultrap
