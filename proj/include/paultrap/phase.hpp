#pragma once

// Accumulated phase theta(t) = int_0^t omega_I / (m g-) dt', Berry phases of
// cyclic initial states and the search for drives that produce them.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "paultrap/errors.hpp"
#include "paultrap/floquet.hpp"
#include "paultrap/invariant.hpp"
#include "paultrap/numeric.hpp"

namespace paultrap {

inline constexpr double theta_rel_tol = 1e-10;

/// theta(b) - theta(a), integrated segment by segment.
inline double theta_between(const InvariantSpec& spec, double a, double b) {
    if (a == b) return 0.0;
    if (b < a) return -theta_between(spec, b, a);
    const double k = spec.omega_I() / spec.mass();
    auto integrand = [&](double t) {
        const double g = spec.at(t).g_minus;
        if (!(g > 0)) throw domain_error("g- is not positive; invariant is invalid here");
        return k / g;
    };
    // boundaries within rounding of an endpoint would leave a sliver the
    // error estimator cannot resolve
    const double sliver = 1e-12 * spec.profile().tau;
    double total = 0, lo = a;
    for (double hi : spec.profile().boundaries(a, b)) {
        if (hi - lo < sliver || b - hi < sliver) continue;
        total += numeric::quad_adaptive(integrand, lo, hi, theta_rel_tol);
        lo = hi;
    }
    return total + numeric::quad_adaptive(integrand, lo, b, theta_rel_tol);
}

inline double theta(const InvariantSpec& spec, double t) { return theta_between(spec, 0.0, t); }

namespace detail {

inline double principal_arg(cplx z) { return std::arg(z); }

inline double unwrap_increment(const InvariantSpec& spec, double a, double b, cplx za, cplx zb,
                               int depth) {
    const double whole = principal_arg(zb / za);
    const double m = 0.5 * (a + b);
    const cplx zm = spec.complex_solution(m);
    const double left = principal_arg(zm / za), right = principal_arg(zb / zm);
    if (depth > 40 || (std::abs(whole) < 0.25 * std::numbers::pi &&
                       std::abs(left + right - whole) < 1e-13))
        return left + right;
    return unwrap_increment(spec, a, m, za, zm, depth + 1) +
           unwrap_increment(spec, m, b, zm, zb, depth + 1);
}

}  // namespace detail

/// theta(t) from the continuously unwrapped argument of f_c; independent of
/// the quadrature route. The sign follows the orientation d1 d3 W.
inline double theta_unwrapped(const InvariantSpec& spec, double t) {
    if (t == 0) return 0.0;
    const double sign = spec.pair().wronskian() > 0 ? 1.0 : -1.0;
    const double lo = std::min(0.0, t), hi = std::max(0.0, t);
    const double chunk = spec.profile().tau / 64;
    const auto n = static_cast<std::int64_t>(std::ceil((hi - lo) / chunk));
    double total = 0;
    cplx za = spec.complex_solution(lo);
    for (std::int64_t i = 0; i < n; ++i) {
        const double a = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
        const double b = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(n);
        const cplx zb = spec.complex_solution(b);
        total += detail::unwrap_increment(spec, a, b, za, zb, 0);
        za = zb;
    }
    return sign * (t > 0 ? total : -total);
}

struct PhaseTrace {
    std::vector<double> times;
    std::vector<double> theta;
};

/// theta at ascending sample times (the first may be 0).
inline PhaseTrace phase_trace(const InvariantSpec& spec, const std::vector<double>& times) {
    PhaseTrace out;
    out.times = times;
    double prev_t = 0, acc = 0;
    for (double t : times) {
        acc += theta_between(spec, prev_t, t);
        out.theta.push_back(acc);
        prev_t = t;
    }
    return out;
}

/// Cyclic phase -(n + 1/2) theta over one cycle.
inline double berry_phase(int n, double theta_cycle) {
    if (n < 0) throw domain_error("quantum number must be non-negative");
    return -(n + 0.5) * theta_cycle;
}

// Which Floquet phase a cyclic state with integers (l, N') corresponds to:
//   rule a: phi = 2 pi l / N'
//   rule b: phi N' / eps = l pi   (eps = 1 for odd N', 2 for even N')
enum class CisRule { a, b };

inline const char* to_string(CisRule r) { return r == CisRule::a ? "a" : "b"; }

inline int cis_epsilon(int nprime) { return nprime % 2 == 0 ? 2 : 1; }

inline double cis_target_phi(int l, int nprime, CisRule rule) {
    const double pi = std::numbers::pi;
    return rule == CisRule::a ? 2 * pi * l / nprime : l * pi * cis_epsilon(nprime) / nprime;
}

/// Stability parameter of the symmetric drive (omega1 = omega2 = omega_tau / tau).
inline double symmetric_lambda(double omega_tau, double duty = 0.25) {
    const auto p = unit_profile(omega_tau, omega_tau, Axis::x, duty);
    return floquet_data(transfer_data(p), p).lambda;
}

struct CisSearchOptions {
    double duty = 0.25;
    CisRule rule = CisRule::b;
    double omega_tau_max = 4 * std::numbers::pi;
    double grid_step = 1e-3;
    double root_tol = 1e-12;
};

struct CisConfig {
    int l = 1;
    int nprime = 1;
    int epsilon = 1;
    CisRule rule = CisRule::b;
    double duty = 0.25;
    double omega_tau = 0;
    double tau_prime_over_tau = 0;
    double lambda = 0;
    double lambda_target = 0;
    double phi = 0;
    double theta_period = 0;  // theta over one drive period
    double theta_cycle = 0;   // theta over the minimal period tau'
    int winding = 0;          // theta_period = phi + 2 pi winding
    double theta_rule_a = 0;  // cycle phase predicted if phi = 2 pi l / N'
    double theta_rule_b = 0;  // cycle phase predicted if phi N' / eps = l pi

    DriveProfile profile(Axis axis = Axis::x) const {
        return unit_profile(omega_tau, omega_tau, axis, duty);
    }
};

/// Smallest omega tau in (0, omega_tau_max] where lambda(omega tau) hits the
/// target of the chosen rule; fills in the measured cycle phase.
inline CisConfig cis_search(int l, int nprime, const CisSearchOptions& opt = {}) {
    if (l < 1 || nprime < 1) throw domain_error("CIS integers l and N' must be positive");
    CisConfig cfg;
    cfg.l = l;
    cfg.nprime = nprime;
    cfg.epsilon = cis_epsilon(nprime);
    cfg.rule = opt.rule;
    cfg.duty = opt.duty;
    cfg.tau_prime_over_tau = static_cast<double>(nprime) / cfg.epsilon;
    cfg.lambda_target = std::cos(cis_target_phi(l, nprime, opt.rule));
    if (std::abs(1.0 - std::abs(cfg.lambda_target)) < 1e-9)
        throw not_found_error("no root: target lambda = " + std::to_string(cfg.lambda_target) +
                              " lies on the |lambda| = 1 marginal band, no resolvable cyclic state");

    auto fn = [&](double x) { return symmetric_lambda(x, opt.duty) - cfg.lambda_target; };
    double prev_x = opt.grid_step, prev_f = fn(prev_x);
    bool found = false;
    for (double x = 2 * opt.grid_step; x <= opt.omega_tau_max + 1e-12; x += opt.grid_step) {
        const double f = fn(x);
        if (prev_f == 0 || prev_f * f < 0) {
            cfg.omega_tau = numeric::find_root_bracketed(fn, prev_x, x, opt.root_tol).x;
            found = true;
            break;
        }
        prev_x = x;
        prev_f = f;
    }
    if (!found)
        throw not_found_error("no root of lambda(omega tau) = " + std::to_string(cfg.lambda_target) +
                              " in (0, " + std::to_string(opt.omega_tau_max) + "] at step " +
                              std::to_string(opt.grid_step));

    const ClassicalSolution sol(cfg.profile());
    cfg.lambda = sol.floquet().lambda;
    cfg.phi = sol.floquet().phi;
    const auto spec = spec_from_complex({1, 0, 1}, RealPair(sol));
    cfg.theta_period = theta(spec, 1.0);
    cfg.theta_cycle = theta(spec, cfg.tau_prime_over_tau);
    cfg.winding = static_cast<int>(std::lround((cfg.theta_period - cfg.phi) / (2 * std::numbers::pi)));
    cfg.theta_rule_a = cfg.tau_prime_over_tau * cis_target_phi(l, nprime, CisRule::a);
    cfg.theta_rule_b = cfg.tau_prime_over_tau * cis_target_phi(l, nprime, CisRule::b);
    return cfg;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    const double two_pi = 2 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a > std::numbers::pi) a -= two_pi;
    if (a <= -std::numbers::pi) a += two_pi;
    return a;
}

struct IndependenceReport {
    double reference_theta = 0;
    double max_deviation = 0;  // max |theta_i - theta_ref| mod 2 pi
    std::vector<double> thetas;
};

/// theta(tau') from `trials` random complex solutions d1 f1 + (d2 + i d3) f2.
inline IndependenceReport invariant_independence_check(const ClassicalSolution& sol,
                                                       double tau_prime, int trials,
                                                       std::uint64_t seed = 12345) {
    const RealPair pair(sol);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.2, 3.0), any(-3.0, 3.0), coin(0.0, 1.0);
    IndependenceReport rep;
    rep.reference_theta = theta(spec_from_complex({1, 0, 1}, pair), tau_prime);
    for (int i = 0; i < trials; ++i) {
        const double d1 = mag(rng) * (coin(rng) < 0.5 ? -1 : 1);
        const double d2 = any(rng);
        const double d3 = mag(rng) * (coin(rng) < 0.5 ? -1 : 1);
        const double th = theta(spec_from_complex({d1, d2, d3}, pair), tau_prime);
        rep.thetas.push_back(th);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(wrap_angle(th - rep.reference_theta)));
    }
    return rep;
}

struct FactorizationReport {
    bool factorizes = true;
    cplx overall_factor;     // exp(-i theta / 2)
    std::vector<int> offending;
};

/// Checks exp(-i (2n + 1/2) theta) = exp(-i theta / 2) for n = 0..n_max, the
/// condition under which an even-state expansion picks up a single overall phase.
inline FactorizationReport coherence_factorization(double theta_cycle, int n_max,
                                                   double tol = 1e-8) {
    FactorizationReport rep;
    rep.overall_factor = std::polar(1.0, -0.5 * theta_cycle);
    for (int n = 0; n <= n_max; ++n) {
        const cplx z = std::polar(1.0, -(2 * n + 0.5) * theta_cycle);
        if (std::abs(z - rep.overall_factor) > tol) rep.offending.push_back(n);
    }
    rep.factorizes = rep.offending.empty();
    return rep;
}

}  // namespace paultrap
