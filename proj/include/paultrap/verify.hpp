#pragma once

// End-to-end checks of every closed form against an independent route
// (RK4 integration, arg unwrapping, dense scans, quadrature). Shared by the
// acceptance test binary and the `verify` CLI command.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "paultrap/paultrap.hpp"

namespace paultrap::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct TableRow {
    char label;
    int l;
    int nprime;
    double omega_tau;       // published value
    double lambda_expected; // cos of the cyclic Floquet phase
    int g_period;           // g- period in units of tau
};

inline const std::vector<TableRow>& table_rows() {
    static const std::vector<TableRow> rows{
        {'a', 1, 4, 3.14159, 0.0, 2},
        {'b', 1, 8, 2.30517, std::numbers::sqrt2 / 2, 4},
        {'c', 1, 3, 2.63690, 0.5, 3},
        {'d', 2, 3, 3.48328, -0.5, 3},
    };
    return rows;
}

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

// Profiles with |lambda| <= bound on the requested axis.
inline DriveProfile random_stable_profile(std::mt19937_64& rng, Axis axis, double bound = 0.98) {
    std::uniform_real_distribution<double> w(0.3, 6.0), duty(0.05, 0.45);
    for (;;) {
        const auto p = unit_profile(w(rng), w(rng), axis, duty(rng));
        if (std::abs(floquet_data(transfer_data(p), p).lambda) <= bound) return p;
    }
}

inline InvariantSpec row_spec(const TableRow& row) {
    const auto cfg = cis_search(row.l, row.nprime);
    return matching_coefficients(ClassicalSolution(cfg.profile()));
}

}  // namespace detail

// 1. cyclic-state roots and their lambda, checked by RK4 monodromy.
inline CriterionResult cyclic_state_roots() {
    CriterionResult r{1, "cyclic-state roots omega*tau (tol 1e-4) and lambda via RK4 monodromy (tol 1e-5), < 1 s", true, {}};
    std::ostringstream d;
    d.precision(7);
    const auto start = std::chrono::steady_clock::now();
    std::vector<CisConfig> found;
    for (const auto& row : table_rows()) found.push_back(cis_search(row.l, row.nprime));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (std::size_t i = 0; i < found.size(); ++i) {
        const auto& row = table_rows()[i];
        const auto& c = found[i];
        const auto p = c.profile();
        const double t0 = p.tau2 - p.tau;
        const double lambda_rk = 0.5 * numeric::transition_rk4(p, t0, p.tau, p.tau * 1e-4).trace();
        const bool ok = std::abs(c.omega_tau - row.omega_tau) < 1e-4 &&
                        std::abs(lambda_rk - row.lambda_expected) < 1e-5 &&
                        std::abs(c.lambda - row.lambda_expected) < 1e-5;
        r.passed = r.passed && ok;
        d << row.label << ": wt=" << c.omega_tau << " lambda_rk=" << lambda_rk << " theta(tau')/pi="
          << c.theta_cycle / std::numbers::pi << " winding=" << c.winding << " ruleA/pi="
          << c.theta_rule_a / std::numbers::pi << " ruleB/pi=" << c.theta_rule_b / std::numbers::pi << "; ";
    }
    r.passed = r.passed && seconds < 1.0;
    d << "time=" << seconds << " s";
    r.detail = d.str();
    return r;
}

// 2. g- periodicity of the Hamiltonian-matched invariant, and I = H once per cycle.
inline CriterionResult g_minus_periodicity() {
    CriterionResult r{2, "g- is 2,4,3,3 tau periodic (rel 1e-8 over 4 periods); m g- = 1 at some t* per cycle (1e-8)", true, {}};
    std::ostringstream d;
    for (const auto& row : table_rows()) {
        const auto spec = detail::row_spec(row);
        const double period = row.g_period;
        double scale = 0, dev = 0;
        const int samples = 4000;
        for (int i = 0; i < samples; ++i) {
            const double t = 4 * period * i / samples;
            const double g = spec.at(t).g_minus;
            scale = std::max(scale, std::abs(g));
            dev = std::max(dev, std::abs(spec.at(t + period).g_minus - g));
        }
        const double rel = dev / scale;
        double worst_match = 0;
        for (int k = 0; k < 4; ++k) {
            // scan every drive period of the k-th cycle and keep the best hit
            double best = 1e300;
            for (int j = 0; j < row.g_period; ++j) {
                const auto hm = locate_hamiltonian_match(spec, k * period + j - 1.0 + spec.profile().tau2);
                best = std::min(best, std::abs(spec.mass() * hm.g.g_minus - 1.0));
            }
            worst_match = std::max(worst_match, best);
        }
        const bool ok = rel < 1e-8 && worst_match < 1e-8;
        r.passed = r.passed && ok;
        d << row.label << ": rel dev=" << detail::fmt(rel) << " |m g- - 1|=" << detail::fmt(worst_match) << "; ";
    }
    r.detail = d.str();
    return r;
}

// 3. transfer identities over random drives. Residuals are measured against
// the size of the terms that cancel, since those reach 1e7 when the two
// frequencies differ by a factor of 60.
inline CriterionResult transfer_identities() {
    CriterionResult r{3, "alpha/beta identity and det(transfer) = 1 on both axes, 1e4 random drives (1e-10 relative to term size)", true, {}};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> w(0.1, 2 * std::numbers::pi), duty(0.0, 0.49);
    double worst_identity = 0, worst_det = 0, worst_cdet = 0, worst_abs = 0;
    for (int i = 0; i < 10000; ++i) {
        const double w1 = w(rng), w2 = w(rng), du = duty(rng);
        for (Axis a : {Axis::x, Axis::y}) {
            const auto p = unit_profile(w1, w2, a, du);
            const auto td = transfer_data(p);
            const double terms = td.alpha1 * td.alpha1 + td.beta1 * td.beta1 + td.beta2 * td.beta2;
            worst_abs = std::max(worst_abs, std::abs(td.identity_residual()));
            worst_identity = std::max(worst_identity, std::abs(td.identity_residual()) / terms);
            const auto m = transfer_matrix(p);
            worst_det = std::max(worst_det, std::abs(m.det() - 1.0) / (std::abs(m.a * m.d) + std::abs(m.b * m.c)));
            const auto c = coefficient_transfer(p);
            worst_cdet = std::max(worst_cdet, std::abs(c.det() - 1.0) / (std::abs(c.a * c.d) + std::abs(c.b * c.c)));
        }
    }
    r.passed = worst_identity < 1e-10 && worst_det < 1e-10 && worst_cdet < 1e-10;
    r.detail = "max identity residual=" + detail::fmt(worst_identity) + " (absolute " + detail::fmt(worst_abs) +
               ") max |det M - 1|=" + detail::fmt(worst_det) + " max |det P - 1|=" + detail::fmt(worst_cdet);
    return r;
}

// 4. closed-form solutions against RK4.
inline CriterionResult analytic_vs_rk4() {
    CriterionResult r{4, "piecewise solutions match RK4 (step tau/1e4) over 10 periods, 100 drives (abs 1e-6)", true, {}};
    std::mt19937_64 rng(4);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const auto p = detail::random_stable_profile(rng, i % 2 == 0 ? Axis::x : Axis::y);
        const auto sol = ClassicalSolution(p).normalized();
        const auto v0 = sol.evaluate(0.0);
        numeric::OdeState<cplx> init{0.0, v0.f, v0.df};
        double err = 0;
        numeric::detail::rk4_walk(p, init, 10 * p.tau, p.tau * 1e-4, [&](const numeric::OdeState<cplx>& y) {
            err = std::max(err, std::abs(y.f - sol.evaluate(y.t).f));
        });
        worst = std::max(worst, err);
    }
    r.passed = worst < 1e-6;
    r.detail = "max abs error=" + detail::fmt(worst);
    return r;
}

// 5. omega_I conservation and the coefficient ODEs.
inline CriterionResult invariant_conservation() {
    CriterionResult r{5, "omega_I drift < 1e-9 over 4 periods; coefficient ODEs hold by finite differences (rel 1e-6)", true, {}};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> mag(0.2, 3.0), any(-3.0, 3.0), u(0.0, 1.0);
    double worst_drift = 0, worst_ode = 0;
    for (int i = 0; i < 40; ++i) {
        const auto p = detail::random_stable_profile(rng, i % 2 == 0 ? Axis::x : Axis::y);
        const auto spec = spec_from_complex({mag(rng), any(rng), mag(rng)}, RealPair(ClassicalSolution(p)), mag(rng));
        const double m = spec.mass(), wI = spec.omega_I();
        for (int k = 0; k <= 400; ++k) {
            const double t = 4.0 * p.tau * k / 400;
            worst_drift = std::max(worst_drift, std::abs(std::sqrt(spec.at(t).determinant()) - wI) / wI);
        }
        const double h = 1e-6 * p.tau, w_ref = std::max(p.omega1, p.omega2);
        for (int k = 0; k < 50; ++k) {
            const double t = 4.0 * p.tau * u(rng);
            if (p.near_boundary(t, 10 * h)) continue;
            const auto g = spec.at(t), gp = spec.at(t + h), gm = spec.at(t - h);
            const double w2 = p.omega_sq(t);
            auto rel = [&](double fd, double rhs, double mag_g) {
                return std::abs(fd - rhs) / (std::abs(rhs) + w_ref * std::abs(mag_g));
            };
            worst_ode = std::max({worst_ode,
                                  rel((gp.g_minus - gm.g_minus) / (2 * h), -2 * g.g_zero / m, g.g_minus),
                                  rel((gp.g_zero - gm.g_zero) / (2 * h), m * w2 * g.g_minus - g.g_plus / m, g.g_zero),
                                  rel((gp.g_plus - gm.g_plus) / (2 * h), 2 * m * w2 * g.g_zero, g.g_plus)});
        }
    }
    r.passed = worst_drift < 1e-9 && worst_ode < 1e-6;
    r.detail = "max drift=" + detail::fmt(worst_drift) + " max ODE rel error=" + detail::fmt(worst_ode);
    return r;
}

// 6. cycle phase does not depend on which invariant is used.
inline CriterionResult invariant_independence() {
    CriterionResult r{6, "theta(tau') agrees mod 2 pi for 100 random invariants on each cyclic drive (1e-8)", true, {}};
    std::ostringstream d;
    for (const auto& row : table_rows()) {
        const auto cfg = cis_search(row.l, row.nprime);
        const auto rep = invariant_independence_check(ClassicalSolution(cfg.profile()), cfg.tau_prime_over_tau,
                                                      100, 600 + row.nprime * 10 + row.l);
        r.passed = r.passed && rep.max_deviation < 1e-8;
        d << row.label << ": theta/pi=" << rep.reference_theta / std::numbers::pi
          << " max dev=" << detail::fmt(rep.max_deviation) << "; ";
    }
    r.detail = d.str();
    return r;
}

// 7. theta by quadrature versus the unwrapped argument of f_c.
inline CriterionResult theta_dual_route() {
    CriterionResult r{7, "theta: adaptive quadrature vs unwrapped arg f_c at 100 times (1e-8)", true, {}};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mag(0.2, 3.0), any(-3.0, 3.0), u(0.0, 1.0);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const auto& row = table_rows()[i % 4];
        const auto cfg = cis_search(row.l, row.nprime);
        const auto spec = spec_from_complex({mag(rng), any(rng), mag(rng)}, RealPair(ClassicalSolution(cfg.profile())));
        const double t = 2 * cfg.tau_prime_over_tau * u(rng);
        worst = std::max(worst, std::abs(theta(spec, t) - theta_unwrapped(spec, t)));
    }
    r.passed = worst < 1e-8;
    r.detail = "max |quadrature - unwrap|=" + detail::fmt(worst);
    return r;
}

// 8. eigenfunctions: orthonormality, Schrodinger residual, cyclic recurrence.
inline CriterionResult wavefunction_checks() {
    CriterionResult r{8, "<psi_m|psi_n> = delta (n,m <= 10, 1e-8); Schrodinger residual < 1e-5; cyclic recurrence (1e-7)", true, {}};
    const auto spec_a = detail::row_spec(table_rows()[0]);
    double worst_ortho = 0;
    for (int k = 0; k < 20; ++k) {
        const auto fr = eigen_frame(spec_a, 0.05 + 0.2 * k);
        for (int m = 0; m <= 10; ++m)
            for (int n = m; n <= 10; ++n)
                worst_ortho = std::max(worst_ortho, std::abs(inner_product(m, n, fr) - (m == n ? 1.0 : 0.0)));
    }

    ResidualGrid grid;
    for (double t : {0.1, 0.4, 0.6, 0.9, 1.15, 1.5}) grid.times.push_back(t);
    for (int i = -20; i <= 20; ++i) grid.positions.push_back(0.05 * i);
    const double residual = schrodinger_residual(0, spec_a, grid);

    double worst_cycle = 0;
    for (const auto& row : table_rows()) {
        const auto spec = detail::row_spec(row);
        const double tp = row.g_period;
        const double th_cycle = theta(spec, tp);
        for (double t : {0.13, 0.71, 1.37}) {
            const auto f0 = eigen_frame(spec, t);
            const auto f1 = eigen_frame(spec, t + tp);
            for (int n = 0; n <= 5; ++n)
                for (double q : {-0.8, -0.3, 0.0, 0.25, 0.9}) {
                    const cplx expect = std::polar(1.0, -(n + 0.5) * th_cycle) * psi(n, q, f0);
                    worst_cycle = std::max(worst_cycle, std::abs(psi(n, q, f1) - expect));
                }
        }
    }
    r.passed = worst_ortho < 1e-8 && residual < 1e-5 && worst_cycle < 1e-7;
    r.detail = "max orthonormality error=" + detail::fmt(worst_ortho) + " residual=" + detail::fmt(residual) +
               " max recurrence error=" + detail::fmt(worst_cycle);
    return r;
}

// 9. destructive two-path configurations.
inline CriterionResult destructive_interference() {
    CriterionResult r{9, "both destructive strategies reach |Theta2 - Theta1| = pi (1e-6) with intensity < 1e-10", true, {}};
    std::ostringstream d;
    for (auto s : {DestructiveStrategy::method1, DestructiveStrategy::method2}) {
        SearchConstraints c;
        const auto found = destructive_search(s, c);
        const double miss = std::abs(std::abs(wrap_angle(found.result.difference)) - std::numbers::pi);
        const bool ok = miss < 1e-6 && found.result.intensity_ratio < 1e-10;
        r.passed = r.passed && ok;
        d << (s == DestructiveStrategy::method1 ? "method1" : "method2") << ": N'=(" << found.setup.path1.nprime
          << "," << found.setup.path2.nprime << ") l=(" << found.setup.path1.l << "," << found.setup.path2.l
          << ") diff-pi=" << detail::fmt(miss) << " I/Imax=" << detail::fmt(found.result.intensity_ratio) << "; ";
    }
    r.detail = d.str();
    return r;
}

// 10. SI parameter estimate.
inline CriterionResult si_estimate() {
    CriterionResult r{10, "estimate (D=6 cm, d=1 mm, v=5e6 m/s, N'=4, l=1): tau = 6e-9 s, omega within 5% of 5e8, |Phi| within x5 of 1 V", true, {}};
    const auto e = estimate_si(0.06, 1e-3, 5e6, 1, 4);
    const bool tau_ok = std::abs(e.tau_s - 6.0e-9) <= 1e-12 * 6.0e-9;
    const bool omega_ok = std::abs(e.omega - 5e8) <= 0.05 * 5e8;
    auto within5 = [](double v) { return v >= 0.2 && v <= 5.0; };
    r.passed = tau_ok && omega_ok && within5(e.phi_half_gap_V) && within5(e.phi_full_gap_V);
    std::ostringstream d;
    d.precision(6);
    d << "tau=" << e.tau_s << " s omega=" << e.omega << " 1/s |Phi| half-gap=" << e.phi_half_gap_V
      << " V full-gap=" << e.phi_full_gap_V << " V";
    r.detail = d.str();
    return r;
}

inline std::vector<std::function<CriterionResult()>> all_criteria() {
    return {cyclic_state_roots, g_minus_periodicity, transfer_identities, analytic_vs_rk4,
            invariant_conservation, invariant_independence, theta_dual_route, wavefunction_checks,
            destructive_interference, si_estimate};
}

inline CriterionResult run_guarded(const std::function<CriterionResult()>& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return {0, "criterion threw", false, e.what()};
    }
}

}  // namespace paultrap::verify
