#pragma once

// Two-path interference through a pair of square-wave traps: per-path cycle
// phases, their difference, the search for destructive configurations and
// SI estimates for a laboratory setup.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "paultrap/errors.hpp"
#include "paultrap/floquet.hpp"
#include "paultrap/invariant.hpp"
#include "paultrap/params.hpp"
#include "paultrap/phase.hpp"

namespace paultrap {

inline constexpr double hbar_si = 1.054571817e-34;  // J s

// Transit time through the trap: one minimal CIS period N' tau / eps, or the
// literal N' tau.
enum class TransitConvention { minimal_period, literal };

inline const char* to_string(TransitConvention c) {
    return c == TransitConvention::minimal_period ? "minimal_period" : "literal";
}

inline double transit_periods(int nprime, TransitConvention c) {
    return c == TransitConvention::minimal_period ? double(nprime) / cis_epsilon(nprime) : double(nprime);
}

struct PathConfig {
    int label = 1;
    DriveProfile x_drive;  // unit period
    DriveProfile y_drive;
    int l = 1;
    int nprime = 4;
    double phi1_V = 0;  // SI voltages, informational
    double phi2_V = 0;
};

struct ExperimentSetup {
    PathConfig path1, path2;
    double length_m = 0;
    double speed_mps = 0;
    double transit_s = 0;
    double tau_s = 0;
    double transit_periods = 0;  // T / tau
    double k_z = 0;              // 1/m
    double E_z = 0;              // J
};

struct PathPhase {
    double theta_x = 0;
    double theta_y = 0;
    double theta = 0;  // (theta_x + theta_y) / 2
};

enum class Fringe { constructive, destructive, intermediate };

inline const char* to_string(Fringe f) {
    switch (f) {
        case Fringe::constructive: return "constructive";
        case Fringe::destructive: return "destructive";
        default: return "intermediate";
    }
}

struct InterferenceResult {
    PathPhase path1, path2;
    double difference = 0;       // Theta2 - Theta1
    double intensity_ratio = 0;  // I / I_max of the idealized two-beam fringe
    Fringe classification = Fringe::intermediate;
};

/// |exp(-i Theta1) + exp(-i Theta2)|^2 / 4.
inline double fringe_intensity(double theta1, double theta2) {
    return 0.25 * std::norm(std::polar(1.0, -theta1) + std::polar(1.0, -theta2));
}

namespace detail {

inline double axis_theta(const DriveProfile& drive, double periods, int label) {
    try {
        const ClassicalSolution sol(drive);
        return theta(spec_from_complex({1, 0, 1}, RealPair(sol)), periods * drive.tau);
    } catch (const contract_error&) {
        throw contract_error("path " + std::to_string(label) + " (" + to_string(drive.axis) +
                             " axis) is not stable");
    }
}

inline PathPhase path_phase(const PathConfig& path, double periods) {
    const double tau_prime = double(path.nprime) / cis_epsilon(path.nprime);
    const double ratio = periods / tau_prime;
    if (std::abs(ratio - std::round(ratio)) > 1e-6 || std::round(ratio) < 1) {
        std::ostringstream msg;
        msg << "path " << path.label << ": transit T = " << periods << " tau is not a multiple of tau' = "
            << tau_prime << " tau";
        throw contract_error(msg.str());
    }
    PathPhase ph;
    ph.theta_x = axis_theta(path.x_drive, periods, path.label);
    ph.theta_y = axis_theta(path.y_drive, periods, path.label);
    ph.theta = 0.5 * (ph.theta_x + ph.theta_y);
    for (double th : {ph.theta_x, ph.theta_y}) {
        if (!coherence_factorization(th, 10, 1e-6).factorizes) {
            std::ostringstream msg;
            msg << "path " << path.label << ": theta(T) = " << th
                << " is not a multiple of pi, plane-wave expansion does not factorize";
            throw contract_error(msg.str());
        }
    }
    return ph;
}

}  // namespace detail

/// Theta2 - Theta1 for a setup whose transit time is commensurate with both
/// paths' minimal periods; the common plane-wave z phase cancels.
inline InterferenceResult phase_difference(const ExperimentSetup& setup) {
    InterferenceResult r;
    r.path1 = detail::path_phase(setup.path1, setup.transit_periods);
    r.path2 = detail::path_phase(setup.path2, setup.transit_periods);
    r.difference = r.path2.theta - r.path1.theta;
    r.intensity_ratio = fringe_intensity(r.path1.theta, r.path2.theta);
    if (r.intensity_ratio < 1e-6)
        r.classification = Fringe::destructive;
    else if (r.intensity_ratio > 1 - 1e-6)
        r.classification = Fringe::constructive;
    return r;
}

struct PathSpec {
    int l = 1;
    int nprime = 4;
    std::optional<double> phi1_V;  // both or neither
    std::optional<double> phi2_V;
};

struct ExperimentConfig {
    double length_m = 0.06;
    double speed_mps = 5e6;
    double gap_m = 1e-3;
    std::optional<double> tau_s;  // defaults to the transit divided by path 1's period count
    PathSpec path1, path2;
    double duty = 0.25;
    double mass = codata::electron_mass;
    double charge = codata::elementary_charge;
    VoltageConvention convention = VoltageConvention::half_gap;
    TransitConvention transit = TransitConvention::minimal_period;
    CisRule rule = CisRule::b;
};

inline ExperimentSetup build_setup(const ExperimentConfig& cfg) {
    if (!(cfg.length_m > 0) || !(cfg.speed_mps > 0)) throw domain_error("trap length and speed must be positive");
    ExperimentSetup s;
    s.length_m = cfg.length_m;
    s.speed_mps = cfg.speed_mps;
    s.transit_s = cfg.length_m / cfg.speed_mps;
    s.tau_s = cfg.tau_s ? *cfg.tau_s : s.transit_s / transit_periods(cfg.path1.nprime, cfg.transit);
    if (!(s.tau_s > 0)) throw domain_error("drive period must be positive");
    s.transit_periods = s.transit_s / s.tau_s;
    s.k_z = cfg.mass * cfg.speed_mps / hbar_si;
    s.E_z = 0.5 * cfg.mass * cfg.speed_mps * cfg.speed_mps;

    auto make_path = [&](const PathSpec& ps, int label) {
        PathConfig p;
        p.label = label;
        p.l = ps.l;
        p.nprime = ps.nprime;
        double w1t, w2t;
        if (ps.phi1_V && ps.phi2_V) {
            w1t = omega_from_voltage(*ps.phi1_V, cfg.mass, cfg.charge, cfg.gap_m, cfg.convention) * s.tau_s;
            w2t = omega_from_voltage(*ps.phi2_V, cfg.mass, cfg.charge, cfg.gap_m, cfg.convention) * s.tau_s;
            p.phi1_V = *ps.phi1_V;
            p.phi2_V = *ps.phi2_V;
        } else if (!ps.phi1_V && !ps.phi2_V) {
            CisSearchOptions opt;
            opt.duty = cfg.duty;
            opt.rule = cfg.rule;
            w1t = w2t = cis_search(ps.l, ps.nprime, opt).omega_tau;
            const double v = voltage_from_omega(w1t / s.tau_s, cfg.mass, cfg.charge, cfg.gap_m, cfg.convention);
            p.phi1_V = v;
            p.phi2_V = -v;
        } else {
            throw domain_error("path " + std::to_string(label) + ": give both phi1_V and phi2_V or neither");
        }
        p.x_drive = unit_profile(w1t, w2t, Axis::x, cfg.duty);
        p.y_drive = unit_profile(w1t, w2t, Axis::y, cfg.duty);
        return p;
    };
    s.path1 = make_path(cfg.path1, 1);
    s.path2 = make_path(cfg.path2, 2);
    return s;
}

enum class DestructiveStrategy {
    method1,  // l = 1 on both paths, N'1 = 2 N'2
    method2,  // same N', l = 1 and l = 2
};

struct SearchConstraints {
    double length_m = 0.06;
    double tau_s = 6e-9;
    double v_min = 0;
    double v_max = std::numeric_limits<double>::infinity();
    double gap_m = 1e-3;
    int nprime_max = 16;
    double duty = 0.25;
    TransitConvention transit = TransitConvention::minimal_period;
};

struct SearchResult {
    ExperimentSetup setup;
    InterferenceResult result;
};

inline SearchResult destructive_search(DestructiveStrategy strategy, const SearchConstraints& c) {
    struct Candidate {
        PathSpec p1, p2;
    };
    std::vector<Candidate> candidates;
    if (strategy == DestructiveStrategy::method1) {
        for (int n2 = 2; 2 * n2 <= c.nprime_max; ++n2) candidates.push_back({{1, 2 * n2, {}, {}}, {1, n2, {}, {}}});
    } else {
        for (int n = 2; n <= c.nprime_max; ++n) candidates.push_back({{1, n, {}, {}}, {2, n, {}, {}}});
    }

    double nearest_v = std::numeric_limits<double>::quiet_NaN();
    double nearest_gap = std::numeric_limits<double>::infinity();
    std::string last_reason = "no candidate pair has cyclic states on both paths";
    for (const auto& cand : candidates) {
        const double v = c.length_m / (transit_periods(cand.p1.nprime, c.transit) * c.tau_s);
        const double miss = v < c.v_min ? c.v_min - v : (v > c.v_max ? v - c.v_max : 0.0);
        if (miss > 0) {
            if (miss < nearest_gap) {
                nearest_gap = miss;
                nearest_v = v;
            }
            continue;
        }
        ExperimentConfig cfg;
        cfg.length_m = c.length_m;
        cfg.speed_mps = v;
        cfg.gap_m = c.gap_m;
        cfg.tau_s = c.tau_s;
        cfg.duty = c.duty;
        cfg.transit = c.transit;
        cfg.path1 = cand.p1;
        cfg.path2 = cand.p2;
        try {
            auto setup = build_setup(cfg);
            auto res = phase_difference(setup);
            if (std::abs(std::abs(wrap_angle(res.difference)) - std::numbers::pi) < 1e-6)
                return {setup, res};
            last_reason = "phase difference " + std::to_string(res.difference) + " for N' = (" +
                          std::to_string(cand.p1.nprime) + ", " + std::to_string(cand.p2.nprime) + ")";
        } catch (const error& e) {
            last_reason = e.what();
        }
    }
    std::ostringstream msg;
    msg << "no admissible destructive configuration";
    if (std::isfinite(nearest_gap))
        msg << "; nearest miss v = " << nearest_v << " m/s outside [" << c.v_min << ", " << c.v_max << "]";
    msg << "; last candidate: " << last_reason;
    throw not_found_error(msg.str());
}

struct SiEstimate {
    double transit_s = 0;
    double tau_s = 0;
    double tau_literal_s = 0;  // tau if T = N' tau
    double omega_tau = 0;
    double omega = 0;          // 1/s
    double phi_half_gap_V = 0; // omega^2 = e|Phi|/(2 m d^2)
    double phi_full_gap_V = 0; // omega^2 = e|Phi|/(m d^2)
    std::vector<std::string> notes;
};

inline SiEstimate estimate_si(double length_m, double gap_m, double speed_mps, int l, int nprime,
                              CisRule rule = CisRule::b, double mass = codata::electron_mass,
                              double charge = codata::elementary_charge) {
    if (!(length_m > 0) || !(gap_m > 0) || !(speed_mps > 0))
        throw domain_error("length, gap and speed must be positive");
    SiEstimate e;
    e.transit_s = length_m / speed_mps;
    e.tau_s = e.transit_s * cis_epsilon(nprime) / nprime;
    e.tau_literal_s = e.transit_s / nprime;
    CisSearchOptions opt;
    opt.rule = rule;
    e.omega_tau = cis_search(l, nprime, opt).omega_tau;
    e.omega = e.omega_tau / e.tau_s;
    e.phi_half_gap_V = voltage_from_omega(e.omega, mass, charge, gap_m, VoltageConvention::half_gap);
    e.phi_full_gap_V = voltage_from_omega(e.omega, mass, charge, gap_m, VoltageConvention::full_gap);
    std::ostringstream n1;
    n1 << "transit spans one minimal cyclic period tau' = " << nprime << " tau / " << cis_epsilon(nprime)
       << "; with T = N' tau the period would be " << e.tau_literal_s << " s";
    e.notes.push_back(n1.str());
    if (gap_m > 1e-3) e.notes.push_back("gap above the submillimeter range; voltage grows as d^2");
    if (e.phi_half_gap_V > 100) e.notes.push_back("drive voltage above 100 V");
    return e;
}

}  // namespace paultrap
