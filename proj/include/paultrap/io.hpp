#pragma once

// JSON and CSV representations of the library's value types.

#include <ostream>
#include <string>

#include <json.hpp>

#include "paultrap/floquet.hpp"
#include "paultrap/interference.hpp"
#include "paultrap/invariant.hpp"
#include "paultrap/params.hpp"
#include "paultrap/phase.hpp"

namespace paultrap::io {

using nlohmann::json;

inline DriveProfile profile_from_json(const json& j) {
    DriveProfile p;
    try {
        p.tau = j.at("tau").get<double>();
        p.tau2 = j.at("tau2").get<double>();
        p.omega1 = j.at("omega1").get<double>();
        p.omega2 = j.at("omega2").get<double>();
        p.axis = axis_from_string(j.at("axis").get<std::string>());
    } catch (const json::exception& e) {
        throw domain_error(std::string("malformed drive profile: ") + e.what());
    }
    p.validate();
    return p;
}

inline json to_json(const DriveProfile& p) {
    return {{"tau", p.tau}, {"tau2", p.tau2}, {"omega1", p.omega1}, {"omega2", p.omega2},
            {"axis", to_string(p.axis)}};
}

inline json to_json(const FloquetData& fd, const TransferData& td) {
    return {{"lambda", fd.lambda}, {"phi", std::isfinite(fd.phi) ? json(fd.phi) : json(nullptr)},
            {"stable", fd.stable}, {"alpha1", td.alpha1}, {"beta1", td.beta1}, {"beta2", td.beta2}};
}

inline json to_json(const CisConfig& c) {
    return {{"l", c.l},
            {"nprime", c.nprime},
            {"epsilon", c.epsilon},
            {"omega_tau", c.omega_tau},
            {"tau_prime_over_tau", c.tau_prime_over_tau},
            {"theta_cycle", c.theta_cycle},
            {"lambda", c.lambda},
            {"rule", to_string(c.rule)},
            {"phi", c.phi},
            {"theta_period", c.theta_period},
            {"winding", c.winding},
            {"theta_rule_a", c.theta_rule_a},
            {"theta_rule_b", c.theta_rule_b}};
}

inline ExperimentConfig experiment_from_json(const json& j) {
    ExperimentConfig cfg;
    auto path = [](const json& p) {
        PathSpec s;
        s.l = p.at("l").get<int>();
        s.nprime = p.at("nprime").get<int>();
        if (p.contains("phi1_V")) s.phi1_V = p.at("phi1_V").get<double>();
        if (p.contains("phi2_V")) s.phi2_V = p.at("phi2_V").get<double>();
        return s;
    };
    try {
        cfg.length_m = j.at("D_m").get<double>();
        cfg.speed_mps = j.at("v_mps").get<double>();
        if (j.contains("d_m")) cfg.gap_m = j.at("d_m").get<double>();
        if (j.contains("tau_s")) cfg.tau_s = j.at("tau_s").get<double>();
        if (j.contains("duty")) cfg.duty = j.at("duty").get<double>();
        if (j.contains("convention")) {
            const auto c = j.at("convention").get<std::string>();
            if (c == "half_gap") cfg.convention = VoltageConvention::half_gap;
            else if (c == "full_gap") cfg.convention = VoltageConvention::full_gap;
            else throw domain_error("unknown voltage convention '" + c + "'");
        }
        if (j.contains("transit")) {
            const auto t = j.at("transit").get<std::string>();
            if (t == "minimal_period") cfg.transit = TransitConvention::minimal_period;
            else if (t == "literal") cfg.transit = TransitConvention::literal;
            else throw domain_error("unknown transit convention '" + t + "'");
        }
        cfg.path1 = path(j.at("path1"));
        cfg.path2 = path(j.at("path2"));
    } catch (const json::exception& e) {
        throw domain_error(std::string("malformed experiment config: ") + e.what());
    }
    return cfg;
}

inline json to_json(const ExperimentSetup& s, const InterferenceResult& r) {
    auto path = [](const PathConfig& p, const PathPhase& ph) {
        return json{{"l", p.l},
                    {"nprime", p.nprime},
                    {"omega1_tau", p.x_drive.omega1 * p.x_drive.tau},
                    {"omega2_tau", p.x_drive.omega2 * p.x_drive.tau},
                    {"phi1_V", p.phi1_V},
                    {"phi2_V", p.phi2_V},
                    {"theta_x", ph.theta_x},
                    {"theta_y", ph.theta_y},
                    {"theta", ph.theta}};
    };
    return {{"theta1", r.path1.theta},
            {"theta2", r.path2.theta},
            {"difference", r.difference},
            {"intensity_ratio", r.intensity_ratio},
            {"classification", to_string(r.classification)},
            {"path1", path(s.path1, r.path1)},
            {"path2", path(s.path2, r.path2)},
            {"si", {{"D_m", s.length_m},
                    {"v_mps", s.speed_mps},
                    {"T_s", s.transit_s},
                    {"tau_s", s.tau_s},
                    {"T_over_tau", s.transit_periods},
                    {"k_z_per_m", s.k_z},
                    {"E_z_J", s.E_z}}}};
}

inline json to_json(const SiEstimate& e) {
    return {{"T_s", e.transit_s},
            {"tau_s", e.tau_s},
            {"tau_literal_s", e.tau_literal_s},
            {"omega_tau", e.omega_tau},
            {"omega_per_s", e.omega},
            {"phi_half_gap_V", e.phi_half_gap_V},
            {"phi_full_gap_V", e.phi_full_gap_V},
            {"notes", e.notes}};
}

/// `t,g_minus,g_zero,g_plus` with t in units of tau.
inline void write_g_trace_csv(std::ostream& os, const InvariantSpec& spec, double t_begin,
                              double t_end, int samples_per_period) {
    const double tau = spec.profile().tau;
    const auto n = static_cast<long>(std::llround((t_end - t_begin) / tau * samples_per_period));
    const auto old = os.precision(9);
    os << "t,g_minus,g_zero,g_plus\n";
    for (long i = 0; i <= n; ++i) {
        const double t = t_begin + (t_end - t_begin) * static_cast<double>(i) / static_cast<double>(n);
        const auto g = spec.at(t);
        os << t / tau << ',' << g.g_minus << ',' << g.g_zero << ',' << g.g_plus << '\n';
    }
    os.precision(old);
}

}  // namespace paultrap::io
