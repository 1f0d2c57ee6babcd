#pragma once

// Physical parameters of the square-wave trap and the drive profile that the
// rest of the library works with. Internally everything is expressed in
// natural units (hbar = 1, the drive period as time unit); SI only enters
// through the voltage <-> frequency conversion below.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "paultrap/errors.hpp"

namespace paultrap {

namespace codata {
inline constexpr double electron_mass = 9.1093837015e-31;      // kg
inline constexpr double elementary_charge = 1.602176634e-19;   // C
}  // namespace codata

enum class Axis { x, y };

inline const char* to_string(Axis a) { return a == Axis::x ? "x" : "y"; }

inline Axis axis_from_string(const std::string& s) {
    if (s == "x" || s == "X") return Axis::x;
    if (s == "y" || s == "Y") return Axis::y;
    throw domain_error("unknown axis '" + s + "' (expected x or y)");
}

// omega^2 = e|Phi| / (2 m d^2) is the square-wave convention; the sinusoidal
// trap writes omega^2 = e Phi / (m d^2). They differ by exactly sqrt(2) in omega.
enum class VoltageConvention { half_gap, full_gap };

inline const char* to_string(VoltageConvention c) {
    return c == VoltageConvention::half_gap ? "half_gap" : "full_gap";
}

struct PhysicalParams {
    double mass = codata::electron_mass;
    double charge = codata::elementary_charge;
    double gap = 1e-3;   // m
    double phi1 = 1.0;   // V, > 0
    double phi2 = -1.0;  // V, < 0

    void validate() const {
        if (!(mass > 0) || !(charge > 0) || !(gap > 0))
            throw domain_error("mass, charge and gap must be strictly positive");
        if (!(phi1 > 0) || !(phi2 < 0))
            throw domain_error("square wave requires phi1 > 0 and phi2 < 0");
    }
};

struct Frequencies {
    double omega1 = 0;
    double omega2 = 0;
};

namespace detail {
inline double convention_factor(VoltageConvention c) {
    return c == VoltageConvention::half_gap ? 2.0 : 1.0;
}
inline void check_positive_mcd(double mass, double charge, double gap) {
    if (!(mass > 0) || !(charge > 0) || !(gap > 0))
        throw domain_error("mass, charge and gap must be strictly positive");
}
}  // namespace detail

/// Angular frequency (rad/s) produced by a single voltage level.
inline double omega_from_voltage(double volts, double mass, double charge, double gap,
                                 VoltageConvention conv = VoltageConvention::half_gap) {
    detail::check_positive_mcd(mass, charge, gap);
    return std::sqrt(charge * std::abs(volts) /
                     (detail::convention_factor(conv) * mass * gap * gap));
}

/// Inverse of omega_from_voltage; returns |Phi| in volts.
inline double voltage_from_omega(double omega, double mass, double charge, double gap,
                                 VoltageConvention conv = VoltageConvention::half_gap) {
    detail::check_positive_mcd(mass, charge, gap);
    return detail::convention_factor(conv) * mass * gap * gap * omega * omega / charge;
}

inline Frequencies omega_from_voltage(const PhysicalParams& p,
                                      VoltageConvention conv = VoltageConvention::half_gap) {
    detail::check_positive_mcd(p.mass, p.charge, p.gap);
    return {omega_from_voltage(p.phi1, p.mass, p.charge, p.gap, conv),
            omega_from_voltage(p.phi2, p.mass, p.charge, p.gap, conv)};
}

enum class SegmentKind {
    first,   // omega^2 = +omega1^2 on x, -omega1^2 on y
    second,  // omega^2 = -omega2^2 on x, +omega2^2 on y
};

struct SegmentLocation {
    std::int64_t period;  // r
    double local;         // s = t - r tau, in [tau2 - tau, tau2)
    SegmentKind kind;
};

/// Square-wave drive for one transverse axis.
///
/// Period r covers [r tau + tau2 - tau, r tau + tau2). Its first segment
/// [r tau + tau2 - tau, r tau - tau2) carries omega1, the second
/// [r tau - tau2, r tau + tau2) carries omega2. Boundary points belong to the
/// following segment.
struct DriveProfile {
    double tau = 1.0;
    double tau2 = 0.25;
    double omega1 = 1.0;
    double omega2 = 1.0;
    Axis axis = Axis::x;

    void validate() const {
        if (!(tau > 0) || !std::isfinite(tau)) throw domain_error("period must be positive");
        if (!(tau2 >= 0) || !(2 * tau2 < tau))
            throw domain_error("duty cycle requires 0 <= 2 tau2 < tau");
        if (!(omega1 > 0) || !std::isfinite(omega1))
            throw domain_error("omega1 must be positive");
        if (!(omega2 >= 0) || !std::isfinite(omega2))
            throw domain_error("omega2 must be non-negative");
        if (omega2 == 0 && tau2 > 0)
            throw degenerate_error("omega2 = 0 with tau2 > 0 is a singular drive");
    }

    double first_length() const { return tau - 2 * tau2; }
    double second_length() const { return 2 * tau2; }

    std::int64_t period_of(double t) const {
        return static_cast<std::int64_t>(std::floor((t - tau2 + tau) / tau));
    }

    SegmentLocation locate(double t) const {
        auto r = period_of(t);
        double s = t - static_cast<double>(r) * tau;
        // floor() can land one period off when t sits on a boundary
        if (s >= tau2) {
            ++r;
            s -= tau;
        } else if (s < tau2 - tau) {
            --r;
            s += tau;
        }
        return {r, s, s < -tau2 ? SegmentKind::first : SegmentKind::second};
    }

    double omega_sq(SegmentKind k) const {
        const double w1 = omega1 * omega1, w2 = omega2 * omega2;
        if (axis == Axis::x) return k == SegmentKind::first ? w1 : -w2;
        return k == SegmentKind::first ? -w1 : w2;
    }

    double omega_sq(double t) const { return omega_sq(locate(t).kind); }

    /// Smallest segment boundary strictly greater than t.
    double next_boundary(double t) const {
        auto r = locate(t).period;
        for (auto k = r; k <= r + 2; ++k) {
            double r_tau = static_cast<double>(k) * tau;
            if (r_tau - tau2 > t) return r_tau - tau2;
            if (r_tau + tau2 > t) return r_tau + tau2;
        }
        return t + tau;  // unreachable for finite t
    }

    /// Segment boundaries in the open interval (a, b), ascending.
    std::vector<double> boundaries(double a, double b) const {
        std::vector<double> out;
        for (double x = next_boundary(a); x < b; x = next_boundary(x)) {
            if (out.empty() || x > out.back()) out.push_back(x);
        }
        return out;
    }

    /// True when t lies within `margin` of a segment boundary.
    bool near_boundary(double t, double margin) const {
        auto loc = locate(t);
        double s = loc.local;
        return std::abs(s + tau2) < margin || std::abs(s - tau2) < margin ||
               std::abs(s - (tau2 - tau)) < margin;
    }
};

struct DimensionlessDrive {
    double omega1_tau = 0;
    double omega2_tau = 0;
    double duty = 0;  // tau2 / tau
    Axis axis = Axis::x;
};

inline DimensionlessDrive dimensionless(const DriveProfile& p) {
    return {p.omega1 * p.tau, p.omega2 * p.tau, p.tau2 / p.tau, p.axis};
}

inline DriveProfile from_dimensionless(const DimensionlessDrive& d, double tau) {
    if (!(tau > 0)) throw domain_error("period must be positive");
    return {tau, d.duty * tau, d.omega1_tau / tau, d.omega2_tau / tau, d.axis};
}

/// Equal-duty profile (tau2 = tau/4 by default) with unit period.
inline DriveProfile unit_profile(double omega1_tau, double omega2_tau, Axis axis = Axis::x,
                                 double duty = 0.25) {
    return {1.0, duty, omega1_tau, omega2_tau, axis};
}

}  // namespace paultrap
