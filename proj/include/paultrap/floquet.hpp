#pragma once

// One-period transfer analysis of f'' + w^2(t) f = 0 for the square-wave drive
// and the piecewise exponential/trigonometric Floquet solutions built from it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <tuple>
#include <utility>

#include "paultrap/errors.hpp"
#include "paultrap/numeric.hpp"
#include "paultrap/params.hpp"

namespace paultrap {

using cplx = std::complex<double>;

/// Marginal band around |lambda| = 1 inside which eigenvectors degenerate.
inline constexpr double resonance_tolerance = 1e-12;

struct TransferData {
    Axis axis = Axis::x;
    double alpha1 = 1;
    double beta1 = 0;
    double beta2 = 0;
    double eps_sum = 2;  // omega1/omega2 + omega2/omega1
    double eta = 0;      // omega1/omega2 - omega2/omega1

    /// Zero when the scalar identity holds: alpha^2 + beta1^2 - beta2^2 = 1 on
    /// x, alpha^2 - beta1^2 + beta2^2 = 1 on y.
    double identity_residual() const {
        const double a2 = alpha1 * alpha1, b1 = beta1 * beta1, b2 = beta2 * beta2;
        return axis == Axis::x ? a2 + b1 - b2 - 1.0 : a2 - b1 + b2 - 1.0;
    }
};

inline TransferData transfer_data(const DriveProfile& p) {
    p.validate();
    TransferData td;
    td.axis = p.axis;
    if (p.omega2 > 0) {
        td.eps_sum = p.omega1 / p.omega2 + p.omega2 / p.omega1;
        td.eta = p.omega1 / p.omega2 - p.omega2 / p.omega1;
    } else {
        td.eps_sum = td.eta = std::numeric_limits<double>::quiet_NaN();
    }
    if (p.tau2 == 0) return td;  // only the first segment exists

    const double a = 2 * p.omega1 * p.tau2, b = 2 * p.omega2 * p.tau2;
    const double half_eta = 0.5 * td.eta;
    if (p.axis == Axis::x) {
        td.alpha1 = std::cos(a) * std::cosh(b) + half_eta * std::sin(a) * std::sinh(b);
        td.beta1 = std::sin(a) * std::cosh(b) - half_eta * std::cos(a) * std::sinh(b);
        td.beta2 = 0.5 * td.eps_sum * std::sinh(b);
    } else {
        td.alpha1 = std::cosh(a) * std::cos(b) - half_eta * std::sinh(a) * std::sin(b);
        td.beta1 = std::sinh(a) * std::cos(b) - half_eta * std::cosh(a) * std::sin(b);
        td.beta2 = 0.5 * td.eps_sum * std::sin(b);
    }
    return td;
}

/// State map (f, f') over `length` of constant w^2.
inline numeric::Mat2 segment_propagator(double omega_sq, double length) {
    if (omega_sq > 0) {
        const double w = std::sqrt(omega_sq), c = std::cos(w * length), s = std::sin(w * length);
        return {c, s / w, -w * s, c};
    }
    if (omega_sq < 0) {
        const double w = std::sqrt(-omega_sq), c = std::cosh(w * length), s = std::sinh(w * length);
        return {c, s / w, w * s, c};
    }
    return {1.0, length, 0.0, 1.0};
}

/// Closed-form one-period monodromy from the start of the first segment,
/// s0 = tau2 - tau, to s0 + tau.
inline numeric::Mat2 transfer_matrix(const DriveProfile& p) {
    const auto first = segment_propagator(p.omega_sq(SegmentKind::first), p.first_length());
    if (p.tau2 == 0) return first;
    const auto second = segment_propagator(p.omega_sq(SegmentKind::second), p.second_length());
    return second * first;
}

struct CMat2 {
    cplx a, b, c, d;
    cplx det() const { return a * d - b * c; }
};

namespace detail {

inline double start_of_period(const DriveProfile& p) { return p.tau2 - p.tau; }

// (A, B) -> (f, f') at local time s for the first-segment basis.
inline CMat2 first_segment_basis(const DriveProfile& p, double s) {
    const double w = p.omega1;
    if (p.axis == Axis::x) {
        const cplx ep = std::polar(1.0, w * s), em = std::conj(ep);
        const cplx iw(0, w);
        return {ep, em, iw * ep, -iw * em};
    }
    const double ep = std::exp(w * s), em = std::exp(-w * s);
    return {ep, em, w * ep, -w * em};
}

inline CMat2 inverse(const CMat2& m) {
    const cplx det = m.det();
    return {m.d / det, -m.b / det, -m.c / det, m.a / det};
}

inline CMat2 multiply(const CMat2& l, const CMat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c,
            l.c * r.b + l.d * r.d};
}

inline std::pair<cplx, cplx> coefficients_from_state(const DriveProfile& p, cplx f0, cplx df0) {
    const auto inv = inverse(first_segment_basis(p, start_of_period(p)));
    return {inv.a * f0 + inv.b * df0, inv.c * f0 + inv.d * df0};
}

}  // namespace detail

/// Second-segment coefficients (C, D) from first-segment (A, B) by continuity
/// of f and f' at s = -tau2.
inline std::pair<cplx, cplx> connect(const DriveProfile& p, cplx A, cplx B) {
    if (p.tau2 == 0) return {0.0, 0.0};
    const double w1 = p.omega1, w2 = p.omega2, t2 = p.tau2;
    const cplx r(0, w1 / w2);
    if (p.axis == Axis::x) {
        const cplx C = 0.5 * ((1.0 + r) * std::exp(cplx(w2 * t2, -w1 * t2)) * A +
                              (1.0 - r) * std::exp(cplx(w2 * t2, w1 * t2)) * B);
        const cplx D = 0.5 * ((1.0 - r) * std::exp(cplx(-w2 * t2, -w1 * t2)) * A +
                              (1.0 + r) * std::exp(cplx(-w2 * t2, w1 * t2)) * B);
        return {C, D};
    }
    const cplx C = 0.5 * ((1.0 - r) * std::exp(cplx(-w1 * t2, w2 * t2)) * A +
                          (1.0 + r) * std::exp(cplx(w1 * t2, w2 * t2)) * B);
    const cplx D = 0.5 * ((1.0 + r) * std::exp(cplx(-w1 * t2, -w2 * t2)) * A +
                          (1.0 - r) * std::exp(cplx(w1 * t2, -w2 * t2)) * B);
    return {C, D};
}

/// Coefficient map (A_r, B_r) -> (A_{r+1}, B_{r+1}) obtained by conjugating the
/// state-space monodromy with the first-segment basis. Valid for both axes.
inline CMat2 coefficient_transfer(const DriveProfile& p) {
    const auto m = transfer_matrix(p);
    const auto s = detail::first_segment_basis(p, detail::start_of_period(p));
    const CMat2 mc{m.a, m.b, m.c, m.d};
    return detail::multiply(detail::inverse(s), detail::multiply(mc, s));
}

/// The x-axis coefficient map written directly in terms of alpha1, beta1, beta2.
inline CMat2 coefficient_transfer_closed_form(const TransferData& td, const DriveProfile& p) {
    if (p.axis != Axis::x) throw contract_error("closed-form coefficient map is x-axis only");
    const cplx e = std::polar(1.0, p.omega1 * p.tau), i(0, 1);
    return {(td.alpha1 - i * td.beta1) * e, -i * td.beta2 * e, i * td.beta2 / e,
            (td.alpha1 + i * td.beta1) / e};
}

struct FloquetData {
    double lambda = 0;
    double nu = 0;
    cplx p_plus, p_minus;
    double phi = std::numeric_limits<double>::quiet_NaN();  // in (0, pi) when stable
    bool stable = false;              // |lambda| <= 1
    bool resonance_boundary = false;  // |1 - |lambda|| < resonance_tolerance
    bool closed_form = false;         // coefficients from the explicit stable-case formulas
    cplx A0, B0, C0, D0;
    cplx multiplier;  // f(t + tau) = multiplier * f(t)
};

inline FloquetData floquet_data(const TransferData& td, const DriveProfile& p) {
    FloquetData fd;
    const double wt = p.omega1 * p.tau;
    if (td.axis == Axis::x) {
        fd.lambda = td.alpha1 * std::cos(wt) + td.beta1 * std::sin(wt);
        fd.nu = td.alpha1 * std::sin(wt) - td.beta1 * std::cos(wt);
    } else {
        fd.lambda = td.alpha1 * std::cosh(wt) - td.beta1 * std::sinh(wt);
        fd.nu = td.alpha1 * std::sinh(wt) - td.beta1 * std::cosh(wt);
    }
    if (!std::isfinite(fd.lambda)) throw numerical_error("lambda overflowed");
    const cplx root = std::sqrt(cplx(fd.lambda * fd.lambda - 1.0, 0.0));
    fd.p_plus = fd.lambda + root;
    fd.p_minus = fd.lambda - root;
    fd.stable = std::abs(fd.lambda) <= 1.0;
    fd.resonance_boundary = std::abs(1.0 - std::abs(fd.lambda)) < resonance_tolerance;
    if (fd.resonance_boundary) {
        fd.phi = fd.lambda > 0 ? 0.0 : M_PI;
        fd.multiplier = fd.lambda > 0 ? 1.0 : -1.0;
        return fd;
    }

    const double s = std::sqrt(std::max(0.0, 1.0 - fd.lambda * fd.lambda));
    if (fd.stable) {
        fd.phi = std::atan2(s, fd.lambda);
        fd.multiplier = std::polar(1.0, fd.phi);
    } else {
        fd.multiplier = std::abs(fd.p_plus) >= std::abs(fd.p_minus) ? fd.p_plus : fd.p_minus;
    }

    const double beta_scale = std::max({1.0, std::abs(td.alpha1), std::abs(td.beta1)});
    if (fd.stable && std::abs(td.beta2) > 1e-12 * beta_scale) {
        if (td.axis == Axis::x) {
            fd.A0 = td.beta2 * std::polar(1.0, wt);
            fd.B0 = fd.nu - s;
        } else {
            fd.A0 = td.beta2 * std::exp(wt);
            fd.B0 = cplx(fd.nu, -s);
        }
        fd.closed_form = true;
    } else {
        // Eigenvector of the real monodromy for the chosen multiplier, then
        // mapped onto the first-segment basis.
        const auto m = transfer_matrix(p);
        const cplx mu = fd.multiplier;
        cplx v0 = m.b, v1 = mu - m.a;
        const cplx u0 = mu - m.d, u1 = m.c;
        if (std::norm(u0) + std::norm(u1) > std::norm(v0) + std::norm(v1)) {
            v0 = u0;
            v1 = u1;
        }
        std::tie(fd.A0, fd.B0) = detail::coefficients_from_state(p, v0, v1);
    }
    std::tie(fd.C0, fd.D0) = connect(p, fd.A0, fd.B0);
    return fd;
}

enum class Branch { stable_only, allow_unstable };

/// Floquet solution f(t) with f(t + tau) = multiplier * f(t), evaluated
/// piecewise from the period-0 coefficients.
class ClassicalSolution {
  public:
    struct Value {
        cplx f;
        cplx df;
    };

    explicit ClassicalSolution(const DriveProfile& profile, Branch branch = Branch::stable_only)
        : profile_(profile), transfer_(transfer_data(profile)),
          floquet_(floquet_data(transfer_, profile)) {
        if (floquet_.resonance_boundary)
            throw degenerate_error("|lambda| = 1: resonance boundary, eigenvectors degenerate");
        if (!floquet_.stable && branch == Branch::stable_only)
            throw contract_error("unstable drive (|lambda| > 1) where a stable solution is required");
        wronskian_ = raw_wronskian();
    }

    const DriveProfile& profile() const { return profile_; }
    const TransferData& transfer() const { return transfer_; }
    const FloquetData& floquet() const { return floquet_; }
    bool stable() const { return floquet_.stable; }
    double scale() const { return scale_; }

    /// Wronskian f1 f2' - f1' f2 of (Re f, Im f); constant in t.
    double wronskian() const { return wronskian_; }

    Value evaluate(double t) const {
        const auto loc = profile_.locate(t);
        const double s = loc.local;
        const auto& fd = floquet_;
        cplx f, df;
        if (loc.kind == SegmentKind::first) {
            const double w = profile_.omega1;
            if (profile_.axis == Axis::x) {
                const cplx ep = std::polar(1.0, w * s), em = std::conj(ep);
                f = fd.A0 * ep + fd.B0 * em;
                df = cplx(0, w) * (fd.A0 * ep - fd.B0 * em);
            } else {
                const double ep = std::exp(w * s), em = std::exp(-w * s);
                f = fd.A0 * ep + fd.B0 * em;
                df = w * (fd.A0 * ep - fd.B0 * em);
            }
        } else {
            const double w = profile_.omega2;
            if (profile_.axis == Axis::x) {
                const double ep = std::exp(w * s), em = std::exp(-w * s);
                f = fd.C0 * ep + fd.D0 * em;
                df = w * (fd.C0 * ep - fd.D0 * em);
            } else {
                const cplx ep = std::polar(1.0, w * s), em = std::conj(ep);
                f = fd.C0 * ep + fd.D0 * em;
                df = cplx(0, w) * (fd.C0 * ep - fd.D0 * em);
            }
        }
        const cplx k = scale_ * period_factor(loc.period);
        return {k * f, k * df};
    }

    /// Copy rescaled so that |W| = 1.
    ClassicalSolution normalized() const {
        ClassicalSolution out = *this;
        if (wronskian_ == 0) throw degenerate_error("cannot normalize a solution with zero Wronskian");
        const double k = 1.0 / std::sqrt(std::abs(wronskian_));
        out.scale_ *= k;
        out.wronskian_ *= k * k;
        return out;
    }

  private:
    cplx period_factor(std::int64_t r) const {
        if (r == 0) return 1.0;
        const double rr = static_cast<double>(r);
        if (floquet_.stable) return std::polar(1.0, rr * floquet_.phi);
        const cplx mu = floquet_.multiplier;
        const double mag = std::pow(std::abs(mu), rr);
        return std::polar(mag, rr * std::arg(mu));
    }

    double raw_wronskian() const {
        const auto v = evaluate(0.0);
        return std::imag(std::conj(v.f) * v.df);
    }

    DriveProfile profile_;
    TransferData transfer_;
    FloquetData floquet_;
    double scale_ = 1.0;
    double wronskian_ = 0.0;
};

struct RealSample {
    double f1, df1, f2, df2;
};

/// The two independent real solutions f1 = Re f, f2 = Im f.
class RealPair {
  public:
    explicit RealPair(ClassicalSolution sol) : sol_(std::move(sol)) {
        const auto v = sol_.evaluate(0.0);
        const double w1 = sol_.profile().omega1;
        const double size = std::norm(v.f) * w1 + std::norm(v.df) / w1;
        if (!(std::abs(sol_.wronskian()) > 1e-12 * size))
            throw degenerate_error("real pair has vanishing Wronskian (lambda = +-1 boundary)");
    }

    RealSample operator()(double t) const {
        const auto v = sol_.evaluate(t);
        return {v.f.real(), v.df.real(), v.f.imag(), v.df.imag()};
    }

    double wronskian() const { return sol_.wronskian(); }
    const ClassicalSolution& solution() const { return sol_; }
    const DriveProfile& profile() const { return sol_.profile(); }

  private:
    ClassicalSolution sol_;
};

}  // namespace paultrap
