#pragma once

// Quadratic invariant I = g- p^2/2 + g0 (pq + qp)/2 + g+ q^2/2 built from the
// real classical pair (f1, f2) and three constants (c1, c2, c3).

#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "paultrap/errors.hpp"
#include "paultrap/floquet.hpp"

namespace paultrap {

struct InvariantCoefficients {
    double c1 = 1;
    double c2 = 0;
    double c3 = 1;

    /// 4 c1 c3 - c2^2; positive for a positive-definite invariant.
    double discriminant() const { return 4 * c1 * c3 - c2 * c2; }
};

struct GTriple {
    double t = 0;
    double g_minus = 0;
    double g_zero = 0;
    double g_plus = 0;

    /// g- g+ - g0^2, which equals omega_I^2 for a valid invariant.
    double determinant() const { return g_minus * g_plus - g_zero * g_zero; }
};

inline GTriple g_triple(const RealPair& pair, const InvariantCoefficients& c, double mass, double t) {
    const auto s = pair(t);
    GTriple g;
    g.t = t;
    g.g_minus = c.c1 * s.f1 * s.f1 + c.c2 * s.f1 * s.f2 + c.c3 * s.f2 * s.f2;
    g.g_zero = -mass * (c.c1 * s.f1 * s.df1 + 0.5 * c.c2 * (s.df1 * s.f2 + s.f1 * s.df2) +
                        c.c3 * s.f2 * s.df2);
    g.g_plus = mass * mass * (c.c1 * s.df1 * s.df1 + c.c2 * s.df1 * s.df2 + c.c3 * s.df2 * s.df2);
    return g;
}

/// Real parameters of the complex solution f_c = d1 f1 + (d2 + i d3) f2.
struct ComplexForm {
    double d1 = 1;
    double d2 = 0;
    double d3 = 1;
};

class InvariantSpec {
  public:
    InvariantSpec(RealPair pair, InvariantCoefficients c, double mass = 1.0)
        : pair_(std::move(pair)), coeffs_(c), mass_(mass) {
        if (!(mass > 0)) throw domain_error("mass must be positive");
        if (!(c.discriminant() > 0) || !(c.c1 > 0))
            throw degenerate_error("invariant is not positive definite (need c1 > 0, 4 c1 c3 > c2^2)");
        const double det = at(0.0).determinant();
        if (!(det > 0)) throw degenerate_error("g- g+ - g0^2 is not positive");
        omega_I_ = std::sqrt(det);
    }

    GTriple at(double t) const { return g_triple(pair_, coeffs_, mass_, t); }

    double omega_I() const { return omega_I_; }

    /// m |W| sqrt(4 c1 c3 - c2^2) / 2, the Wronskian form of omega_I.
    double omega_I_closed_form() const {
        return 0.5 * mass_ * std::abs(pair_.wronskian()) * std::sqrt(coeffs_.discriminant());
    }

    const InvariantCoefficients& coefficients() const { return coeffs_; }
    double mass() const { return mass_; }
    const RealPair& pair() const { return pair_; }
    const DriveProfile& profile() const { return pair_.profile(); }

    /// One (d1, d2, d3) with c1 = d1^2, c2 = 2 d1 d2, c3 = d2^2 + d3^2 and d1, d3 > 0.
    ComplexForm complex_form() const {
        const double d1 = std::sqrt(coeffs_.c1);
        const double d2 = coeffs_.c2 / (2 * d1);
        return {d1, d2, std::sqrt(coeffs_.discriminant()) / (2 * d1)};
    }

    /// f_c(t), whose squared modulus is g-(t).
    cplx complex_solution(double t) const {
        const auto d = complex_form();
        const auto s = pair_(t);
        return d.d1 * s.f1 + cplx(d.d2, d.d3) * s.f2;
    }

  private:
    RealPair pair_;
    InvariantCoefficients coeffs_;
    double mass_;
    double omega_I_ = 0;
};

/// Invariant whose g- equals |d1 f1 + (d2 + i d3) f2|^2.
inline InvariantSpec spec_from_complex(const ComplexForm& d, const RealPair& pair, double mass = 1.0) {
    if (d.d1 * d.d3 == 0) throw degenerate_error("complex solution requires d1 d3 != 0");
    return InvariantSpec(pair, {d.d1 * d.d1, 2 * d.d1 * d.d2, d.d2 * d.d2 + d.d3 * d.d3}, mass);
}

/// Coefficients that make I equal to the Hamiltonian on the x axis, in terms
/// of beta2, B0 and omega1 tau of the explicit stable-case solution.
/// Since beta2^2 - B0^2 = 2 s (nu - s) with s = sqrt(1 - lambda^2), the
/// denominator only vanishes for beta2 = 0 or |lambda| = 1.
inline InvariantCoefficients matching_formula(double beta2, double B0, double omega1_tau, double mass = 1.0) {
    const double diff = beta2 * beta2 - B0 * B0;
    if (std::abs(diff) <= 1e-12 * (beta2 * beta2 + B0 * B0))
        throw degenerate_error("beta2^2 = B0^2: matching coefficients have a zero denominator");
    const double den = mass * diff * diff;
    return {(beta2 * beta2 + B0 * B0 - 2 * beta2 * B0 * std::cos(omega1_tau)) / den,
            -4 * beta2 * B0 * std::sin(omega1_tau) / den,
            (beta2 * beta2 + B0 * B0 + 2 * beta2 * B0 * std::cos(omega1_tau)) / den};
}

inline InvariantCoefficients matching_coefficients_raw(const ClassicalSolution& sol, double mass = 1.0) {
    const auto& p = sol.profile();
    const auto& fd = sol.floquet();
    if (p.axis != Axis::x) throw contract_error("Hamiltonian-matching coefficients are x-axis only");
    if (!fd.stable || !fd.closed_form)
        throw contract_error("matching coefficients need the explicit stable-case solution");
    auto c = matching_formula(sol.transfer().beta2, fd.B0.real(), p.omega1 * p.tau, mass);
    // Solution may have been rescaled; the closed form refers to the raw one.
    const double k2 = sol.scale() * sol.scale();
    return {c.c1 / k2, c.c2 / k2, c.c3 / k2};
}

inline InvariantSpec matching_coefficients(const ClassicalSolution& sol, double mass = 1.0) {
    return InvariantSpec(RealPair(sol), matching_coefficients_raw(sol, mass), mass);
}

/// Invariant with (g-, g0, g+)(t0) = (1/m, 0, m w^2(t0)), i.e. I(t0) = H(t0).
/// Requires w^2(t0) > 0.
inline InvariantSpec matching_at(const RealPair& pair, double t0, double mass = 1.0) {
    const double w2 = pair.profile().omega_sq(t0);
    if (!(w2 > 0)) throw contract_error("I = H needs a confining segment (w^2 > 0) at t0");
    const auto s = pair(t0);
    // Rows: g- m, -g0/m, g+/m  as linear forms in (c1, c2, c3).
    const std::array<std::array<double, 3>, 3> a{{
        {s.f1 * s.f1, s.f1 * s.f2, s.f2 * s.f2},
        {s.f1 * s.df1, 0.5 * (s.df1 * s.f2 + s.f1 * s.df2), s.f2 * s.df2},
        {s.df1 * s.df1, s.df1 * s.df2, s.df2 * s.df2},
    }};
    const std::array<double, 3> rhs{1.0 / mass, 0.0, w2 / mass};
    auto det3 = [](const std::array<std::array<double, 3>, 3>& m) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double d = det3(a);
    if (d == 0) throw degenerate_error("matching system is singular");
    std::array<double, 3> c{};
    for (int k = 0; k < 3; ++k) {
        auto m = a;
        for (int i = 0; i < 3; ++i) m[i][k] = rhs[i];
        c[k] = det3(m) / d;
    }
    return InvariantSpec(pair, {c[0], c[1], c[2]}, mass);
}

struct HamiltonianMatch {
    double t_star = 0;
    double residual = std::numeric_limits<double>::infinity();
    GTriple g;
};

/// Scans one drive period starting at `t_begin` for the instant where the
/// invariant coincides with the Hamiltonian. The residual combines
/// |m g- - 1|, |g0| / omega and |g+ / (m w^2) - 1|.
inline HamiltonianMatch locate_hamiltonian_match(const InvariantSpec& spec, double t_begin,
                                                 int samples = 4096) {
    const auto& p = spec.profile();
    const double m = spec.mass();
    HamiltonianMatch best;
    for (int i = 0; i < samples; ++i) {
        const double t = t_begin + p.tau * (i + 0.5) / samples;
        const double w2 = p.omega_sq(t);
        if (!(w2 > 0)) continue;
        const auto g = spec.at(t);
        const double r = std::abs(m * g.g_minus - 1.0) + std::abs(g.g_zero) / std::sqrt(w2) +
                         std::abs(g.g_plus / (m * w2) - 1.0);
        if (r < best.residual) best = {t, r, g};
    }
    return best;
}

}  // namespace paultrap
