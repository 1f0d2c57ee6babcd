#pragma once

// Numerical engines: a boundary-aligned RK4 integrator for f'' + w^2(t) f = 0,
// adaptive quadrature, bracketed root finding and composite Gauss-Legendre.
// The RK4 integrator is deliberately independent of the closed-form Floquet
// solutions so it can serve as their oracle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "paultrap/errors.hpp"

namespace paultrap::numeric {

template <class T = double>
struct OdeState {
    double t = 0;
    T f{};
    T df{};
};

struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;  // [[a, b], [c, d]]

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }

    friend Mat2 operator*(const Mat2& l, const Mat2& r) {
        return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
    }
};

// A Schedule exposes omega_sq(t) (constant on open segments) and
// next_boundary(t) (first discontinuity strictly after t).
template <class S>
concept Schedule = requires(const S& s, double t) {
    { s.omega_sq(t) } -> std::convertible_to<double>;
    { s.next_boundary(t) } -> std::convertible_to<double>;
};

namespace detail {

template <class T>
void rk4_step(double w2, double h, T& f, T& df) {
    const T k1f = df, k1v = -w2 * f;
    const T k2f = df + 0.5 * h * k1v, k2v = -w2 * (f + 0.5 * h * k1f);
    const T k3f = df + 0.5 * h * k2v, k3v = -w2 * (f + 0.5 * h * k2f);
    const T k4f = df + h * k3v, k4v = -w2 * (f + h * k3f);
    f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
    df += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
}

// Walks [t0, t_end] piece by piece; each piece has constant w^2 and is cut into
// equal steps no longer than max_step.
template <Schedule S, class T, class Visit>
OdeState<T> rk4_walk(const S& sched, OdeState<T> y, double t_end, double max_step, Visit&& visit) {
    if (!(max_step > 0)) throw domain_error("RK4 step must be positive");
    if (t_end < y.t) throw domain_error("integration runs forward in time only");
    visit(y);
    while (y.t < t_end) {
        const double piece_end = std::min(sched.next_boundary(y.t), t_end);
        const double len = piece_end - y.t;
        const double w2 = sched.omega_sq(y.t + 0.5 * len);
        const auto n = static_cast<std::int64_t>(std::ceil(len / max_step - 1e-9));
        const double h = len / static_cast<double>(std::max<std::int64_t>(n, 1));
        const double start = y.t;
        for (std::int64_t i = 1; i <= std::max<std::int64_t>(n, 1); ++i) {
            rk4_step(w2, h, y.f, y.df);
            y.t = start + static_cast<double>(i) * h;
            visit(y);
        }
        y.t = piece_end;
    }
    return y;
}

}  // namespace detail

/// Classical RK4 for f'' + w^2(t) f = 0 with steps aligned to every
/// discontinuity of w^2. Returns every accepted state including the initial one.
template <Schedule S, class T>
std::vector<OdeState<T>> integrate_eom(const S& sched, OdeState<T> init, double t_end,
                                       double max_step) {
    std::vector<OdeState<T>> out;
    detail::rk4_walk(sched, init, t_end, max_step, [&](const OdeState<T>& y) { out.push_back(y); });
    return out;
}

/// Same as integrate_eom but only returns the final state.
template <Schedule S, class T>
OdeState<T> propagate(const S& sched, OdeState<T> init, double t_end, double max_step) {
    return detail::rk4_walk(sched, init, t_end, max_step, [](const OdeState<T>&) {});
}

/// State-transition matrix over [t0, t0 + span] computed by RK4.
template <Schedule S>
Mat2 transition_rk4(const S& sched, double t0, double span, double max_step) {
    auto e1 = propagate(sched, OdeState<double>{t0, 1.0, 0.0}, t0 + span, max_step);
    auto e2 = propagate(sched, OdeState<double>{t0, 0.0, 1.0}, t0 + span, max_step);
    return {e1.f, e2.f, e1.df, e2.df};
}

/// Adaptive 15-point Gauss-Kronrod on [a, b]. Throws numerical_error if the
/// error estimate stays above rel_tol * L1 after the maximum refinement depth.
template <class F>
double quad_adaptive(F&& integrand, double a, double b, double rel_tol = 1e-10,
                     unsigned max_depth = 20) {
    if (a == b) return 0.0;
    // Boost's error estimate misbehaves on very short intervals, so always
    // integrate over the unit interval.
    const double len = b - a;
    auto unit = [&](double u) { return len * integrand(a + len * u); };
    double err = 0, l1 = 0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        unit, 0.0, 1.0, max_depth, rel_tol, &err, &l1);
    if (!std::isfinite(value)) throw numerical_error("quadrature produced a non-finite value");
    if (err > rel_tol * l1 && err > 64 * std::numeric_limits<double>::epsilon() * l1)
        throw numerical_error("adaptive quadrature did not converge (error estimate " +
                              std::to_string(err) + ")");
    return value;
}

struct RootResult {
    double x = 0;
    std::uintmax_t iterations = 0;
};

/// Bracketed root of fn on [a, b] (TOMS 748: bisection/secant/inverse-cubic
/// hybrid), iterated until the bracket is narrower than tol.
template <class F>
RootResult find_root_bracketed(F&& fn, double a, double b, double tol = 1e-12) {
    const double fa = fn(a), fb = fn(b);
    if (fa == 0) return {a, 0};
    if (fb == 0) return {b, 0};
    if (!(fa * fb < 0))
        throw domain_error("find_root_bracketed: no sign change on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    std::uintmax_t iters = 200;
    auto done = [tol](double lo, double hi) { return std::abs(hi - lo) <= tol; };
    auto r = boost::math::tools::toms748_solve(fn, a, b, fa, fb, done, iters);
    const double x = (fn(r.first) == 0) ? r.first : (fn(r.second) == 0 ? r.second
                                                                       : 0.5 * (r.first + r.second));
    return {x, iters};
}

/// Composite 20-point Gauss-Legendre with `panels` equal panels. Works for
/// real and complex integrands.
template <class F>
auto gauss_legendre(F&& integrand, double a, double b, int panels) {
    using R = std::decay_t<decltype(integrand(a))>;
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    const double width = (b - a) / panels;
    R sum{};
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * width, h = 0.5 * width;
        R part{};
        for (std::size_t i = 0; i < x.size(); ++i)
            part += w[i] * (integrand(c + h * x[i]) + integrand(c - h * x[i]));
        sum += h * part;
    }
    return sum;
}

}  // namespace paultrap::numeric
