#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "paultrap/invariant.hpp"
#include "paultrap/phase.hpp"
#include "support.hpp"

using namespace paultrap;
using testing_support::stable_profile;

namespace {

const CisConfig& row_a() {
    static const CisConfig c = cis_search(1, 4);
    return c;
}

ComplexForm random_form(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.2, 3.0), any(-3.0, 3.0);
    return {mag(rng), any(rng), mag(rng)};
}

}  // namespace

TEST(GTriple, SingleSolutionSquareIsDegenerate) {
    const RealPair pair(ClassicalSolution(unit_profile(2.0, 2.0)));
    const double m = 1.7;
    for (double t : {-0.3, 0.1, 0.9}) {
        const auto g = g_triple(pair, {1, 0, 0}, m, t);
        const auto s = pair(t);
        EXPECT_DOUBLE_EQ(g.g_minus, s.f1 * s.f1);
        EXPECT_DOUBLE_EQ(g.g_zero, -m * s.f1 * s.df1);
        EXPECT_DOUBLE_EQ(g.g_plus, m * m * s.df1 * s.df1);
        EXPECT_NEAR(g.determinant(), 0.0, 1e-12 * g.g_minus * g.g_plus);
    }
    EXPECT_THROW(InvariantSpec(pair, {1, 0, 0}), degenerate_error);
    EXPECT_THROW(InvariantSpec(pair, {1, 2, 1}), degenerate_error);
    EXPECT_THROW(InvariantSpec(pair, {-1, 0, -1}), degenerate_error);
}

TEST(GTriple, GMinusPositiveOnDenseSweep) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 10; ++i) {
        const auto spec = spec_from_complex(random_form(rng), RealPair(ClassicalSolution(stable_profile(rng, Axis::x))));
        for (int k = 0; k < 1000; ++k) ASSERT_GT(spec.at(-2.0 + 6.0 * k / 1000).g_minus, 0.0);
    }
}

TEST(GTriple, CoefficientOdesByFiniteDifferences) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const auto p = stable_profile(rng, i % 2 ? Axis::x : Axis::y);
        const auto spec = spec_from_complex(random_form(rng), RealPair(ClassicalSolution(p)), 0.5 + u(rng));
        const double m = spec.mass(), h = 1e-6 * p.tau, w_ref = std::max(p.omega1, p.omega2);
        int checked = 0;
        while (checked < 30) {
            const double t = 3.0 * u(rng);
            if (p.near_boundary(t, 10 * h)) continue;
            ++checked;
            const auto g = spec.at(t), gp = spec.at(t + h), gm = spec.at(t - h);
            const double w2 = p.omega_sq(t);
            auto rel = [&](double fd, double rhs, double mag) {
                return std::abs(fd - rhs) / (std::abs(rhs) + w_ref * std::abs(mag));
            };
            EXPECT_LT(rel((gp.g_minus - gm.g_minus) / (2 * h), -2 * g.g_zero / m, g.g_minus), 1e-6);
            EXPECT_LT(rel((gp.g_zero - gm.g_zero) / (2 * h), m * w2 * g.g_minus - g.g_plus / m, g.g_zero), 1e-6);
            EXPECT_LT(rel((gp.g_plus - gm.g_plus) / (2 * h), 2 * m * w2 * g.g_zero, g.g_plus), 1e-6);
        }
    }
}

TEST(InvariantSpec, OmegaIConstantAndClosedForm) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
        const auto spec = spec_from_complex(random_form(rng), RealPair(ClassicalSolution(stable_profile(rng, i % 2 ? Axis::x : Axis::y))), 2.5);
        const double w = spec.omega_I();
        EXPECT_NEAR(spec.omega_I_closed_form(), w, 1e-9 * w);
        for (int k = 0; k < 100; ++k) EXPECT_NEAR(std::sqrt(spec.at(0.04 * k).determinant()), w, 1e-9 * w);
    }
}

TEST(InvariantSpec, RejectsNonPositiveMass) {
    const RealPair pair(ClassicalSolution(unit_profile(2.0, 2.0)));
    EXPECT_THROW(InvariantSpec(pair, {1, 0, 1}, 0.0), domain_error);
}

TEST(Matching, RowAHitsHamiltonian) {
    const auto spec = matching_coefficients(ClassicalSolution(row_a().profile()));
    const auto hm = locate_hamiltonian_match(spec, -0.75);
    EXPECT_NEAR(spec.mass() * hm.g.g_minus, 1.0, 1e-8);
    EXPECT_LT(hm.residual, 1e-8);
    EXPECT_NEAR(spec.omega_I() / spec.profile().omega1, 1.0, 1e-8);
}

TEST(Matching, HoldsForMassAndNormalization) {
    const auto sol = ClassicalSolution(unit_profile(2.3, 1.7, Axis::x, 0.2)).normalized();
    const auto spec = matching_coefficients(sol, 3.0);
    const auto hm = locate_hamiltonian_match(spec, sol.profile().tau2 - 1.0);
    EXPECT_LT(hm.residual, 1e-8);
    EXPECT_NEAR(spec.omega_I(), 2.3, 1e-8);
}

TEST(Matching, MatchIsAtEveryInstantOfFirstSegment) {
    const auto spec = matching_coefficients(ClassicalSolution(row_a().profile()));
    for (double t : {-0.7, -0.5, -0.3}) {
        const auto g = spec.at(t);
        EXPECT_NEAR(g.g_minus, 1.0, 1e-10);
        EXPECT_NEAR(g.g_zero, 0.0, 1e-10);
    }
}

TEST(Matching, DegenerateDenominator) {
    EXPECT_THROW(matching_formula(0.7, 0.7, 1.0), degenerate_error);
    EXPECT_THROW(matching_formula(0.7, -0.7, 1.0), degenerate_error);
    EXPECT_NO_THROW(matching_formula(0.7, 0.2, 1.0));
}

TEST(Matching, AxisAndBranchContracts) {
    EXPECT_THROW(matching_coefficients(ClassicalSolution(unit_profile(2.0, 2.0, Axis::y))), contract_error);
}

TEST(Matching, AtArbitraryInstant) {
    const RealPair pair(ClassicalSolution(unit_profile(2.0, 2.4, Axis::y, 0.3)));
    const auto spec = matching_at(pair, 0.1, 1.5);
    const auto g = spec.at(0.1);
    EXPECT_NEAR(g.g_minus, 1 / 1.5, 1e-10);
    EXPECT_NEAR(g.g_zero, 0.0, 1e-10);
    EXPECT_NEAR(g.g_plus, 1.5 * 2.4 * 2.4, 1e-9);
    EXPECT_THROW(matching_at(pair, -0.5), contract_error);
}

TEST(ComplexForm, ExampleCoefficients) {
    const RealPair pair(ClassicalSolution(unit_profile(2.0, 2.0)));
    const auto spec = spec_from_complex({1, 0, 1}, pair);
    EXPECT_EQ(spec.coefficients().c1, 1.0);
    EXPECT_EQ(spec.coefficients().c2, 0.0);
    EXPECT_EQ(spec.coefficients().c3, 1.0);
    for (double t : {0.0, 0.5, 1.3}) {
        const auto s = pair(t);
        EXPECT_NEAR(spec.at(t).g_minus, s.f1 * s.f1 + s.f2 * s.f2, 1e-14);
    }
}

TEST(ComplexForm, GMinusIsModulusSquared) {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> u(-2.0, 4.0);
    const RealPair pair(ClassicalSolution(unit_profile(2.6, 1.9, Axis::x, 0.3)));
    for (int i = 0; i < 10; ++i) {
        const auto d = random_form(rng);
        const auto spec = spec_from_complex(d, pair);
        EXPECT_NEAR(spec.coefficients().discriminant(), 4 * d.d1 * d.d1 * d.d3 * d.d3, 1e-12);
        for (int k = 0; k < 100; ++k) {
            const double t = u(rng);
            const auto s = pair(t);
            const double direct = std::norm(d.d1 * s.f1 + cplx(d.d2, d.d3) * s.f2);
            EXPECT_NEAR(spec.at(t).g_minus, direct, 1e-10 * direct);
            EXPECT_NEAR(std::norm(spec.complex_solution(t)), direct, 1e-10 * direct);
        }
    }
}

TEST(ComplexForm, Degenerate) {
    const RealPair pair(ClassicalSolution(unit_profile(2.0, 2.0)));
    EXPECT_THROW(spec_from_complex({0, 1, 1}, pair), degenerate_error);
    EXPECT_THROW(spec_from_complex({1, 1, 0}, pair), degenerate_error);
}

TEST(Periodicity, GMinusFollowsMinimalPeriod) {
    for (auto [l, n] : {std::pair{1, 4}, {1, 8}, {1, 3}, {2, 3}}) {
        const auto cfg = cis_search(l, n);
        const auto spec = matching_coefficients(ClassicalSolution(cfg.profile()));
        const double tp = cfg.tau_prime_over_tau;
        double worst = 0, scale = 0;
        for (int k = 0; k < 500; ++k) {
            const double t = 2 * tp * k / 500.0;
            const double g = spec.at(t).g_minus;
            scale = std::max(scale, g);
            worst = std::max(worst, std::abs(spec.at(t + tp).g_minus - g));
        }
        EXPECT_LT(worst / scale, 1e-8) << l << "," << n;
    }
}
