#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "paultrap/phase.hpp"

using namespace paultrap;

namespace {

constexpr double pi = std::numbers::pi;

InvariantSpec unit_spec(const CisConfig& c, ComplexForm d = {1, 0, 1}) {
    return spec_from_complex(d, RealPair(ClassicalSolution(c.profile())));
}

const CisConfig& row(int i) {
    static const std::vector<CisConfig> rows{cis_search(1, 4), cis_search(1, 8), cis_search(1, 3), cis_search(2, 3)};
    return rows.at(static_cast<std::size_t>(i));
}

}  // namespace

TEST(Theta, ZeroAtOrigin) { EXPECT_EQ(theta(unit_spec(row(0)), 0.0), 0.0); }

TEST(Theta, Monotone) {
    const auto spec = unit_spec(row(2), {1.3, -0.4, 0.8});
    std::vector<double> times;
    for (int k = 1; k <= 300; ++k) times.push_back(0.01 * k);
    const auto tr = phase_trace(spec, times);
    for (std::size_t i = 1; i < tr.theta.size(); ++i) EXPECT_GT(tr.theta[i], tr.theta[i - 1]);
    EXPECT_NEAR(tr.theta.back(), theta(spec, 3.0), 1e-10);
}

TEST(Theta, NegativeTimesRunBackwards) {
    const auto spec = unit_spec(row(1));
    EXPECT_LT(theta(spec, -0.4), 0.0);
    EXPECT_NEAR(theta(spec, -0.4), -theta_between(spec, -0.4, 0.0), 1e-14);
}

TEST(Theta, QuadratureMatchesUnwrappedArgument) {
    for (int i = 0; i < 4; ++i) {
        const auto spec = unit_spec(row(i), {0.9, 0.6, -1.4});
        EXPECT_NEAR(theta(spec, row(i).tau_prime_over_tau), theta_unwrapped(spec, row(i).tau_prime_over_tau), 1e-8);
        for (double t : {0.3, 1.1, 2.6, 5.0}) EXPECT_NEAR(theta(spec, t), theta_unwrapped(spec, t), 1e-8);
    }
}

TEST(Theta, AdditiveOverCycle) {
    for (int i = 0; i < 4; ++i) {
        const auto spec = unit_spec(row(i), {1.1, 0.3, 0.7});
        const double tp = row(i).tau_prime_over_tau, cycle = theta(spec, tp);
        for (double t : {0.2, 0.9, 1.6})
            EXPECT_NEAR(theta(spec, t + tp), theta(spec, t) + cycle, 1e-8);
    }
}

TEST(Theta, RejectsInvalidInvariant) {
    // g- < 0 can only come from a negative-definite form, which InvariantSpec refuses
    const RealPair pair(ClassicalSolution(row(0).profile()));
    EXPECT_THROW(InvariantSpec(pair, {-1, 0, -1}), degenerate_error);
}

TEST(Berry, Examples) {
    EXPECT_DOUBLE_EQ(berry_phase(0, pi), -pi / 2);
    EXPECT_DOUBLE_EQ(berry_phase(2, pi), -5 * pi / 2);
    for (int n : {0, 3, 17}) EXPECT_EQ(berry_phase(n, 0.0), 0.0);
    EXPECT_THROW(berry_phase(-1, pi), domain_error);
}

TEST(CisSearch, PublishedRoots) {
    EXPECT_NEAR(row(0).omega_tau, 3.14159, 1e-4);
    EXPECT_NEAR(row(1).omega_tau, 2.30517, 1e-4);
    EXPECT_NEAR(row(2).omega_tau, 2.63690, 1e-4);
    EXPECT_NEAR(row(3).omega_tau, 3.48328, 1e-4);
}

TEST(CisSearch, ConfigFields) {
    EXPECT_EQ(row(0).epsilon, 2);
    EXPECT_EQ(row(2).epsilon, 1);
    EXPECT_DOUBLE_EQ(row(0).tau_prime_over_tau, 2.0);
    EXPECT_DOUBLE_EQ(row(1).tau_prime_over_tau, 4.0);
    EXPECT_DOUBLE_EQ(row(3).tau_prime_over_tau, 3.0);
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(std::cos(row(i).phi), row(i).lambda, 1e-12);
        EXPECT_LE(std::abs(row(i).lambda), 1.0);
        EXPECT_NEAR(row(i).lambda, row(i).lambda_target, 1e-10);
    }
}

TEST(CisSearch, WindingIsReportedAndConsistent) {
    for (int i = 0; i < 4; ++i) {
        const auto& c = row(i);
        EXPECT_NEAR(c.theta_period, c.phi + 2 * pi * c.winding, 1e-8);
    }
    // the measured cycle phase is l pi on all four rows
    EXPECT_NEAR(row(0).theta_cycle, pi, 1e-8);
    EXPECT_NEAR(row(1).theta_cycle, pi, 1e-8);
    EXPECT_NEAR(row(2).theta_cycle, pi, 1e-8);
    EXPECT_NEAR(row(3).theta_cycle, 2 * pi, 1e-8);
    EXPECT_NEAR(row(3).theta_rule_b, 2 * pi, 1e-12);
    EXPECT_NEAR(row(2).theta_rule_a, 2 * pi, 1e-12);
}

TEST(CisSearch, RuleAMissesRowC) {
    CisSearchOptions a;
    a.rule = CisRule::a;
    const auto c = cis_search(1, 3, a);
    EXPECT_NEAR(c.lambda_target, -0.5, 1e-12);
    EXPECT_GT(std::abs(c.omega_tau - 2.63690), 0.1);
    EXPECT_NEAR(cis_search(1, 4, a).omega_tau, 3.14159, 1e-4);
}

TEST(CisSearch, NotFound) {
    EXPECT_THROW(cis_search(1, 99999), not_found_error);
    CisSearchOptions narrow;
    narrow.omega_tau_max = 1.0;
    EXPECT_THROW(cis_search(1, 4, narrow), not_found_error);
    EXPECT_THROW(cis_search(0, 4), domain_error);
}

TEST(Independence, TwoSpecsOnRowA) {
    const double a = theta(unit_spec(row(0), {1, 0, 1}), 2.0);
    const double b = theta(unit_spec(row(0), {2, 1, 3}), 2.0);
    EXPECT_LT(std::abs(wrap_angle(a - b)), 1e-8);
}

TEST(Independence, ScaleInvariance) {
    const double a = theta(unit_spec(row(1), {0.7, 0.2, 1.1}), 2.5);
    const double b = theta(unit_spec(row(1), {3 * 0.7, 3 * 0.2, 3 * 1.1}), 2.5);
    EXPECT_NEAR(a, b, 1e-12);
}

TEST(Independence, RandomTrialsOnRowD) {
    const auto rep = invariant_independence_check(ClassicalSolution(row(3).profile()), 3.0, 100, 99);
    EXPECT_EQ(rep.thetas.size(), 100u);
    EXPECT_LT(rep.max_deviation, 1e-8);
}

TEST(Independence, DependsOnTimeOffCycle) {
    // away from a full cycle the phase is not invariant-independent
    const auto rep = invariant_independence_check(ClassicalSolution(row(3).profile()), 1.3, 20, 5);
    EXPECT_GT(rep.max_deviation, 1e-3);
}

TEST(Factorization, Examples) {
    const auto a = coherence_factorization(pi, 10);
    EXPECT_TRUE(a.factorizes);
    EXPECT_NEAR(std::abs(a.overall_factor - cplx(0, -1)), 0.0, 1e-15);

    const auto b = coherence_factorization(pi / 2, 10);
    EXPECT_FALSE(b.factorizes);
    EXPECT_EQ(b.offending, (std::vector<int>{1, 3, 5, 7, 9}));

    const auto c = coherence_factorization(2 * pi, 10);
    EXPECT_TRUE(c.factorizes);
    EXPECT_NEAR(std::abs(c.overall_factor + 1.0), 0.0, 1e-15);
}

TEST(WrapAngle, Range) {
    EXPECT_NEAR(wrap_angle(3 * pi), pi, 1e-15);
    EXPECT_NEAR(wrap_angle(-pi / 2 + 4 * pi), -pi / 2, 1e-14);
    EXPECT_NEAR(wrap_angle(0.3), 0.3, 1e-16);
}
