#include "tsol/hyperbolic.hpp"
#include "tsol/geometry.hpp"
#include "tsol/integrator.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tsol;
using namespace tsol::hyperbolic;

namespace {

constexpr Signature kPP{Sign::plus, Sign::plus};

double blowup_of(const Trajectory& t) {
    const auto* b = std::get_if<stop::BlowUp>(&t.stop);
    return b ? b->s_star : std::nan("");
}

} // namespace

TEST(FirstIntegral, ValueAndIndependentFormula) {
    for (int n : {2, 3, 4}) {
        EXPECT_EQ(first_integral(0.0, n), 0.0);
        for (double t : {-7.0, -2.5, -0.2, 0.3, 1.0, 40.0})
            if (std::fabs(t - equilibrium(n)) > 1e-3) {
                EXPECT_NEAR(first_integral(t, n), oracle::horosphere_F(t, n), 1e-14) << n << " " << t;
            }
    }
}

TEST(FirstIntegral, DerivativeMatchesDifferenceQuotient) {
    for (int n : {2, 3, 5})
        for (double t : {-4.0, -1.5, 0.0, 0.7, 3.0}) {
            if (std::fabs(t - equilibrium(n)) < 0.2) continue;
            const double d = 1e-5;
            const double fd = (first_integral(t + d, n) - first_integral(t - d, n)) / (2 * d);
            EXPECT_NEAR(first_integral_derivative(t, n), fd, 1e-8 * std::max(1.0, std::fabs(fd)));
        }
}

TEST(FirstIntegral, BranchLimits) {
    EXPECT_NEAR(branch_limit(Branch::case2, 2), std::numbers::pi / 4, 1e-15);
    EXPECT_NEAR(branch_limit(Branch::case3, 2), -std::numbers::pi / 4, 1e-15);
    for (int n : {2, 3, 4}) {
        EXPECT_NEAR(first_integral(1e9, n), branch_limit(Branch::case2, n), 1e-8);
        EXPECT_NEAR(first_integral(-1e9, n), branch_limit(Branch::case3, n), 1e-8);
    }
}

TEST(FirstIntegral, PoleAndDimension) {
    EXPECT_THROW(first_integral(-1.0, 2), EvalError);
    EXPECT_THROW(first_integral(-0.5, 3), EvalError);
    EXPECT_THROW(first_integral(0.0, 1), InputError);
}

TEST(FirstIntegral, MonotoneOnEachBranch) {
    for (int n : {2, 3, 4}) {
        const double eq = equilibrium(n);
        double prev = first_integral(eq + 1e-6, n);
        for (int i = 1; i <= 400; ++i) {
            const double v = first_integral(eq + 1e-6 + 0.125 * i, n);
            EXPECT_GT(v, prev);
            prev = v;
        }
        prev = first_integral(eq - 1e-6, n);
        for (int i = 1; i <= 400; ++i) {
            const double v = first_integral(eq - 1e-6 - 0.125 * i, n);
            EXPECT_GT(v, prev);  // decreasing in t, so larger as t goes down
            prev = v;
        }
    }
}

TEST(Predict, Examples) {
    const HyperbolicCase a = predict(2, 0.0, 0.0);
    EXPECT_EQ(a.kind, HyperbolicCase::Kind::case2);
    ASSERT_TRUE(a.K.has_value());
    EXPECT_NEAR(*a.K, std::numbers::pi / 4, 1e-12);
    EXPECT_EQ(a.blowup_sign, 1);

    const HyperbolicCase b = predict(3, 1.0, -0.5);
    EXPECT_EQ(b.kind, HyperbolicCase::Kind::constant_solution);
    EXPECT_FALSE(b.K.has_value());
    EXPECT_EQ(b.f0, -0.5);

    const HyperbolicCase c = predict(2, 0.0, -2.0);
    EXPECT_EQ(c.kind, HyperbolicCase::Kind::case3);
    EXPECT_EQ(c.blowup_sign, -1);
    ASSERT_TRUE(c.K.has_value());
    EXPECT_NEAR(*c.K, oracle::horosphere_blowup_quadrature(2, 0.0, -2.0), 1e-9);
    const GeometrySpec g = make_preset("horosphere", 2);
    EXPECT_NEAR(blowup_of(integrate(kPP, g.h, 0.0, -2.0, 0.0, *c.K + 1.0)), *c.K, 1e-4);
}

TEST(Predict, ConstantSolutionBand) {
    EXPECT_EQ(predict(4, 0.0, 0.3, true).kind, HyperbolicCase::Kind::constant_solution);
    EXPECT_EQ(predict(4, 0.0, -1.0 / 3.0 + 5e-14).kind, HyperbolicCase::Kind::constant_solution);
    EXPECT_EQ(predict(4, 0.0, -1.0 / 3.0 + 1e-11).kind, HyperbolicCase::Kind::case2);
    EXPECT_EQ(predict(4, 0.0, -1.0 / 3.0 - 1e-11).kind, HyperbolicCase::Kind::case3);
    EXPECT_THROW(predict(1, 0.0, 0.0), InputError);
}

TEST(Predict, AgreesWithIntegratorOnGrid) {
    for (int n : {2, 3, 4}) {
        const GeometrySpec g = make_preset("horosphere", n);
        for (double f0 : {-3.0, -0.9, 0.0, 1.0, 5.0}) {
            if (f0 == equilibrium(n)) continue;
            const double s0 = 0.25;
            const HyperbolicCase pc = predict(n, s0, f0);
            ASSERT_TRUE(pc.K.has_value());
            const Trajectory t = integrate(kPP, g.h, s0, f0, 0.0, *pc.K + 1.0);
            ASSERT_TRUE(std::holds_alternative<stop::BlowUp>(t.stop)) << n << " " << f0;
            EXPECT_NEAR(blowup_of(t), *pc.K, 1e-4) << n << " " << f0;
            EXPECT_EQ(std::get<stop::BlowUp>(t.stop).sign == Sign::plus ? 1 : -1, pc.blowup_sign);
            EXPECT_NEAR(*pc.K, oracle::horosphere_blowup_quadrature(n, s0, f0), 1e-8) << n << " " << f0;
        }
    }
}

TEST(Conservation, FirstIntegralAlongTrajectories) {
    for (int n : {2, 3, 4}) {
        const GeometrySpec g = make_preset("horosphere", n);
        for (double w0 : {-4.0, -0.2, 0.0, 2.0}) {
            if (w0 == equilibrium(n)) continue;
            const Trajectory t = integrate(kPP, g.h, 0.0, w0, 0.0, 5.0);
            const double c0 = first_integral(w0, n);
            double worst = 0.0;
            for (const ProfileState& p : t.samples)
                worst = std::max(worst, std::fabs(first_integral(p.w, n) - p.s - c0));
            EXPECT_LT(worst, 1e-8) << n << " " << w0;
        }
    }
}

TEST(InvertBranch, RoundTrips) {
    EXPECT_NEAR(invert_branch(first_integral(1.0, 2), Branch::case2, 2), 1.0, 1e-10);
    EXPECT_NEAR(invert_branch(0.0, Branch::case2, 2), 0.0, 1e-10);
    for (int n : {2, 3, 4})
        for (double t : {-9.0, -2.0, -1.2}) {
            if (t >= equilibrium(n)) continue;
            const double r = invert_branch(first_integral(t, n), Branch::case3, n);
            EXPECT_NEAR(r, t, 1e-9 * std::fabs(t));
            EXPECT_LT(std::fabs(first_integral(r, n) - first_integral(t, n)), 1e-12);
        }
}

TEST(InvertBranch, TargetAtOrAboveLimit) {
    EXPECT_THROW(invert_branch(std::numbers::pi / 4, Branch::case2, 2), InputError);
    EXPECT_THROW(invert_branch(1.0, Branch::case2, 2), InputError);
}
