#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "ldg3/error_analysis.hpp"
#include "ldg3/manufactured.hpp"

using namespace ldg3;

namespace {

// Fourth-order central difference.
double d1(const Field& f, double x, double h) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

}  // namespace

TEST(LayerCase, BoundaryConditions) {
    for (double eps : {1e-2, 1e-4, 1e-8, 1e-12}) {
        const TestCase tc = paper_case(eps);
        EXPECT_NEAR(tc.exact.u(0.0), 0.0, 1e-15) << eps;
        EXPECT_NEAR(tc.exact.u(1.0), 0.0, 1e-15) << eps;
        EXPECT_NEAR(tc.exact.p(1.0), 0.0, 1e-15) << eps;
        // layer at the right end only
        EXPECT_NEAR(tc.exact.u(Point{1.0, 0.0}), 0.0, 1e-15);
    }
}

TEST(LayerCase, DerivativesAreConsistent) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> pos(0.0, 1.0);
    for (double eps : {1e-1, 1e-2}) {
        const TestCase tc = paper_case(eps);
        const double h = 1e-2 * eps;
        for (int i = 0; i < 200; ++i) {
            const double x = pos(rng);
            const double p = tc.exact.p(x), q = tc.exact.q(x);
            EXPECT_NEAR(d1(tc.exact.u, x, h), p, 1e-8 * (1.0 + std::abs(p)));
            EXPECT_NEAR(eps * d1(tc.exact.p, x, h), q, 1e-8 * (1.0 + std::abs(q)));
        }
    }
}

TEST(LayerCase, ForcingMatchesOperator) {
    // eps u''' - u'' + u' + u = f with u'' = q/eps and eps u''' = q'.
    const double eps = 1e-2;
    const TestCase tc = paper_case(eps);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> pos(0.0, 1.0);
    const double h = 1e-5;
    for (int i = 0; i < 10000; ++i) {
        const double x = pos(rng);
        const double dq = d1(tc.exact.q, x, h), q = tc.exact.q(x), p = tc.exact.p(x), u = tc.exact.u(x);
        const double lhs = dq - q / eps + p + u;
        const double scale = std::abs(dq) + std::abs(q / eps) + std::abs(p) + std::abs(u);
        ASSERT_NEAR(lhs, tc.problem.f(x), 1e-9 * scale) << "x=" << x;
    }
}

TEST(LayerCase, ForcingStaysBounded) {
    for (double eps : {1e-2, 1e-8, 1e-12}) {
        const TestCase tc = paper_case(eps);
        double fmax = 0.0;
        for (int i = 0; i <= 1000; ++i) fmax = std::max(fmax, std::abs(tc.problem.f(i / 1000.0)));
        EXPECT_LT(fmax, 20.0) << eps;
    }
}

TEST(LayerCase, DerivativeBoundsAreUniformInEps) {
    // |u^(i)(x)| <= C (1 + eps^{1-i} exp(-(1-x)/eps)) with C independent of eps.
    auto constant_for = [](double eps) {
        const TestCase tc = paper_case(eps);
        double c = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            // cluster half the samples inside the layer
            const double r = i < 2000 ? (i / 2000.0) * 20.0 * eps : (i - 2000) / 2000.0;
            const Point pt{1.0 - r, r};
            const double layer = std::exp(-r / eps);
            c = std::max(c, std::abs(tc.exact.u(pt)) / (1.0 + eps * layer));
            c = std::max(c, std::abs(tc.exact.p(pt)) / (1.0 + layer));
            c = std::max(c, std::abs(tc.exact.q(pt) / eps) / (1.0 + layer / eps));
        }
        return c;
    };
    const double c2 = constant_for(1e-2), c8 = constant_for(1e-8), c12 = constant_for(1e-12);
    EXPECT_LT(c8, 10.0);
    EXPECT_NEAR(c12, c8, 0.05 * c8);
    EXPECT_LT(c2, 10.0);
}

TEST(LayerCase, RejectsEpsOutsideUnitInterval) {
    EXPECT_THROW(paper_case(0.0), std::invalid_argument);
    EXPECT_THROW(paper_case(1.0), std::invalid_argument);
    EXPECT_THROW(polynomial_case(-1e-3), std::invalid_argument);
}

TEST(CubicCase, ForcingAndBoundaryValues) {
    for (double eps : {1e-2, 1e-8}) {
        const TestCase tc = polynomial_case(eps);
        EXPECT_DOUBLE_EQ(tc.problem.f(0.0), 6.0 * eps + 5.0);
        EXPECT_DOUBLE_EQ(tc.problem.f(1.0), 6.0 * eps - 2.0);
        EXPECT_EQ(tc.exact.u(0.0), 0.0);
        EXPECT_EQ(tc.exact.u(1.0), 0.0);
        EXPECT_EQ(tc.exact.p(1.0), 0.0);
        EXPECT_NEAR(tc.exact.q(0.5), eps * (-1.0), 1e-18);
    }
}

TEST(LayerCase, SpotErrorCubicShishkin) {
    const TestCase tc = paper_case(1e-8);
    auto mesh = std::make_shared<const Mesh>(build_mesh({MeshKind::Shishkin, 32, 1e-8, 4.5, 1.0}));
    const LdgSolution w = solve_ldg(tc.problem, mesh, 3, gauss_quadrature(6));
    EXPECT_NEAR(error_energy_norm(tc.exact, w, tc.problem, gauss_quadrature(20)), 1.76e-6, 0.05 * 1.76e-6);
}
