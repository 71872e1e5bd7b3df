#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ldg3/field.hpp"
#include "ldg3/problem.hpp"

namespace ldg3 {

/// Exact (u, p = u', q = eps u'').
struct ExactSolution {
    Field u, p, q;
};

struct TestCase {
    std::string name;
    double eps = 0.0;
    Problem problem;
    ExactSolution exact;
};

/// a = b = c = 1 test problem with a weak layer at x = 1:
///
///   u = -eps E + A sin(pi x/2) + eps exp(-(1-x)/eps) + x(1-x) + B sin^2(pi x/2),
///   E = exp(-1/eps), A = 1 - 2 eps + 2 eps E, B = eps - eps E - 1.
///
/// The layer term lies in the kernel of eps D^3 - D^2, so it enters f only
/// as (1 + eps) exp(-(1-x)/eps) and f stays O(1).
inline TestCase paper_case(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("paper_case: eps must lie in (0,1)");
    constexpr double pi = std::numbers::pi;
    const double big_e = std::exp(-1.0 / eps);
    const double A = 1.0 - 2.0 * eps + 2.0 * eps * big_e;
    const double B = eps - eps * big_e - 1.0;

    TestCase tc;
    tc.name = "layer";
    tc.eps = eps;
    tc.exact.u = Field([=](Point pt) {
        const double x = pt.x;
        const double s = std::sin(pi * x / 2.0);
        return -eps * big_e + A * s + eps * std::exp(-pt.from_right / eps) + x * (1.0 - x) + B * s * s;
    });
    tc.exact.p = Field([=](Point pt) {
        const double x = pt.x;
        return A * (pi / 2.0) * std::cos(pi * x / 2.0) + std::exp(-pt.from_right / eps) + (1.0 - 2.0 * x) +
               B * (pi / 2.0) * std::sin(pi * x);
    });
    tc.exact.q = Field([=](Point pt) {
        const double x = pt.x;
        const double upp_smooth = -A * (pi * pi / 4.0) * std::sin(pi * x / 2.0) - 2.0 + B * (pi * pi / 2.0) * std::cos(pi * x);
        return eps * upp_smooth + std::exp(-pt.from_right / eps);
    });
    Field f([=](Point pt) {
        const double x = pt.x;
        const double s2 = std::sin(pi * x / 2.0), c2 = std::cos(pi * x / 2.0);
        const double s1 = std::sin(pi * x), c1 = std::cos(pi * x);
        const double u3 = -A * (pi * pi * pi / 8.0) * c2 - B * (pi * pi * pi / 2.0) * s1;
        const double u2 = -A * (pi * pi / 4.0) * s2 - 2.0 + B * (pi * pi / 2.0) * c1;
        const double u1 = A * (pi / 2.0) * c2 + (1.0 - 2.0 * x) + B * (pi / 2.0) * s1;
        const double u0 = -eps * big_e + A * s2 + x * (1.0 - x) + B * s2 * s2;
        return eps * u3 - u2 + u1 + u0 + (1.0 + eps) * std::exp(-pt.from_right / eps);
    });
    tc.problem = Problem::constant_coefficients(eps, 1.0, 1.0, 1.0, std::move(f));
    return tc;
}

/// u = x(1-x)^2 with a = b = c = 1; lies in P^3, so a cubic LDG space
/// reproduces it.
inline TestCase polynomial_case(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("polynomial_case: eps must lie in (0,1)");
    TestCase tc;
    tc.name = "cubic";
    tc.eps = eps;
    tc.exact.u = Field([](double x) { return x * (1.0 - x) * (1.0 - x); });
    tc.exact.p = Field([](double x) { return 1.0 - 4.0 * x + 3.0 * x * x; });
    tc.exact.q = Field([eps](double x) { return eps * (-4.0 + 6.0 * x); });
    tc.problem = Problem::constant_coefficients(
        eps, 1.0, 1.0, 1.0, Field([eps](double x) { return 6.0 * eps + 5.0 - 9.0 * x + x * x + x * x * x; }));
    return tc;
}

}  // namespace ldg3
