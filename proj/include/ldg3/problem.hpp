#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ldg3/field.hpp"

namespace ldg3 {

/// eps u''' - (a u')' + b u' + c u = f on (0,1), u(0) = u(1) = u'(1) = 0,
/// with a >= alpha > 0 and c - b'/2 >= gamma > 0.
struct Problem {
    double eps = 1e-4;
    Field a = Field::constant(1.0);
    Field b = Field::constant(1.0);
    Field bprime = Field::constant(0.0);
    Field c = Field::constant(1.0);
    Field f = Field::constant(0.0);
    double alpha = 1.0;
    double gamma = 1.0;

    static Problem constant_coefficients(double eps, double a, double b, double c, Field f) {
        Problem p;
        p.eps = eps;
        p.a = Field::constant(a);
        p.b = Field::constant(b);
        p.bprime = Field::constant(0.0);
        p.c = Field::constant(c);
        p.f = std::move(f);
        p.alpha = a;
        p.gamma = c;
        return p;
    }

    /// Samples the coercivity bounds on a uniform grid and spot-checks that
    /// bprime is the derivative of b. Throws std::invalid_argument on failure.
    void check(int samples = 1001) const {
        if (!(eps > 0.0)) throw std::invalid_argument("problem: eps must be positive");
        if (!(alpha > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("problem: alpha and gamma must be positive");
        for (int i = 0; i < samples; ++i) {
            const double x = static_cast<double>(i) / (samples - 1);
            if (a(x) < alpha)
                throw std::invalid_argument("problem: a(x) < alpha at x = " + std::to_string(x));
            if (c(x) - 0.5 * bprime(x) < gamma)
                throw std::invalid_argument("problem: c - b'/2 < gamma at x = " + std::to_string(x));
        }
        const double step = 1e-5;
        for (int i = 1; i < 20; ++i) {
            const double x = 0.05 * i;
            const double fd = (b(x + step) - b(x - step)) / (2.0 * step);
            const double exact = bprime(x);
            if (std::abs(fd - exact) > 1e-6 * std::max(1.0, std::abs(exact)))
                throw std::invalid_argument("problem: bprime disagrees with a central difference of b at x = " +
                                            std::to_string(x));
        }
    }
};

}  // namespace ldg3
