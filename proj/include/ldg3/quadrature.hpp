#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldg3 {

/// Quadrature rule on the reference interval [-1,1].
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// Legendre P_n(t) and P_n'(t) by the three-term recurrence.
inline void legendre_with_derivative(int n, double t, double& value, double& derivative) {
    double p0 = 1.0, p1 = t;
    if (n == 0) {
        value = 1.0;
        derivative = 0.0;
        return;
    }
    for (int m = 1; m < n; ++m) {
        const double p2 = ((2.0 * m + 1.0) * t * p1 - m * p0) / (m + 1.0);
        p0 = p1;
        p1 = p2;
    }
    value = p1;
    // P_n' = n (t P_n - P_{n-1}) / (t^2 - 1); only used away from t = +-1.
    derivative = n * (t * p1 - p0) / (t * t - 1.0);
}

/// Gauss-Legendre rule, exact for polynomials of degree <= 2n-1.
inline Quadrature gauss_quadrature(int n) {
    if (n < 1 || n > 64) throw std::invalid_argument("gauss_quadrature: unsupported point count " + std::to_string(n));
    Quadrature q;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            legendre_with_derivative(n, t, p, dp);
            const double dt = p / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        legendre_with_derivative(n, t, p, dp);
        const double w = 2.0 / ((1.0 - t * t) * dp * dp);
        q.nodes[static_cast<std::size_t>(i)] = -t;
        q.nodes[static_cast<std::size_t>(n - 1 - i)] = t;
        q.weights[static_cast<std::size_t>(i)] = w;
        q.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) q.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return q;
}

/// Composite Gauss rule with `levels` pieces [1 - 2 r^i, 1 - 2 r^(i+1)]
/// shrinking geometrically toward t = 1, plus a last piece reaching 1.
/// Resolves integrands with an exponential layer at the right end.
inline Quadrature graded_quadrature(int points, int levels, double ratio = 0.5) {
    if (levels < 1) throw std::invalid_argument("graded_quadrature: levels must be positive");
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("graded_quadrature: ratio must lie in (0,1)");
    const Quadrature base = gauss_quadrature(points);
    Quadrature q;
    auto piece = [&](double lo, double hi) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int i = 0; i < base.size(); ++i) {
            q.nodes.push_back(mid + half * base.nodes[static_cast<std::size_t>(i)]);
            q.weights.push_back(half * base.weights[static_cast<std::size_t>(i)]);
        }
    };
    double gap = 2.0;  // distance of the current piece's left end from t = 1
    for (int l = 0; l < levels; ++l) {
        piece(1.0 - gap, 1.0 - gap * ratio);
        gap *= ratio;
    }
    piece(1.0 - gap, 1.0);
    return q;
}

}  // namespace ldg3
