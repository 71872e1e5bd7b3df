#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "ldg3/ldg.hpp"
#include "ldg3/manufactured.hpp"
#include "ldg3/projection.hpp"

namespace ldg3 {

struct ErrorRecord {
    double energy = 0.0;
    double l2_u = 0.0, l2_p = 0.0, l2_q = 0.0;
    double linf_u_fine = 0.0;
    double jump_u = 0.0, jump_p = 0.0;  // sqrt(sum_j [e]_j^2)
    EnergyParts parts;                  // squared constituents of energy^2
};

namespace detail {

/// Jump of (exact - v) at node j with the boundary conventions
/// [e]_0 = e_0^+, [e]_N = -e_N^-.
inline double error_jump(const Field& exact, const PiecewisePoly& v, int j) {
    const Mesh& mesh = v.mesh();
    const int n = mesh.num_elements();
    const double ex = exact(mesh.node_point(j));
    if (j == 0) return ex - v.left_end(0);
    if (j == n) return -(ex - v.right_end(n - 1));
    return (ex - v.left_end(j)) - (ex - v.right_end(j - 1));
}

/// max |exact - v| over the fine half, sampled at quadrature nodes and element ends.
inline double linf_fine(const Field& exact, const PiecewisePoly& v, const Quadrature& quad) {
    const Mesh& mesh = v.mesh();
    double m = 0.0;
    for (int e = mesh.num_elements() / 2; e < mesh.num_elements(); ++e) {
        auto probe = [&](double t) { m = std::max(m, std::abs(exact(mesh.point(e, t)) - v.value(e, t))); };
        probe(-1.0);
        probe(1.0);
        for (double t : quad.nodes) probe(t);
    }
    return m;
}

}  // namespace detail

/// Composite Gauss quadrature of (exact - v)^2, square-rooted.
inline double l2_error(const Field& exact, const PiecewisePoly& v, const Quadrature& quad) {
    const Mesh& mesh = v.mesh();
    double s = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double h = mesh.width(e);
        for (int q = 0; q < quad.size(); ++q) {
            const double t = quad.nodes[static_cast<std::size_t>(q)];
            const double d = exact(mesh.point(e, t)) - v.value(e, t);
            s += quad.weights[static_cast<std::size_t>(q)] * 0.5 * h * d * d;
        }
    }
    return std::sqrt(s);
}

/// All error measures of W against the exact triple.
inline ErrorRecord compute_errors(const ExactSolution& exact, const LdgSolution& w, const Problem& problem,
                                  const Quadrature& quad) {
    const Mesh& mesh = w.U.mesh();
    const int n = mesh.num_elements();
    ErrorRecord r;
    double ju = 0.0, jp = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double eu = detail::error_jump(exact.u, w.U, j);
        const double ep = detail::error_jump(exact.p, w.P, j);
        ju += eu * eu;
        jp += ep * ep;
        r.parts.jump_p += 0.5 * problem.eps * ep * ep;
        r.parts.jump_u += 0.5 * std::abs(problem.b(mesh.node_point(j))) * eu * eu;
    }
    double su = 0.0, sp = 0.0, sq = 0.0;
    for (int e = 0; e < n; ++e) {
        const double h = mesh.width(e);
        for (int q = 0; q < quad.size(); ++q) {
            const double t = quad.nodes[static_cast<std::size_t>(q)];
            const double wq = quad.weights[static_cast<std::size_t>(q)] * 0.5 * h;
            const Point x = mesh.point(e, t);
            const double du = exact.u(x) - w.U.value(e, t);
            const double dp = exact.p(x) - w.P.value(e, t);
            const double dq = exact.q(x) - w.Q.value(e, t);
            su += wq * du * du;
            sp += wq * dp * dp;
            sq += wq * dq * dq;
            r.parts.l2_p += wq * problem.a(x) * dp * dp;
            r.parts.l2_u += wq * (problem.c(x) - 0.5 * problem.bprime(x)) * du * du;
        }
    }
    r.l2_u = std::sqrt(su);
    r.l2_p = std::sqrt(sp);
    r.l2_q = std::sqrt(sq);
    r.jump_u = std::sqrt(ju);
    r.jump_p = std::sqrt(jp);
    r.linf_u_fine = detail::linf_fine(exact.u, w.U, quad);
    r.energy = std::sqrt(r.parts.total());
    return r;
}

/// Energy norm of w - W.
inline double error_energy_norm(const ExactSolution& exact, const LdgSolution& w, const Problem& problem,
                                const Quadrature& quad) {
    return compute_errors(exact, w, problem, quad).energy;
}

/// Observed order from errors on N and 2N elements.
inline double rate_r2(double e_n, double e_2n) {
    if (!(e_n > 0.0) || !(e_2n > 0.0)) throw std::domain_error("rate_r2: errors must be positive");
    return std::log(e_n / e_2n) / std::log(2.0);
}

/// Observed order with respect to N^{-1} ln N on the Shishkin mesh.
inline double rate_rs(double e_n, double e_2n, int n) {
    if (!(e_n > 0.0) || !(e_2n > 0.0)) throw std::domain_error("rate_rs: errors must be positive");
    if (n < 4) throw std::domain_error("rate_rs: N must be at least 4");
    const double ln_n = std::log(static_cast<double>(n));
    return std::log(e_n / e_2n) / std::log(2.0 * ln_n / std::log(2.0 * n));
}

/// Least-squares slope of log(y) against log(x).
inline double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog_slope: need >= 2 matching points");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// Approximation errors of the Gauss-Radau projections of an exact triple.
struct ProjectionErrors {
    double l2_u = 0.0;        // ||u - pi^- u||
    double l2_p = 0.0;        // ||p - pi^+ p||
    double l2_q = 0.0;        // ||q - pi^+ q||
    double linf_p_fine = 0.0; // ||p - pi^+ p||_{L^inf(fine half)}
    double linf_q_fine = 0.0;
    double jump_u = 0.0;      // (sum_{j=0}^N [u - pi^- u]_j^2)^{1/2}
    double jump_p = 0.0;      // (sum_{j=0}^N [p - pi^+ p]_j^2)^{1/2}
};

inline ProjectionErrors projection_error_suite(const ExactSolution& exact, std::shared_ptr<const Mesh> mesh, int k,
                                               const Quadrature& quad) {
    const PiecewisePoly pu = project_gauss_radau(ProjectionSign::Minus, exact.u, mesh, k, quad);
    const PiecewisePoly pp = project_gauss_radau(ProjectionSign::Plus, exact.p, mesh, k, quad);
    const PiecewisePoly pq = project_gauss_radau(ProjectionSign::Plus, exact.q, mesh, k, quad);
    ProjectionErrors r;
    r.l2_u = l2_error(exact.u, pu, quad);
    r.l2_p = l2_error(exact.p, pp, quad);
    r.l2_q = l2_error(exact.q, pq, quad);
    r.linf_p_fine = detail::linf_fine(exact.p, pp, quad);
    r.linf_q_fine = detail::linf_fine(exact.q, pq, quad);
    double ju = 0.0, jp = 0.0;
    for (int j = 0; j <= mesh->num_elements(); ++j) {
        const double a = detail::error_jump(exact.u, pu, j);
        const double b = detail::error_jump(exact.p, pp, j);
        ju += a * a;
        jp += b * b;
    }
    r.jump_u = std::sqrt(ju);
    r.jump_p = std::sqrt(jp);
    return r;
}

/// How far a computed projection is from its defining conditions.
struct ProjectionDefect {
    double moment = 0.0;       // max_e max_{m<k} |<f - pi f, phi_m>_e| / ||f||_e
    double collocation = 0.0;  // max_e |(pi f)(end) - f(end)| / max|f|
};

inline ProjectionDefect gauss_radau_defect(ProjectionSign sign, const Field& f, const PiecewisePoly& proj,
                                           const Quadrature& quad) {
    const Mesh& mesh = proj.mesh();
    const int k = proj.degree();
    ProjectionDefect d;
    double fmax = 0.0;
    for (int j = 0; j <= mesh.num_elements(); ++j) fmax = std::max(fmax, std::abs(f(mesh.node_point(j))));
    std::vector<double> mom(static_cast<std::size_t>(std::max(k, 1)));
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double h = mesh.width(e);
        element_moments(f, mesh, e, k, quad, mom);
        double fnorm = 0.0;
        for (int q = 0; q < quad.size(); ++q) {
            const double v = f(mesh.point(e, quad.nodes[static_cast<std::size_t>(q)]));
            fnorm += quad.weights[static_cast<std::size_t>(q)] * 0.5 * h * v * v;
        }
        fnorm = std::sqrt(fnorm);
        // <pi f, phi_m> by quadrature of the projected polynomial itself.
        std::vector<double> pmom(mom.size(), 0.0), phi(static_cast<std::size_t>(k + 1)), dphi(phi.size());
        for (int q = 0; q < quad.size() && k > 0; ++q) {
            const double t = quad.nodes[static_cast<std::size_t>(q)];
            basis_table(k, t, h, phi, dphi);
            const double pw = proj.value(e, t) * quad.weights[static_cast<std::size_t>(q)] * 0.5 * h;
            for (int m = 0; m < k; ++m) pmom[static_cast<std::size_t>(m)] += pw * phi[static_cast<std::size_t>(m)];
        }
        for (int m = 0; m < k; ++m) {
            const double diff = std::abs(mom[static_cast<std::size_t>(m)] - pmom[static_cast<std::size_t>(m)]);
            if (fnorm > 0.0) d.moment = std::max(d.moment, diff / fnorm);
        }
        const bool right = sign == ProjectionSign::Minus;
        const double target = f(mesh.node_point(right ? e + 1 : e));
        const double got = right ? proj.right_end(e) : proj.left_end(e);
        if (fmax > 0.0) d.collocation = std::max(d.collocation, std::abs(got - target) / fmax);
    }
    return d;
}

}  // namespace ldg3
