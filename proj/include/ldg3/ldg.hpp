#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldg3/band_lu.hpp"
#include "ldg3/field.hpp"
#include "ldg3/piecewise_poly.hpp"
#include "ldg3/problem.hpp"
#include "ldg3/projection.hpp"
#include "ldg3/quadrature.hpp"

namespace ldg3 {

// ---------------------------------------------------------------------------
// Numerical fluxes
// ---------------------------------------------------------------------------

/// weight * (one-sided trace) at a node.
struct TraceTerm {
    Side side = Side::Minus;
    double weight = 0.0;
};

/// A flux as a combination of at most two one-sided traces of one unknown.
struct FluxStencil {
    std::array<TraceTerm, 2> terms{};
    int count = 0;

    FluxStencil& with(Side side, double weight) {
        terms[static_cast<std::size_t>(count++)] = {side, weight};
        return *this;
    }

    double apply(const PiecewisePoly& v, int node) const {
        double s = 0.0;
        for (int i = 0; i < count; ++i) s += terms[static_cast<std::size_t>(i)].weight * v.trace(node, terms[static_cast<std::size_t>(i)].side);
        return s;
    }
};

struct NodeFluxes {
    FluxStencil u_hat;     // acts on U
    FluxStencil p_hat;     // acts on P
    FluxStencil q_hat;     // acts on Q
    FluxStencil p_tilde;   // acts on P
    FluxStencil bu_tilde;  // acts on U
};

/// Flux choices at node j of an N-element mesh. Inside: U from the left,
/// P and Q from the right, convection upwinded on the sign of b_j.
inline NodeFluxes flux_stencils(int j, int n, double b_j) {
    if (j < 0 || j > n) throw std::out_of_range("flux_stencils: node " + std::to_string(j) + " outside [0, N]");
    const double b_plus = 0.5 * (b_j + std::abs(b_j));
    const double b_minus = 0.5 * (b_j - std::abs(b_j));
    NodeFluxes f;
    if (j == 0) {
        f.p_hat.with(Side::Plus, 1.0);
        f.q_hat.with(Side::Plus, 1.0);
        f.p_tilde.with(Side::Plus, 1.0);
        if (b_minus != 0.0) f.bu_tilde.with(Side::Plus, b_minus);
    } else if (j == n) {
        f.q_hat.with(Side::Minus, 1.0);
        f.p_tilde.with(Side::Minus, 1.0);
        if (b_plus != 0.0) f.bu_tilde.with(Side::Minus, b_plus);
    } else {
        f.u_hat.with(Side::Minus, 1.0);
        f.p_hat.with(Side::Plus, 1.0);
        f.q_hat.with(Side::Plus, 1.0);
        f.p_tilde.with(Side::Plus, 1.0);
        if (b_plus != 0.0) f.bu_tilde.with(Side::Minus, b_plus);
        if (b_minus != 0.0) f.bu_tilde.with(Side::Plus, b_minus);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Discrete system
// ---------------------------------------------------------------------------

enum Unknown : int { kU = 0, kP = 1, kQ = 2 };

/// Per element the 3(k+1) unknowns are ordered U-block, P-block, Q-block.
/// Rows use the same element blocks with the test-function blocks ordered
/// (v, r, s), i.e. the convection-diffusion equation first.
struct DofLayout {
    int k = 0;
    int num_elements = 0;

    int block() const { return 3 * (k + 1); }
    std::size_t size() const { return static_cast<std::size_t>(num_elements) * static_cast<std::size_t>(block()); }
    std::size_t index(int e, int var, int m) const {
        return static_cast<std::size_t>(e) * static_cast<std::size_t>(block()) +
               static_cast<std::size_t>(var * (k + 1) + m);
    }
};

enum TestBlock : int { kTestV = 0, kTestR = 1, kTestS = 2 };

struct BlockSystem {
    std::shared_ptr<const Mesh> mesh;
    int k = 0;
    double eps = 0.0;
    DofLayout layout;
    BandMatrix<double> matrix;
    std::vector<double> rhs;
};

struct SolveDiagnostics {
    double growth_factor = 0.0;
    double residual_inf = 0.0;
    double rhs_inf = 0.0;
};

struct LdgSolution {
    PiecewisePoly U, P, Q;
    SolveDiagnostics diagnostics;
};

/// Assembles the LDG equations element by element. Coefficients are sampled
/// at quadrature nodes; flux node values a_j, b_j are exact point values.
inline BlockSystem assemble(const Problem& problem, std::shared_ptr<const Mesh> mesh, int k, const Quadrature& quad) {
    if (k < 0) throw std::invalid_argument("assemble: negative degree");
    if (quad.size() < k + 1) throw std::invalid_argument("assemble: quadrature too coarse for degree " + std::to_string(k));
    const int n = mesh->num_elements();
    BlockSystem sys;
    sys.mesh = mesh;
    sys.k = k;
    sys.eps = problem.eps;
    sys.layout = {k, n};
    const std::size_t bw = static_cast<std::size_t>(2 * sys.layout.block() - 1);
    sys.matrix = BandMatrix<double>(sys.layout.size(), bw, bw);
    sys.rhs.assign(sys.layout.size(), 0.0);

    const DofLayout& L = sys.layout;
    const std::size_t kk = static_cast<std::size_t>(k + 1);
    std::vector<double> phi(kk), dphi(kk);
    const double eps = problem.eps;

    std::vector<double> a_node(static_cast<std::size_t>(n) + 1), b_node(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        a_node[static_cast<std::size_t>(j)] = problem.a(mesh->node_point(j));
        b_node[static_cast<std::size_t>(j)] = problem.b(mesh->node_point(j));
    }

    // coef * (stencil applied to `var`) * (test value) into rows (e, test block, 0..k).
    auto add_flux = [&](int e, int test_block, bool test_at_right, int node, const FluxStencil& st, int var,
                        double coef) {
        const double h = mesh->width(e);
        for (int i = 0; i < st.count; ++i) {
            const TraceTerm& term = st.terms[static_cast<std::size_t>(i)];
            const int src = term.side == Side::Minus ? node - 1 : node;
            const double hs = mesh->width(src);
            const bool src_right = term.side == Side::Minus;
            for (int tn = 0; tn <= k; ++tn) {
                const double test = basis_end_value(tn, h, test_at_right);
                const std::size_t row = L.index(e, test_block, tn);
                for (int m = 0; m <= k; ++m)
                    sys.matrix.add(row, L.index(src, var, m), coef * term.weight * test * basis_end_value(m, hs, src_right));
            }
        }
    };

    for (int e = 0; e < n; ++e) {
        const double h = mesh->width(e);
        for (int q = 0; q < quad.size(); ++q) {
            const double t = quad.nodes[static_cast<std::size_t>(q)];
            const double w = quad.weights[static_cast<std::size_t>(q)] * 0.5 * h;
            const Point x = mesh->point(e, t);
            const double av = problem.a(x), bv = problem.b(x);
            const double cv = problem.c(x) - problem.bprime(x);
            const double fv = problem.f(x);
            basis_table(k, t, h, phi, dphi);
            for (int tn = 0; tn <= k; ++tn) {
                const double v = phi[static_cast<std::size_t>(tn)], dv = dphi[static_cast<std::size_t>(tn)];
                const std::size_t rv = L.index(e, kTestV, tn), rr = L.index(e, kTestR, tn), rs = L.index(e, kTestS, tn);
                sys.rhs[rv] += w * fv * v;
                for (int m = 0; m <= k; ++m) {
                    const double pm = phi[static_cast<std::size_t>(m)];
                    // -<Q,v'> + <aP,v'> - <bU,v'> + <(c-b')U,v>
                    sys.matrix.add(rv, L.index(e, kQ, m), -w * pm * dv);
                    sys.matrix.add(rv, L.index(e, kP, m), w * av * pm * dv);
                    sys.matrix.add(rv, L.index(e, kU, m), w * (-bv * pm * dv + cv * pm * v));
                    // <P,r> + <U,r'>
                    sys.matrix.add(rr, L.index(e, kP, m), w * pm * v);
                    sys.matrix.add(rr, L.index(e, kU, m), w * pm * dv);
                    // <Q,s> + eps <P,s'>
                    sys.matrix.add(rs, L.index(e, kQ, m), w * pm * v);
                    sys.matrix.add(rs, L.index(e, kP, m), eps * w * pm * dv);
                }
            }
        }

        const int jr = e + 1, jl = e;
        const NodeFluxes fr = flux_stencils(jr, n, b_node[static_cast<std::size_t>(jr)]);
        const NodeFluxes fl = flux_stencils(jl, n, b_node[static_cast<std::size_t>(jl)]);
        const double ar = a_node[static_cast<std::size_t>(jr)], al = a_node[static_cast<std::size_t>(jl)];

        // -U^_j r_j^- + U^_{j-1} r_{j-1}^+
        add_flux(e, kTestR, true, jr, fr.u_hat, kU, -1.0);
        add_flux(e, kTestR, false, jl, fl.u_hat, kU, 1.0);
        // eps (-P^_j s_j^- + P^_{j-1} s_{j-1}^+)
        add_flux(e, kTestS, true, jr, fr.p_hat, kP, -eps);
        add_flux(e, kTestS, false, jl, fl.p_hat, kP, eps);
        // Q^_j v_j^- - Q^_{j-1} v_{j-1}^+
        add_flux(e, kTestV, true, jr, fr.q_hat, kQ, 1.0);
        add_flux(e, kTestV, false, jl, fl.q_hat, kQ, -1.0);
        // -a_j P~_j v_j^- + a_{j-1} P~_{j-1} v_{j-1}^+
        add_flux(e, kTestV, true, jr, fr.p_tilde, kP, -ar);
        add_flux(e, kTestV, false, jl, fl.p_tilde, kP, al);
        // bU~_j v_j^- - bU~_{j-1} v_{j-1}^+
        add_flux(e, kTestV, true, jr, fr.bu_tilde, kU, 1.0);
        add_flux(e, kTestV, false, jl, fl.bu_tilde, kU, -1.0);
    }
    return sys;
}

inline LdgSolution unpack_solution(const BlockSystem& sys, const std::vector<double>& x) {
    LdgSolution w{PiecewisePoly(sys.mesh, sys.k), PiecewisePoly(sys.mesh, sys.k), PiecewisePoly(sys.mesh, sys.k), {}};
    for (int e = 0; e < sys.layout.num_elements; ++e)
        for (int m = 0; m <= sys.k; ++m) {
            const auto mu = static_cast<std::size_t>(m);
            w.U.element(e)[mu] = x[sys.layout.index(e, kU, m)];
            w.P.element(e)[mu] = x[sys.layout.index(e, kP, m)];
            w.Q.element(e)[mu] = x[sys.layout.index(e, kQ, m)];
        }
    return w;
}

inline std::vector<double> pack_solution(const BlockSystem& sys, const LdgSolution& w) {
    std::vector<double> x(sys.layout.size());
    for (int e = 0; e < sys.layout.num_elements; ++e)
        for (int m = 0; m <= sys.k; ++m) {
            const auto mu = static_cast<std::size_t>(m);
            x[sys.layout.index(e, kU, m)] = w.U.element(e)[mu];
            x[sys.layout.index(e, kP, m)] = w.P.element(e)[mu];
            x[sys.layout.index(e, kQ, m)] = w.Q.element(e)[mu];
        }
    return x;
}

inline double residual_inf(const BlockSystem& sys, const std::vector<double>& x) {
    std::vector<double> ax(x.size());
    sys.matrix.multiply(x, ax);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(ax[i] - sys.rhs[i]));
    return r;
}

/// Banded LU with partial pivoting. Throws SingularPivotError.
inline LdgSolution solve(const BlockSystem& sys) {
    BandLU<double> lu(sys.matrix);
    std::vector<double> x = sys.rhs;
    lu.solve_in_place(x);
    LdgSolution w = unpack_solution(sys, x);
    w.diagnostics.growth_factor = lu.growth_factor();
    w.diagnostics.residual_inf = residual_inf(sys, x);
    double bn = 0.0;
    for (double v : sys.rhs) bn = std::max(bn, std::abs(v));
    w.diagnostics.rhs_inf = bn;
    return w;
}

inline LdgSolution solve_ldg(const Problem& problem, std::shared_ptr<const Mesh> mesh, int k, const Quadrature& quad) {
    return solve(assemble(problem, std::move(mesh), k, quad));
}

/// Writes the matrix as "row col value" lines (0-based), nonzeros only.
inline void write_coordinate(std::ostream& os, const BlockSystem& sys) {
    const std::size_t n = sys.matrix.size();
    const std::size_t kl = sys.matrix.lower(), ku = sys.matrix.upper();
    char buf[96];
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > kl ? i - kl : 0;
        const std::size_t hi = std::min(n - 1, i + ku);
        for (std::size_t j = lo; j <= hi; ++j) {
            const double v = sys.matrix(i, j);
            if (v == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i, j, v);
            os << buf;
        }
    }
}

// ---------------------------------------------------------------------------
// Flux values and the compact bilinear form
// ---------------------------------------------------------------------------

struct FluxValues {
    double u_hat = 0.0, p_hat = 0.0, q_hat = 0.0, p_tilde = 0.0, bu_tilde = 0.0;
};

inline FluxValues flux_values(const LdgSolution& w, int j, const Problem& problem) {
    const Mesh& mesh = w.U.mesh();
    const NodeFluxes st = flux_stencils(j, mesh.num_elements(), problem.b(mesh.node_point(j)));
    return {st.u_hat.apply(w.U, j), st.p_hat.apply(w.P, j), st.q_hat.apply(w.Q, j), st.p_tilde.apply(w.P, j),
            st.bu_tilde.apply(w.U, j)};
}

/// Anything with element values and one-sided node traces: PiecewisePoly,
/// or a continuous function sampled on the mesh.
template <class F>
concept TracedField = requires(const F& f, int e, double t, int j, Side s) {
    { f.value(e, t) } -> std::convertible_to<double>;
    { f.trace(j, s) } -> std::convertible_to<double>;
};

/// A continuous function viewed as a field on the mesh; both traces coincide.
struct SampledField {
    std::shared_ptr<const Mesh> mesh;
    Field fn;

    double value(int e, double t) const { return fn(mesh->point(e, t)); }
    double trace(int j, Side) const { return fn(mesh->node_point(j)); }
};

/// (v, r, s) test triple.
struct TestTriple {
    PiecewisePoly v, r, s;
};

/// B(W; chi) written out term by term from the compact form: volume
/// integrals, interior jump sums and the two boundary contributions.
/// Independent of `assemble`, which builds the same form row by row.
template <TracedField FU, TracedField FP, TracedField FQ>
double bilinear_form(const FU& U, const FP& P, const FQ& Q, const TestTriple& chi, const Problem& problem,
                     const Quadrature& quad) {
    const Mesh& mesh = chi.v.mesh();
    if (!chi.v.same_space(chi.r) || !chi.v.same_space(chi.s))
        throw std::invalid_argument("bilinear_form: test functions live on different spaces");
    const int n = mesh.num_elements();
    const double eps = problem.eps;
    double sum = 0.0;

    for (int e = 0; e < n; ++e) {
        const double h = mesh.width(e);
        for (int q = 0; q < quad.size(); ++q) {
            const double t = quad.nodes[static_cast<std::size_t>(q)];
            const double w = quad.weights[static_cast<std::size_t>(q)] * 0.5 * h;
            const Point x = mesh.point(e, t);
            const double u = U.value(e, t), p = P.value(e, t), qq = Q.value(e, t);
            const double v = chi.v.value(e, t), dv = chi.v.derivative(e, t);
            const double r = chi.r.value(e, t), dr = chi.r.derivative(e, t);
            const double s = chi.s.value(e, t), ds = chi.s.derivative(e, t);
            sum += w * (p * r + u * dr);
            sum += w * (qq * s + eps * p * ds);
            sum += w * (-qq * dv + problem.a(x) * p * dv);
            sum += w * ((problem.c(x) - problem.bprime(x)) * u * v - problem.b(x) * u * dv);
        }
    }

    for (int j = 1; j < n; ++j) {
        const Point xj = mesh.node_point(j);
        const double aj = problem.a(xj), bj = problem.b(xj);
        const double bp = 0.5 * (bj + std::abs(bj)), bm = 0.5 * (bj - std::abs(bj));
        const double um = U.trace(j, Side::Minus), up = U.trace(j, Side::Plus);
        const double pp = P.trace(j, Side::Plus), qp = Q.trace(j, Side::Plus);
        const double jr = chi.r.jump(j), js = chi.s.jump(j), jv = chi.v.jump(j);
        sum += um * jr;
        sum += eps * pp * js;
        sum += -qp * jv;
        sum += aj * pp * jv;
        sum += -(bp * um + bm * up) * jv;
    }

    const Point x0 = mesh.node_point(0), x1 = mesh.node_point(n);
    const double a0 = problem.a(x0), aN = problem.a(x1);
    const double b0 = problem.b(x0), bN = problem.b(x1);
    const double v0 = chi.v.trace(0, Side::Plus), vN = chi.v.trace(n, Side::Minus);
    const double s0 = chi.s.trace(0, Side::Plus);
    const double p0 = P.trace(0, Side::Plus), pN = P.trace(n, Side::Minus);
    const double q0 = Q.trace(0, Side::Plus), qN = Q.trace(n, Side::Minus);
    const double u0 = U.trace(0, Side::Plus), uN = U.trace(n, Side::Minus);
    sum += eps * p0 * s0;
    sum += qN * vN - q0 * v0;
    sum += -aN * pN * vN + a0 * p0 * v0;
    sum += 0.5 * (bN + std::abs(bN)) * uN * vN - 0.5 * (b0 - std::abs(b0)) * u0 * v0;
    return sum;
}

inline double bilinear_form(const LdgSolution& w, const TestTriple& chi, const Problem& problem,
                            const Quadrature& quad) {
    if (!w.U.same_space(chi.v)) throw std::invalid_argument("bilinear_form: mesh or degree mismatch");
    return bilinear_form(w.U, w.P, w.Q, chi, problem, quad);
}

/// <f, v> over the whole mesh.
inline double load_functional(const Field& f, const PiecewisePoly& v, const Quadrature& quad) {
    const Mesh& mesh = v.mesh();
    double s = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double h = mesh.width(e);
        for (int q = 0; q < quad.size(); ++q) {
            const double t = quad.nodes[static_cast<std::size_t>(q)];
            s += quad.weights[static_cast<std::size_t>(q)] * 0.5 * h * f(mesh.point(e, t)) * v.value(e, t);
        }
    }
    return s;
}

/// Element-wise L2 projection of coefficient * p (exact when the coefficient is constant).
inline PiecewisePoly project_product(const Field& coefficient, const PiecewisePoly& p, const Quadrature& quad) {
    PiecewisePoly out(p.mesh_ptr(), p.degree());
    const Mesh& mesh = p.mesh();
    const int k = p.degree();
    std::vector<double> phi(static_cast<std::size_t>(k + 1)), dphi(phi.size());
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double h = mesh.width(e);
        auto c = out.element(e);
        for (int q = 0; q < quad.size(); ++q) {
            const double t = quad.nodes[static_cast<std::size_t>(q)];
            basis_table(k, t, h, phi, dphi);
            const double val = quad.weights[static_cast<std::size_t>(q)] * 0.5 * h * coefficient(mesh.point(e, t)) * p.value(e, t);
            for (int m = 0; m <= k; ++m) c[static_cast<std::size_t>(m)] += val * phi[static_cast<std::size_t>(m)];
        }
    }
    return out;
}

/// The test triple (U, -Q + aP, P) that turns B(W; .) into the energy norm.
inline TestTriple energy_test_triple(const LdgSolution& w, const Problem& problem, const Quadrature& quad) {
    PiecewisePoly r = project_product(problem.a, w.P, quad);
    r -= w.Q;
    return {w.U, std::move(r), w.P};
}

/// Parts of the scheme-induced energy norm of a discrete triple.
struct EnergyParts {
    double jump_p = 0.0;      // (eps/2) sum_j [P]_j^2
    double l2_p = 0.0;        // ||a^{1/2} P||^2
    double l2_u = 0.0;        // ||(c - b'/2)^{1/2} U||^2
    double jump_u = 0.0;      // (1/2) sum_j |b_j| [U]_j^2

    double total() const { return jump_p + l2_p + l2_u + jump_u; }
};

inline EnergyParts energy_parts(const LdgSolution& w, const Problem& problem, const Quadrature& quad) {
    const Mesh& mesh = w.U.mesh();
    const int n = mesh.num_elements();
    EnergyParts parts;
    for (int j = 0; j <= n; ++j) {
        const double jp = w.P.jump(j), ju = w.U.jump(j);
        parts.jump_p += 0.5 * problem.eps * jp * jp;
        parts.jump_u += 0.5 * std::abs(problem.b(mesh.node_point(j))) * ju * ju;
    }
    for (int e = 0; e < n; ++e) {
        const double h = mesh.width(e);
        for (int q = 0; q < quad.size(); ++q) {
            const double t = quad.nodes[static_cast<std::size_t>(q)];
            const double wq = quad.weights[static_cast<std::size_t>(q)] * 0.5 * h;
            const Point x = mesh.point(e, t);
            const double p = w.P.value(e, t), u = w.U.value(e, t);
            parts.l2_p += wq * problem.a(x) * p * p;
            parts.l2_u += wq * (problem.c(x) - 0.5 * problem.bprime(x)) * u * u;
        }
    }
    return parts;
}

}  // namespace ldg3
