// Acceptance suite: prints one [PASS]/[FAIL] line per criterion.
//
//   ldg3_acceptance [--report FILE]
//
// Exit status is the number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "golden_tables.hpp"
#include "ldg3/ldg3.hpp"

using namespace ldg3;

namespace {

constexpr MeshKind kKinds[] = {MeshKind::Shishkin, MeshKind::BakhvalovShishkin, MeshKind::Bakhvalov};
constexpr int kSweep[] = {16, 32, 64, 128, 256, 512};

struct Verdict {
    bool pass = true;
    std::string detail;
    std::vector<std::string> notes;  // individual violations

    void fail(const std::string& what) {
        pass = false;
        notes.push_back(what);
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string name(MeshKind kind) { return std::string(short_name(kind)); }

double rel_diff(double got, double want) { return std::abs(got - want) / std::abs(want); }

// ---------------------------------------------------------------------------
// Solved cases, cached so that several criteria share one solve.

struct CaseResult {
    double energy = 0.0, l2_u = 0.0, l2_p = 0.0;
    double energy_sq = 0.0;        // |||W|||^2
    double identity_defect = 0.0;  // |B(W; U, -Q+aP, P) - |||W|||^2|
    double quad_change = 0.0;      // relative change of the energy error under 40-point quadrature
};

std::map<std::tuple<int, int, double, int, std::string>, CaseResult> g_cache;

CaseResult solve_case(const TestCase& tc, MeshKind kind, int k, int n) {
    const auto key = std::make_tuple(static_cast<int>(kind), k, tc.eps, n, tc.name);
    if (auto it = g_cache.find(key); it != g_cache.end()) return it->second;

    auto mesh = std::make_shared<const Mesh>(build_mesh({kind, n, tc.eps, k + 1.5, 1.0}));
    const Quadrature qa = gauss_quadrature(k + 3);
    const LdgSolution w = solve_ldg(tc.problem, mesh, k, qa);
    const ErrorRecord err = compute_errors(tc.exact, w, tc.problem, gauss_quadrature(20));
    const ErrorRecord err40 = compute_errors(tc.exact, w, tc.problem, gauss_quadrature(40));

    CaseResult r;
    r.energy = err.energy;
    r.l2_u = err.l2_u;
    r.l2_p = err.l2_p;
    r.quad_change = tc.name == "layer" ? rel_diff(err.energy, err40.energy) : 0.0;
    r.energy_sq = energy_parts(w, tc.problem, qa).total();
    r.identity_defect = std::abs(bilinear_form(w, energy_test_triple(w, tc.problem, qa), tc.problem, qa) - r.energy_sq);
    g_cache.emplace(key, r);
    return r;
}

const TestCase& layer_case(double eps) {
    static std::map<double, TestCase> cases;
    auto it = cases.find(eps);
    if (it == cases.end()) it = cases.emplace(eps, paper_case(eps)).first;
    return it->second;
}

double golden_error(const golden::Row& row, MeshKind kind) {
    switch (kind) {
        case MeshKind::Shishkin: return row.s_err;
        case MeshKind::BakhvalovShishkin: return row.bs_err;
        default: return row.b_err;
    }
}

double golden_rate(const golden::Row& row, MeshKind kind) {
    switch (kind) {
        case MeshKind::Shishkin: return row.s_rate;
        case MeshKind::BakhvalovShishkin: return row.bs_rate;
        default: return row.b_rate;
    }
}

template <std::size_t M>
const golden::Row* golden_row(const std::array<golden::Row, M>& table, int k, int n) {
    for (const auto& r : table)
        if (r.k == k && r.n == n) return &r;
    return nullptr;
}

double slope_over(const std::vector<int>& ns, const std::vector<double>& errs) {
    std::vector<double> x(ns.begin(), ns.end());
    return fit_loglog_slope(x, errs);
}

// ---------------------------------------------------------------------------
// Criteria

Verdict ac1_golden_eps8() {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    const TestCase& tc = layer_case(1e-8);
    double worst_err = 0.0, worst_rate = 0.0;
    for (MeshKind kind : kKinds)
        for (int k = 0; k <= 3; ++k) {
            double prev = 0.0;
            for (int n : kSweep) {
                const golden::Row* row = golden_row(golden::kEps1e8, k, n);
                const double e = solve_case(tc, kind, k, n).energy;
                const double want = golden_error(*row, kind);
                const double d = rel_diff(e, want);
                worst_err = std::max(worst_err, d);
                if (d > 0.05) v.fail(fmt("%s k=%d N=%d: %.3e vs %.2e (%.1f%%)", name(kind).c_str(), k, n, e, want, 100 * d));
                if (prev > 0.0) {
                    const double r = rate_r2(prev, e);
                    const double dr = std::abs(r - golden_rate(*row, kind));
                    worst_rate = std::max(worst_rate, dr);
                    if (dr > 0.1)
                        v.fail(fmt("%s k=%d N=%d: rate %.2f vs %.2f", name(kind).c_str(), k, n, r, golden_rate(*row, kind)));
                }
                prev = e;
            }
        }

    // r_s recomputed from the printed eps = 1e-4 S-mesh P1 errors.
    const double printed_rs[] = {2.30, 2.08, 1.95, 1.86, 1.82};
    double worst_rs = 0.0;
    for (int i = 0; i < 5; ++i) {
        const golden::Row* a = golden_row(golden::kEps1e4, 1, kSweep[i]);
        const golden::Row* b = golden_row(golden::kEps1e4, 1, kSweep[i + 1]);
        const double rs = rate_rs(a->s_err, b->s_err, kSweep[i]);
        worst_rs = std::max(worst_rs, std::abs(rs - printed_rs[i]));
        if (std::abs(rs - printed_rs[i]) > 0.1) v.fail(fmt("r_s from printed P1 N=%d: %.2f vs %.2f", kSweep[i + 1], rs, printed_rs[i]));
    }

    struct Anchor {
        int k, n;
        double want;
    };
    for (const Anchor& a : {Anchor{1, 64, 3.01e-03}, Anchor{3, 32, 1.76e-06}, Anchor{2, 512, 9.89e-08}}) {
        const double e = solve_case(tc, MeshKind::Shishkin, a.k, a.n).energy;
        if (rel_diff(e, a.want) > 0.05) v.fail(fmt("anchor P%d N=%d: %.3e vs %.2e", a.k, a.n, e, a.want));
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > 120.0) v.fail(fmt("runtime %.1f s exceeds 120 s", secs));
    v.detail = fmt("max error deviation %.2f%%, max rate deviation %.3f, max r_s deviation %.3f, %.2f s", 100 * worst_err,
                   worst_rate, worst_rs, secs);
    return v;
}

Verdict ac2_eps_robustness() {
    Verdict v;
    double worst = 0.0;
    for (MeshKind kind : kKinds)
        for (int k = 0; k <= 3; ++k)
            for (int n : kSweep) {
                const double e8 = solve_case(layer_case(1e-8), kind, k, n).energy;
                const double e12 = solve_case(layer_case(1e-12), kind, k, n).energy;
                const double d = rel_diff(e12, e8);
                worst = std::max(worst, d);
                if (d > 0.01)
                    v.fail(fmt("%s k=%d N=%d: eps=1e-12 %.4e vs eps=1e-8 %.4e (%.2f%%)", name(kind).c_str(), k, n, e12, e8,
                               100 * d));
            }
    // Also compare the eps = 1e-12 run with its own printed table.
    double worst_printed = 0.0;
    for (MeshKind kind : kKinds)
        for (const auto& row : golden::kEps1e12)
            worst_printed =
                std::max(worst_printed, rel_diff(solve_case(layer_case(1e-12), kind, row.k, row.n).energy, golden_error(row, kind)));
    v.detail = fmt("max relative difference %.2f%% (limit 1%%); eps=1e-12 vs its printed table: max %.2f%%", 100 * worst,
                   100 * worst_printed);
    return v;
}

Verdict ac3_eps4_shishkin() {
    Verdict v;
    const TestCase& tc = layer_case(1e-4);
    double worst_err = 0.0, worst_rate = 0.0, prev = 0.0;
    int prev_n = 0;
    for (int n : kSweep) {
        const golden::Row* row = golden_row(golden::kEps1e4, 3, n);
        const double e = solve_case(tc, MeshKind::Shishkin, 3, n).energy;
        const double d = rel_diff(e, row->s_err);
        worst_err = std::max(worst_err, d);
        if (d > 0.05) v.fail(fmt("N=%d: %.3e vs %.2e", n, e, row->s_err));
        if (prev > 0.0) {
            const double rs = rate_rs(prev, e, prev_n);
            const double dr = std::abs(rs - row->s_rate);
            worst_rate = std::max(worst_rate, dr);
            if (dr > 0.1) v.fail(fmt("N=%d: r_s %.2f vs %.2f", n, rs, row->s_rate));
        }
        prev = e;
        prev_n = n;
    }
    v.detail = fmt("max error deviation %.2f%%, max r_s deviation %.3f", 100 * worst_err, worst_rate);
    return v;
}

Verdict ac4_energy_slopes() {
    Verdict v;
    const TestCase& tc = layer_case(1e-8);
    const std::vector<int> ns{32, 64, 128, 256, 512};
    std::string summary;
    for (MeshKind kind : kKinds)
        for (int k = 1; k <= 2; ++k) {
            std::vector<double> errs;
            for (int n : ns) errs.push_back(solve_case(tc, kind, k, n).energy);
            const double s = slope_over(ns, errs);
            summary += fmt("%s/P%d %.2f ", name(kind).c_str(), k, s);
            if (s > -(k + 0.4)) v.fail(fmt("%s k=%d: slope %.3f > %.1f", name(kind).c_str(), k, s, -(k + 0.4)));
        }
    v.detail = "slopes " + summary;
    return v;
}

Verdict ac5_polynomial_exactness() {
    Verdict v;
    double worst = 0.0;
    for (double eps : {1e-2, 1e-8}) {
        const TestCase tc = polynomial_case(eps);
        for (MeshKind kind : kKinds)
            for (int n : {8, 16}) {
                const double e = solve_case(tc, kind, 3, n).energy;
                worst = std::max(worst, e);
                if (!(e <= 1e-10)) v.fail(fmt("%s N=%d eps=%g: %.3e", name(kind).c_str(), n, eps, e));
            }
    }
    v.detail = fmt("max energy error %.2e (limit 1e-10)", worst);
    return v;
}

Verdict ac6_energy_identity() {
    Verdict v;
    double worst = 0.0;
    for (const auto& [key, r] : g_cache) {
        const double rel = r.energy_sq > 0.0 ? r.identity_defect / r.energy_sq : r.identity_defect;
        worst = std::max(worst, rel);
        if (!(rel <= 1e-10)) {
            const auto& [kind, k, eps, n, case_name] = key;
            v.fail(fmt("%s %s k=%d eps=%g N=%d: relative defect %.2e", case_name.c_str(),
                       name(static_cast<MeshKind>(kind)).c_str(), k, eps, n, rel));
        }
    }
    v.detail = fmt("%zu solved cases, max relative defect %.2e (limit 1e-10)", g_cache.size(), worst);
    return v;
}

Verdict ac7_local_identity() {
    Verdict v;
    const double eps = 1e-4;
    const int k = 1, n = 32;
    const TestCase& tc = layer_case(eps);
    auto mesh = std::make_shared<const Mesh>(build_mesh({MeshKind::Shishkin, n, eps, k + 1.5, 1.0}));
    const LdgSolution w = solve_ldg(tc.problem, mesh, k, gauss_quadrature(k + 3));
    // The layer tail reaches into the last coarse element within a sliver of
    // width ~10 eps at its right end; grade the rule toward that end.
    const Quadrature quad = graded_quadrature(20, 40);

    const PiecewisePoly pi_p = project_gauss_radau(ProjectionSign::Plus, tc.exact.p, mesh, k, quad);
    const PiecewisePoly pi_q = project_gauss_radau(ProjectionSign::Plus, tc.exact.q, mesh, k, quad);
    const PiecewisePoly X = pi_p - w.P;  // xi_p
    const PiecewisePoly Y = pi_q - w.Q;  // xi_q

    double worst = 0.0;
    for (int e = 0; e < n; ++e) {
        const double h = mesh->width(e);
        double yy = 0.0, dxy = 0.0, f_y = 0.0, qq = 0.0;
        for (int i = 0; i < quad.size(); ++i) {
            const double t = quad.nodes[static_cast<std::size_t>(i)];
            const double wq = quad.weights[static_cast<std::size_t>(i)] * 0.5 * h;
            const double y = Y.value(e, t);
            const double q = tc.exact.q(mesh->point(e, t));
            const double eta_q = pi_q.value(e, t) - q;
            yy += wq * y * y;
            dxy += wq * X.derivative(e, t) * y;
            f_y += wq * eta_q * y;
            qq += wq * q * q;
        }
        const double boundary = Y.right_end(e) * X.jump(e + 1);
        const double rhs = eps * (dxy + boundary) + f_y;
        const double scale = yy + eps * (std::abs(dxy) + std::abs(boundary)) + std::abs(f_y) + std::sqrt(qq * yy);
        const double rel = std::abs(yy - rhs) / scale;
        worst = std::max(worst, rel);
        if (!(rel <= 1e-10)) v.fail(fmt("element %d: |lhs - rhs| / scale = %.2e", e, rel));
    }
    v.detail = fmt("S-mesh k=1 N=32 eps=1e-4, max relative defect %.2e over %d elements (limit 1e-10)", worst, n);
    return v;
}

Verdict ac8_projection_rates() {
    Verdict v;
    const double eps = 1e-8;
    const TestCase& tc = layer_case(eps);
    const Quadrature quad = gauss_quadrature(20);
    const std::vector<int> ns{32, 64, 128, 256, 512};
    std::string summary;
    double worst_defect = 0.0;
    for (int k = 0; k <= 3; ++k) {
        std::vector<double> scale, l2u, jump_u;
        for (int n : ns) {
            auto mesh = std::make_shared<const Mesh>(build_mesh({MeshKind::Shishkin, n, eps, k + 1.5, 1.0}));
            const ProjectionErrors pe = projection_error_suite(tc.exact, mesh, k, quad);
            scale.push_back(n / std::log(static_cast<double>(n)));  // (N^-1 ln N)^-1
            l2u.push_back(pe.l2_u);
            jump_u.push_back(pe.jump_u);
            const struct {
                ProjectionSign sign;
                const Field* f;
            } checks[] = {{ProjectionSign::Minus, &tc.exact.u}, {ProjectionSign::Plus, &tc.exact.p}, {ProjectionSign::Plus, &tc.exact.q}};
            for (const auto& c : checks) {
                const PiecewisePoly proj = project_gauss_radau(c.sign, *c.f, mesh, k, quad);
                const ProjectionDefect d = gauss_radau_defect(c.sign, *c.f, proj, quad);
                worst_defect = std::max({worst_defect, d.moment, d.collocation});
                if (!(d.moment <= 1e-12) || !(d.collocation <= 1e-12))
                    v.fail(fmt("k=%d N=%d: projection defect moment %.2e collocation %.2e", k, n, d.moment, d.collocation));
            }
        }
        const double rate_u = -fit_loglog_slope(scale, l2u);
        const double rate_jump = -slope_over(ns, jump_u);
        summary += fmt("P%d: l2 %.2f, jump %.2f; ", k, rate_u, rate_jump);
        if (rate_u < k + 0.9) v.fail(fmt("k=%d: ||u - pi^- u|| rate %.3f < %.1f", k, rate_u, k + 0.9));
        if (rate_jump < k + 0.4) v.fail(fmt("k=%d: jump-sum rate %.3f < %.1f", k, rate_jump, k + 0.4));
    }
    v.detail = summary + fmt("max defect %.2e (limit 1e-12)", worst_defect);
    return v;
}

Verdict ac9_l2_rates() {
    Verdict v;
    const TestCase& tc = layer_case(1e-8);
    const std::vector<int> ns{32, 64, 128, 256, 512};
    std::string summary;
    for (MeshKind kind : kKinds)
        for (int k = 1; k <= 2; ++k) {
            std::vector<double> eu, ep;
            for (int n : ns) {
                const CaseResult r = solve_case(tc, kind, k, n);
                eu.push_back(r.l2_u);
                ep.push_back(r.l2_p);
            }
            const double ru = -slope_over(ns, eu), rp = -slope_over(ns, ep);
            summary += fmt("%s/P%d u %.2f p %.2f; ", name(kind).c_str(), k, ru, rp);
            if (std::abs(ru - (k + 1)) > 0.15) v.fail(fmt("%s k=%d: ||u-U|| rate %.3f", name(kind).c_str(), k, ru));
            if (std::abs(rp - (k + 1)) > 0.15) v.fail(fmt("%s k=%d: ||p-P|| rate %.3f", name(kind).c_str(), k, rp));
        }
    v.detail = summary;
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    std::string report_path;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc) {
            report_path = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--report FILE]\n", argv[0]);
            return 64;
        }
    }

    struct Criterion {
        const char* id;
        const char* title;
        Verdict (*run)();
    };
    // AC6 inspects every case solved before it, so it runs after the solves.
    const Criterion criteria[] = {
        {"AC1", "golden table eps=1e-8", ac1_golden_eps8},
        {"AC2", "eps-robustness 1e-12 vs 1e-8", ac2_eps_robustness},
        {"AC3", "eps=1e-4 S-mesh P3 column", ac3_eps4_shishkin},
        {"AC4", "energy-error slopes", ac4_energy_slopes},
        {"AC5", "cubic reproduction", ac5_polynomial_exactness},
        {"AC7", "local p-q identity", ac7_local_identity},
        {"AC8", "projection rates and defects", ac8_projection_rates},
        {"AC9", "L2 rates", ac9_l2_rates},
        {"AC6", "energy identity", ac6_energy_identity},
    };

    std::vector<std::pair<std::string, std::string>> lines;  // id, text
    int failed = 0;
    for (const auto& c : criteria) {
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& ex) {
            v.fail(std::string("exception: ") + ex.what());
        }
        if (!v.pass) ++failed;
        std::string text = fmt("[%s] %s %s: %s", v.pass ? "PASS" : "FAIL", c.id, c.title, v.detail.c_str());
        for (const auto& note : v.notes) text += "\n       " + note;
        lines.emplace_back(c.id, text);
    }
    std::sort(lines.begin(), lines.end());

    double worst_quad = 0.0;
    for (const auto& [key, r] : g_cache) worst_quad = std::max(worst_quad, r.quad_change);

    std::string out;
    for (const auto& [id, text] : lines) out += text + "\n";
    out += fmt("quadrature self-check (layer cases): 20 vs 40 points changes the energy error by at most %.2e, %s\n",
               worst_quad, worst_quad < 1e-3 ? "within 1e-3" : "EXCEEDS 1e-3");
    out += fmt("acceptance: 9 criteria evaluated, %d passed, %d failed\n", 9 - failed, failed);
    std::fputs(out.c_str(), stdout);
    if (!report_path.empty()) {
        std::ofstream(report_path) << out;
    }
    return failed;
}
