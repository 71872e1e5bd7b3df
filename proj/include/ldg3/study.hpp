#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "ldg3/error_analysis.hpp"
#include "ldg3/manufactured.hpp"

namespace ldg3 {

enum class OutputFormat { Csv, Markdown };

struct StudyConfig {
    std::vector<MeshKind> mesh_kinds{MeshKind::Shishkin, MeshKind::BakhvalovShishkin, MeshKind::Bakhvalov};
    std::vector<int> degrees{0, 1, 2, 3};
    std::vector<double> eps_list{1e-8};
    std::vector<int> n_list{16, 32, 64, 128, 256, 512};
    std::optional<double> sigma;  // empty: k + 1.5
    int quad_assembly = -1;       // <= 0: k + 3 points
    int quad_error = 20;
    bool quad_check = true;       // re-evaluate errors with 2x points
    OutputFormat format = OutputFormat::Csv;
    std::string output_path;      // empty: stdout
    int jobs = 1;

    double sigma_for(int k) const { return sigma ? *sigma : k + 1.5; }
    int assembly_points(int k) const { return quad_assembly > 0 ? quad_assembly : k + 3; }

    /// Throws std::invalid_argument describing the first problem found.
    void validate() const {
        for (int k : degrees)
            if (k < 0 || k > 3) throw std::invalid_argument("study: degree must lie in 0..3, got " + std::to_string(k));
        for (double e : eps_list)
            if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("study: eps must lie in (0,1)");
        for (std::size_t i = 0; i < n_list.size(); ++i) {
            if (n_list[i] < 4 || n_list[i] % 2 != 0)
                throw std::invalid_argument("study: N must be even and >= 4, got " + std::to_string(n_list[i]));
            if (i > 0 && n_list[i] != 2 * n_list[i - 1]) throw std::invalid_argument("study: N list must double");
        }
        if (sigma && !(*sigma > 0.0)) throw std::invalid_argument("study: sigma must be positive");
        if (quad_error < 1 || quad_error > 32) throw std::invalid_argument("study: error quadrature must be 1..32");
        if (quad_assembly > 64) throw std::invalid_argument("study: assembly quadrature must be <= 64");
        if (jobs < 1) throw std::invalid_argument("study: jobs must be >= 1");
    }
};

/// nmin, 2 nmin, ... up to nmax inclusive; empty when nmin > nmax.
inline std::vector<int> doubling_sequence(int nmin, int nmax) {
    if (nmin < 1) throw std::invalid_argument("doubling_sequence: nmin must be positive");
    std::vector<int> out;
    for (long n = nmin; n <= nmax; n *= 2) out.push_back(static_cast<int>(n));
    return out;
}

struct StudyRow {
    MeshKind kind = MeshKind::Shishkin;
    int k = 0;
    double eps = 0.0;
    int n = 0;
    bool failed = false;
    std::string error_message;
    double energy = 0.0, l2_u = 0.0, l2_p = 0.0;
    std::optional<double> rate_r2, rate_rs, rate_l2u, rate_l2p;
    // metadata
    double sigma = 0.0;
    bool clamped = false;
    double growth_factor = 0.0;
    double quad_change = 0.0;  // max relative change of the errors under 2x error quadrature
    double seconds = 0.0;
};

struct ConvergenceReport {
    std::vector<StudyRow> rows;
    int quad_error = 20;

    bool any_failed() const {
        return std::any_of(rows.begin(), rows.end(), [](const StudyRow& r) { return r.failed; });
    }
    std::optional<StudyRow> find(MeshKind kind, int k, double eps, int n) const {
        for (const auto& r : rows)
            if (r.kind == kind && r.k == k && r.eps == eps && r.n == n) return r;
        return std::nullopt;
    }
};

/// Solves one (kind, k, eps, N) case of the layer problem. Never throws;
/// failures are reported through the row.
inline StudyRow run_case(const StudyConfig& cfg, MeshKind kind, int k, double eps, int n) {
    StudyRow row;
    row.kind = kind;
    row.k = k;
    row.eps = eps;
    row.n = n;
    row.sigma = cfg.sigma_for(k);
    const auto start = std::chrono::steady_clock::now();
    try {
        const TestCase tc = paper_case(eps);
        auto mesh = std::make_shared<const Mesh>(build_mesh({kind, n, eps, row.sigma, 1.0}));
        row.clamped = mesh->clamped();
        const LdgSolution w = solve_ldg(tc.problem, mesh, k, gauss_quadrature(cfg.assembly_points(k)));
        row.growth_factor = w.diagnostics.growth_factor;
        const ErrorRecord err = compute_errors(tc.exact, w, tc.problem, gauss_quadrature(cfg.quad_error));
        row.energy = err.energy;
        row.l2_u = err.l2_u;
        row.l2_p = err.l2_p;
        if (cfg.quad_check) {
            const ErrorRecord fine = compute_errors(tc.exact, w, tc.problem, gauss_quadrature(2 * cfg.quad_error));
            auto rel = [](double a, double b) { return b > 0.0 ? std::abs(a - b) / b : std::abs(a - b); };
            row.quad_change = std::max({rel(err.energy, fine.energy), rel(err.l2_u, fine.l2_u), rel(err.l2_p, fine.l2_p)});
        }
        if (!std::isfinite(row.energy)) throw std::runtime_error("non-finite energy error");
    } catch (const std::exception& ex) {
        row.failed = true;
        row.error_message = ex.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

/// Fills the rate columns from consecutive rows of each sweep.
inline void fill_rates(std::vector<StudyRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const StudyRow& prev = rows[i - 1];
        StudyRow& cur = rows[i];
        if (prev.kind != cur.kind || prev.k != cur.k || prev.eps != cur.eps || cur.n != 2 * prev.n) continue;
        if (prev.failed || cur.failed) continue;
        auto safe = [](auto fn) -> std::optional<double> {
            try {
                return fn();
            } catch (const std::domain_error&) {
                return std::nullopt;
            }
        };
        cur.rate_r2 = safe([&] { return rate_r2(prev.energy, cur.energy); });
        cur.rate_l2u = safe([&] { return rate_r2(prev.l2_u, cur.l2_u); });
        cur.rate_l2p = safe([&] { return rate_r2(prev.l2_p, cur.l2_p); });
        if (cur.kind == MeshKind::Shishkin) cur.rate_rs = safe([&] { return rate_rs(prev.energy, cur.energy, prev.n); });
    }
}

/// Runs every (kind, k, eps, N) case, ordered by kind, k, eps, then N.
inline ConvergenceReport run_study(const StudyConfig& cfg) {
    cfg.validate();
    struct Job {
        MeshKind kind;
        int k;
        double eps;
        int n;
    };
    std::vector<Job> jobs;
    for (MeshKind kind : cfg.mesh_kinds)
        for (int k : cfg.degrees)
            for (double eps : cfg.eps_list)
                for (int n : cfg.n_list) jobs.push_back({kind, k, eps, n});

    ConvergenceReport report;
    report.quad_error = cfg.quad_error;
    report.rows.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
            report.rows[i] = run_case(cfg, jobs[i].kind, jobs[i].k, jobs[i].eps, jobs[i].n);
    };
    const int threads = std::min<int>(cfg.jobs, static_cast<int>(jobs.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    fill_rates(report.rows);
    return report;
}

// ---------------------------------------------------------------------------
// Output

inline std::string format_error(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

inline std::string format_rate(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    // avoid "-0.00"
    if (std::string(buf) == "-0.00") return "0.00";
    return buf;
}

/// Shortest decimal form of eps, e.g. 1e-08 -> "1e-08".
inline std::string format_eps(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", eps);
    return buf;
}

inline constexpr const char* kCsvHeader =
    "mesh,k,epsilon,N,energy_error,energy_rate_r2,energy_rate_rs,l2u_error,l2u_rate,l2p_error,l2p_rate";

inline std::string emit_csv(const ConvergenceReport& report) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto& r : report.rows) {
        os << short_name(r.kind) << ',' << r.k << ',' << format_eps(r.eps) << ',' << r.n << ',';
        if (r.failed) {
            os << "ERR,,,ERR,,ERR,\n";
            continue;
        }
        os << format_error(r.energy) << ',' << format_rate(r.rate_r2) << ',' << format_rate(r.rate_rs) << ','
           << format_error(r.l2_u) << ',' << format_rate(r.rate_l2u) << ',' << format_error(r.l2_p) << ','
           << format_rate(r.rate_l2p) << '\n';
    }
    return os.str();
}

/// One table per (eps, k): N | S error | r_s | r_2 | BS error | r_2 | B error | r_2,
/// with columns only for the kinds present.
inline std::string emit_markdown(const ConvergenceReport& report) {
    std::vector<double> eps_order;
    std::vector<int> k_order, n_order;
    std::vector<MeshKind> kinds;
    auto push_unique = [](auto& v, auto x) {
        if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
    };
    for (const auto& r : report.rows) {
        push_unique(eps_order, r.eps);
        push_unique(k_order, r.k);
        push_unique(n_order, r.n);
        push_unique(kinds, r.kind);
    }
    std::sort(n_order.begin(), n_order.end());

    std::ostringstream os;
    for (double eps : eps_order) {
        for (int k : k_order) {
            os << "### epsilon = " << format_eps(eps) << ", k = " << k << "\n\n| N |";
            std::string rule = "|---:|";
            for (MeshKind kind : kinds) {
                os << ' ' << short_name(kind) << " error |";
                rule += "---:|";
                if (kind == MeshKind::Shishkin) {
                    os << " r_s |";
                    rule += "---:|";
                }
                os << " r_2 |";
                rule += "---:|";
            }
            os << '\n' << rule << '\n';
            for (int n : n_order) {
                os << "| " << n << " |";
                for (MeshKind kind : kinds) {
                    const auto row = report.find(kind, k, eps, n);
                    const bool shishkin = kind == MeshKind::Shishkin;
                    if (!row) {
                        os << (shishkin ? "  |  |  |" : "  |  |");
                    } else if (row->failed) {
                        os << (shishkin ? " ERR |  |  |" : " ERR |  |");
                    } else {
                        os << ' ' << format_error(row->energy) << " |";
                        if (shishkin) os << ' ' << format_rate(row->rate_rs) << " |";
                        os << ' ' << format_rate(row->rate_r2) << " |";
                    }
                }
                os << '\n';
            }
            os << '\n';
        }
    }
    return os.str();
}

inline std::string emit_table(const ConvergenceReport& report, OutputFormat format) {
    return format == OutputFormat::Csv ? emit_csv(report) : emit_markdown(report);
}

/// Writes energy_*, l2u_* and l2p_* files into dir, one per (kind, k, eps).
/// Columns: N, error, reference slope normalized to the first point.
/// Returns the paths written.
inline std::vector<std::filesystem::path> emit_plotdata(const ConvergenceReport& report,
                                                        const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("plotdata: cannot create directory " + dir.string() + ": " + ec.message());

    std::map<std::tuple<int, int, double>, std::vector<const StudyRow*>> groups;
    for (const auto& r : report.rows)
        if (!r.failed) groups[{static_cast<int>(r.kind), r.k, r.eps}].push_back(&r);

    struct Quantity {
        const char* prefix;
        const char* label;
        double (*get)(const StudyRow&);
        double extra_order;  // reference slope is k + extra_order
    };
    const Quantity quantities[] = {
        {"energy", "energy_error", [](const StudyRow& r) { return r.energy; }, 0.5},
        {"l2u", "l2u_error", [](const StudyRow& r) { return r.l2_u; }, 1.0},
        {"l2p", "l2p_error", [](const StudyRow& r) { return r.l2_p; }, 1.0},
    };

    std::vector<fs::path> written;
    for (auto& [key, rows] : groups) {
        std::sort(rows.begin(), rows.end(), [](const StudyRow* a, const StudyRow* b) { return a->n < b->n; });
        const StudyRow& first = *rows.front();
        for (const auto& qty : quantities) {
            const std::string name = std::string(qty.prefix) + "_" + std::string(short_name(first.kind)) + "_k" +
                                     std::to_string(first.k) + "_eps" + format_eps(first.eps) + ".dat";
            const fs::path path = dir / name;
            std::ofstream out(path);
            if (!out) throw std::runtime_error("plotdata: cannot open " + path.string() + " for writing");
            const double order = first.k + qty.extra_order;
            const double e0 = qty.get(first);
            char buf[128];
            std::snprintf(buf, sizeof buf, "# N %s reference_N^-%.1f mesh=%s k=%d eps=%s\n", qty.label, order,
                          std::string(short_name(first.kind)).c_str(), first.k, format_eps(first.eps).c_str());
            out << buf;
            for (const StudyRow* r : rows) {
                const double ref = e0 * std::pow(static_cast<double>(first.n) / r->n, order);
                std::snprintf(buf, sizeof buf, "%d %.6e %.6e\n", r->n, qty.get(*r), ref);
                out << buf;
            }
            if (!out) throw std::runtime_error("plotdata: write failed for " + path.string());
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace ldg3
