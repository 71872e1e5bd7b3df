// Convergence-study driver for the LDG solver on layer-adapted meshes.
//
//   ldg3_study --mesh s,bs,b --k 0..3 --eps 1e-8 --nmin 16 --nmax 512
//   ldg3_study mesh --kind bs --n 16 --eps 1e-8 --sigma 2.5
//   ldg3_study matrix --kind s --n 8 --k 1 --eps 1e-4

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ldg3/ldg3.hpp"

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) parts.push_back(item);
    return parts;
}

std::vector<ldg3::MeshKind> parse_kinds(const std::string& text) {
    std::vector<ldg3::MeshKind> kinds;
    for (const auto& s : split(text, ',')) kinds.push_back(ldg3::parse_mesh_kind(s));
    if (kinds.empty()) throw std::invalid_argument("--mesh: no mesh kinds given");
    return kinds;
}

/// "0..3" or "1,3".
std::vector<int> parse_degrees(const std::string& text) {
    std::vector<int> out;
    if (auto dots = text.find(".."); dots != std::string::npos) {
        const int lo = std::stoi(text.substr(0, dots));
        const int hi = std::stoi(text.substr(dots + 2));
        for (int k = lo; k <= hi; ++k) out.push_back(k);
    } else {
        for (const auto& s : split(text, ',')) out.push_back(std::stoi(s));
    }
    if (out.empty()) throw std::invalid_argument("--k: no degrees given");
    return out;
}

std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> out;
    for (const auto& s : split(text, ',')) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("not a number: " + s);
        out.push_back(v);
    }
    return out;
}

std::optional<double> parse_sigma(const std::string& text) {
    if (text == "auto") return std::nullopt;
    return parse_reals(text).at(0);
}

int run_mesh(const std::string& kind, int n, double eps, const std::string& sigma, double alpha) {
    const double s = parse_sigma(sigma).value_or(2.5);
    const ldg3::Mesh mesh = ldg3::build_mesh({ldg3::parse_mesh_kind(kind), n, eps, s, alpha});
    std::printf("# kind=%s N=%d eps=%s sigma=%g tau=%.17g clamped=%d\n# i x_i 1-x_i\n",
                std::string(ldg3::short_name(mesh.spec().kind)).c_str(), n, ldg3::format_eps(eps).c_str(), s,
                mesh.tau(), mesh.clamped() ? 1 : 0);
    for (int i = 0; i <= n; ++i) std::printf("%d %.17g %.17g\n", i, mesh.node(i), mesh.offset(i));
    return 0;
}

int run_matrix(const std::string& kind, int n, int k, double eps, const std::string& sigma, bool with_rhs) {
    const double s = parse_sigma(sigma).value_or(k + 1.5);
    const ldg3::TestCase tc = ldg3::paper_case(eps);
    auto mesh = std::make_shared<const ldg3::Mesh>(ldg3::build_mesh({ldg3::parse_mesh_kind(kind), n, eps, s, 1.0}));
    const ldg3::BlockSystem sys = ldg3::assemble(tc.problem, mesh, k, ldg3::gauss_quadrature(k + 3));
    std::printf("%% %zu x %zu, bandwidths %zu/%zu\n", sys.matrix.size(), sys.matrix.size(), sys.matrix.lower(),
                sys.matrix.upper());
    ldg3::write_coordinate(std::cout, sys);
    if (with_rhs) {
        std::printf("%% rhs\n");
        for (double v : sys.rhs) std::printf("%.17g\n", v);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDG convergence study for eps u''' - (a u')' + b u' + c u = f on layer-adapted meshes"};
    app.set_config("--config", "", "key=value file; command-line flags override it");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string mesh_text = "s,bs,b", k_text = "0..3", eps_text = "1e-8", sigma_text = "auto";
    std::string format_text = "csv", out_path, plot_dir;
    int nmin = 16, nmax = 512, jobs = 1, quad_assembly = -1, quad_error = 20;
    bool no_quad_check = false;
    app.add_option("--mesh", mesh_text, "mesh kinds: s, bs, b (comma separated)")->capture_default_str();
    app.add_option("--k", k_text, "degrees, as a range 0..3 or a list 1,2")->capture_default_str();
    app.add_option("--eps", eps_text, "perturbation parameters (comma separated)")->capture_default_str();
    app.add_option("--nmin", nmin, "smallest N")->capture_default_str();
    app.add_option("--nmax", nmax, "largest N (N doubles from nmin)")->capture_default_str();
    app.add_option("--sigma", sigma_text, "transition constant: auto (k+1.5) or a number")->capture_default_str();
    app.add_option("--format", format_text, "table format")->check(CLI::IsMember({"csv", "markdown"}))->capture_default_str();
    app.add_option("--out", out_path, "write the table here instead of stdout");
    app.add_option("--plotdata", plot_dir, "directory for per-sweep plot data files");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--quad-assembly", quad_assembly, "Gauss points for assembly (<= 0: k+3)")->capture_default_str();
    app.add_option("--quad-error", quad_error, "Gauss points for error norms")->capture_default_str();
    app.add_flag("--no-quad-check", no_quad_check, "skip the doubled-quadrature self-check");

    auto* mesh_cmd = app.add_subcommand("mesh", "print mesh nodes");
    std::string m_kind = "s", m_sigma = "auto";
    int m_n = 16;
    double m_eps = 1e-8, m_alpha = 1.0;
    mesh_cmd->add_option("--kind", m_kind, "s, bs or b")->capture_default_str();
    mesh_cmd->add_option("--n", m_n, "number of elements")->capture_default_str();
    mesh_cmd->add_option("--eps", m_eps, "perturbation parameter")->capture_default_str();
    mesh_cmd->add_option("--sigma", m_sigma, "transition constant (auto: 2.5)")->capture_default_str();
    mesh_cmd->add_option("--alpha", m_alpha, "lower bound of a(x)")->capture_default_str();

    auto* matrix_cmd = app.add_subcommand("matrix", "print the assembled system in coordinate form");
    std::string x_kind = "s", x_sigma = "auto";
    int x_n = 8, x_k = 1;
    double x_eps = 1e-4;
    bool x_rhs = false;
    matrix_cmd->add_option("--kind", x_kind, "s, bs or b")->capture_default_str();
    matrix_cmd->add_option("--n", x_n, "number of elements")->capture_default_str();
    matrix_cmd->add_option("--k", x_k, "polynomial degree")->capture_default_str();
    matrix_cmd->add_option("--eps", x_eps, "perturbation parameter")->capture_default_str();
    matrix_cmd->add_option("--sigma", x_sigma, "transition constant (auto: k+1.5)")->capture_default_str();
    matrix_cmd->add_flag("--rhs", x_rhs, "also print the right-hand side");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*mesh_cmd) return run_mesh(m_kind, m_n, m_eps, m_sigma, m_alpha);
        if (*matrix_cmd) return run_matrix(x_kind, x_n, x_k, x_eps, x_sigma, x_rhs);

        ldg3::StudyConfig cfg;
        cfg.mesh_kinds = parse_kinds(mesh_text);
        cfg.degrees = parse_degrees(k_text);
        cfg.eps_list = parse_reals(eps_text);
        cfg.n_list = ldg3::doubling_sequence(nmin, nmax);
        cfg.sigma = parse_sigma(sigma_text);
        cfg.quad_assembly = quad_assembly;
        cfg.quad_error = quad_error;
        cfg.quad_check = !no_quad_check;
        cfg.format = format_text == "csv" ? ldg3::OutputFormat::Csv : ldg3::OutputFormat::Markdown;
        cfg.output_path = out_path;
        cfg.jobs = jobs;

        const ldg3::ConvergenceReport report = ldg3::run_study(cfg);
        const std::string table = ldg3::emit_table(report, cfg.format);
        if (out_path.empty()) {
            std::cout << table;
        } else {
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
            out << table;
        }
        if (!plot_dir.empty()) ldg3::emit_plotdata(report, plot_dir);

        double total = 0.0, worst_quad = 0.0;
        for (const auto& r : report.rows) {
            total += r.seconds;
            worst_quad = std::max(worst_quad, r.quad_change);
            if (r.failed)
                std::fprintf(stderr, "ERR %s k=%d eps=%s N=%d: %s\n", std::string(ldg3::short_name(r.kind)).c_str(), r.k,
                             ldg3::format_eps(r.eps).c_str(), r.n, r.error_message.c_str());
            else if (r.clamped)
                std::fprintf(stderr, "note: tau clamped to 1/2 for %s k=%d eps=%s N=%d\n",
                             std::string(ldg3::short_name(r.kind)).c_str(), r.k, ldg3::format_eps(r.eps).c_str(), r.n);
        }
        std::fprintf(stderr, "%zu rows, %.2f s solver time", report.rows.size(), total);
        if (cfg.quad_check && !report.rows.empty())
            std::fprintf(stderr, ", max error change under %d-point quadrature %.2e", 2 * cfg.quad_error, worst_quad);
        std::fprintf(stderr, "\n");
        return report.any_failed() ? 1 : 0;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    }
}
