#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ldg3/field.hpp"

namespace ldg3 {

/// Layer-adapted mesh families. Each one fixes a mesh-generating function
/// phi on [0, 1/2] with phi(0) = 0 and the characterising function psi = exp(-phi).
enum class MeshKind { Shishkin, BakhvalovShishkin, Bakhvalov };

inline std::string_view short_name(MeshKind kind) {
    switch (kind) {
        case MeshKind::Shishkin: return "S";
        case MeshKind::BakhvalovShishkin: return "BS";
        case MeshKind::Bakhvalov: return "B";
    }
    return "?";
}

/// Accepts "s", "bs", "b" (any case) and the long names.
inline MeshKind parse_mesh_kind(std::string_view text) {
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "s" || s == "shishkin") return MeshKind::Shishkin;
    if (s == "bs" || s == "bakhvalov-shishkin" || s == "bakhvalovshishkin") return MeshKind::BakhvalovShishkin;
    if (s == "b" || s == "bakhvalov") return MeshKind::Bakhvalov;
    throw std::invalid_argument("unknown mesh kind '" + std::string(text) + "'");
}

struct MeshSpec {
    MeshKind kind = MeshKind::Shishkin;
    int n = 16;
    double eps = 1e-4;
    double sigma = 2.5;
    double alpha = 1.0;

    void validate() const {
        if (n < 2 || n % 2 != 0)
            throw std::invalid_argument("mesh: N must be an even integer >= 2, got " + std::to_string(n));
        if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("mesh: eps must lie in (0,1)");
        if (!(sigma > 0.0)) throw std::invalid_argument("mesh: sigma must be positive");
        if (!(alpha > 0.0)) throw std::invalid_argument("mesh: alpha must be positive");
    }
};

/// phi(t) for t in [0, 1/2].
///
/// The logarithm arguments are formed as (1 - 2t) + 2*delta*t so that the
/// Bakhvalov value at t = 1/2 comes out as eps itself instead of 1 - (1 - eps).
inline double phi_eval(MeshKind kind, double t, int n, double eps) {
    if (!(t >= 0.0 && t <= 0.5)) throw std::domain_error("phi_eval: t outside [0, 1/2]");
    if (n < 2) throw std::domain_error("phi_eval: N < 2");
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("phi_eval: eps outside (0,1)");
    if (kind == MeshKind::Shishkin) return 2.0 * t * std::log(static_cast<double>(n));
    const double delta = kind == MeshKind::BakhvalovShishkin ? 1.0 / n : eps;
    const double arg = (1.0 - 2.0 * t) + 2.0 * delta * t;
    if (!(arg > 0.0)) throw std::domain_error("phi_eval: non-positive logarithm argument");
    return -std::log(arg);
}

/// Upper bound of phi' on [0, 1/2].
inline double phi_prime_max(MeshKind kind, int n, double eps) {
    switch (kind) {
        case MeshKind::Shishkin: return 2.0 * std::log(static_cast<double>(n));
        case MeshKind::BakhvalovShishkin: return 2.0 * n;
        case MeshKind::Bakhvalov: return 2.0 / eps;
    }
    return 0.0;
}

inline double phi_prime_min(MeshKind kind, int n, double /*eps*/) {
    return kind == MeshKind::Shishkin ? 2.0 * std::log(static_cast<double>(n)) : 2.0;
}

/// psi = exp(-phi).
inline double psi_eval(MeshKind kind, double t, int n, double eps) {
    return std::exp(-phi_eval(kind, t, n, eps));
}

/// max |psi'| on [0, 1/2]: 2 ln N for Shishkin, 2 otherwise.
inline double psi_prime_max(MeshKind kind, int n) {
    return kind == MeshKind::Shishkin ? 2.0 * std::log(static_cast<double>(n)) : 2.0;
}

struct Transition {
    double tau = 0.5;
    bool clamped = false;
};

/// tau = min{1/2, (sigma eps / alpha) phi(1/2)}.
inline Transition transition_tau(const MeshSpec& spec) {
    spec.validate();
    const double layer = spec.sigma * spec.eps / spec.alpha * phi_eval(spec.kind, 0.5, spec.n, spec.eps);
    if (layer >= 0.5) return {0.5, true};
    return {layer, false};
}

/// Partition x_0 = 0 < ... < x_N = 1 with the coarse half uniform on
/// [0, 1 - tau] and the fine half graded towards x = 1.
///
/// Offsets d_i = 1 - x_i are the primary data on the fine half; widths there
/// are offset differences, so elements of size ~1e-12 keep full relative
/// accuracy.
class Mesh {
public:
    Mesh() = default;

    const MeshSpec& spec() const { return spec_; }
    int num_elements() const { return spec_.n; }
    double tau() const { return tau_; }
    bool clamped() const { return clamped_; }

    double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    double offset(int i) const { return offsets_[static_cast<std::size_t>(i)]; }
    /// Width of element e = [x_e, x_{e+1}], 0-based.
    double width(int e) const { return widths_[static_cast<std::size_t>(e)]; }
    bool is_fine(int e) const { return e >= spec_.n / 2; }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& offsets() const { return offsets_; }
    const std::vector<double>& widths() const { return widths_; }

    Point node_point(int i) const { return {node(i), offset(i)}; }

    /// Image of the reference coordinate t in [-1,1] on element e.
    Point point(int e, double t) const {
        if (t == -1.0) return node_point(e);
        if (t == 1.0) return node_point(e + 1);
        const double h = width(e);
        const double x = node(e) + 0.5 * h * (1.0 + t);
        const double r = offset(e + 1) + 0.5 * h * (1.0 - t);
        return {x, r};
    }

    /// Element containing x; nodes belong to the element on their left except x_0.
    int locate(double x) const {
        auto it = std::lower_bound(nodes_.begin() + 1, nodes_.end(), x);
        if (it == nodes_.end()) return spec_.n - 1;
        return static_cast<int>(it - nodes_.begin()) - 1;
    }

    /// Arbitrary partition of a subinterval of [0,1] given by increasing
    /// nodes; offsets are 1 - x_i. The stored MeshSpec carries only N.
    static Mesh from_nodes(std::vector<double> nodes) {
        if (nodes.size() < 2) throw std::invalid_argument("mesh: need at least two nodes");
        Mesh m;
        m.spec_.n = static_cast<int>(nodes.size()) - 1;
        m.nodes_ = std::move(nodes);
        for (std::size_t i = 0; i < m.nodes_.size(); ++i) {
            m.offsets_.push_back(1.0 - m.nodes_[i]);
            if (i > 0) {
                const double h = m.nodes_[i] - m.nodes_[i - 1];
                if (!(h > 0.0)) throw std::invalid_argument("mesh: nodes must increase strictly");
                m.widths_.push_back(h);
            }
        }
        m.tau_ = m.offsets_[static_cast<std::size_t>(m.spec_.n / 2)];
        return m;
    }

    friend Mesh build_mesh(const MeshSpec& spec);

private:
    MeshSpec spec_;
    double tau_ = 0.5;
    bool clamped_ = false;
    std::vector<double> nodes_;
    std::vector<double> offsets_;
    std::vector<double> widths_;
};

/// Builds the mesh. When tau clamps to 1/2 the fine-part formula is rescaled
/// by tau / ((sigma eps / alpha) phi(1/2)) so that x_{N/2} = 1/2; for the
/// Shishkin kind this is the uniform mesh.
inline Mesh build_mesh(const MeshSpec& spec) {
    const Transition tr = transition_tau(spec);
    const int n = spec.n;
    const int half = n / 2;

    Mesh m;
    m.spec_ = spec;
    m.tau_ = tr.tau;
    m.clamped_ = tr.clamped;
    m.nodes_.assign(static_cast<std::size_t>(n) + 1, 0.0);
    m.offsets_.assign(static_cast<std::size_t>(n) + 1, 0.0);
    m.widths_.assign(static_cast<std::size_t>(n), 0.0);

    double scale = spec.sigma * spec.eps / spec.alpha;
    if (tr.clamped) scale = tr.tau / phi_eval(spec.kind, 0.5, n, spec.eps);

    for (int i = half; i <= n; ++i) {
        const double t = static_cast<double>(n - i) / n;
        m.offsets_[i] = i == n ? 0.0 : scale * phi_eval(spec.kind, t, n, spec.eps);
        m.nodes_[i] = 1.0 - m.offsets_[i];
    }
    m.offsets_[half] = tr.tau;
    m.nodes_[half] = 1.0 - tr.tau;
    const double coarse = 1.0 - m.tau_;
    for (int i = 0; i < half; ++i) {
        m.nodes_[i] = 2.0 * i / n * coarse;
        m.offsets_[i] = 1.0 - m.nodes_[i];
    }
    m.nodes_[n] = 1.0;

    for (int e = 0; e < n; ++e) {
        const double h = e >= half ? m.offsets_[e] - m.offsets_[e + 1] : m.nodes_[e + 1] - m.nodes_[e];
        if (!(h > 0.0))
            throw std::runtime_error("build_mesh: non-positive width in element " + std::to_string(e) +
                                     " (N too large for the floating-point resolution of eps)");
        m.widths_[e] = h;
    }
    return m;
}

}  // namespace ldg3
