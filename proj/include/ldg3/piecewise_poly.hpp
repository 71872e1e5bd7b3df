#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldg3/mesh.hpp"

namespace ldg3 {

/// Which one-sided limit at a node: Minus is the trace from the element on the
/// left of x_j, Plus from the element on the right.
enum class Side { Minus, Plus };

/// Legendre L_m(t) and dL_m/dt for m = 0..k; exact at t = +-1.
inline void legendre_table(int k, double t, std::span<double> value, std::span<double> dvalue) {
    value[0] = 1.0;
    dvalue[0] = 0.0;
    if (k == 0) return;
    value[1] = t;
    dvalue[1] = 1.0;
    for (int m = 1; m < k; ++m) {
        const auto mu = static_cast<std::size_t>(m);
        value[mu + 1] = ((2.0 * m + 1.0) * t * value[mu] - m * value[mu - 1]) / (m + 1.0);
        dvalue[mu + 1] = dvalue[mu - 1] + (2.0 * m + 1.0) * value[mu];
    }
}

/// Values and x-derivatives of the L2(I_e)-orthonormal basis
/// phi_m = sqrt((2m+1)/h) L_m(t) at reference coordinate t.
inline void basis_table(int k, double t, double h, std::span<double> value, std::span<double> dvalue) {
    legendre_table(k, t, value, dvalue);
    for (int m = 0; m <= k; ++m) {
        const auto mu = static_cast<std::size_t>(m);
        const double c = std::sqrt((2.0 * m + 1.0) / h);
        value[mu] *= c;
        dvalue[mu] *= c * 2.0 / h;
    }
}

/// phi_m at the right (t = 1) or left (t = -1) end of an element of width h.
inline double basis_end_value(int m, double h, bool right) {
    const double c = std::sqrt((2.0 * m + 1.0) / h);
    return right || m % 2 == 0 ? c : -c;
}

/// Element-wise polynomial of degree <= k over a mesh, stored as
/// coefficients in the orthonormal shifted-Legendre basis of each element.
class PiecewisePoly {
public:
    static constexpr int kMaxDegree = 15;

    PiecewisePoly() = default;
    PiecewisePoly(std::shared_ptr<const Mesh> mesh, int k)
        : mesh_(std::move(mesh)), k_(checked_degree(k)),
          coeffs_(static_cast<std::size_t>(mesh_->num_elements()) * static_cast<std::size_t>(k_ + 1), 0.0) {}

    const Mesh& mesh() const { return *mesh_; }
    const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
    int degree() const { return k_; }
    int num_elements() const { return mesh_->num_elements(); }

    std::span<double> element(int e) { return {coeffs_.data() + offset(e), static_cast<std::size_t>(k_ + 1)}; }
    std::span<const double> element(int e) const {
        return {coeffs_.data() + offset(e), static_cast<std::size_t>(k_ + 1)};
    }
    std::vector<double>& coefficients() { return coeffs_; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    double value(int e, double t) const {
        std::array<double, kMaxDegree + 1> v{}, dv{};
        const auto kk = static_cast<std::size_t>(k_ + 1);
        basis_table(k_, t, mesh_->width(e), std::span(v).first(kk), std::span(dv).first(kk));
        double s = 0.0;
        auto c = element(e);
        for (std::size_t m = 0; m < kk; ++m) s += c[m] * v[m];
        return s;
    }

    double derivative(int e, double t) const {
        std::array<double, kMaxDegree + 1> v{}, dv{};
        const auto kk = static_cast<std::size_t>(k_ + 1);
        basis_table(k_, t, mesh_->width(e), std::span(v).first(kk), std::span(dv).first(kk));
        double s = 0.0;
        auto c = element(e);
        for (std::size_t m = 0; m < kk; ++m) s += c[m] * dv[m];
        return s;
    }

    double value_at(double x) const {
        const int e = mesh_->locate(x);
        const double t = 2.0 * (x - mesh_->node(e)) / mesh_->width(e) - 1.0;
        return value(e, t);
    }

    double right_end(int e) const {
        double s = 0.0;
        auto c = element(e);
        for (int m = 0; m <= k_; ++m) s += c[static_cast<std::size_t>(m)] * basis_end_value(m, mesh_->width(e), true);
        return s;
    }

    double left_end(int e) const {
        double s = 0.0;
        auto c = element(e);
        for (int m = 0; m <= k_; ++m) s += c[static_cast<std::size_t>(m)] * basis_end_value(m, mesh_->width(e), false);
        return s;
    }

    /// v_j^- (from I_j) or v_j^+ (from I_{j+1}) at node j.
    double trace(int j, Side side) const {
        const int n = num_elements();
        if (side == Side::Minus) {
            if (j < 1 || j > n) throw std::out_of_range("trace: minus side needs 1 <= j <= N, got " + std::to_string(j));
            return right_end(j - 1);
        }
        if (j < 0 || j > n - 1) throw std::out_of_range("trace: plus side needs 0 <= j <= N-1, got " + std::to_string(j));
        return left_end(j);
    }

    /// [v]_j = v_j^+ - v_j^- inside, [v]_0 = v_0^+, [v]_N = -v_N^-.
    double jump(int j) const {
        const int n = num_elements();
        if (j == 0) return left_end(0);
        if (j == n) return -right_end(n - 1);
        return left_end(j) - right_end(j - 1);
    }

    double element_norm(int e) const {
        double s = 0.0;
        for (double c : element(e)) s += c * c;
        return std::sqrt(s);
    }

    double l2_norm() const {
        double s = 0.0;
        for (double c : coeffs_) s += c * c;
        return std::sqrt(s);
    }

    bool same_space(const PiecewisePoly& other) const { return mesh_ == other.mesh_ && k_ == other.k_; }

    PiecewisePoly& operator+=(const PiecewisePoly& o) {
        check_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    PiecewisePoly& operator-=(const PiecewisePoly& o) {
        check_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    PiecewisePoly& operator*=(double s) {
        for (double& c : coeffs_) c *= s;
        return *this;
    }
    friend PiecewisePoly operator+(PiecewisePoly a, const PiecewisePoly& b) { return a += b; }
    friend PiecewisePoly operator-(PiecewisePoly a, const PiecewisePoly& b) { return a -= b; }
    friend PiecewisePoly operator*(double s, PiecewisePoly a) { return a *= s; }

private:
    static int checked_degree(int k) {
        if (k < 0 || k > kMaxDegree) throw std::invalid_argument("PiecewisePoly: degree outside [0, 15]");
        return k;
    }
    std::size_t offset(int e) const { return static_cast<std::size_t>(e) * static_cast<std::size_t>(k_ + 1); }
    void check_same(const PiecewisePoly& o) const {
        if (!same_space(o)) throw std::invalid_argument("PiecewisePoly: mesh or degree mismatch");
    }

    std::shared_ptr<const Mesh> mesh_;
    int k_ = 0;
    std::vector<double> coeffs_;
};

}  // namespace ldg3
