#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ldg3/field.hpp"
#include "ldg3/piecewise_poly.hpp"
#include "ldg3/quadrature.hpp"

namespace ldg3 {

/// Minus collocates at the right end of each element, Plus at the left end.
enum class ProjectionSign { Minus, Plus };

/// Element moments <f, phi_m>_{I_e} for m = 0..count-1.
inline void element_moments(const Field& f, const Mesh& mesh, int e, int count, const Quadrature& quad,
                            std::span<double> out) {
    const double h = mesh.width(e);
    std::vector<double> v(static_cast<std::size_t>(count > 0 ? count : 1)), dv(v.size());
    for (int m = 0; m < count; ++m) out[static_cast<std::size_t>(m)] = 0.0;
    if (count == 0) return;
    for (int q = 0; q < quad.size(); ++q) {
        const double t = quad.nodes[static_cast<std::size_t>(q)];
        basis_table(count - 1, t, h, v, dv);
        const double fw = f(mesh.point(e, t)) * quad.weights[static_cast<std::size_t>(q)] * 0.5 * h;
        for (int m = 0; m < count; ++m) out[static_cast<std::size_t>(m)] += fw * v[static_cast<std::size_t>(m)];
    }
}

/// Local Gauss-Radau projection: on each element the result has the same
/// moments as f against P^{k-1} and matches f at one end point.
///
/// The local (k+1)x(k+1) system has identity rows for the moments in the
/// orthonormal basis, so it reduces to back substitution on the single
/// collocation row. Its pivot is phi_k at the collocated end.
inline PiecewisePoly project_gauss_radau(ProjectionSign sign, const Field& f, std::shared_ptr<const Mesh> mesh, int k,
                                         const Quadrature& quad) {
    PiecewisePoly out(mesh, k);
    const bool right = sign == ProjectionSign::Minus;
    for (int e = 0; e < mesh->num_elements(); ++e) {
        auto c = out.element(e);
        element_moments(f, *mesh, e, k, quad, c);
        const double h = mesh->width(e);
        const double target = f(mesh->node_point(right ? e + 1 : e));
        double partial = 0.0;
        for (int m = 0; m < k; ++m) partial += c[static_cast<std::size_t>(m)] * basis_end_value(m, h, right);
        const double pivot = basis_end_value(k, h, right);
        if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot))
            throw std::runtime_error("project_gauss_radau: singular local system");
        c[static_cast<std::size_t>(k)] = (target - partial) / pivot;
    }
    return out;
}

/// Element-wise L2 projection onto P^k.
inline PiecewisePoly project_l2(const Field& f, std::shared_ptr<const Mesh> mesh, int k, const Quadrature& quad) {
    PiecewisePoly out(mesh, k);
    for (int e = 0; e < mesh->num_elements(); ++e) element_moments(f, *mesh, e, k + 1, quad, out.element(e));
    return out;
}

}  // namespace ldg3
