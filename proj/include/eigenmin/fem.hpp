// SPDX-License-Identifier: Apache-2.0
#pragma once

// P1 finite elements on the flat triangles of a TriMesh embedded in R^4.

#include "eigenmin/errors.hpp"
#include "eigenmin/format.hpp"
#include "eigenmin/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

namespace eigenmin {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Consistent mass, its row-sum lumping, and cotangent stiffness.
struct FemOperators {
    SparseMatrix mass;
    Eigen::VectorXd mass_lumped;
    SparseMatrix stiffness;

    Eigen::Index dim() const noexcept { return mass.rows(); }
};

inline constexpr double degenerate_area = 1e-14;

inline FemOperators assemble(const TriMesh& mesh) {
    const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
    std::vector<Eigen::Triplet<double>> mass_entries;
    std::vector<Eigen::Triplet<double>> stiff_entries;
    mass_entries.reserve(mesh.face_count() * 9);
    stiff_entries.reserve(mesh.face_count() * 9);

    const auto& x = mesh.vertices();
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        const Face& t = mesh.faces()[f];
        const std::array<Vec4, 3> p{x[static_cast<std::size_t>(t[0])], x[static_cast<std::size_t>(t[1])],
                                    x[static_cast<std::size_t>(t[2])]};
        const double area = triangle_area(p[0], p[1], p[2]);
        if (!(area >= degenerate_area)) throw AssemblyError("degenerate triangle", f);

        for (std::size_t k = 0; k < 3; ++k) {
            const int i = t[k];
            const int j = t[(k + 1) % 3];
            // Half the cotangent of the angle opposite edge (i, j).
            const Vec4 u = p[k] - p[(k + 2) % 3];
            const Vec4 v = p[(k + 1) % 3] - p[(k + 2) % 3];
            const double w = 0.5 * u.dot(v) / (2.0 * area);
            stiff_entries.emplace_back(i, j, -w);
            stiff_entries.emplace_back(j, i, -w);
            stiff_entries.emplace_back(i, i, w);
            stiff_entries.emplace_back(j, j, w);

            mass_entries.emplace_back(i, i, area / 6.0);
            mass_entries.emplace_back(i, j, area / 12.0);
            mass_entries.emplace_back(j, i, area / 12.0);
        }
    }

    FemOperators ops;
    ops.mass.resize(n, n);
    ops.stiffness.resize(n, n);
    ops.mass.setFromTriplets(mass_entries.begin(), mass_entries.end());
    ops.stiffness.setFromTriplets(stiff_entries.begin(), stiff_entries.end());
    ops.mass.makeCompressed();
    ops.stiffness.makeCompressed();
    ops.mass_lumped = ops.mass * Eigen::VectorXd::Ones(n);
    return ops;
}

namespace detail {

inline void require_size(const FemOperators& ops, const Eigen::VectorXd& u) {
    if (u.size() != ops.dim())
        throw InvalidArgument("nodal function has length " + std::to_string(u.size()) + ", mesh has " +
                              std::to_string(ops.dim()) + " vertices");
}

} // namespace detail

/// Nodal values f(vertex).
template <class Fn>
Eigen::VectorXd interpolate(const TriMesh& mesh, Fn&& f) {
    Eigen::VectorXd values(static_cast<Eigen::Index>(mesh.vertex_count()));
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        const double value = f(mesh.vertices()[v]);
        if (!std::isfinite(value))
            throw InvalidArgument("non-finite function value at vertex " + std::to_string(v));
        values[static_cast<Eigen::Index>(v)] = value;
    }
    return values;
}

/// Nodal restriction of the ambient coordinate x_i, 1-based.
inline Eigen::VectorXd coordinate_function(const TriMesh& mesh, int coord_index) {
    if (coord_index < 1 || coord_index > 4)
        throw InvalidArgument("coordinate index " + std::to_string(coord_index) + " outside [1, 4]");
    return interpolate(mesh, [coord_index](const Vec4& p) { return p[coord_index - 1]; });
}

inline double mass_norm_sq(const FemOperators& ops, const Eigen::VectorXd& u) { return u.dot(ops.mass * u); }

inline double energy(const FemOperators& ops, const Eigen::VectorXd& u) { return u.dot(ops.stiffness * u); }

/// uᵀSu / uᵀMu.
inline double rayleigh(const FemOperators& ops, const Eigen::VectorXd& u) {
    detail::require_size(ops, u);
    const double denom = mass_norm_sq(ops, u);
    if (!(denom > 1e-14 * u.squaredNorm())) throw InvalidArgument("Rayleigh quotient of a numerically zero function");
    return energy(ops, u) / denom;
}

/// u - c·1 with c the M-weighted mean of u.
inline Eigen::VectorXd project_mean_zero(const FemOperators& ops, const Eigen::VectorXd& u) {
    detail::require_size(ops, u);
    const double total = ops.mass_lumped.sum();
    const double c = ops.mass_lumped.dot(u) / total;
    return (u.array() - c).matrix();
}

/// P1 gradient of u on face f, as a vector of R^4 in the plane of the triangle.
inline Vec4 face_gradient(const TriMesh& mesh, std::size_t f, const Eigen::VectorXd& u) {
    const Face& t = mesh.faces()[f];
    const auto& x = mesh.vertices();
    const Vec4& p0 = x[static_cast<std::size_t>(t[0])];
    Eigen::Matrix<double, 4, 2> edges;
    edges.col(0) = x[static_cast<std::size_t>(t[1])] - p0;
    edges.col(1) = x[static_cast<std::size_t>(t[2])] - p0;
    const Eigen::Vector2d du(u[t[1]] - u[t[0]], u[t[2]] - u[t[0]]);
    const Eigen::Matrix2d gram = edges.transpose() * edges;
    return edges * gram.ldlt().solve(du);
}

namespace detail {

/// w with ⟨w, y⟩ = det[a b c y] for all y.
inline Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
    Vec4 n;
    for (int i = 0; i < 4; ++i) {
        Eigen::Matrix4d m;
        m.col(0) = a;
        m.col(1) = b;
        m.col(2) = c;
        m.col(3) = Vec4::Unit(i);
        n[i] = m.determinant();
    }
    return n;
}

/// Unit normals within S^3, oriented by the face orientation; the global sign makes the
/// first vertex normal's x3 component positive, or its first nonzero component otherwise.
inline std::vector<Vec4> vertex_normals_in_sphere(const TriMesh& mesh) {
    const auto& x = mesh.vertices();
    std::vector<Vec4> normals(mesh.vertex_count(), Vec4::Zero());
    for (const Face& t : mesh.faces()) {
        for (int k = 0; k < 3; ++k) {
            const auto v = static_cast<std::size_t>(t[static_cast<std::size_t>(k)]);
            const Vec4& a = x[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])];
            const Vec4& b = x[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 2) % 3)])];
            normals[v] += cross4(x[v], a - x[v], b - x[v]);
        }
    }
    for (std::size_t v = 0; v < normals.size(); ++v) {
        // Remove any radial drift and normalize.
        normals[v] -= normals[v].dot(x[v]) * x[v];
        normals[v].normalize();
    }
    const Vec4& first = normals.front();
    double reference = first[2];
    if (std::abs(reference) <= 1e-8) {
        for (int i = 0; i < 4; ++i)
            if (std::abs(first[i]) > 1e-8) {
                reference = first[i];
                break;
            }
    }
    if (reference < 0.0)
        for (Vec4& nrm : normals) nrm = -nrm;
    return normals;
}

} // namespace detail

/// Scalar mean curvature H̄ of a surface in S^3 from Δx = -2x + 2H̄ν, with the discrete
/// Δ = -(lumped M)^{-1} S applied to the coordinate columns.
inline Eigen::VectorXd mean_curvature(const TriMesh& mesh, const FemOperators& ops) {
    const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
    if (ops.dim() != n) throw InvalidArgument("operators do not belong to this mesh");
    Eigen::MatrixXd coords(n, 4);
    for (Eigen::Index v = 0; v < n; ++v) coords.row(v) = mesh.vertices()[static_cast<std::size_t>(v)].transpose();
    const Eigen::MatrixXd laplace = -(ops.mass_lumped.cwiseInverse().asDiagonal() * (ops.stiffness * coords));
    const auto normals = detail::vertex_normals_in_sphere(mesh);
    Eigen::VectorXd h(n);
    for (Eigen::Index v = 0; v < n; ++v) {
        const Vec4 defect = 0.5 * (laplace.row(v).transpose() + 2.0 * coords.row(v).transpose());
        h[v] = defect.dot(normals[static_cast<std::size_t>(v)]);
    }
    return h;
}

/// ∫(1 + H̄²) with lumped-mass quadrature.
inline double willmore_energy(const TriMesh& mesh, const FemOperators& ops) {
    const Eigen::VectorXd h = mean_curvature(mesh, ops);
    return (1.0 + h.array().square()).matrix().dot(ops.mass_lumped);
}

/// Per face, Σ_i |∇x_i|² over the four ambient coordinates.
inline Eigen::VectorXd coordinate_gradient_identity(const TriMesh& mesh, const FemOperators& ops) {
    if (ops.dim() != static_cast<Eigen::Index>(mesh.vertex_count()))
        throw InvalidArgument("operators do not belong to this mesh");
    std::array<Eigen::VectorXd, 4> coords;
    for (int i = 0; i < 4; ++i) coords[static_cast<std::size_t>(i)] = coordinate_function(mesh, i + 1);
    Eigen::VectorXd out(static_cast<Eigen::Index>(mesh.face_count()));
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        double sum = 0.0;
        for (const auto& c : coords) sum += face_gradient(mesh, f, c).squaredNorm();
        out[static_cast<Eigen::Index>(f)] = sum;
    }
    return out;
}

/// `row col value` lines sorted by (row, col), zero-based.
inline void write_coordinate_format(const SparseMatrix& m, std::ostream& os) {
    std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> entries;
    entries.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (Eigen::Index col = 0; col < m.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(m, col); it; ++it) entries.emplace_back(it.row(), it.col(), it.value());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    for (const auto& [r, c, v] : entries) os << r << ' ' << c << ' ' << format_real(v) << '\n';
}

} // namespace eigenmin
