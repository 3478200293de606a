// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eigenmin/canonical.hpp"
#include "eigenmin/errors.hpp"
#include "eigenmin/format.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace eigenmin {

using Vec4 = Eigen::Vector4d;
using Face = std::array<int, 3>;

struct Edge {
    int a;
    int b;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

namespace detail {

inline constexpr double on_sphere_tol = 1e-12;

inline int expected_euler(const CanonicalSurface& s) { return s.is_torus() ? 0 : 2; }

/// Checks every TriMesh invariant; throws MeshError naming the first violation.
inline void validate_mesh(const std::vector<Vec4>& vertices, const std::vector<Face>& faces,
                          const std::optional<CanonicalSurface>& surface) {
    const auto nv = static_cast<long long>(vertices.size());
    if (nv == 0 || faces.empty()) throw MeshError("empty mesh");
    if (surface && !(surface->is_torus() || surface->intrinsic_dim() == 2))
        throw MeshError("only two-dimensional surfaces in S^3 can be meshed");

    for (std::size_t v = 0; v < vertices.size(); ++v) {
        const Vec4& x = vertices[v];
        if (!x.allFinite()) throw MeshError("non-finite vertex " + std::to_string(v));
        if (std::abs(x.norm() - 1.0) > on_sphere_tol)
            throw MeshError("off-sphere vertex " + std::to_string(v));
        if (surface && surface->is_torus()) {
            const double r12 = x[0] * x[0] + x[1] * x[1];
            const double r34 = x[2] * x[2] + x[3] * x[3];
            if (std::abs(r12 - 0.5) > on_sphere_tol || std::abs(r34 - 0.5) > on_sphere_tol)
                throw MeshError("off-surface vertex " + std::to_string(v));
        } else if (surface && std::abs(x[3]) > on_sphere_tol) {
            throw MeshError("off-surface vertex " + std::to_string(v));
        }
    }

    // Directed edges sorted by (min, max); a closed oriented surface has each undirected
    // edge exactly once in each direction.
    std::vector<std::tuple<int, int, int>> half_edges;
    half_edges.reserve(faces.size() * 3);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& t = faces[f];
        for (int k = 0; k < 3; ++k) {
            if (t[k] < 0 || t[k] >= nv)
                throw MeshError("face " + std::to_string(f) + " index out of range");
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw MeshError("face " + std::to_string(f) + " repeats a vertex");
        for (int k = 0; k < 3; ++k) {
            const int a = t[k];
            const int b = t[(k + 1) % 3];
            half_edges.emplace_back(std::min(a, b), std::max(a, b), a < b ? 1 : -1);
        }
    }
    std::sort(half_edges.begin(), half_edges.end());
    std::size_t edge_count = 0;
    for (std::size_t i = 0; i < half_edges.size();) {
        std::size_t j = i;
        int forward = 0;
        int backward = 0;
        while (j < half_edges.size() && std::get<0>(half_edges[j]) == std::get<0>(half_edges[i]) &&
               std::get<1>(half_edges[j]) == std::get<1>(half_edges[i])) {
            (std::get<2>(half_edges[j]) > 0 ? forward : backward)++;
            ++j;
        }
        const std::string label =
            std::to_string(std::get<0>(half_edges[i])) + "-" + std::to_string(std::get<1>(half_edges[i]));
        if (j - i == 1) throw MeshError("boundary edge " + label);
        if (j - i > 2) throw MeshError("non-manifold edge " + label);
        if (forward != 1 || backward != 1) throw MeshError("inconsistent orientation at edge " + label);
        ++edge_count;
        i = j;
    }

    if (surface) {
        const long long chi = nv - static_cast<long long>(edge_count) + static_cast<long long>(faces.size());
        if (chi != expected_euler(*surface))
            throw MeshError("Euler characteristic " + std::to_string(chi) + " does not match " +
                            surface->name());
    }
}

inline Vec4 project_to_surface(const std::optional<CanonicalSurface>& surface, const Vec4& p) {
    if (surface && surface->is_torus()) {
        const double r = 1.0 / std::numbers::sqrt2;
        Vec4 q = p;
        q.head<2>() *= r / p.head<2>().norm();
        q.tail<2>() *= r / p.tail<2>().norm();
        return q;
    }
    if (surface) {
        Vec4 q = p;
        q[3] = 0.0;
        return q.normalized();
    }
    return p.normalized();
}

} // namespace detail

/// Closed, consistently oriented triangle mesh with vertices on the unit sphere S^3 ⊂ R^4.
/// `surface()` is empty for meshes of surfaces other than the canonical ones.
class TriMesh {
  public:
    static TriMesh create(std::vector<Vec4> vertices, std::vector<Face> faces,
                          std::optional<CanonicalSurface> surface,
                          std::optional<std::vector<ParamPoint>> params = std::nullopt) {
        detail::validate_mesh(vertices, faces, surface);
        if (params && params->size() != vertices.size())
            throw MeshError("parameter coordinates do not match vertex count");
        TriMesh mesh;
        mesh.vertices_ = std::move(vertices);
        mesh.faces_ = std::move(faces);
        mesh.surface_ = surface;
        if (!params && surface && surface->is_torus()) {
            std::vector<ParamPoint> chart;
            chart.reserve(mesh.vertices_.size());
            for (const Vec4& x : mesh.vertices_) chart.push_back(chart_coords(*surface, {x}));
            params = std::move(chart);
        }
        mesh.params_ = std::move(params);
        return mesh;
    }

    const std::vector<Vec4>& vertices() const noexcept { return vertices_; }
    const std::vector<Face>& faces() const noexcept { return faces_; }
    const std::optional<CanonicalSurface>& surface() const noexcept { return surface_; }
    const std::optional<std::vector<ParamPoint>>& param_coords() const noexcept { return params_; }

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t face_count() const noexcept { return faces_.size(); }

    /// Unique undirected edges, sorted.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(faces_.size() * 3 / 2);
        for (const Face& t : faces_)
            for (int k = 0; k < 3; ++k) {
                const int a = t[k];
                const int b = t[(k + 1) % 3];
                if (a < b) out.push_back({a, b});
            }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    TriMesh() = default;

    std::vector<Vec4> vertices_;
    std::vector<Face> faces_;
    std::optional<CanonicalSurface> surface_;
    std::optional<std::vector<ParamPoint>> params_;
};

/// Uniform (theta, phi) grid on the Clifford torus, each cell split along its (+theta, +phi) diagonal.
inline TriMesh generate_torus(int resolution) {
    if (resolution < 3) throw InvalidArgument("torus resolution must be >= 3");
    const auto surface = CanonicalSurface::clifford_torus();
    const int n = resolution;
    auto index = [n](int i, int j) { return ((i % n) * n) + (j % n); };

    std::vector<Vec4> vertices;
    std::vector<ParamPoint> params;
    vertices.reserve(static_cast<std::size_t>(n * n));
    params.reserve(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ParamPoint p{{detail::two_pi * i / n, detail::two_pi * j / n}};
            vertices.push_back(embed(surface, p).x);
            params.push_back(std::move(p));
        }
    }
    std::vector<Face> faces;
    faces.reserve(static_cast<std::size_t>(2 * n * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int a = index(i, j);
            const int b = index(i + 1, j);
            const int c = index(i + 1, j + 1);
            const int d = index(i, j + 1);
            faces.push_back({a, b, c});
            faces.push_back({a, c, d});
        }
    }
    return TriMesh::create(std::move(vertices), std::move(faces), surface, std::move(params));
}

/// Split each triangle 1 -> 4 at edge midpoints, projecting new vertices back onto the surface.
inline TriMesh refine(const TriMesh& mesh) {
    std::vector<Vec4> vertices = mesh.vertices();
    std::unordered_map<std::uint64_t, int> midpoint;
    midpoint.reserve(mesh.face_count() * 2);
    const auto nv = static_cast<std::uint64_t>(mesh.vertex_count());
    auto mid = [&](int a, int b) {
        const auto lo = static_cast<std::uint64_t>(std::min(a, b));
        const auto hi = static_cast<std::uint64_t>(std::max(a, b));
        const std::uint64_t key = lo * nv + hi;
        if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
        const Vec4 m = 0.5 * (mesh.vertices()[static_cast<std::size_t>(a)] +
                              mesh.vertices()[static_cast<std::size_t>(b)]);
        vertices.push_back(detail::project_to_surface(mesh.surface(), m));
        const int id = static_cast<int>(vertices.size()) - 1;
        midpoint.emplace(key, id);
        return id;
    };
    std::vector<Face> faces;
    faces.reserve(mesh.face_count() * 4);
    for (const Face& t : mesh.faces()) {
        const int ab = mid(t[0], t[1]);
        const int bc = mid(t[1], t[2]);
        const int ca = mid(t[2], t[0]);
        faces.push_back({t[0], ab, ca});
        faces.push_back({t[1], bc, ab});
        faces.push_back({t[2], ca, bc});
        faces.push_back({ab, bc, ca});
    }
    return TriMesh::create(std::move(vertices), std::move(faces), mesh.surface());
}

/// Icosahedron subdivided `subdivisions` times, in the slice x4 = 0 of R^4.
inline TriMesh generate_sphere(int subdivisions) {
    if (subdivisions < 0) throw InvalidArgument("sphere subdivisions must be >= 0");
    if (subdivisions > 8) throw InvalidArgument("sphere subdivisions must be <= 8");
    const double g = 0.5 * (1.0 + std::sqrt(5.0));
    const std::array<std::array<double, 3>, 12> corners{{{-1, g, 0},
                                                          {1, g, 0},
                                                          {-1, -g, 0},
                                                          {1, -g, 0},
                                                          {0, -1, g},
                                                          {0, 1, g},
                                                          {0, -1, -g},
                                                          {0, 1, -g},
                                                          {g, 0, -1},
                                                          {g, 0, 1},
                                                          {-g, 0, -1},
                                                          {-g, 0, 1}}};
    std::vector<Vec4> vertices;
    for (const auto& c : corners) vertices.push_back(Vec4(c[0], c[1], c[2], 0.0).normalized());
    std::vector<Face> faces{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                            {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                            {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                            {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    TriMesh mesh = TriMesh::create(std::move(vertices), std::move(faces), CanonicalSurface::equatorial_sphere(2));
    for (int s = 0; s < subdivisions; ++s) mesh = refine(mesh);
    return mesh;
}

struct MeshStats {
    std::size_t vertex_count;
    std::size_t face_count;
    long long euler_char;
    double max_edge;
    double total_area;

    friend bool operator==(const MeshStats&, const MeshStats&) = default;
};

/// Area of the flat triangle spanned by three points of R^4.
inline double triangle_area(const Vec4& a, const Vec4& b, const Vec4& c) {
    const Vec4 e1 = b - a;
    const Vec4 e2 = c - a;
    const double g11 = e1.squaredNorm();
    const double g22 = e2.squaredNorm();
    const double g12 = e1.dot(e2);
    return 0.5 * std::sqrt(std::max(0.0, g11 * g22 - g12 * g12));
}

inline MeshStats mesh_stats(const TriMesh& mesh) {
    const auto edges = mesh.edges();
    double max_edge = 0.0;
    for (const Edge& e : edges)
        max_edge = std::max(max_edge, (mesh.vertices()[static_cast<std::size_t>(e.a)] -
                                       mesh.vertices()[static_cast<std::size_t>(e.b)])
                                          .norm());
    double area = 0.0;
    for (const Face& t : mesh.faces())
        area += triangle_area(mesh.vertices()[static_cast<std::size_t>(t[0])],
                              mesh.vertices()[static_cast<std::size_t>(t[1])],
                              mesh.vertices()[static_cast<std::size_t>(t[2])]);
    const long long chi = static_cast<long long>(mesh.vertex_count()) - static_cast<long long>(edges.size()) +
                          static_cast<long long>(mesh.face_count());
    return {mesh.vertex_count(), mesh.face_count(), chi, max_edge, area};
}

inline std::ostream& operator<<(std::ostream& os, const MeshStats& s) {
    return os << "vertex_count: " << s.vertex_count << "\nface_count: " << s.face_count
              << "\neuler_char: " << s.euler_char << "\nmax_edge: " << format_real(s.max_edge)
              << "\ntotal_area: " << format_real(s.total_area) << '\n';
}

// SMESH format:
//   SMESH 4
//   <V> <F>
//   V lines of 4 reals, F lines of 3 zero-based indices. '#' starts a comment.

inline void write_mesh(const TriMesh& mesh, std::ostream& os) {
    os << "SMESH 4\n" << mesh.vertex_count() << ' ' << mesh.face_count() << '\n';
    for (const Vec4& x : mesh.vertices())
        os << format_real(x[0]) << ' ' << format_real(x[1]) << ' ' << format_real(x[2]) << ' '
           << format_real(x[3]) << '\n';
    for (const Face& t : mesh.faces()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

inline void write_mesh(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_mesh(mesh, out);
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line.substr(0, line.find('#')));
    for (std::string tok; in >> tok;) tokens.push_back(tok);
    return tokens;
}

/// Recognize a canonical surface from vertex positions; empty if neither matches.
inline std::optional<CanonicalSurface> infer_surface(const std::vector<Vec4>& vertices) {
    bool equator = true;
    bool torus = true;
    for (const Vec4& x : vertices) {
        equator = equator && std::abs(x[3]) <= on_sphere_tol;
        torus = torus && std::abs(x.head<2>().squaredNorm() - 0.5) <= on_sphere_tol &&
                std::abs(x.tail<2>().squaredNorm() - 0.5) <= on_sphere_tol;
    }
    if (torus) return CanonicalSurface::clifford_torus();
    if (equator) return CanonicalSurface::equatorial_sphere(2);
    return std::nullopt;
}

} // namespace detail

inline TriMesh read_mesh(std::istream& in) {
    std::size_t line_no = 0;
    std::string line;
    auto next = [&]() -> std::optional<std::vector<std::string>> {
        while (std::getline(in, line)) {
            ++line_no;
            auto tokens = detail::split_tokens(line);
            if (!tokens.empty()) return tokens;
        }
        return std::nullopt;
    };

    auto header = next();
    if (!header || header->size() != 2 || (*header)[0] != "SMESH" || (*header)[1] != "4")
        throw MeshError("expected header 'SMESH 4'", line_no);
    auto counts = next();
    if (!counts || counts->size() != 2) throw MeshError("expected '<V> <F>'", line_no);
    const auto nv = parse_integer((*counts)[0]);
    const auto nf = parse_integer((*counts)[1]);
    if (!nv || !nf || *nv <= 0 || *nf <= 0) throw MeshError("invalid vertex or face count", line_no);

    std::vector<Vec4> vertices;
    vertices.reserve(static_cast<std::size_t>(*nv));
    for (long long v = 0; v < *nv; ++v) {
        auto tokens = next();
        if (!tokens) throw MeshError("unexpected end of file in vertex block", line_no);
        if (tokens->size() != 4) throw MeshError("vertex line needs 4 reals", line_no);
        Vec4 x;
        for (int k = 0; k < 4; ++k) {
            auto value = parse_real((*tokens)[static_cast<std::size_t>(k)]);
            if (!value) throw MeshError("malformed real '" + (*tokens)[static_cast<std::size_t>(k)] + "'", line_no);
            x[k] = *value;
        }
        if (std::abs(x.norm() - 1.0) > detail::on_sphere_tol) throw MeshError("off-sphere vertex", line_no);
        vertices.push_back(x);
    }
    std::vector<Face> faces;
    faces.reserve(static_cast<std::size_t>(*nf));
    for (long long f = 0; f < *nf; ++f) {
        auto tokens = next();
        if (!tokens) throw MeshError("unexpected end of file in face block", line_no);
        if (tokens->size() != 3) throw MeshError("face line needs 3 indices", line_no);
        Face t;
        for (int k = 0; k < 3; ++k) {
            auto idx = parse_integer((*tokens)[static_cast<std::size_t>(k)]);
            if (!idx || *idx < 0 || *idx >= *nv) throw MeshError("invalid vertex index", line_no);
            t[static_cast<std::size_t>(k)] = static_cast<int>(*idx);
        }
        faces.push_back(t);
    }
    if (next()) throw MeshError("trailing data after face block", line_no);
    const auto surface = detail::infer_surface(vertices);
    return TriMesh::create(std::move(vertices), std::move(faces), surface);
}

inline TriMesh read_mesh(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_mesh(in);
}

} // namespace eigenmin
