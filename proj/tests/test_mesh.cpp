// SPDX-License-Identifier: Apache-2.0
#include "eigenmin/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>
#include <sstream>

using namespace eigenmin;

namespace {

constexpr double pi = std::numbers::pi;

std::string serialize(const TriMesh& m) {
    std::ostringstream os;
    write_mesh(m, os);
    return os.str();
}

void expect_mesh_error(const std::string& text, const std::string& fragment) {
    std::istringstream in(text);
    try {
        read_mesh(in);
        ADD_FAILURE() << "expected MeshError containing '" << fragment << "'";
    } catch (const MeshError& e) {
        EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
}

double order(double e0, double e1) { return std::log2(e0 / e1); }

} // namespace

TEST(Torus, SmallestGridCounts) {
    const auto m = generate_torus(3);
    const auto s = mesh_stats(m);
    EXPECT_EQ(s.vertex_count, 9u);
    EXPECT_EQ(m.edges().size(), 27u);
    EXPECT_EQ(s.face_count, 18u);
    EXPECT_EQ(s.euler_char, 0);
}

TEST(Torus, RejectsTooCoarse) { EXPECT_THROW(generate_torus(2), InvalidArgument); }

TEST(Torus, VerticesOnTorus) {
    const auto m = generate_torus(4);
    for (const auto& x : m.vertices()) {
        EXPECT_NEAR(x[0] * x[0] + x[1] * x[1], 0.5, 1e-12);
        EXPECT_NEAR(x[2] * x[2] + x[3] * x[3], 0.5, 1e-12);
    }
    ASSERT_TRUE(m.param_coords());
    EXPECT_EQ(m.param_coords()->size(), 16u);
}

TEST(Torus, AreaAtResolution64) {
    const auto s = mesh_stats(generate_torus(64));
    EXPECT_LT(std::abs(s.total_area - 2 * pi * pi) / (2 * pi * pi), 1e-3);
    const double expected_edge = pi * std::sqrt(2.0) / 64 * std::sqrt(2.0);
    EXPECT_LT(std::abs(s.max_edge - expected_edge) / expected_edge, 0.1);
}

TEST(Sphere, IcosahedronCounts) {
    const auto s = mesh_stats(generate_sphere(0));
    EXPECT_EQ(s.vertex_count, 12u);
    EXPECT_EQ(s.face_count, 20u);
    EXPECT_EQ(s.euler_char, 2);
}

TEST(Sphere, IcosahedronAreaClosedForm) {
    // Inscribed icosahedron: edge a = 4 / sqrt(10 + 2 sqrt 5), face area sqrt(3)/4 a^2.
    const double a = 4.0 / std::sqrt(10.0 + 2.0 * std::sqrt(5.0));
    const double expected = 20.0 * std::sqrt(3.0) / 4.0 * a * a;
    EXPECT_NEAR(expected, 9.5746, 1e-4);
    EXPECT_NEAR(mesh_stats(generate_sphere(0)).total_area, expected, 1e-12);
}

TEST(Sphere, OneSubdivisionCounts) {
    const auto s = mesh_stats(generate_sphere(1));
    EXPECT_EQ(s.vertex_count, 42u);
    EXPECT_EQ(s.face_count, 80u);
}

TEST(Sphere, AreaConvergence) {
    // Subdivision 4 misses 4pi by about 0.12%; level 5 comes within 0.1%.
    const double exact = 4 * pi;
    const double e4 = std::abs(mesh_stats(generate_sphere(4)).total_area - exact) / exact;
    const double e5 = std::abs(mesh_stats(generate_sphere(5)).total_area - exact) / exact;
    EXPECT_LT(e4, 1.3e-3);
    EXPECT_LT(e5, 1e-3);
}

TEST(Sphere, SubdivisionLimits) {
    EXPECT_THROW(generate_sphere(9), InvalidArgument);
    EXPECT_THROW(generate_sphere(-1), InvalidArgument);
}

TEST(Sphere, VerticesOnEquator) {
    for (const auto& x : generate_sphere(3).vertices()) {
        EXPECT_EQ(x[3], 0.0);
        EXPECT_NEAR(x.norm(), 1.0, 1e-12);
    }
}

TEST(Refine, TorusQuadruplesFaces) {
    const auto m = generate_torus(8);
    const auto r = refine(m);
    EXPECT_EQ(r.face_count(), 4 * m.face_count());
    EXPECT_EQ(mesh_stats(r).euler_char, 0);
    for (const auto& x : r.vertices()) {
        EXPECT_NEAR(x.head<2>().squaredNorm(), 0.5, 1e-12);
        EXPECT_NEAR(x.tail<2>().squaredNorm(), 0.5, 1e-12);
    }
    EXPECT_LT(mesh_stats(r).max_edge, 0.6 * mesh_stats(m).max_edge);
    ASSERT_TRUE(r.param_coords());
}

TEST(Refine, SphereMatchesNextLevel) {
    const auto a = refine(generate_sphere(1));
    const auto b = generate_sphere(2);
    EXPECT_EQ(mesh_stats(a), mesh_stats(b));
    auto key = [](const Vec4& x) { return std::array<double, 4>{x[0], x[1], x[2], x[3]}; };
    std::set<std::array<double, 4>> va, vb;
    for (const auto& x : a.vertices()) va.insert(key(x));
    for (const auto& x : b.vertices()) vb.insert(key(x));
    EXPECT_EQ(va, vb);
}

TEST(Refine, AreaOrderAtLeastSecond) {
    std::vector<double> errors;
    TriMesh m = generate_torus(8);
    for (int j = 0; j < 3; ++j) {
        errors.push_back(std::abs(mesh_stats(m).total_area - 2 * pi * pi));
        m = refine(m);
    }
    EXPECT_GE(order(errors[1], errors[2]), 1.9);
    EXPECT_NEAR(errors[0] / errors[1], 4.0, 0.2);

    errors.clear();
    for (int s = 2; s <= 4; ++s) errors.push_back(std::abs(mesh_stats(generate_sphere(s)).total_area - 4 * pi));
    EXPECT_GE(order(errors[1], errors[2]), 1.9);
}

TEST(Stats, Printing) {
    std::ostringstream os;
    os << mesh_stats(generate_torus(3));
    EXPECT_NE(os.str().find("euler_char: 0"), std::string::npos);
    EXPECT_NE(os.str().find("vertex_count: 9"), std::string::npos);
}

TEST(Io, TorusRoundTripIsBitExact) {
    const auto m = generate_torus(8);
    std::istringstream in(serialize(m));
    const auto back = read_mesh(in);
    ASSERT_EQ(back.vertex_count(), m.vertex_count());
    for (std::size_t v = 0; v < m.vertex_count(); ++v)
        for (int k = 0; k < 4; ++k) EXPECT_EQ(back.vertices()[v][k], m.vertices()[v][k]);
    EXPECT_EQ(back.faces(), m.faces());
    EXPECT_EQ(mesh_stats(back), mesh_stats(m));
    ASSERT_TRUE(back.surface());
    EXPECT_TRUE(back.surface()->is_torus());
    EXPECT_EQ(serialize(back), serialize(m));
}

TEST(Io, SphereRoundTripThroughFile) {
    const auto m = generate_sphere(3);
    const auto path = (std::filesystem::temp_directory_path() / "eigenmin_test_sphere.smesh").string();
    write_mesh(m, path);
    const auto back = read_mesh(path);
    std::filesystem::remove(path);
    EXPECT_EQ(serialize(back), serialize(m));
    ASSERT_TRUE(back.surface());
    EXPECT_FALSE(back.surface()->is_torus());
}

TEST(Io, CommentsAndBlankLines) {
    const std::string text = serialize(generate_sphere(0));
    std::string commented = "# icosahedron\n\n" + text;
    commented.insert(commented.find('\n', commented.find("SMESH")) + 1, "# counts follow\n");
    std::istringstream in(commented);
    EXPECT_EQ(read_mesh(in).face_count(), 20u);
}

TEST(Io, RejectsNonManifoldEdge) {
    // Duplicating a face puts each of its edges in three faces.
    std::string text = serialize(generate_sphere(0));
    text.replace(text.find("12 20"), 5, "12 21");
    text += "0 11 5\n";
    expect_mesh_error(text, "non-manifold edge");
}

TEST(Io, RejectsOffSphereVertexWithLineNumber) {
    std::string text = serialize(generate_sphere(0));
    const auto third_line = text.find('\n', text.find('\n') + 1) + 1;
    const auto end = text.find('\n', third_line);
    text.replace(third_line, end - third_line, "0.9 0 0 0");
    expect_mesh_error(text, "off-sphere vertex");
    expect_mesh_error(text, "line 3");
}

TEST(Io, RejectsMalformedInput) {
    expect_mesh_error("SMESH 3\n1 1\n", "SMESH 4");
    expect_mesh_error("SMESH 4\n2\n", "<V> <F>");
    expect_mesh_error("SMESH 4\n1 1\n1 0 zero 0\n", "malformed real");
    expect_mesh_error("SMESH 4\n1 1\n1 0 0 0\n0 0 7\n", "invalid vertex index");
    expect_mesh_error("SMESH 4\n3 1\n1 0 0 0\n0 1 0 0\n", "end of file");
}

TEST(Io, RejectsBoundaryAndOrientation) {
    std::vector<Vec4> v{Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0), Vec4(0, 0, 1, 0), Vec4(-1, 0, 0, 0)};
    EXPECT_THROW(TriMesh::create(v, {{0, 1, 2}}, std::nullopt), MeshError);
    try {
        // Tetrahedron with one face flipped.
        TriMesh::create(v, {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 3, 2}}, std::nullopt);
        ADD_FAILURE();
    } catch (const MeshError& e) {
        EXPECT_NE(std::string(e.what()).find("orientation"), std::string::npos) << e.what();
    }
    EXPECT_NO_THROW(TriMesh::create(v, {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}}, std::nullopt));
}

TEST(Io, RejectsWrongEulerCharacteristic) {
    // A closed tetrahedron with its vertices on the torus has the topology of a sphere.
    const auto t = CanonicalSurface::clifford_torus();
    std::vector<Vec4> v;
    for (double a : {0.0, 1.5, 3.0, 4.5}) v.push_back(embed(t, {{a, 2 * a}}).x);
    try {
        TriMesh::create(v, {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}}, t);
        ADD_FAILURE();
    } catch (const MeshError& e) {
        EXPECT_NE(std::string(e.what()).find("Euler characteristic 2"), std::string::npos) << e.what();
    }
}

TEST(Io, MissingFile) { EXPECT_THROW(read_mesh(std::string("/nonexistent/dir/x.smesh")), IoError); }

TEST(Io, UnwritablePath) { EXPECT_THROW(write_mesh(generate_torus(3), "/nonexistent/dir/x.smesh"), IoError); }
