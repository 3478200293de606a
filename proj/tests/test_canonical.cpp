// SPDX-License-Identifier: Apache-2.0
#include "eigenmin/canonical.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

using namespace eigenmin;

namespace {

constexpr double pi = std::numbers::pi;
const double r = 1.0 / std::sqrt(2.0);

// Brute-force torus distance: minimum over a wide lattice window, no angle reduction.
double torus_distance_oracle(double t1, double p1, double t2, double p2) {
    double best = INFINITY;
    for (int k = -8; k <= 8; ++k)
        for (int l = -8; l <= 8; ++l)
            best = std::min(best, std::hypot(t1 - t2 + 2 * pi * k, p1 - p2 + 2 * pi * l));
    return best / std::sqrt(2.0);
}

} // namespace

TEST(Surface, Dimensions) {
    const auto t = CanonicalSurface::clifford_torus();
    EXPECT_EQ(t.intrinsic_dim(), 2);
    EXPECT_EQ(t.ambient_dim(), 4);
    EXPECT_EQ(t.name(), "clifford_torus");
    const auto s = CanonicalSurface::equatorial_sphere(5);
    EXPECT_EQ(s.ambient_dim(), 7);
    EXPECT_EQ(s.name(), "equatorial_sphere_5");
    EXPECT_THROW(CanonicalSurface::equatorial_sphere(0), InvalidArgument);
}

TEST(Embed, TorusBasePoint) {
    const auto x = embed(CanonicalSurface::clifford_torus(), {{0.0, 0.0}}).x;
    EXPECT_NEAR(x[0], r, 1e-15);
    EXPECT_NEAR(x[1], 0.0, 1e-15);
    EXPECT_NEAR(x[2], r, 1e-15);
    EXPECT_NEAR(x[3], 0.0, 1e-15);
}

TEST(Embed, TorusQuarterTurn) {
    const auto x = embed(CanonicalSurface::clifford_torus(), {{pi / 2, 0.0}}).x;
    EXPECT_NEAR(x[0], 0.0, 1e-15);
    EXPECT_NEAR(x[1], r, 1e-15);
    EXPECT_NEAR(x[2], r, 1e-15);
    EXPECT_NEAR(x[3], 0.0, 1e-15);
}

TEST(Embed, SphereChartOrigin) {
    const auto x = embed(CanonicalSurface::equatorial_sphere(2), {{0.0, 0.0}}).x;
    EXPECT_EQ(x, (Eigen::Vector4d(1, 0, 0, 0)));
}

TEST(Embed, RejectsWrongLength) {
    EXPECT_THROW(embed(CanonicalSurface::clifford_torus(), {{0.0}}), InvalidArgument);
    EXPECT_THROW(embed(CanonicalSurface::equatorial_sphere(2), {{0.0, 0.0, 0.0}}), InvalidArgument);
}

TEST(Embed, DefiningEquationsOnRandomPoints) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    const auto t = CanonicalSurface::clifford_torus();
    const auto s = CanonicalSurface::equatorial_sphere(2);
    for (int j = 0; j < 1000; ++j) {
        const auto x = embed(t, {{angle(rng), angle(rng)}}).x;
        EXPECT_NEAR(x[0] * x[0] + x[1] * x[1], 0.5, 1e-12);
        EXPECT_NEAR(x[2] * x[2] + x[3] * x[3], 0.5, 1e-12);
        const auto y = embed(s, {{angle(rng) / 4, angle(rng) / 4}}).x;
        EXPECT_EQ(y[3], 0.0);
        EXPECT_NEAR(y.norm(), 1.0, 1e-12);
    }
}

TEST(ChartCoords, InvertsEmbed) {
    const auto t = CanonicalSurface::clifford_torus();
    const auto p = chart_coords(t, embed(t, {{1.25, 5.5}}));
    EXPECT_NEAR(p.coords[0], 1.25, 1e-14);
    EXPECT_NEAR(p.coords[1], 5.5, 1e-14);
    const auto s = CanonicalSurface::equatorial_sphere(2);
    const auto q = chart_coords(s, embed(s, {{0.3, -1.1}}));
    EXPECT_NEAR(q.coords[0], 0.3, 1e-14);
    EXPECT_NEAR(q.coords[1], -1.1, 1e-14);
}

TEST(Distance, Examples) {
    const auto t = CanonicalSurface::clifford_torus();
    const auto s = CanonicalSurface::equatorial_sphere(2);
    EXPECT_EQ(geodesic_distance(t, ParamPoint{{1.0, 2.0}}, ParamPoint{{1.0, 2.0}}), 0.0);
    const AmbientPoint e1{Eigen::Vector4d(1, 0, 0, 0)};
    const AmbientPoint e2{Eigen::Vector4d(0, 1, 0, 0)};
    EXPECT_NEAR(geodesic_distance(s, e1, e2), pi / 2, 1e-15);
    EXPECT_NEAR(geodesic_distance(t, ParamPoint{{0.0, 0.0}}, ParamPoint{{pi, pi}}), pi, 1e-15);
}

TEST(Distance, TorusMatchesWideLatticeSearch) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-20.0, 20.0);
    const auto t = CanonicalSurface::clifford_torus();
    for (int j = 0; j < 1000; ++j) {
        const double a = angle(rng), b = angle(rng), c = angle(rng), d = angle(rng);
        EXPECT_NEAR(geodesic_distance(t, ParamPoint{{a, b}}, ParamPoint{{c, d}}), torus_distance_oracle(a, b, c, d),
                    1e-12);
    }
}

TEST(Distance, AmbientAndChartAgree) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    for (const auto& s : {CanonicalSurface::clifford_torus(), CanonicalSurface::equatorial_sphere(2)}) {
        for (int j = 0; j < 200; ++j) {
            const ParamPoint p{{angle(rng) / 2, angle(rng) / 2}};
            const ParamPoint q{{angle(rng) / 2, angle(rng) / 2}};
            EXPECT_NEAR(geodesic_distance(s, p, q), geodesic_distance(s, embed(s, p), embed(s, q)), 1e-12);
        }
    }
}

TEST(Distance, SphereMatchesArccos) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    const auto s = CanonicalSurface::equatorial_sphere(2);
    for (int j = 0; j < 200; ++j) {
        Eigen::Vector4d p(g(rng), g(rng), g(rng), 0), q(g(rng), g(rng), g(rng), 0);
        p.normalize();
        q.normalize();
        EXPECT_NEAR(geodesic_distance(s, AmbientPoint{p}, AmbientPoint{q}), std::acos(std::clamp(p.dot(q), -1.0, 1.0)),
                    1e-7);
    }
}

TEST(Distance, MetricAxiomsOnRandomSamples) {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> angle(-7.0, 7.0);
    for (const auto& s : {CanonicalSurface::clifford_torus(), CanonicalSurface::equatorial_sphere(2)}) {
        for (int j = 0; j < 1000; ++j) {
            const ParamPoint p{{angle(rng), angle(rng)}};
            const ParamPoint q{{angle(rng), angle(rng)}};
            const ParamPoint w{{angle(rng), angle(rng)}};
            const double pq = geodesic_distance(s, p, q);
            EXPECT_GE(pq, 0.0);
            EXPECT_NEAR(pq, geodesic_distance(s, q, p), 1e-12);
            EXPECT_NEAR(geodesic_distance(s, p, p), 0.0, 1e-10);
            EXPECT_LE(geodesic_distance(s, p, w), pq + geodesic_distance(s, q, w) + 1e-12);
        }
    }
}

TEST(Distance, TorusShiftInvariance) {
    const auto t = CanonicalSurface::clifford_torus();
    const ParamPoint p{{0.4, 2.0}};
    const ParamPoint q{{5.1, 0.3}};
    const double base = geodesic_distance(t, p, q);
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b) {
            const ParamPoint ps{{p.coords[0] + 2 * pi * a, p.coords[1] + 2 * pi * b}};
            const ParamPoint qs{{q.coords[0] + 2 * pi * a, q.coords[1] + 2 * pi * b}};
            EXPECT_NEAR(geodesic_distance(t, ps, qs), base, 1e-12);
        }
}

TEST(Spectrum, TorusExamples) {
    const auto levels = exact_spectrum(CanonicalSurface::clifford_torus(), 3);
    ASSERT_EQ(levels.size(), 3u);
    EXPECT_EQ(levels[0], (SpectralLevel{0, 1}));
    EXPECT_EQ(levels[1], (SpectralLevel{2, 4}));
    EXPECT_EQ(levels[2], (SpectralLevel{4, 4}));
}

TEST(Spectrum, SphereExamples) {
    const auto levels = exact_spectrum(CanonicalSurface::equatorial_sphere(2), 3);
    ASSERT_EQ(levels.size(), 3u);
    EXPECT_EQ(levels[0], (SpectralLevel{0, 1}));
    EXPECT_EQ(levels[1], (SpectralLevel{2, 3}));
    EXPECT_EQ(levels[2], (SpectralLevel{6, 5}));
}

TEST(Spectrum, TorusMatchesBruteForceEnumeration) {
    std::map<int, int> counts;
    for (int k = -30; k <= 30; ++k)
        for (int l = -30; l <= 30; ++l) ++counts[2 * (k * k + l * l)];
    const auto levels = exact_spectrum(CanonicalSurface::clifford_torus(), 40);
    ASSERT_EQ(levels.size(), 40u);
    auto it = counts.begin();
    for (const auto& level : levels) {
        EXPECT_EQ(level.eigenvalue, it->first);
        EXPECT_EQ(level.multiplicity, it->second);
        ++it;
    }
}

// Dimension of degree-k harmonic polynomials in n+1 variables, counted as
// dim P_k - dim P_{k-2} with dim P_k = number of monomials.
TEST(Spectrum, SphereMultiplicitiesMatchHarmonicPolynomialCount) {
    auto monomials = [](int vars, int degree) {
        if (degree < 0) return 0LL;
        std::vector<long long> ways(static_cast<std::size_t>(degree) + 1, 0);
        ways[0] = 1;
        for (int v = 0; v < vars; ++v)
            for (int d = 1; d <= degree; ++d) ways[static_cast<std::size_t>(d)] += ways[static_cast<std::size_t>(d - 1)];
        return ways[static_cast<std::size_t>(degree)];
    };
    for (int n = 1; n <= 6; ++n) {
        const auto levels = exact_spectrum(CanonicalSurface::equatorial_sphere(n), 8);
        for (int k = 0; k < 8; ++k) {
            EXPECT_EQ(levels[static_cast<std::size_t>(k)].eigenvalue, k * (k + n - 1));
            EXPECT_EQ(levels[static_cast<std::size_t>(k)].multiplicity, monomials(n + 1, k) - monomials(n + 1, k - 2))
                << "n=" << n << " k=" << k;
        }
    }
}

TEST(Spectrum, FirstNonzeroEqualsDimension) {
    EXPECT_EQ(exact_spectrum(CanonicalSurface::clifford_torus(), 2)[1].eigenvalue, 2.0);
    for (int n = 1; n <= 7; ++n) EXPECT_EQ(exact_spectrum(CanonicalSurface::equatorial_sphere(n), 2)[1].eigenvalue, n);
}

TEST(Spectrum, RejectsZeroCount) {
    EXPECT_THROW(exact_spectrum(CanonicalSurface::clifford_torus(), 0), InvalidArgument);
}

TEST(Area, Examples) {
    EXPECT_NEAR(exact_area(CanonicalSurface::equatorial_sphere(2)), 4 * pi, 1e-13);
    EXPECT_NEAR(exact_area(CanonicalSurface::clifford_torus()), 2 * pi * pi, 1e-13);
    EXPECT_NEAR(exact_area(CanonicalSurface::equatorial_sphere(3)), 2 * pi * pi, 1e-13);
    EXPECT_NEAR(exact_area(CanonicalSurface::equatorial_sphere(1)), 2 * pi, 1e-13);
}

TEST(SecondFundamentalForm, Values) {
    EXPECT_EQ(second_fundamental_norm_sq(CanonicalSurface::clifford_torus()), 2.0);
    EXPECT_EQ(second_fundamental_norm_sq(CanonicalSurface::equatorial_sphere(2)), 0.0);
    EXPECT_EQ(second_fundamental_norm_sq(CanonicalSurface::equatorial_sphere(5)), 0.0);
}

TEST(VolumeBound, Values) {
    EXPECT_NEAR(volume_lower_bound(2), 4 * pi, 1e-13);
    EXPECT_NEAR(volume_lower_bound(4), 2 * pi * pi, 1e-13);
    EXPECT_NEAR(volume_lower_bound(1), 8.0, 1e-13);
    EXPECT_THROW(volume_lower_bound(0), InvalidArgument);
}

TEST(CoordinateSup, Values) {
    EXPECT_DOUBLE_EQ(coordinate_sup(CanonicalSurface::clifford_torus(), 3), r);
    EXPECT_EQ(coordinate_sup(CanonicalSurface::equatorial_sphere(2), 1), 1.0);
    EXPECT_EQ(coordinate_sup(CanonicalSurface::equatorial_sphere(2), 4), 0.0);
    EXPECT_THROW(coordinate_sup(CanonicalSurface::clifford_torus(), 5), InvalidArgument);
}
