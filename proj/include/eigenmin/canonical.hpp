// SPDX-License-Identifier: Apache-2.0
#pragma once

// Exact analytic layer for the two canonical minimal hypersurfaces of the unit sphere:
// the equatorial sphere S^n = S^{n+1} ∩ {x_{n+2} = 0} and the Clifford torus
// {x1^2 + x2^2 = x3^2 + x4^2 = 1/2} ⊂ S^3.

#include "eigenmin/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace eigenmin {

enum class SurfaceKind { EquatorialSphere, CliffordTorus };

class CanonicalSurface {
  public:
    static CanonicalSurface clifford_torus() { return CanonicalSurface(SurfaceKind::CliffordTorus, 2); }

    static CanonicalSurface equatorial_sphere(int n) {
        if (n < 1) throw InvalidArgument("equatorial sphere dimension must be >= 1");
        return CanonicalSurface(SurfaceKind::EquatorialSphere, n);
    }

    SurfaceKind kind() const noexcept { return kind_; }
    int intrinsic_dim() const noexcept { return dim_; }
    int ambient_dim() const noexcept { return dim_ + 2; }
    bool is_torus() const noexcept { return kind_ == SurfaceKind::CliffordTorus; }

    std::string name() const {
        return is_torus() ? "clifford_torus" : "equatorial_sphere_" + std::to_string(dim_);
    }

    friend bool operator==(const CanonicalSurface&, const CanonicalSurface&) = default;

  private:
    CanonicalSurface(SurfaceKind kind, int dim) : kind_(kind), dim_(dim) {}

    SurfaceKind kind_;
    int dim_;
};

/// Chart coordinates. Torus: (theta, phi). Sphere S^n: normal coordinates y ∈ R^n at e1.
struct ParamPoint {
    std::vector<double> coords;
};

/// Point of R^{n+2}; lies on the unit sphere.
struct AmbientPoint {
    Eigen::VectorXd x;
};

namespace detail {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduce an angle difference into [-pi, pi].
inline double reduce_angle(double delta) { return std::remainder(delta, two_pi); }

inline void require_length(const ParamPoint& p, std::size_t expected) {
    if (p.coords.size() != expected)
        throw InvalidArgument("parameter point has " + std::to_string(p.coords.size()) +
                              " coordinates, expected " + std::to_string(expected));
    for (double c : p.coords)
        if (!std::isfinite(c)) throw InvalidArgument("parameter point has non-finite coordinate");
}

inline void require_ambient(const CanonicalSurface& s, const AmbientPoint& a) {
    if (a.x.size() != s.ambient_dim())
        throw InvalidArgument("ambient point has " + std::to_string(a.x.size()) +
                              " coordinates, expected " + std::to_string(s.ambient_dim()));
}

/// Angle between unit vectors, accurate near 0 and pi.
inline double unit_vector_angle(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    return 2.0 * std::atan2((p - q).norm(), (p + q).norm());
}

inline double torus_chart_distance(double dtheta, double dphi) {
    const double a = reduce_angle(dtheta);
    const double b = reduce_angle(dphi);
    double best = std::numeric_limits<double>::infinity();
    for (int k = -1; k <= 1; ++k) {
        for (int l = -1; l <= 1; ++l) {
            const double u = a + two_pi * k;
            const double v = b + two_pi * l;
            best = std::min(best, std::sqrt(u * u + v * v));
        }
    }
    return best / std::numbers::sqrt2;
}

} // namespace detail

inline std::size_t chart_dim(const CanonicalSurface& s) {
    return static_cast<std::size_t>(s.intrinsic_dim());
}

inline AmbientPoint embed(const CanonicalSurface& s, const ParamPoint& p) {
    detail::require_length(p, chart_dim(s));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(s.ambient_dim());
    if (s.is_torus()) {
        const double r = 1.0 / std::numbers::sqrt2;
        x << r * std::cos(p.coords[0]), r * std::sin(p.coords[0]), r * std::cos(p.coords[1]),
            r * std::sin(p.coords[1]);
        return {x};
    }
    // Exponential map of S^n at e1, tangent space spanned by e2..e_{n+1}.
    double radius = 0.0;
    for (double c : p.coords) radius += c * c;
    radius = std::sqrt(radius);
    x[0] = std::cos(radius);
    if (radius > 0.0) {
        const double scale = std::sin(radius) / radius;
        for (std::size_t j = 0; j < p.coords.size(); ++j) x[j + 1] = scale * p.coords[j];
    }
    return {x};
}

/// Inverse of `embed`. Torus angles land in [0, 2pi); sphere uses the logarithm at e1
/// (undefined at the antipode -e1, where the zero vector is returned).
inline ParamPoint chart_coords(const CanonicalSurface& s, const AmbientPoint& a) {
    detail::require_ambient(s, a);
    const auto& x = a.x;
    if (s.is_torus()) {
        auto angle = [](double c, double sn) {
            double t = std::atan2(sn, c);
            if (t < 0.0) t += detail::two_pi;
            if (t >= detail::two_pi) t = 0.0;
            return t;
        };
        return {{angle(x[0], x[1]), angle(x[2], x[3])}};
    }
    const int n = s.intrinsic_dim();
    Eigen::VectorXd tangent = x.segment(1, n);
    const double sin_r = tangent.norm();
    const double r = std::atan2(sin_r, x[0]);
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    if (sin_r > 0.0)
        for (int j = 0; j < n; ++j) y[static_cast<std::size_t>(j)] = r * tangent[j] / sin_r;
    return {y};
}

/// Intrinsic distance between chart points.
inline double geodesic_distance(const CanonicalSurface& s, const ParamPoint& p, const ParamPoint& q) {
    detail::require_length(p, chart_dim(s));
    detail::require_length(q, chart_dim(s));
    if (s.is_torus())
        return detail::torus_chart_distance(p.coords[0] - q.coords[0], p.coords[1] - q.coords[1]);
    return detail::unit_vector_angle(embed(s, p).x, embed(s, q).x);
}

/// Intrinsic distance between ambient points lying on the surface.
inline double geodesic_distance(const CanonicalSurface& s, const AmbientPoint& p, const AmbientPoint& q) {
    detail::require_ambient(s, p);
    detail::require_ambient(s, q);
    if (s.is_torus()) {
        const double dtheta = std::atan2(p.x[1], p.x[0]) - std::atan2(q.x[1], q.x[0]);
        const double dphi = std::atan2(p.x[3], p.x[2]) - std::atan2(q.x[3], q.x[2]);
        return detail::torus_chart_distance(dtheta, dphi);
    }
    return detail::unit_vector_angle(p.x, q.x);
}

struct SpectralLevel {
    double eigenvalue;
    int multiplicity;

    friend bool operator==(const SpectralLevel&, const SpectralLevel&) = default;
};

namespace detail {

inline long long binomial(long long n, long long k) {
    if (k < 0 || n < k) return 0;
    k = std::min(k, n - k);
    long long result = 1;
    for (long long j = 1; j <= k; ++j) result = result * (n - k + j) / j;
    return result;
}

} // namespace detail

/// Lowest `count` distinct Laplace–Beltrami eigenvalues with multiplicities.
inline std::vector<SpectralLevel> exact_spectrum(const CanonicalSurface& s, int count) {
    if (count < 1) throw InvalidArgument("exact_spectrum count must be >= 1");
    std::vector<SpectralLevel> levels;
    if (!s.is_torus()) {
        const long long n = s.intrinsic_dim();
        for (long long k = 0; k < count; ++k) {
            const long long mult = detail::binomial(k + n, n) - detail::binomial(k + n - 2, n);
            levels.push_back({static_cast<double>(k * (k + n - 1)), static_cast<int>(mult)});
        }
        return levels;
    }
    // Flat torus with circles of radius 1/sqrt2: e^{i(k theta + l phi)} has eigenvalue 2(k^2 + l^2).
    for (long long radius = 2;; radius *= 2) {
        std::map<long long, int> counts;
        const long long r2 = radius * radius;
        for (long long k = -radius; k <= radius; ++k)
            for (long long l = -radius; l <= radius; ++l)
                if (k * k + l * l <= r2) ++counts[k * k + l * l];
        if (static_cast<int>(counts.size()) >= count) {
            for (const auto& [norm_sq, mult] : counts) {
                if (static_cast<int>(levels.size()) == count) break;
                levels.push_back({2.0 * static_cast<double>(norm_sq), mult});
            }
            return levels;
        }
    }
}

/// Vol(S^n) = 2 pi^{(n+1)/2} / Gamma((n+1)/2); Clifford torus 2 pi^2.
inline double exact_area(const CanonicalSurface& s) {
    if (s.is_torus()) return 2.0 * std::numbers::pi * std::numbers::pi;
    const double half = 0.5 * (s.intrinsic_dim() + 1);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

/// |A|^2, constant on both surfaces.
inline double second_fundamental_norm_sq(const CanonicalSurface& s) { return s.is_torus() ? 2.0 : 0.0; }

/// Claimed lower bound 4 pi^{n/2} / Gamma(n/2 + 1) for the volume of a minimal Σ^n ⊂ S^{n+1}.
/// Equals four unit n-balls, so it matches Vol(S^n) only at n = 2 (n = 1 gives 8 against 2 pi,
/// n = 4 gives 2 pi^2 against 8 pi^2 / 3).
inline double volume_lower_bound(int n) {
    if (n < 1) throw InvalidArgument("volume bound dimension must be >= 1");
    return 4.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// Sup of |x_i| over the surface.
inline double coordinate_sup(const CanonicalSurface& s, int coord_index) {
    if (coord_index < 1 || coord_index > s.ambient_dim())
        throw InvalidArgument("coordinate index " + std::to_string(coord_index) + " outside [1, " +
                              std::to_string(s.ambient_dim()) + "]");
    if (s.is_torus()) return 1.0 / std::numbers::sqrt2;
    return coord_index == s.ambient_dim() ? 0.0 : 1.0;
}

} // namespace eigenmin
