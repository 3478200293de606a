// SPDX-License-Identifier: Apache-2.0
#pragma once

// Truncated coordinate functions u_β = x_i · (1 − β⁻¹ exp(−β d(p, p₀)²)) and β-sweeps of
// their Rayleigh quotients.

#include "eigenmin/canonical.hpp"
#include "eigenmin/errors.hpp"
#include "eigenmin/fem.hpp"
#include "eigenmin/format.hpp"
#include "eigenmin/mesh.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace eigenmin {

struct TruncationParams {
    int coord_index = 1; ///< 1-based ambient coordinate
    ParamPoint base_point{{0.0, 0.0}};
    double beta = 1.0;
};

struct SweepRecord {
    double beta;
    double rayleigh_raw;
    double rayleigh_projected;
    double orthogonality_defect;
    double sup_error;
    double grad_l2_error;
};

namespace detail {

inline void validate_truncation(const CanonicalSurface& s, const TruncationParams& params) {
    if (!(params.beta > 0.0) || !std::isfinite(params.beta)) throw InvalidArgument("beta must be a positive real");
    if (params.coord_index < 1 || params.coord_index > s.ambient_dim())
        throw InvalidArgument("coordinate index " + std::to_string(params.coord_index) + " outside [1, " +
                              std::to_string(s.ambient_dim()) + "]");
    detail::require_length(params.base_point, chart_dim(s));
}

/// φ_β(d) = 1 − β⁻¹ e^{−β d²}.
inline double truncation_factor(double beta, double d) { return 1.0 - std::exp(-beta * d * d) / beta; }

} // namespace detail

/// Nodal values of u_β on a canonical mesh, with closed-form geodesic distance to p₀.
inline Eigen::VectorXd build_truncation(const TriMesh& mesh, const TruncationParams& params) {
    if (!mesh.surface()) throw InvalidArgument("truncation needs a canonical surface with closed-form distance");
    const CanonicalSurface& s = *mesh.surface();
    detail::validate_truncation(s, params);
    const std::size_t i = static_cast<std::size_t>(params.coord_index - 1);

    Eigen::VectorXd values(static_cast<Eigen::Index>(mesh.vertex_count()));
    if (s.is_torus() && mesh.param_coords()) {
        const auto& chart = *mesh.param_coords();
        for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
            const double d = geodesic_distance(s, chart[v], params.base_point);
            values[static_cast<Eigen::Index>(v)] =
                mesh.vertices()[v][static_cast<Eigen::Index>(i)] * detail::truncation_factor(params.beta, d);
        }
        return values;
    }
    const AmbientPoint base = embed(s, params.base_point);
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        const Vec4& x = mesh.vertices()[v];
        const double d = geodesic_distance(s, AmbientPoint{Eigen::VectorXd(x)}, base);
        values[static_cast<Eigen::Index>(v)] = x[static_cast<Eigen::Index>(i)] * detail::truncation_factor(params.beta, d);
    }
    return values;
}

/// |∇u_β|² at chart point p from the product-rule expansion
///   ∇u_β = (1 − β⁻¹e^{−βd²}) ∇x_i + β⁻¹e^{−βd²} x_i ∇(βd²),
/// with analytic tangential gradients. Throws on the cut locus of p₀.
inline double truncation_gradient_sq(const CanonicalSurface& s, const TruncationParams& params, const ParamPoint& p) {
    detail::validate_truncation(s, params);
    detail::require_length(p, chart_dim(s));
    constexpr double cut_band = 1e-9;
    const double beta = params.beta;

    if (s.is_torus()) {
        const double a = detail::reduce_angle(p.coords[0] - params.base_point.coords[0]);
        const double b = detail::reduce_angle(p.coords[1] - params.base_point.coords[1]);
        if (std::abs(a) >= std::numbers::pi - cut_band || std::abs(b) >= std::numbers::pi - cut_band)
            throw InvalidArgument("point lies on the cut locus of the base point");
        const double d2 = 0.5 * (a * a + b * b);
        const double theta = p.coords[0];
        const double phi = p.coords[1];
        const double r = 1.0 / std::numbers::sqrt2;
        double x = 0.0;
        double dx_theta = 0.0;
        double dx_phi = 0.0;
        switch (params.coord_index) {
            case 1: x = r * std::cos(theta); dx_theta = -r * std::sin(theta); break;
            case 2: x = r * std::sin(theta); dx_theta = r * std::cos(theta); break;
            case 3: x = r * std::cos(phi); dx_phi = -r * std::sin(phi); break;
            default: x = r * std::sin(phi); dx_phi = r * std::cos(phi); break;
        }
        const double damp = std::exp(-beta * d2) / beta;
        // Chart derivatives of β d² are β·(a, b).
        const double u_theta = (1.0 - damp) * dx_theta + damp * x * beta * a;
        const double u_phi = (1.0 - damp) * dx_phi + damp * x * beta * b;
        // Flat metric g = ½·I on the (θ, φ) chart.
        return 2.0 * (u_theta * u_theta + u_phi * u_phi);
    }

    const Eigen::VectorXd x = embed(s, p).x;
    const Eigen::VectorXd x0 = embed(s, params.base_point).x;
    const Eigen::Index top = s.ambient_dim() - 1;
    auto tangent = [&](Eigen::VectorXd w) {
        w -= w.dot(x) * x;
        w[top] = 0.0;
        return w;
    };
    const double d = detail::unit_vector_angle(x, x0);
    if (d >= std::numbers::pi - cut_band) throw InvalidArgument("point lies on the cut locus of the base point");
    const auto i = static_cast<Eigen::Index>(params.coord_index - 1);
    const Eigen::VectorXd grad_x = tangent(Eigen::VectorXd::Unit(s.ambient_dim(), i));
    Eigen::VectorXd grad_d2 = Eigen::VectorXd::Zero(s.ambient_dim());
    if (d > 0.0) {
        const Eigen::VectorXd toward = tangent(x0);
        grad_d2 = -2.0 * d * toward / toward.norm();
    }
    const double damp = std::exp(-beta * d * d) / beta;
    const Eigen::VectorXd grad_u = (1.0 - damp) * grad_x + damp * x[i] * beta * grad_d2;
    return grad_u.squaredNorm();
}

/// |1ᵀMu| / (‖1‖_M ‖u‖_M), in [0, 1].
inline double orthogonality_defect(const FemOperators& ops, const Eigen::VectorXd& u) {
    detail::require_size(ops, u);
    const double uu = mass_norm_sq(ops, u);
    if (!(uu > 1e-14 * u.squaredNorm())) throw InvalidArgument("orthogonality defect of a numerically zero function");
    const double total = ops.mass_lumped.sum();
    return std::abs(ops.mass_lumped.dot(u)) / (std::sqrt(total) * std::sqrt(uu));
}

inline SweepRecord measure_truncation(const TriMesh& mesh, const FemOperators& ops, const TruncationParams& params) {
    const Eigen::VectorXd u = build_truncation(mesh, params);
    const Eigen::VectorXd x = coordinate_function(mesh, params.coord_index);
    const Eigen::VectorXd diff = u - x;
    SweepRecord rec{};
    rec.beta = params.beta;
    rec.rayleigh_raw = rayleigh(ops, u);
    rec.rayleigh_projected = rayleigh(ops, project_mean_zero(ops, u));
    rec.orthogonality_defect = orthogonality_defect(ops, u);
    rec.sup_error = diff.cwiseAbs().maxCoeff();
    rec.grad_l2_error = std::sqrt(std::max(0.0, energy(ops, diff)));
    return rec;
}

/// One record per β, in input order. β values must be positive and strictly ascending.
/// Records are computed on up to `threads` worker threads.
inline std::vector<SweepRecord> sweep_beta(const TriMesh& mesh, const FemOperators& ops, const TruncationParams& base,
                                           const std::vector<double>& betas, unsigned threads = 1) {
    if (betas.empty()) throw InvalidArgument("beta list is empty");
    for (std::size_t j = 0; j < betas.size(); ++j) {
        if (!(betas[j] > 0.0) || !std::isfinite(betas[j])) throw InvalidArgument("beta values must be positive");
        if (j > 0 && !(betas[j] > betas[j - 1])) throw InvalidArgument("beta values must be strictly ascending");
    }
    std::vector<SweepRecord> records(betas.size());
    auto work = [&](std::size_t j) {
        TruncationParams p = base;
        p.beta = betas[j];
        records[j] = measure_truncation(mesh, ops, p);
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(betas.size())));
    if (threads == 1) {
        for (std::size_t j = 0; j < betas.size(); ++j) work(j);
        return records;
    }
    // Validate once up front so worker threads never throw.
    TruncationParams probe = base;
    probe.beta = betas.front();
    if (!mesh.surface()) throw InvalidArgument("truncation needs a canonical surface with closed-form distance");
    detail::validate_truncation(*mesh.surface(), probe);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t j = t; j < betas.size(); j += threads) work(j);
        });
    for (auto& th : pool) th.join();
    return records;
}

inline void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& os) {
    os << "beta,rayleigh_raw,rayleigh_projected,orthogonality_defect,sup_error,grad_l2_error\n";
    for (const auto& r : records)
        os << format_real(r.beta) << ',' << format_real(r.rayleigh_raw) << ',' << format_real(r.rayleigh_projected)
           << ',' << format_real(r.orthogonality_defect) << ',' << format_real(r.sup_error) << ','
           << format_real(r.grad_l2_error) << '\n';
}

/// Decay curves φ_β(d) for plotting: `d,beta,phi` rows on a uniform grid of [0, max_distance].
inline void write_truncation_profile_csv(const std::vector<double>& betas, double max_distance, int samples,
                                         std::ostream& os) {
    if (samples < 2) throw InvalidArgument("profile needs at least 2 samples");
    os << "d,beta,phi\n";
    for (double beta : betas)
        for (int s = 0; s < samples; ++s) {
            const double d = max_distance * s / (samples - 1);
            os << format_real(d) << ',' << format_real(beta) << ',' << format_real(detail::truncation_factor(beta, d))
               << '\n';
        }
}

/// u_β − x_i along the θ circle through p₀ on the Clifford torus: `theta,beta,u,x,error` rows.
inline void write_torus_error_band_csv(const TruncationParams& base, const std::vector<double>& betas, int samples,
                                       std::ostream& os) {
    const auto torus = CanonicalSurface::clifford_torus();
    if (samples < 2) throw InvalidArgument("error band needs at least 2 samples");
    os << "theta,beta,u,x,error\n";
    for (double beta : betas) {
        TruncationParams p = base;
        p.beta = beta;
        detail::validate_truncation(torus, p);
        for (int s = 0; s < samples; ++s) {
            const double theta = detail::two_pi * s / samples;
            const ParamPoint q{{theta, p.base_point.coords[1]}};
            const double x = embed(torus, q).x[p.coord_index - 1];
            const double u = x * detail::truncation_factor(beta, geodesic_distance(torus, q, p.base_point));
            os << format_real(theta) << ',' << format_real(beta) << ',' << format_real(u) << ',' << format_real(x)
               << ',' << format_real(u - x) << '\n';
        }
    }
}

} // namespace eigenmin
