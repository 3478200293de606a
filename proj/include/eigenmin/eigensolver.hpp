// SPDX-License-Identifier: Apache-2.0
#pragma once

// Lowest eigenpairs of the symmetric pencil S v = λ M v (S semidefinite, M definite).
//
// Large pencils use locally optimal block preconditioned conjugate gradients: a block of
// k + 4 vectors, Rayleigh–Ritz on span[X, W, P] in the M-inner product, Jacobi
// preconditioning, and optional M-orthogonal deflation of the constant vector. Small pencils
// (or Method::Dense) go through a dense generalized solve, deflating on the exact
// M-orthogonal complement of the constants.

#include "eigenmin/canonical.hpp"
#include "eigenmin/errors.hpp"
#include "eigenmin/fem.hpp"
#include "eigenmin/format.hpp"
#include "eigenmin/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace eigenmin {

struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<Eigen::VectorXd> eigenvectors;
    std::vector<double> residuals;
    double tolerance = 0.0;
    int iterations = 0;
    bool deflated = false;

    std::size_t size() const noexcept { return eigenvalues.size(); }
};

enum class SolveMethod { Automatic, Iterative, Dense };

struct SolverOptions {
    int max_iterations = 6000;
    std::uint64_t seed = 0;
    SolveMethod method = SolveMethod::Automatic;
    /// Automatic method switches to the dense path at or below this dimension.
    Eigen::Index dense_threshold = 256;
};

namespace detail {

inline double relative_residual(const SparseMatrix& S, const SparseMatrix& M, const Eigen::VectorXd& v,
                                double lambda) {
    const Eigen::VectorXd mv = M * v;
    return (S * v - lambda * mv).norm() / mv.norm();
}

/// Deterministic starting block from a minimal-standard LCG seeded by (seed, dim, k).
inline Eigen::MatrixXd starting_block(Eigen::Index n, Eigen::Index m, std::uint64_t seed, int k) {
    const std::uint64_t mix = seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(n) * 1000003ULL +
                              static_cast<std::uint64_t>(k);
    std::minstd_rand rng(static_cast<std::minstd_rand::result_type>(mix % 2147483646ULL + 1ULL));
    Eigen::MatrixXd X(n, m);
    const double scale = 1.0 / static_cast<double>(std::minstd_rand::modulus);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < n; ++i) X(i, j) = static_cast<double>(rng()) * scale - 0.5;
    return X;
}

/// M-orthonormal basis of span(Y) by eigendecomposition of the Gram matrix, dropping
/// directions whose Gram eigenvalue falls below `drop` relative to the largest.
inline Eigen::MatrixXd m_orthonormalize(const Eigen::MatrixXd& Y, const SparseMatrix& M, double drop = 1e-10) {
    if (Y.cols() == 0) return Y;
    Eigen::MatrixXd Z = Y;
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::MatrixXd MZ = M * Z;
        Eigen::VectorXd scale(Z.cols());
        for (Eigen::Index j = 0; j < Z.cols(); ++j) {
            const double nrm = Z.col(j).dot(MZ.col(j));
            if (nrm < 0.0) throw InvalidArgument("mass matrix is not positive definite");
            scale[j] = nrm > 0.0 ? 1.0 / std::sqrt(nrm) : 0.0;
        }
        Eigen::MatrixXd gram = scale.asDiagonal() * (Z.transpose() * MZ) * scale.asDiagonal();
        gram = 0.5 * (gram + gram.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
        const Eigen::VectorXd& d = eig.eigenvalues();
        const double top = d.maxCoeff();
        if (!(top > 0.0)) return Eigen::MatrixXd(Y.rows(), 0);
        if (d.minCoeff() < -1e-8 * top) throw InvalidArgument("mass matrix is not positive definite");
        std::vector<Eigen::Index> keep;
        for (Eigen::Index j = 0; j < d.size(); ++j)
            if (d[j] > drop * top) keep.push_back(j);
        Eigen::MatrixXd T(Z.cols(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t c = 0; c < keep.size(); ++c)
            T.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(keep[c]) / std::sqrt(d[keep[c]]);
        Z = Z * scale.asDiagonal() * T;
    }
    return Z;
}

struct ConstantDeflation {
    Eigen::VectorXd m_ones;
    double total = 0.0;

    /// Y ← Y − 1 (1ᵀMY)/(1ᵀM1), the M-orthogonal projection off the constants.
    void apply(Eigen::MatrixXd& Y) const {
        const Eigen::RowVectorXd coeff = (m_ones.transpose() * Y) / total;
        Y.rowwise() -= coeff;
    }
};

inline void validate_pencil(const SparseMatrix& S, const SparseMatrix& M, int k, double tol) {
    if (S.rows() != S.cols() || M.rows() != M.cols() || S.rows() != M.rows())
        throw InvalidArgument("stiffness and mass must be square and of equal size");
    if (k < 1) throw InvalidArgument("eigenpair count k must be >= 1");
    if (!(tol >= 1e-12 && tol <= 1e-4)) throw InvalidArgument("solver tolerance must lie in [1e-12, 1e-4]");
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        if (!(M.coeff(i, i) > 0.0)) throw InvalidArgument("mass matrix is not positive definite");
}

inline Spectrum solve_dense(const SparseMatrix& S, const SparseMatrix& M, int k, double tol, bool deflate) {
    const Eigen::Index n = S.rows();
    if (k > n - (deflate ? 1 : 0)) throw InvalidArgument("eigenpair count k exceeds the problem dimension");
    Eigen::MatrixXd s = Eigen::MatrixXd(S);
    Eigen::MatrixXd m = Eigen::MatrixXd(M);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
    if (deflate) {
        // Householder reflector mapping M1 onto e1; its trailing columns span (M1)^⊥.
        Eigen::VectorXd a = m * Eigen::VectorXd::Ones(n);
        Eigen::VectorXd u = a;
        u[0] += (a[0] >= 0.0 ? 1.0 : -1.0) * a.norm();
        const Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n) - 2.0 * u * u.transpose() / u.squaredNorm();
        basis = H.rightCols(n - 1);
    }
    const Eigen::MatrixXd sr = basis.transpose() * s * basis;
    const Eigen::MatrixXd mr = basis.transpose() * m * basis;
    if (Eigen::LLT<Eigen::MatrixXd>(mr).info() != Eigen::Success)
        throw InvalidArgument("mass matrix is not positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(sr, mr);
    if (eig.info() != Eigen::Success) throw SolverNotConverged("dense generalized eigensolve failed", {}, 1);

    Spectrum out;
    out.tolerance = tol;
    out.iterations = 1;
    out.deflated = deflate;
    for (int j = 0; j < k; ++j) {
        Eigen::VectorXd v = basis * eig.eigenvectors().col(j);
        v /= std::sqrt(v.dot(M * v));
        const double lambda = eig.eigenvalues()[j];
        out.eigenvalues.push_back(lambda);
        out.residuals.push_back(relative_residual(S, M, v, lambda));
        out.eigenvectors.push_back(std::move(v));
    }
    return out;
}

inline Spectrum solve_block(const SparseMatrix& S, const SparseMatrix& M, int k, double tol, bool deflate,
                            const SolverOptions& opts) {
    const Eigen::Index n = S.rows();
    if (static_cast<Eigen::Index>(k) * 4 >= n)
        throw InvalidArgument("iterative solve requires k < dim/4");
    const Eigen::Index m = k + 4;

    ConstantDeflation deflation;
    if (deflate) {
        deflation.m_ones = M * Eigen::VectorXd::Ones(n);
        deflation.total = deflation.m_ones.sum();
    }
    auto project = [&](Eigen::MatrixXd& Y) {
        if (deflate) deflation.apply(Y);
    };

    Eigen::VectorXd precond(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = S.coeff(i, i);
        precond[i] = d > 0.0 ? 1.0 / d : 1.0 / M.coeff(i, i);
    }

    Eigen::MatrixXd X = starting_block(n, m, opts.seed, k);
    project(X);
    X = m_orthonormalize(X, M);
    if (X.cols() < m) throw SolverNotConverged("starting block is rank deficient", {}, 0);

    Eigen::VectorXd lambda;
    {
        Eigen::MatrixXd A = X.transpose() * (S * X);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (A + A.transpose()));
        X = X * eig.eigenvectors();
        lambda = eig.eigenvalues();
    }

    Eigen::MatrixXd P(n, 0);
    std::vector<double> best(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
    Eigen::VectorXd res(m);

    for (int it = 1; it <= opts.max_iterations; ++it) {
        const Eigen::MatrixXd MX = M * X;
        const Eigen::MatrixXd R = S * X - MX * lambda.asDiagonal();
        for (Eigen::Index j = 0; j < m; ++j) res[j] = R.col(j).norm() / MX.col(j).norm();

        bool done = true;
        for (int j = 0; j < k; ++j) {
            best[static_cast<std::size_t>(j)] = std::min(best[static_cast<std::size_t>(j)], res[j]);
            done = done && res[j] <= tol;
        }
        if (done) {
            Spectrum out;
            out.tolerance = tol;
            out.iterations = it;
            out.deflated = deflate;
            for (int j = 0; j < k; ++j) {
                Eigen::VectorXd v = X.col(j);
                v /= std::sqrt(v.dot(M * v));
                out.eigenvalues.push_back(lambda[j]);
                out.residuals.push_back(relative_residual(S, M, v, lambda[j]));
                out.eigenvectors.push_back(std::move(v));
            }
            return out;
        }

        // Soft locking: only unconverged columns contribute search directions.
        std::vector<Eigen::Index> active;
        for (Eigen::Index j = 0; j < m; ++j)
            if (res[j] > 0.1 * tol) active.push_back(j);
        Eigen::MatrixXd W(n, static_cast<Eigen::Index>(active.size()));
        for (std::size_t c = 0; c < active.size(); ++c)
            W.col(static_cast<Eigen::Index>(c)) = precond.cwiseProduct(R.col(active[c]));

        Eigen::MatrixXd Y(n, W.cols() + P.cols());
        Y << W, P;
        project(Y);
        for (int pass = 0; pass < 2; ++pass) {
            Y -= X * (MX.transpose() * Y);
            Y = m_orthonormalize(Y, M);
        }
        Eigen::MatrixXd B(n, X.cols() + Y.cols());
        B << X, Y;
        const Eigen::MatrixXd SB = S * B;
        const Eigen::MatrixXd MB = M * B;
        Eigen::MatrixXd A = B.transpose() * SB;
        Eigen::MatrixXd G = B.transpose() * MB;
        A = 0.5 * (A + A.transpose());
        G = 0.5 * (G + G.transpose());
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, G);
        if (eig.info() != Eigen::Success)
            throw SolverNotConverged("Rayleigh-Ritz step failed", best, it);
        const Eigen::MatrixXd C = eig.eigenvectors().leftCols(m);
        lambda = eig.eigenvalues().head(m);
        P = Y * C.bottomRows(Y.cols());
        X = B * C;
        if (deflate && it % 16 == 0) {
            project(X);
            X = m_orthonormalize(X, M);
            Eigen::MatrixXd Ax = X.transpose() * (S * X);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> re(0.5 * (Ax + Ax.transpose()));
            X = X * re.eigenvectors();
            lambda = re.eigenvalues();
        }
    }
    throw SolverNotConverged("block eigensolver did not reach tolerance within " +
                                 std::to_string(opts.max_iterations) + " iterations",
                             best, opts.max_iterations);
}

} // namespace detail

/// The k lowest eigenpairs of (S, M), excluding the constant mode when `deflate_constants`.
inline Spectrum solve_lowest(const SparseMatrix& S, const SparseMatrix& M, int k, double tol,
                             bool deflate_constants, const SolverOptions& opts = {}) {
    detail::validate_pencil(S, M, k, tol);
    const bool dense = opts.method == SolveMethod::Dense ||
                       (opts.method == SolveMethod::Automatic && S.rows() <= opts.dense_threshold);
    return dense ? detail::solve_dense(S, M, k, tol, deflate_constants)
                 : detail::solve_block(S, M, k, tol, deflate_constants, opts);
}

inline Spectrum solve_lowest(const FemOperators& ops, int k, double tol, bool deflate_constants,
                             const SolverOptions& opts = {}) {
    return solve_lowest(ops.stiffness, ops.mass, k, tol, deflate_constants, opts);
}

// ---------------------------------------------------------------------------------------------
// Mesh families and convergence orders

/// Canonical mesh at a given resolution: torus grid size, or sphere subdivision level.
inline TriMesh canonical_mesh(const CanonicalSurface& s, int resolution) {
    if (s.is_torus()) return generate_torus(resolution);
    if (s.intrinsic_dim() != 2) throw InvalidArgument("only the two-sphere can be meshed");
    return generate_sphere(resolution);
}

/// Representative length scale of canonical_mesh(s, resolution), up to a constant factor.
inline double mesh_scale(const CanonicalSurface& s, int resolution) {
    return s.is_torus() ? 1.0 / resolution : std::ldexp(1.0, -resolution);
}

/// Oracle eigenvalues listed with multiplicity, ascending, starting from 0.
inline std::vector<double> oracle_eigenvalues(const CanonicalSurface& s, std::size_t count) {
    std::vector<double> values;
    for (int levels = 4; values.size() < count; levels *= 2) {
        values.clear();
        for (const auto& level : exact_spectrum(s, levels))
            for (int r = 0; r < level.multiplicity; ++r) values.push_back(level.eigenvalue);
    }
    values.resize(count);
    return values;
}

struct EigenOrder {
    std::size_t index;                 ///< position in the returned spectrum
    double oracle;                     ///< exact eigenvalue it is compared against
    std::vector<double> errors;        ///< |λ_h − oracle| per resolution
    std::vector<double> orders;        ///< one estimate per consecutive resolution pair
    bool exact = false;                ///< all errors ≤ tolerance; orders are meaningless
    bool ambiguous = false;            ///< a discrete value sits closer to another oracle level
};

inline double richardson_order(double coarse_error, double fine_error, double coarse_h, double fine_h) {
    return std::log(coarse_error / fine_error) / std::log(coarse_h / fine_h);
}

inline std::vector<EigenOrder> eigen_convergence_order(const CanonicalSurface& s, const std::vector<int>& resolutions,
                                                       int k, double tol = 1e-9, bool deflate = true,
                                                       const SolverOptions& opts = {}) {
    if (resolutions.size() < 3) throw InvalidArgument("convergence study needs >= 3 resolutions");
    for (std::size_t r = 1; r < resolutions.size(); ++r)
        if (resolutions[r] <= resolutions[r - 1]) throw InvalidArgument("resolutions must be strictly increasing");

    const auto all = oracle_eigenvalues(s, static_cast<std::size_t>(k) + 1);
    std::vector<double> oracle(all.begin() + (deflate ? 1 : 0), all.begin() + (deflate ? 1 : 0) + k);
    std::vector<double> distinct;
    for (const auto& level : exact_spectrum(s, 64)) distinct.push_back(level.eigenvalue);

    std::vector<EigenOrder> out(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        out[static_cast<std::size_t>(j)].index = static_cast<std::size_t>(j);
        out[static_cast<std::size_t>(j)].oracle = oracle[static_cast<std::size_t>(j)];
    }
    for (int res : resolutions) {
        const auto ops = assemble(canonical_mesh(s, res));
        const auto spectrum = solve_lowest(ops, k, tol, deflate, opts);
        for (int j = 0; j < k; ++j) {
            auto& entry = out[static_cast<std::size_t>(j)];
            const double value = spectrum.eigenvalues[static_cast<std::size_t>(j)];
            entry.errors.push_back(std::abs(value - entry.oracle));
            const auto nearest = *std::min_element(distinct.begin(), distinct.end(), [&](double a, double b) {
                return std::abs(a - value) < std::abs(b - value);
            });
            if (nearest != entry.oracle) entry.ambiguous = true;
        }
    }
    for (auto& entry : out) {
        entry.exact = std::all_of(entry.errors.begin(), entry.errors.end(), [&](double e) { return e <= tol; });
        if (entry.exact) continue;
        for (std::size_t r = 1; r < resolutions.size(); ++r)
            entry.orders.push_back(richardson_order(entry.errors[r - 1], entry.errors[r],
                                                    mesh_scale(s, resolutions[r - 1]), mesh_scale(s, resolutions[r])));
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Morse index of the Jacobi form Q(f) = ∫|∇f|² − c ∫f², c = |A|² + n.

struct MorseOptions {
    double tol = 1e-9;
    /// Exact eigenvalue levels, used for the margin and to recognize null directions.
    std::optional<std::vector<double>> oracle_levels;
    SolverOptions solver;
};

struct MorseIndex {
    bool determinate = false;
    int index = 0;          ///< eigenvalues below c − margin
    int nullity = 0;        ///< eigenvalues inside the band at a known level
    int undecided = 0;      ///< eigenvalues inside the band with no level to explain them
    double margin = 0.0;
    std::vector<double> eigenvalues;
};

inline MorseIndex morse_index(const FemOperators& ops, double potential_constant, const MorseOptions& opts = {}) {
    if (!(potential_constant >= 0.0)) throw InvalidArgument("potential constant must be >= 0");
    // Constants span the kernel of S whatever the surface.
    std::vector<double> levels{0.0};
    if (opts.oracle_levels) levels.insert(levels.end(), opts.oracle_levels->begin(), opts.oracle_levels->end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    const double c = potential_constant;
    double gap = std::numeric_limits<double>::infinity();
    if (opts.oracle_levels) {
        for (double l : levels)
            if (std::abs(l - c) > 1e-12 * std::max(1.0, c)) gap = std::min(gap, std::abs(l - c));
    }
    MorseIndex out;
    out.margin = std::max(10.0 * opts.tol, std::isfinite(gap) ? 0.05 * gap : 0.0);
    // Eigenvalues in the band are null directions only if a known level lies in the band too.
    const bool band_explained =
        std::any_of(levels.begin(), levels.end(), [&](double l) { return std::abs(l - c) <= out.margin; });

    const Eigen::Index n = ops.dim();
    const bool dense = opts.solver.method == SolveMethod::Dense ||
                       (opts.solver.method == SolveMethod::Automatic && n <= opts.solver.dense_threshold);
    const int cap = static_cast<int>(dense ? n : (n - 1) / 4);
    if (cap < 1) throw InvalidArgument("mesh too small for a Morse index computation");
    int k = dense ? cap : std::min(8, cap);
    Spectrum spectrum;
    for (;;) {
        spectrum = solve_lowest(ops, k, opts.tol, false, opts.solver);
        if (spectrum.eigenvalues.back() > c + out.margin || dense) break;
        if (k == cap)
            throw SolverNotConverged("spectrum window too small to bracket the potential constant",
                                     spectrum.residuals, spectrum.iterations);
        k = std::min(2 * k, cap);
    }
    for (double lambda : spectrum.eigenvalues) {
        if (lambda > c + out.margin) break;
        out.eigenvalues.push_back(lambda);
        if (lambda < c - out.margin) ++out.index;
        else if (band_explained) ++out.nullity;
        else ++out.undecided;
    }
    out.determinate = out.undecided == 0;
    return out;
}

// ---------------------------------------------------------------------------------------------
// Spectrum record

inline void write_spectrum(const Spectrum& s, std::ostream& os) {
    os << "eigenmin-spectrum 1\n";
    os << "count: " << s.size() << '\n';
    os << "dim: " << (s.eigenvectors.empty() ? 0 : s.eigenvectors.front().size()) << '\n';
    os << "tolerance: " << format_real(s.tolerance) << '\n';
    os << "iterations: " << s.iterations << '\n';
    os << "deflated: " << (s.deflated ? "true" : "false") << '\n';
    os << "# index eigenvalue residual\n";
    for (std::size_t j = 0; j < s.size(); ++j)
        os << j << ' ' << format_real(s.eigenvalues[j]) << ' ' << format_real(s.residuals[j]) << '\n';
}

/// Parses the record written by write_spectrum (eigenvectors are not stored).
inline Spectrum read_spectrum(std::istream& in) {
    Spectrum s;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) { throw IoError("spectrum record line " + std::to_string(line_no) + ": " + why); };
    if (!std::getline(in, line) || line != "eigenmin-spectrum 1") { line_no = 1; fail("bad header"); }
    ++line_no;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto colon = line.find(": ");
        if (colon != std::string::npos) {
            const std::string key = line.substr(0, colon);
            const std::string value = line.substr(colon + 2);
            if (key == "count") count = static_cast<std::size_t>(parse_integer(value).value_or(0));
            else if (key == "tolerance") s.tolerance = parse_real(value).value_or(0.0);
            else if (key == "iterations") s.iterations = static_cast<int>(parse_integer(value).value_or(0));
            else if (key == "deflated") s.deflated = value == "true";
            continue;
        }
        std::istringstream row(line);
        std::string idx, val, res;
        if (!(row >> idx >> val >> res)) fail("malformed eigenpair row");
        auto v = parse_real(val);
        auto r = parse_real(res);
        if (!v || !r) fail("malformed real");
        s.eigenvalues.push_back(*v);
        s.residuals.push_back(*r);
    }
    if (s.eigenvalues.size() != count) fail("row count does not match header");
    return s;
}

} // namespace eigenmin
