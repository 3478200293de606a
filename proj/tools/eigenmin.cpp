// SPDX-License-Identifier: Apache-2.0
//
// eigenmin: mesh generation, spectra, beta-sweeps and the verification suite from the shell.
//
// Exit status: 0 success, 1 verification failure, 2 usage or I/O error, 3 solver non-convergence.

#include "eigenmin/eigenmin.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace eigenmin;

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_unconverged = 3;

struct Globals {
    std::uint64_t seed = 0;
    std::string out;
};

/// Writes to `path`, or stdout when empty.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw IoError("cannot open '" + path + "' for writing");
        path_ = path;
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    bool to_file() const { return file_ != nullptr; }
    void close() {
        stream().flush();
        if (!stream()) throw IoError("failed writing '" + (path_.empty() ? std::string("stdout") : path_) + "'");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::string path_;
};

unsigned thread_count() {
    const char* env = std::getenv("EIGENMIN_THREADS");
    if (!env) return 1;
    const auto value = parse_integer(env);
    if (!value || *value < 1) throw InvalidArgument("EIGENMIN_THREADS must be a positive integer");
    return static_cast<unsigned>(*value);
}

CanonicalSurface surface_from(const std::string& name) {
    return name == "sphere" ? CanonicalSurface::equatorial_sphere(2) : CanonicalSurface::clifford_torus();
}

const std::map<std::string, std::string> surface_names{
    {"clifford", "clifford"}, {"torus", "clifford"}, {"sphere", "sphere"}};

/// Mesh source shared by several subcommands: a file, or a canonical surface at a resolution.
struct MeshSource {
    std::string surface = "clifford";
    int resolution = 64;
    int subdiv = 4;
    std::string path;

    void bind(CLI::App* cmd) {
        cmd->add_option("--surface", surface, "clifford or sphere")->transform(CLI::CheckedTransformer(surface_names));
        cmd->add_option("--resolution", resolution, "torus grid size")->check(CLI::Range(3, 4096));
        cmd->add_option("--subdiv", subdiv, "icosphere subdivision level")->check(CLI::Range(0, 8));
        cmd->add_option("--mesh", path, "read the mesh from an SMESH file instead")->check(CLI::ExistingFile);
    }

    TriMesh load() const {
        if (!path.empty()) return read_mesh(path);
        return surface == "sphere" ? generate_sphere(subdiv) : generate_torus(resolution);
    }
};

ParamPoint parse_point(const std::vector<double>& coords) {
    if (coords.size() != 2) throw InvalidArgument("--p0 takes two chart coordinates");
    return ParamPoint{coords};
}

/// Sorted, duplicate-free copy of `betas`; warns on stderr when duplicates were dropped.
std::vector<double> normalize_betas(std::vector<double> betas) {
    std::sort(betas.begin(), betas.end());
    const auto before = betas.size();
    betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
    if (betas.size() != before)
        std::cerr << "warning: dropped " << (before - betas.size()) << " duplicate beta value(s)\n";
    return betas;
}

void write_to(const std::string& path, const std::function<void(std::ostream&)>& emit) {
    Output out(path);
    emit(out.stream());
    out.close();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral checks for minimal hypersurfaces of spheres"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value config file; command-line flags win");
    Globals globals;
    app.add_option("--seed", globals.seed, "solver starting-block seed");
    app.add_option("--out", globals.out, "output path (default: stdout)");

    // mesh
    auto* mesh_cmd = app.add_subcommand("mesh", "generate a canonical mesh and print its statistics");
    MeshSource mesh_src;
    mesh_cmd->add_option("--surface", mesh_src.surface, "clifford or sphere")
        ->transform(CLI::CheckedTransformer(surface_names));
    mesh_cmd->add_option("--resolution", mesh_src.resolution, "torus grid size")->check(CLI::Range(3, 4096));
    mesh_cmd->add_option("--subdiv", mesh_src.subdiv, "icosphere subdivision level")->check(CLI::Range(0, 8));

    // spectrum
    auto* spectrum_cmd = app.add_subcommand("spectrum", "lowest eigenpairs of the discrete Laplacian");
    MeshSource spectrum_src;
    spectrum_src.bind(spectrum_cmd);
    int k = 6;
    double tol = 1e-8;
    bool deflate = true;
    spectrum_cmd->add_option("--k", k, "number of eigenpairs")->check(CLI::PositiveNumber);
    spectrum_cmd->add_option("--tol", tol, "relative residual tolerance")->check(CLI::Range(1e-12, 1e-4));
    spectrum_cmd->add_option("--deflate", deflate, "exclude the constant mode");

    // rayleigh
    auto* rayleigh_cmd = app.add_subcommand("rayleigh", "Rayleigh quotient of a coordinate or truncated coordinate");
    MeshSource rayleigh_src;
    rayleigh_src.bind(rayleigh_cmd);
    int coord = 1;
    std::vector<double> p0{0.0, 0.0};
    std::optional<double> beta;
    rayleigh_cmd->add_option("--coord", coord, "1-based ambient coordinate");
    rayleigh_cmd->add_option("--p0", p0, "base point chart coordinates")->delimiter(',')->expected(2);
    rayleigh_cmd->add_option("--beta", beta, "truncation parameter (omit for the bare coordinate)")
        ->check(CLI::PositiveNumber);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Rayleigh quotients of u_beta over a list of beta values");
    MeshSource sweep_src;
    sweep_src.bind(sweep_cmd);
    int sweep_coord = 1;
    std::vector<double> sweep_p0{0.0, 0.0};
    std::vector<double> betas{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    std::string profile_path;
    std::string band_path;
    sweep_cmd->add_option("--coord", sweep_coord, "1-based ambient coordinate");
    sweep_cmd->add_option("--p0", sweep_p0, "base point chart coordinates")->delimiter(',')->expected(2);
    sweep_cmd->add_option("--betas", betas, "comma-separated beta values")->delimiter(',')->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--profile", profile_path, "also write phi_beta(d) decay curves as CSV");
    sweep_cmd->add_option("--error-band", band_path, "also write u_beta - x_i along theta (torus) as CSV");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance checks");
    std::string verify_surface = "clifford";
    std::vector<int> resolutions;
    std::vector<int> subdivs;
    std::vector<double> verify_betas;
    std::optional<double> check_tol;
    double solver_tol = 1e-8;
    std::string csv_path;
    bool timing = false;
    verify_cmd->add_option("--surface", verify_surface, "clifford or sphere")
        ->transform(CLI::CheckedTransformer(surface_names));
    verify_cmd->add_option("--resolutions", resolutions, "torus grid sizes")->delimiter(',')->check(CLI::Range(3, 4096));
    verify_cmd->add_option("--subdivs", subdivs, "sphere subdivision levels")->delimiter(',')->check(CLI::Range(0, 8));
    verify_cmd->add_option("--betas", verify_betas, "beta values for the sweep checks")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--tol", check_tol, "override every inexact check tolerance")->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--solver-tol", solver_tol, "eigensolver residual tolerance")->check(CLI::Range(1e-12, 1e-4));
    verify_cmd->add_option("--csv", csv_path, "also write the checks as CSV");
    verify_cmd->add_flag("--timing", timing, "include per-check wall time in the report");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "exact spectrum and geometry of a canonical surface");
    std::string oracle_surface = "clifford";
    int oracle_dim = 2;
    int levels = 6;
    oracle_cmd->add_option("--surface", oracle_surface, "clifford or sphere")
        ->transform(CLI::CheckedTransformer(surface_names));
    oracle_cmd->add_option("--dim", oracle_dim, "sphere dimension n")->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--levels", levels, "number of distinct eigenvalues")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    SolverOptions solver;
    solver.seed = globals.seed;

    try {
        if (*mesh_cmd) {
            const TriMesh mesh = mesh_src.load();
            if (!globals.out.empty()) write_mesh(mesh, globals.out);
            std::cout << mesh_stats(mesh) << '\n';
            return exit_ok;
        }

        if (*spectrum_cmd) {
            const TriMesh mesh = spectrum_src.load();
            const Spectrum spectrum = solve_lowest(assemble(mesh), k, tol, deflate, solver);
            Output out(globals.out);
            write_spectrum(spectrum, out.stream());
            out.close();
            if (out.to_file())
                for (std::size_t j = 0; j < spectrum.size(); ++j)
                    std::cout << j << ' ' << format_real(spectrum.eigenvalues[j]) << '\n';
            return exit_ok;
        }

        if (*rayleigh_cmd) {
            const TriMesh mesh = rayleigh_src.load();
            const FemOperators ops = assemble(mesh);
            Output out(globals.out);
            if (beta) {
                TruncationParams params{coord, parse_point(p0), *beta};
                const SweepRecord r = measure_truncation(mesh, ops, params);
                write_sweep_csv({r}, out.stream());
            } else {
                const Eigen::VectorXd x = coordinate_function(mesh, coord);
                out.stream() << "rayleigh_raw,rayleigh_projected\n"
                             << format_real(rayleigh(ops, x)) << ',' << format_real(rayleigh(ops, project_mean_zero(ops, x)))
                             << '\n';
            }
            out.close();
            return exit_ok;
        }

        if (*sweep_cmd) {
            const TriMesh mesh = sweep_src.load();
            const FemOperators ops = assemble(mesh);
            const auto sorted = normalize_betas(betas);
            TruncationParams base{sweep_coord, parse_point(sweep_p0), 1.0};
            const auto records = sweep_beta(mesh, ops, base, sorted, thread_count());
            write_to(globals.out, [&](std::ostream& os) { write_sweep_csv(records, os); });
            if (!profile_path.empty())
                write_to(profile_path, [&](std::ostream& os) { write_truncation_profile_csv(sorted, 3.0, 301, os); });
            if (!band_path.empty())
                write_to(band_path, [&](std::ostream& os) { write_torus_error_band_csv(base, sorted, 256, os); });
            return exit_ok;
        }

        if (*verify_cmd) {
            const CanonicalSurface s = surface_from(verify_surface);
            VerifyConfig cfg = default_verify_config(s);
            const auto& levels_given = s.is_torus() ? resolutions : subdivs;
            if (!(s.is_torus() ? subdivs : resolutions).empty())
                throw InvalidArgument(s.is_torus() ? "--subdivs applies to the sphere; use --resolutions"
                                                   : "--resolutions applies to the torus; use --subdivs");
            if (!levels_given.empty()) cfg.resolutions = levels_given;
            if (!verify_betas.empty()) cfg.betas = normalize_betas(verify_betas);
            cfg.tolerance_override = check_tol;
            cfg.solver_tol = solver_tol;
            cfg.seed = globals.seed;
            cfg.threads = thread_count();
            const VerificationReport report = run_all(cfg);
            write_to(globals.out, [&](std::ostream& os) { write_report(report, os, timing); });
            if (!csv_path.empty()) write_to(csv_path, [&](std::ostream& os) { write_report_csv(report, os); });
            for (const auto& c : report.checks)
                if (!c.passed) std::cerr << "FAIL " << c.id << ": measured " << format_real(c.measured) << '\n';
            return report.overall_pass ? exit_ok : exit_failed;
        }

        if (*oracle_cmd) {
            const CanonicalSurface s =
                oracle_surface == "sphere" ? CanonicalSurface::equatorial_sphere(oracle_dim) : CanonicalSurface::clifford_torus();
            Output out(globals.out);
            auto& os = out.stream();
            os << "surface: " << s.name() << '\n';
            os << "area: " << format_real(exact_area(s)) << '\n';
            os << "volume_lower_bound: " << format_real(volume_lower_bound(s.intrinsic_dim())) << '\n';
            os << "second_fundamental_norm_sq: " << format_real(second_fundamental_norm_sq(s)) << '\n';
            os << "# eigenvalue multiplicity\n";
            for (const auto& level : exact_spectrum(s, levels))
                os << format_real(level.eigenvalue) << ' ' << level.multiplicity << '\n';
            out.close();
            return exit_ok;
        }
    } catch (const SolverNotConverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_unconverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
