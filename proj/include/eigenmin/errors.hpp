// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eigenmin {

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Mesh invariant violation or malformed mesh file. `line()` is 0 when not tied to a file line.
class MeshError : public std::runtime_error {
  public:
    explicit MeshError(const std::string& reason, std::size_t line = 0)
        : std::runtime_error(line == 0 ? reason : "line " + std::to_string(line) + ": " + reason),
          reason_(reason), line_(line) {}

    const std::string& reason() const noexcept { return reason_; }
    std::size_t line() const noexcept { return line_; }

  private:
    std::string reason_;
    std::size_t line_;
};

class AssemblyError : public std::runtime_error {
  public:
    AssemblyError(const std::string& what, std::size_t face)
        : std::runtime_error(what + " (face " + std::to_string(face) + ")"), face_(face) {}

    std::size_t face() const noexcept { return face_; }

  private:
    std::size_t face_;
};

class SolverNotConverged : public std::runtime_error {
  public:
    SolverNotConverged(const std::string& what, std::vector<double> best_residuals, int iterations)
        : std::runtime_error(what), best_residuals_(std::move(best_residuals)),
          iterations_(iterations) {}

    const std::vector<double>& best_residuals() const noexcept { return best_residuals_; }
    int iterations() const noexcept { return iterations_; }

  private:
    std::vector<double> best_residuals_;
    int iterations_;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace eigenmin
