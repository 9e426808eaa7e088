#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hcg {

// Thrown when a curvature vector or shape matrix lies outside the admissible
// cone of the requested curvature function and the formula needs a positive
// root or quotient.
struct NotInCone : std::domain_error {
  using std::domain_error::domain_error;
};

// A caller violated a documented precondition that is not a cone condition
// (wrong sign, index out of range, malformed argument combination).
struct PreconditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Graph heights must stay positive in the half-space model.
struct NonpositiveHeight : std::domain_error {
  using std::domain_error::domain_error;
};

// Requested a cap height outside the region where the sphere lies above
// the zero plane.
struct OutsideFootprint : std::domain_error {
  using std::domain_error::domain_error;
};

// Scalar-function argument outside its documented domain.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A bisection was asked to run on an interval whose endpoints do not
// bracket a sign change.
struct BracketFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FamilyParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Common base for failures raised while driving a nonlinear solve.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Radial solver could not construct the spherical-cap initial iterate.
struct NoCapInitializer : SolverError {
  using SolverError::SolverError;
};

// Newton iteration exhausted its budget; message carries the residual trace.
struct NewtonDiverged : SolverError {
  using SolverError::SolverError;
};

// Damped Newton could not find an admissible descent step above the
// minimum step size.
struct LineSearchStalled : SolverError {
  using SolverError::SolverError;
};

struct SingularJacobian : SolverError {
  using SolverError::SolverError;
};

// Residual assembly found nodes whose curvature vector left the cone.
struct ConeViolation : SolverError {
  std::vector<int> nodes;
  ConeViolation(const std::string& msg, std::vector<int> bad)
      : SolverError(msg), nodes(std::move(bad)) {}
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hcg
