#pragma once

#include <stdexcept>
#include <string>

namespace stresslab {

/// Base class for all stresslab errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input data is malformed or violates a precondition of the model.
/// CLI maps these to exit code 1.
struct InputError : Error {
  using Error::Error;
};

/// A solve could not be completed (violated solvability hypothesis,
/// failed factorization). CLI maps these to exit code 2.
struct SolveError : Error {
  using Error::Error;
};

// -- tensor algebra --------------------------------------------------------

struct AsymmetricInput : InputError {
  using InputError::InputError;
};
struct DimensionMismatch : InputError {
  using InputError::InputError;
};
struct InvalidModuli : InputError {
  using InputError::InputError;
};
struct NotCoercive : InputError {
  using InputError::InputError;
};
struct SingularTensor : InputError {
  using InputError::InputError;
};

// -- frameworks ------------------------------------------------------------

struct DegenerateBar : InputError {
  using InputError::InputError;
};
struct MechanismPresent : SolveError {
  using SolveError::SolveError;
};

// -- meshes ----------------------------------------------------------------

struct ParseError : InputError {
  ParseError(int line, int column, const std::string& what)
      : InputError("parse error at line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};
struct OrientationError : InputError {
  using InputError::InputError;
};
struct NonManifoldEdge : InputError {
  using InputError::InputError;
};
struct DanglingLabel : InputError {
  using InputError::InputError;
};
struct DisconnectedMesh : InputError {
  using InputError::InputError;
};
struct EmptyDirichletSet : InputError {
  using InputError::InputError;
};
struct UnexpectedTractionEdges : InputError {
  using InputError::InputError;
};

// -- solver ----------------------------------------------------------------

struct SingularStiffness : SolveError {
  using SolveError::SolveError;
};
struct SolveFailure : SolveError {
  using SolveError::SolveError;
};

// -- verification ----------------------------------------------------------

struct DegreeTooHigh : InputError {
  using InputError::InputError;
};
struct InconsistentCase : Error {
  using Error::Error;
};

}  // namespace stresslab
