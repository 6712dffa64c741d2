#pragma once

#include <stdexcept>
#include <string>

namespace sheaflab {

// Base class for all library errors.
class SheafError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A face is structurally invalid (empty vertex list).
class InvalidFaceError : public SheafError {
 public:
  using SheafError::SheafError;
};

// A face was referenced that the complex does not contain.
class UnknownFaceError : public SheafError {
 public:
  using SheafError::SheafError;
};

// A stalk or restriction matrix has the wrong dimensions, or one is missing.
class ShapeError : public SheafError {
 public:
  using SheafError::SheafError;
};

// A face set that must be subset-closed is not.
class NotClosedError : public SheafError {
 public:
  using SheafError::SheafError;
};

// A sampling support set contains faces it may not (non-vertices).
class UnsupportedSupportError : public SheafError {
 public:
  using SheafError::SheafError;
};

// A morphism component required to be surjective is not.
class NotSurjectiveError : public SheafError {
 public:
  using SheafError::SheafError;
};

// A restriction map fails to carry one kernel into another; the morphism the
// kernels came from cannot be valid.
class NonInvariantKernelError : public SheafError {
 public:
  using SheafError::SheafError;
};

// A numerical rank decision sits too close to the tolerance cut to trust.
class IllConditionedError : public SheafError {
 public:
  IllConditionedError(const std::string& what, double gap_ratio)
      : SheafError(what), gap_ratio_(gap_ratio) {}
  double gap_ratio() const { return gap_ratio_; }

 private:
  double gap_ratio_;
};

// A construction is undefined at an isolated vertex.
class IsolatedVertexError : public SheafError {
 public:
  using SheafError::SheafError;
};

// A closed-form result was requested outside its hypothesis.
class HypothesisViolatedError : public SheafError {
 public:
  using SheafError::SheafError;
};

// Input document could not be parsed or fails structural checks.  Syntax
// errors carry a 1-based line and column; structural errors leave them 0.
class ParseError : public SheafError {
 public:
  using SheafError::SheafError;
  ParseError(const std::string& what, int line, int column)
      : SheafError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                   what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

}  // namespace sheaflab
