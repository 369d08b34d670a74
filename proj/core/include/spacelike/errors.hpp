#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spacelike {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, VariableOutOfRange, BadExponent };

  ParseError(Kind kind, std::size_t offset, const std::string& what)
      : Error("parse error at byte " + std::to_string(offset) + ": " + what),
        kind_(kind), offset_(offset) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// An elementary function was evaluated outside its domain. `subexpression`
/// is the printed form of the offending node.
class DomainError : public Error {
 public:
  explicit DomainError(std::string subexpression)
      : Error("domain error in " + subexpression), subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// The induced metric (or an ambient Gram matrix) is not positive definite.
class NotSpacelikeError : public Error {
 public:
  using Error::Error;
};

/// Hess F is not positive definite, so the gradient graph is not space-like.
class NotConvexError : public NotSpacelikeError {
 public:
  using NotSpacelikeError::NotSpacelikeError;
};

class BasePointError : public Error {
 public:
  using Error::Error;
};

class LatticeError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  enum class Kind { Divergence, DampingFloor, ConvexityLoss, NotSpacelike, Singular };

  SolverError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace spacelike
