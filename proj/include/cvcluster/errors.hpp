#pragma once

#include <stdexcept>
#include <string>

namespace cvcluster {

/** Base class for all library errors. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/** A function argument violates a documented precondition. */
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

/** A matrix that must be symplectic is not. */
class InvalidOperatorError : public Error {
 public:
  explicit InvalidOperatorError(const std::string& msg) : Error(msg) {}
};

/** A state matrix fails its physicality invariants. */
class InvalidStateError : public Error {
 public:
  explicit InvalidStateError(const std::string& msg) : Error(msg) {}
};

/** A linear solve hit an unacceptable condition number; results would be garbage. */
class IllConditionedError : public Error {
 public:
  explicit IllConditionedError(const std::string& msg) : Error(msg) {}
};

/** Two representations that must agree (rule vs exact, plan vs state) do not. */
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& msg) : Error(msg) {}
};

/** Malformed or unreadable document. */
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace cvcluster
