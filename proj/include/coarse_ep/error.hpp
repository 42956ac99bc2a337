#ifndef COARSE_EP_ERROR_HPP
#define COARSE_EP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace coarse_ep {

// Malformed user input: bad edge lists, out-of-range ids, unparsable files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold for the arguments.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An internal invariant failed. Always an implementation bug, never user error.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Exhaustive search refused because the instance exceeds the configured limits.
class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration cap hit inside the solver.
class InstanceTooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void ensure(bool condition, const std::string& what) {
  if (!condition) throw InvariantError(what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw PreconditionError(what);
}

}  // namespace detail

}  // namespace coarse_ep

#endif  // COARSE_EP_ERROR_HPP
