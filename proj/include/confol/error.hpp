#pragma once

#include <stdexcept>
#include <string>

namespace confol {

// Error hierarchy shared by every module.  The CLI maps these onto exit
// codes: input errors -> 2, precondition/domain violations -> 3, failed
// numeric verifications -> 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed text input (expressions, form literals, twist words, configs).
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " (at position " + std::to_string(position) + ")"),
        pos(position) {}
  std::size_t pos;
};

// Evaluation outside a chart domain or on a declared singular locus.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A stated hypothesis of an operation does not hold on the given data.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A numeric property check failed (cutoff properties, certificates,
// parameter scans that exhaust their retry budget).
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace confol
