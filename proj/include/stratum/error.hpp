#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stratum {

/// Base class for every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input; `position` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at offset " + std::to_string(position)), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A substitution would capture a variable of the substituted term.
class CaptureError : public Error {
 public:
  CaptureError(const std::string& variable, const std::string& binder)
      : Error("substituting for '" + variable + "' would be captured by binder 'forall " + binder + "'"),
        binder_(binder) {}

  const std::string& binder() const { return binder_; }

 private:
  std::string binder_;
};

/// An operation was called outside its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace stratum
