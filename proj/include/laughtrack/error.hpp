#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace laughtrack {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that breaks a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a precondition (dimension mismatch, out-of-range value...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Score requested for a transcript with no ground-truth quotes.
class UndefinedScoreError : public ContractError {
 public:
  using ContractError::ContractError;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts, int last_status)
      : Error(what + " (attempts=" + std::to_string(attempts) +
              ", last_status=" + std::to_string(last_status) + ")"),
        attempts_(attempts),
        last_status_(last_status) {}

  int attempts() const { return attempts_; }
  /// HTTP status of the final attempt, or -1 when no response arrived.
  int last_status() const { return last_status_; }

 private:
  int attempts_;
  int last_status_;
};

}  // namespace laughtrack
