#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace magsim {

// Exit-status classes shared by the library and the command-line tool.
enum class ErrorCode : int {
  kParse = 1,
  kCapacity = 2,
  kInstability = 3,
  kValidity = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Malformed input files, schema violations, broken invariants of user data.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorCode::kParse, what) {}
};

// A matrix or Hilbert space larger than the dense solvers accept.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::size_t dimension)
      : Error(ErrorCode::kCapacity, what), dimension_(dimension) {}

  std::size_t dimension() const noexcept { return dimension_; }

 private:
  std::size_t dimension_;
};

// Non-positive boson frequencies or an indefinite static boson form.
class InstabilityError : public Error {
 public:
  explicit InstabilityError(const std::string& what)
      : Error(ErrorCode::kInstability, what) {}
};

// Strict-mode failures: validity ratios above threshold, spectral weight
// outside the requested grid.
class ValidityError : public Error {
 public:
  explicit ValidityError(const std::string& what)
      : Error(ErrorCode::kValidity, what) {}
};

}  // namespace magsim
