#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace solitonjet {

enum class ErrorKind {
  TruncationTooSmall,
  OrderMismatch,
  PoleAtPoint,
  Overflow,
  Syntax,
  UnknownIdentifier,
  InvalidMode,
  SingularSpec,
  DegeneratePair,
  MissingManifold,
  MissingBinding,
  EmptyScan,
  NotBacklundPair,
  NotEigenfunction,
  InvalidArgument,
  Scenario,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure at a character offset of the input text.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorKind kind, std::size_t offset, const std::string& message)
      : Error(kind, message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace solitonjet
