#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlspec {

enum class ErrorCode {
  EmptyWorld,
  SchemaMismatch,
  UnknownVariable,
  IncompatibleValues,
  SyntaxError,
  UnknownSymbol,
  ArityMismatch,
  MalformedInterval,
  OverlappingIntervals,
  OutOfRange,
  UnknownPredicate,
  UnknownRelation,
  UnknownTransform,
  UnknownLoss,
  UnknownKind,
  UnknownGroup,
  UnknownLabel,
  UnknownWorld,
  ParseError,
  MissingPredictions,
  AdapterCrashed,
  ProtocolViolation,
  MissingAdapter,
  IncompatibleFeature,
  InvalidTransform,
  ConfigError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Errors raised while reading formula or expression text. Positions are
// 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorCode code, const std::string& message, std::size_t line,
              std::size_t column, std::vector<std::string> expected = {});

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

}  // namespace mlspec
