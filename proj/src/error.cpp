#include "mlspec/error.hpp"

#include <utility>

namespace mlspec {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyWorld: return "EmptyWorld";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::IncompatibleValues: return "IncompatibleValues";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::MalformedInterval: return "MalformedInterval";
    case ErrorCode::OverlappingIntervals: return "OverlappingIntervals";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnknownPredicate: return "UnknownPredicate";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::UnknownTransform: return "UnknownTransform";
    case ErrorCode::UnknownLoss: return "UnknownLoss";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::UnknownGroup: return "UnknownGroup";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::UnknownWorld: return "UnknownWorld";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingPredictions: return "MissingPredictions";
    case ErrorCode::AdapterCrashed: return "AdapterCrashed";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::MissingAdapter: return "MissingAdapter";
    case ErrorCode::IncompatibleFeature: return "IncompatibleFeature";
    case ErrorCode::InvalidTransform: return "InvalidTransform";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

SyntaxError::SyntaxError(ErrorCode code, const std::string& message, std::size_t line,
                         std::size_t column, std::vector<std::string> expected)
    : Error(code, message), line_(line), column_(column), expected_(std::move(expected)) {}

}  // namespace mlspec
