#include "tabreason/error.hpp"

namespace tabreason {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::UnterminatedString: return "UnterminatedString";
    case ErrorCode::UnterminatedBacktick: return "UnterminatedBacktick";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::AggregateMixedWithColumns: return "AggregateMixedWithColumns";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::ScriptExhausted: return "ScriptExhausted";
    case ErrorCode::ScriptMismatch: return "ScriptMismatch";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::UnsupportedTask: return "UnsupportedTask";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseFailure: return "ParseFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

SqlError::SqlError(ErrorCode code, const std::string& message, std::size_t position)
    : Error(code, message + " (at offset " + std::to_string(position) + ")"), position_(position) {}

}  // namespace tabreason
