#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tabreason {

enum class ErrorCode {
  EmptyInput,
  BudgetTooSmall,
  UnterminatedString,
  UnterminatedBacktick,
  SyntaxError,
  UnknownColumn,
  AggregateMixedWithColumns,
  IndexOutOfRange,
  BackendUnavailable,
  ScriptExhausted,
  ScriptMismatch,
  IoFailure,
  UnsupportedTask,
  LengthMismatch,
  IdMismatch,
  InvalidArgument,
  ParseFailure,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the orchestrator, the CLI) can route on the kind instead of the text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // The message without the "Code: " prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// Lexer and parser failures point at a byte offset in the SQL source.
class SqlError : public Error {
 public:
  SqlError(ErrorCode code, const std::string& message, std::size_t position);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace tabreason
