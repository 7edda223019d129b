#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sgw {

enum class ErrorKind {
  Syntax,
  UnknownPrefix,
  UnboundProjection,
  UnboundVariable,
  UnknownClass,
  UnknownRelationType,
  UnknownConcept,
  DanglingEndpoint,
  SelfMerge,
  HierarchyCycle,
  BlankNodePresent,
  UnknownPlugin,
  NegativeDepth,
  InvalidParam,
  Json,
  Schema,
  Http,
  Timeout,
  Protocol,
  LocalSyntax,
  Io,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Base of every error raised by the library. Callers switch on kind()
// rather than on the dynamic type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failure with a 1-based line and a 1-based byte column.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column,
              ErrorKind kind = ErrorKind::Syntax)
      : Error(kind, message + " (line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ")"),
        reason_(message),
        line_(line),
        column_(column) {}

  // Message without the position suffix.
  const std::string& reason() const noexcept { return reason_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string reason_;
  std::size_t line_;
  std::size_t column_;
};

class HttpError : public Error {
 public:
  HttpError(int status, const std::string& message)
      : Error(ErrorKind::Http, message), status_(status) {}

  int status() const noexcept { return status_; }

 private:
  int status_;
};

}  // namespace sgw
