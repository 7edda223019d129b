#pragma once

// Lexing primitives shared by the N-Triples, Turtle and SPARQL parsers.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sgw/error.hpp"

namespace sgw::detail {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool at_end() const noexcept { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const noexcept {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const noexcept {
    return text_.substr(pos_).starts_with(s);
  }
  char get() noexcept;
  void skip(std::size_t n) noexcept {
    for (std::size_t i = 0; i < n && !at_end(); ++i) get();
  }

  std::size_t pos() const noexcept { return pos_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

  [[noreturn]] void fail(const std::string& message,
                         ErrorKind kind = ErrorKind::Syntax) const;

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

void append_utf8(std::string& out, char32_t cp);

// Each reader expects the cursor on the opening delimiter.
std::string read_iriref(Cursor& in);
std::string read_quoted(Cursor& in);
std::string read_langtag(Cursor& in);  // cursor on '@'; result lower-cased
std::string read_blank_label(Cursor& in);  // cursor on "_:"

enum class TokenType {
  Iri,
  PName,
  Blank,
  String,
  AtWord,
  DoubleCaret,
  Integer,
  Decimal,
  Double,
  Var,
  Word,
  Punct,
  End,
};

struct Token {
  TokenType type = TokenType::End;
  std::string text;    // decoded value; the prefix for PName
  std::string local;   // PName local part
  std::size_t line = 1;
  std::size_t column = 1;
};

enum class LexMode { Turtle, Sparql };

// Splits a whole document into tokens; the last token is always End.
std::vector<Token> tokenize(std::string_view text, LexMode mode);

[[noreturn]] void fail_at(const Token& token, const std::string& message,
                          ErrorKind kind = ErrorKind::Syntax);

std::string describe(const Token& token);

}  // namespace sgw::detail
