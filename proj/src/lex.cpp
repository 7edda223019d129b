#include "lex.hpp"

#include <cctype>

#include "sgw/rdf.hpp"

namespace sgw::detail {

namespace {

bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_high(char c) { return static_cast<unsigned char>(c) >= 0x80; }

bool is_name_char(char c) {
  return is_alpha(c) || is_digit(c) || c == '_' || c == '-' || is_high(c);
}

char32_t read_hex(Cursor& in, int digits) {
  char32_t value = 0;
  for (int i = 0; i < digits; ++i) {
    const char c = in.peek();
    if (!is_hex(c)) in.fail("malformed unicode escape");
    in.get();
    value = value * 16 +
            static_cast<char32_t>(is_digit(c) ? c - '0'
                                              : std::tolower(c) - 'a' + 10);
  }
  if (value > 0x10FFFF || (value >= 0xD800 && value <= 0xDFFF)) {
    in.fail("unicode escape is not a scalar value");
  }
  return value;
}

// Cursor on '\', followed by 'u' or 'U'.
char32_t read_uchar(Cursor& in) {
  in.get();
  const char kind = in.get();
  return read_hex(in, kind == 'u' ? 4 : 8);
}

}  // namespace

char Cursor::get() noexcept {
  if (at_end()) return '\0';
  const char c = text_[pos_++];
  if (c == '\n') {
    ++line_;
    column_ = 1;
  } else {
    ++column_;
  }
  return c;
}

void Cursor::fail(const std::string& message, ErrorKind kind) const {
  throw SyntaxError(message, line_, column_, kind);
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string read_iriref(Cursor& in) {
  const Cursor start = in;
  in.get();  // '<'
  std::string iri;
  while (true) {
    if (in.at_end()) in.fail("unterminated IRI");
    const char c = in.peek();
    if (c == '>') {
      in.get();
      break;
    }
    if (c == '\\') {
      if (in.peek(1) != 'u' && in.peek(1) != 'U') {
        in.fail("invalid escape in IRI");
      }
      append_utf8(iri, read_uchar(in));
      continue;
    }
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' ||
        c == '|' || c == '^' || c == '`') {
      in.fail("invalid character in IRI");
    }
    iri.push_back(in.get());
  }
  if (!has_iri_scheme(iri)) start.fail("relative IRI <" + iri + "> not supported");
  return iri;
}

std::string read_quoted(Cursor& in) {
  const char quote = in.get();
  std::string out;
  while (true) {
    if (in.at_end()) in.fail("unterminated string literal");
    const char c = in.peek();
    if (c == quote) {
      in.get();
      return out;
    }
    if (c == '\n' || c == '\r') in.fail("line break in string literal");
    if (c != '\\') {
      out.push_back(in.get());
      continue;
    }
    const char e = in.peek(1);
    if (e == 'u' || e == 'U') {
      append_utf8(out, read_uchar(in));
      continue;
    }
    switch (e) {
      case 't': out.push_back('\t'); break;
      case 'b': out.push_back('\b'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 'f': out.push_back('\f'); break;
      case '"': out.push_back('"'); break;
      case '\'': out.push_back('\''); break;
      case '\\': out.push_back('\\'); break;
      default: in.fail("invalid escape sequence in string literal");
    }
    in.skip(2);
  }
}

std::string read_langtag(Cursor& in) {
  in.get();  // '@'
  std::string tag;
  if (!is_alpha(in.peek())) in.fail("malformed language tag");
  while (is_alpha(in.peek())) tag.push_back(static_cast<char>(std::tolower(in.get())));
  while (in.peek() == '-') {
    tag.push_back(in.get());
    if (!is_alpha(in.peek()) && !is_digit(in.peek())) in.fail("malformed language tag");
    while (is_alpha(in.peek()) || is_digit(in.peek())) {
      tag.push_back(static_cast<char>(std::tolower(in.get())));
    }
  }
  return tag;
}

std::string read_blank_label(Cursor& in) {
  in.skip(2);  // "_:"
  std::string label;
  while (is_alpha(in.peek()) || is_digit(in.peek()) || in.peek() == '_') {
    label.push_back(in.get());
  }
  if (label.empty()) in.fail("empty blank node label");
  return label;
}

void fail_at(const Token& token, const std::string& message, ErrorKind kind) {
  throw SyntaxError(message, token.line, token.column, kind);
}

std::string describe(const Token& token) {
  switch (token.type) {
    case TokenType::End: return "end of input";
    case TokenType::Iri: return "<" + token.text + ">";
    case TokenType::PName: return token.text + ":" + token.local;
    case TokenType::String: return "string literal";
    case TokenType::Var: return "?" + token.text;
    default: return "'" + token.text + "'";
  }
}

namespace {

class Lexer {
 public:
  Lexer(std::string_view text, LexMode mode) : in_(text), mode_(mode) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_space();
      Token tok;
      tok.line = in_.line();
      tok.column = in_.column();
      if (in_.at_end()) {
        tokens.push_back(tok);
        return tokens;
      }
      lex_one(tok);
      tokens.push_back(std::move(tok));
    }
  }

 private:
  void skip_space() {
    while (!in_.at_end()) {
      const char c = in_.peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        in_.get();
      } else if (c == '#') {
        while (!in_.at_end() && in_.peek() != '\n') in_.get();
      } else {
        return;
      }
    }
  }

  // Looks ahead for a closing '>' with only IRI characters in between.
  bool looks_like_iri() const {
    for (std::size_t i = 1;; ++i) {
      const char c = in_.peek(i);
      if (c == '>') return i > 1;
      const auto u = static_cast<unsigned char>(c);
      if (c == '\0' || u <= 0x20 || c == '<' || c == '"' || c == '{' ||
          c == '}' || c == '|' || c == '^' || c == '`') {
        return false;
      }
    }
  }

  void lex_one(Token& tok) {
    const char c = in_.peek();
    if (c == '<' && (mode_ == LexMode::Turtle || looks_like_iri())) {
      tok.type = TokenType::Iri;
      tok.text = read_iriref(in_);
      return;
    }
    if (c == '"' || c == '\'') {
      if (in_.peek(1) == c && in_.peek(2) == c) {
        in_.fail("long (triple-quoted) strings are not supported");
      }
      tok.type = TokenType::String;
      tok.text = read_quoted(in_);
      return;
    }
    if (c == '_' && in_.peek(1) == ':') {
      tok.type = TokenType::Blank;
      tok.text = read_blank_label(in_);
      return;
    }
    if (c == '@') {
      in_.get();
      tok.type = TokenType::AtWord;
      while (is_alpha(in_.peek()) || is_digit(in_.peek()) || in_.peek() == '-') {
        tok.text.push_back(in_.get());
      }
      if (tok.text.empty()) in_.fail("expected a word after '@'");
      return;
    }
    if (c == '^' && in_.peek(1) == '^') {
      in_.skip(2);
      tok.type = TokenType::DoubleCaret;
      tok.text = "^^";
      return;
    }
    if (mode_ == LexMode::Sparql && (c == '?' || c == '$')) {
      in_.get();
      tok.type = TokenType::Var;
      if (!is_alpha(in_.peek()) && in_.peek() != '_') {
        in_.fail("malformed variable name");
      }
      while (is_alpha(in_.peek()) || is_digit(in_.peek()) || in_.peek() == '_') {
        tok.text.push_back(in_.get());
      }
      return;
    }
    if (is_digit(c) || ((c == '+' || c == '-') && (is_digit(in_.peek(1)) ||
                                                   (in_.peek(1) == '.' && is_digit(in_.peek(2))))) ||
        (c == '.' && is_digit(in_.peek(1)))) {
      lex_number(tok);
      return;
    }
    if (is_alpha(c) || c == ':' || c == '_' || is_high(c)) {
      lex_name(tok);
      return;
    }
    lex_punct(tok);
  }

  void lex_number(Token& tok) {
    tok.type = TokenType::Integer;
    if (in_.peek() == '+' || in_.peek() == '-') tok.text.push_back(in_.get());
    while (is_digit(in_.peek())) tok.text.push_back(in_.get());
    if (in_.peek() == '.' && is_digit(in_.peek(1))) {
      tok.type = TokenType::Decimal;
      tok.text.push_back(in_.get());
      while (is_digit(in_.peek())) tok.text.push_back(in_.get());
    }
    if (in_.peek() == 'e' || in_.peek() == 'E') {
      const bool sign = in_.peek(1) == '+' || in_.peek(1) == '-';
      if (is_digit(in_.peek(sign ? 2 : 1))) {
        tok.type = TokenType::Double;
        tok.text.push_back(in_.get());
        if (sign) tok.text.push_back(in_.get());
        while (is_digit(in_.peek())) tok.text.push_back(in_.get());
      }
    }
  }

  // Bare words and prefixed names. '.' may appear inside but never last.
  std::string read_run(bool local) {
    std::string out;
    while (true) {
      const char c = in_.peek();
      if (is_name_char(c) || (local && (c == ':' || c == '%'))) {
        out.push_back(in_.get());
      } else if (local && c == '\\' && in_.peek(1) != '\0' &&
                 std::string_view("_~.-!$&'()*+,;=/?#@%").find(in_.peek(1)) !=
                     std::string_view::npos) {
        in_.get();
        out.push_back(in_.get());
      } else if (c == '.' && (is_name_char(in_.peek(1)) ||
                              (local && in_.peek(1) == ':'))) {
        out.push_back(in_.get());
      } else {
        return out;
      }
    }
  }

  void lex_name(Token& tok) {
    std::string word = read_run(false);
    if (in_.peek() == ':') {
      in_.get();
      tok.type = TokenType::PName;
      tok.text = std::move(word);
      tok.local = read_run(true);
      return;
    }
    tok.type = TokenType::Word;
    tok.text = std::move(word);
  }

  void lex_punct(Token& tok) {
    tok.type = TokenType::Punct;
    const char c = in_.peek();
    if (mode_ == LexMode::Sparql) {
      static constexpr std::string_view kTwo[] = {"!=", "<=", ">=", "&&", "||"};
      for (std::string_view op : kTwo) {
        if (in_.starts_with(op)) {
          tok.text = std::string(op);
          in_.skip(2);
          return;
        }
      }
      if (std::string_view("=<>!").find(c) != std::string_view::npos) {
        tok.text = std::string(1, in_.get());
        return;
      }
    }
    if (std::string_view(".;,{}()[]*").find(c) != std::string_view::npos) {
      tok.text = std::string(1, in_.get());
      return;
    }
    in_.fail(std::string("unexpected character '") + c + "'");
  }

  Cursor in_;
  LexMode mode_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text, LexMode mode) {
  return Lexer(text, mode).run();
}

}  // namespace sgw::detail
