#include <map>
#include <string>

#include "lex.hpp"
#include "sgw/rdf.hpp"

namespace sgw {

using detail::Token;
using detail::TokenType;

namespace {

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view text)
      : tokens_(detail::tokenize(text, detail::LexMode::Turtle)) {}

  TripleSet run() {
    while (peek().type != TokenType::End) {
      if (is_prefix_directive()) {
        prefix_directive();
      } else {
        triples_statement();
      }
    }
    return std::move(out_);
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  bool is_punct(std::string_view p) const {
    return peek().type == TokenType::Punct && peek().text == p;
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) {
      detail::fail_at(peek(), "expected '" + std::string(p) + "' but found " +
                                  detail::describe(peek()));
    }
    next();
  }

  bool is_prefix_directive() const {
    const Token& t = peek();
    return (t.type == TokenType::AtWord && t.text == "prefix") ||
           (t.type == TokenType::Word && (t.text == "PREFIX" || t.text == "prefix"));
  }

  void prefix_directive() {
    const bool sparql_style = next().type == TokenType::Word;
    const Token& name = next();
    if (name.type != TokenType::PName || !name.local.empty()) {
      detail::fail_at(name, "expected prefix name ending in ':'");
    }
    const Token& iri = next();
    if (iri.type != TokenType::Iri) detail::fail_at(iri, "expected IRI in prefix declaration");
    prefixes_[name.text] = iri.text;
    if (!sparql_style) expect_punct(".");
  }

  std::string expand(const Token& t) const {
    auto it = prefixes_.find(t.text);
    if (it == prefixes_.end()) {
      detail::fail_at(t, "undeclared prefix '" + t.text + ":'", ErrorKind::UnknownPrefix);
    }
    return it->second + t.local;
  }

  void reject_unsupported(const Token& t) const {
    if (t.type != TokenType::Punct) return;
    if (t.text == "[") detail::fail_at(t, "anonymous blank nodes '[...]' are not supported");
    if (t.text == "(") detail::fail_at(t, "collections '(...)' are not supported");
  }

  Term iri_or_blank(const char* role) {
    const Token& t = next();
    reject_unsupported(t);
    switch (t.type) {
      case TokenType::Iri: return Term::iri(t.text);
      case TokenType::PName: return Term::iri(expand(t));
      case TokenType::Blank: return Term::blank(t.text);
      default:
        detail::fail_at(t, std::string("expected ") + role + " but found " + detail::describe(t));
    }
  }

  Term predicate() {
    const Token& t = peek();
    if (t.type == TokenType::Word && t.text == "a") {
      next();
      return Term::iri(std::string(vocab::kRdfType));
    }
    if (t.type != TokenType::Iri && t.type != TokenType::PName) {
      detail::fail_at(t, "expected predicate but found " + detail::describe(t));
    }
    return iri_or_blank("predicate");
  }

  Term object() {
    const Token& t = peek();
    switch (t.type) {
      case TokenType::String: {
        next();
        std::string lexical = t.text;
        if (peek().type == TokenType::AtWord) {
          return Term::lang_literal(std::move(lexical), next().text);
        }
        if (peek().type == TokenType::DoubleCaret) {
          next();
          const Token& dt = next();
          if (dt.type == TokenType::Iri) return Term::literal(std::move(lexical), dt.text);
          if (dt.type == TokenType::PName) return Term::literal(std::move(lexical), expand(dt));
          detail::fail_at(dt, "expected datatype IRI after '^^'");
        }
        return Term::literal(std::move(lexical));
      }
      case TokenType::Integer:
        next();
        return Term::literal(t.text, std::string(vocab::kXsdInteger));
      case TokenType::Decimal:
        next();
        return Term::literal(t.text, std::string(vocab::kXsdDecimal));
      case TokenType::Double:
        next();
        return Term::literal(t.text, std::string(vocab::kXsdDouble));
      case TokenType::Word:
        if (t.text == "true" || t.text == "false") {
          next();
          return Term::literal(t.text, std::string(vocab::kXsdBoolean));
        }
        break;
      default:
        break;
    }
    return iri_or_blank("object");
  }

  void triples_statement() {
    const Term subject = iri_or_blank("subject");
    while (true) {
      const Term verb = predicate();
      while (true) {
        out_.insert(Triple{subject, verb, object()});
        if (!is_punct(",")) break;
        next();
      }
      if (!is_punct(";")) break;
      // Trailing ';' before '.' is allowed.
      while (is_punct(";")) next();
      if (is_punct(".")) break;
    }
    expect_punct(".");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string> prefixes_;
  TripleSet out_;
};

}  // namespace

TripleSet parse_turtle(std::string_view text) { return TurtleParser(text).run(); }

}  // namespace sgw
