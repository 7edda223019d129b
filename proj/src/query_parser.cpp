#include <algorithm>
#include <cctype>
#include <set>

#include "lex.hpp"
#include "sgw/sparql.hpp"

namespace sgw {

using detail::Token;
using detail::TokenType;

std::vector<std::string> pattern_variables(const std::vector<TriplePattern>& patterns) {
  std::vector<std::string> vars;
  auto visit = [&vars](const PatternTerm& t) {
    if (const auto* v = std::get_if<Variable>(&t)) {
      if (std::find(vars.begin(), vars.end(), v->name) == vars.end()) vars.push_back(v->name);
    }
  };
  for (const TriplePattern& tp : patterns) {
    visit(tp.s);
    visit(tp.p);
    visit(tp.o);
  }
  return vars;
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) ==
                  std::toupper(static_cast<unsigned char>(y));
         });
}

class QueryParser {
 public:
  explicit QueryParser(std::string_view text)
      : tokens_(detail::tokenize(text, detail::LexMode::Sparql)) {}

  QueryAst run() {
    QueryAst q;
    while (is_keyword("PREFIX")) {
      next();
      const Token& name = next();
      if (name.type != TokenType::PName || !name.local.empty()) {
        detail::fail_at(name, "expected prefix name ending in ':'");
      }
      const Token& iri = next();
      if (iri.type != TokenType::Iri) detail::fail_at(iri, "expected IRI in PREFIX declaration");
      q.prefixes[name.text] = iri.text;
    }
    prefixes_ = &q.prefixes;

    std::vector<const Token*> projected;
    if (is_keyword("SELECT")) {
      next();
      SelectForm form;
      if (is_keyword("DISTINCT")) {
        next();
        form.distinct = true;
      }
      if (is_punct("*")) {
        next();
        form.star = true;
      } else {
        while (peek().type == TokenType::Var) {
          projected.push_back(&peek());
          if (std::find(form.vars.begin(), form.vars.end(), peek().text) == form.vars.end()) {
            form.vars.push_back(peek().text);
          }
          next();
        }
        if (form.vars.empty()) detail::fail_at(peek(), "expected '*' or variables after SELECT");
      }
      q.form = std::move(form);
    } else if (is_keyword("CONSTRUCT")) {
      next();
      ConstructForm form;
      expect_punct("{");
      while (!is_punct("}")) {
        triples_same_subject(form.templ);
        if (!is_punct(".")) break;
        next();
      }
      expect_punct("}");
      q.form = std::move(form);
    } else {
      detail::fail_at(peek(), "expected SELECT or CONSTRUCT but found " + detail::describe(peek()));
    }

    if (is_keyword("WHERE")) next();
    expect_punct("{");
    group(q);
    expect_punct("}");

    const Token* order_token = nullptr;
    if (is_keyword("ORDER")) {
      next();
      expect_keyword("BY");
      OrderBy ob;
      if (is_keyword("ASC") || is_keyword("DESC")) {
        ob.descending = is_keyword("DESC");
        next();
        expect_punct("(");
        order_token = &expect_var();
        expect_punct(")");
      } else {
        order_token = &expect_var();
      }
      ob.var = order_token->text;
      q.order_by = ob;
    }
    for (int i = 0; i < 2; ++i) {
      if (is_keyword("LIMIT") && !q.limit) {
        next();
        q.limit = count();
      } else if (is_keyword("OFFSET") && !q.offset) {
        next();
        q.offset = count();
      }
    }
    if (peek().type != TokenType::End) {
      detail::fail_at(peek(), "unexpected " + detail::describe(peek()) + " after query");
    }

    const std::vector<std::string> bound = pattern_variables(q.where);
    auto is_bound = [&bound](const std::string& v) {
      return std::find(bound.begin(), bound.end(), v) != bound.end();
    };
    for (const Token* t : projected) {
      if (!is_bound(t->text)) {
        detail::fail_at(*t, "projected variable ?" + t->text + " does not occur in WHERE",
                        ErrorKind::UnboundProjection);
      }
    }
    if (order_token && !is_bound(order_token->text)) {
      detail::fail_at(*order_token, "ORDER BY variable ?" + order_token->text +
                                        " does not occur in WHERE",
                      ErrorKind::UnboundProjection);
    }
    for (const auto& [name, token] : filter_vars_) {
      if (!is_bound(name)) {
        detail::fail_at(*token, "filter variable ?" + name + " does not occur in WHERE",
                        ErrorKind::UnboundVariable);
      }
    }
    if (auto* select = std::get_if<SelectForm>(&q.form); select && select->star) {
      select->vars = bound;
    }
    return q;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  bool is_keyword(std::string_view kw) const {
    return peek().type == TokenType::Word && iequals(peek().text, kw);
  }
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
  void expect_keyword(std::string_view kw) {
    if (!is_keyword(kw)) {
      detail::fail_at(peek(), "expected " + std::string(kw) + " but found " +
                                  detail::describe(peek()));
    }
    next();
  }
  const Token& expect_var() {
    if (peek().type != TokenType::Var) {
      detail::fail_at(peek(), "expected variable but found " + detail::describe(peek()));
    }
    return next();
  }

  std::uint64_t count() {
    const Token& t = next();
    if (t.type != TokenType::Integer || t.text.starts_with('-') || t.text.starts_with('+')) {
      detail::fail_at(t, "expected a non-negative integer");
    }
    try {
      return std::stoull(t.text);
    } catch (const std::exception&) {
      detail::fail_at(t, "integer out of range");
    }
  }

  std::string expand(const Token& t) const {
    auto it = prefixes_->find(t.text);
    if (it == prefixes_->end()) {
      detail::fail_at(t, "undeclared prefix '" + t.text + ":'", ErrorKind::UnknownPrefix);
    }
    return it->second + t.local;
  }

  // Variable, IRI, prefixed name or literal; `allow_literal` false for
  // predicate position.
  PatternTerm term(const char* role, bool allow_literal) {
    const Token& t = peek();
    switch (t.type) {
      case TokenType::Var:
        next();
        return Variable{t.text};
      case TokenType::Iri:
        next();
        return Term::iri(t.text);
      case TokenType::PName:
        next();
        return Term::iri(expand(t));
      case TokenType::Blank:
        detail::fail_at(t, "blank nodes are not supported in query patterns");
      default:
        break;
    }
    if (allow_literal) {
      if (auto lit = literal()) return *lit;
    }
    detail::fail_at(t, std::string("expected ") + role + " but found " + detail::describe(t));
  }

  std::optional<Term> literal() {
    const Token& t = peek();
    switch (t.type) {
      case TokenType::String: {
        next();
        if (peek().type == TokenType::AtWord) return Term::lang_literal(t.text, next().text);
        if (peek().type == TokenType::DoubleCaret) {
          next();
          const Token& dt = next();
          if (dt.type == TokenType::Iri) return Term::literal(t.text, dt.text);
          if (dt.type == TokenType::PName) return Term::literal(t.text, expand(dt));
          detail::fail_at(dt, "expected datatype IRI after '^^'");
        }
        return Term::literal(t.text);
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
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  PatternTerm verb() {
    if (peek().type == TokenType::Word && peek().text == "a") {
      next();
      return Term::iri(std::string(vocab::kRdfType));
    }
    return term("predicate", false);
  }

  void triples_same_subject(std::vector<TriplePattern>& out) {
    const PatternTerm subject = term("subject", true);
    while (true) {
      const PatternTerm predicate = verb();
      while (true) {
        out.push_back(TriplePattern{subject, predicate, term("object", true)});
        if (!is_punct(",")) break;
        next();
      }
      if (!is_punct(";")) break;
      while (is_punct(";")) next();
      if (is_punct(".") || is_punct("}")) break;
    }
  }

  void group(QueryAst& q) {
    while (!is_punct("}")) {
      if (peek().type == TokenType::End) {
        detail::fail_at(peek(), "expected '}' but found end of input");
      }
      if (is_keyword("FILTER")) {
        next();
        expect_punct("(");
        q.filters.push_back(or_expr());
        expect_punct(")");
      } else {
        triples_same_subject(q.where);
        if (!is_punct(".") && !is_punct("}") && !is_keyword("FILTER")) {
          detail::fail_at(peek(), "expected '.' or '}' but found " + detail::describe(peek()));
        }
      }
      if (is_punct(".")) next();
    }
    if (q.where.empty()) detail::fail_at(peek(), "WHERE clause needs at least one triple pattern");
  }

  FilterExpr or_expr() {
    FilterExpr first = and_expr();
    if (!is_punct("||")) return first;
    FilterExpr node;
    node.kind = FilterExpr::Kind::Or;
    node.children.push_back(std::move(first));
    while (is_punct("||")) {
      next();
      node.children.push_back(and_expr());
    }
    return node;
  }

  FilterExpr and_expr() {
    FilterExpr first = unary_expr();
    if (!is_punct("&&")) return first;
    FilterExpr node;
    node.kind = FilterExpr::Kind::And;
    node.children.push_back(std::move(first));
    while (is_punct("&&")) {
      next();
      node.children.push_back(unary_expr());
    }
    return node;
  }

  FilterExpr unary_expr() {
    if (is_punct("!")) {
      next();
      FilterExpr node;
      node.kind = FilterExpr::Kind::Not;
      node.children.push_back(unary_expr());
      return node;
    }
    if (is_punct("(")) {
      next();
      FilterExpr inner = or_expr();
      expect_punct(")");
      return inner;
    }
    FilterExpr node;
    node.kind = FilterExpr::Kind::Compare;
    node.lhs = operand();
    const Token& op = next();
    static const std::pair<std::string_view, CompareOp> kOps[] = {
        {"=", CompareOp::Eq}, {"!=", CompareOp::Ne}, {"<", CompareOp::Lt},
        {"<=", CompareOp::Le}, {">", CompareOp::Gt}, {">=", CompareOp::Ge}};
    bool found = false;
    for (const auto& [text, value] : kOps) {
      if (op.type == TokenType::Punct && op.text == text) {
        node.op = value;
        found = true;
      }
    }
    if (!found) detail::fail_at(op, "expected comparison operator but found " + detail::describe(op));
    node.rhs = operand();
    return node;
  }

  PatternTerm operand() {
    if (peek().type == TokenType::Var) filter_vars_.emplace(peek().text, &peek());
    return term("filter operand", true);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const std::map<std::string, std::string>* prefixes_ = nullptr;
  std::map<std::string, const Token*> filter_vars_;
};

}  // namespace

QueryAst parse_query(std::string_view text) { return QueryParser(text).run(); }

}  // namespace sgw
