#include <algorithm>
#include <cctype>
#include <cstdio>
#include <vector>

#include "lex.hpp"
#include "sgw/error.hpp"
#include "sgw/rdf.hpp"

namespace sgw {

using detail::Cursor;

Term Term::iri(std::string value) {
  if (value.empty()) throw Error(ErrorKind::InvalidArgument, "empty IRI");
  return Term{TermKind::Iri, std::move(value), {}, {}};
}

Term Term::blank(std::string label) {
  const bool valid = !label.empty() &&
                     std::all_of(label.begin(), label.end(), [](char c) {
                       return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                     });
  if (!valid) {
    throw Error(ErrorKind::InvalidArgument, "invalid blank node label '" + label + "'");
  }
  return Term{TermKind::Blank, std::move(label), {}, {}};
}

Term Term::literal(std::string lexical, std::string datatype) {
  return Term{TermKind::Literal, std::move(lexical), std::move(datatype), {}};
}

Term Term::lang_literal(std::string lexical, std::string lang) {
  std::transform(lang.begin(), lang.end(), lang.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return Term{TermKind::Literal, std::move(lexical), {}, std::move(lang)};
}

bool has_iri_scheme(std::string_view text) {
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text[0]))) return false;
  for (std::size_t i = 1; i < text.size(); ++i) {
    const char c = text[i];
    if (c == ':') return true;
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
      return false;
    }
  }
  return false;
}

namespace {

void append_uescape(std::string& out, unsigned char c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "\\u%04X", c);
  out += buf;
}

void append_iri(std::string& out, std::string_view iri) {
  out.push_back('<');
  for (char c : iri) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' ||
        c == '|' || c == '^' || c == '`' || c == '\\') {
      append_uescape(out, u);
    } else {
      out.push_back(c);
    }
  }
  out.push_back('>');
}

void append_literal(std::string& out, const Term& term) {
  out.push_back('"');
  for (char c : term.value) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default: {
        const auto u = static_cast<unsigned char>(c);
        if (u < 0x20 || u == 0x7F) {
          append_uescape(out, u);
        } else {
          out.push_back(c);
        }
      }
    }
  }
  out.push_back('"');
  if (!term.lang.empty()) {
    out.push_back('@');
    out += term.lang;
  } else if (!term.datatype.empty()) {
    out += "^^";
    append_iri(out, term.datatype);
  }
}

void append_term(std::string& out, const Term& term) {
  switch (term.kind) {
    case TermKind::Iri: append_iri(out, term.value); break;
    case TermKind::Blank: out += "_:" + term.value; break;
    case TermKind::Literal: append_literal(out, term); break;
  }
}

void skip_inline_space(Cursor& in) {
  while (in.peek() == ' ' || in.peek() == '\t') in.get();
}

Term read_subject(Cursor& in) {
  if (in.peek() == '<') return Term::iri(detail::read_iriref(in));
  if (in.starts_with("_:")) return Term::blank(detail::read_blank_label(in));
  in.fail("expected IRI or blank node as subject");
}

Term read_object(Cursor& in) {
  if (in.peek() == '<') return Term::iri(detail::read_iriref(in));
  if (in.starts_with("_:")) return Term::blank(detail::read_blank_label(in));
  if (in.peek() != '"') in.fail("expected IRI, blank node or literal as object");
  std::string lexical = detail::read_quoted(in);
  if (in.starts_with("^^")) {
    in.skip(2);
    if (in.peek() != '<') in.fail("expected datatype IRI after '^^'");
    return Term::literal(std::move(lexical), detail::read_iriref(in));
  }
  if (in.peek() == '@') return Term::lang_literal(std::move(lexical), detail::read_langtag(in));
  return Term::literal(std::move(lexical));
}

}  // namespace

std::string to_ntriples(const Term& term) {
  std::string out;
  append_term(out, term);
  return out;
}

std::string to_ntriples(const Triple& triple) {
  std::string out;
  append_term(out, triple.s);
  out.push_back(' ');
  append_term(out, triple.p);
  out.push_back(' ');
  append_term(out, triple.o);
  out += " .";
  return out;
}

TripleSet parse_ntriples(std::string_view text) {
  TripleSet triples;
  Cursor in(text);
  while (!in.at_end()) {
    skip_inline_space(in);
    const char c = in.peek();
    if (c == '\n' || c == '\r') {
      in.get();
      continue;
    }
    if (c == '#') {
      while (!in.at_end() && in.peek() != '\n') in.get();
      continue;
    }
    if (in.at_end()) break;

    Triple t;
    t.s = read_subject(in);
    skip_inline_space(in);
    if (in.peek() != '<') in.fail("expected IRI as predicate");
    t.p = Term::iri(detail::read_iriref(in));
    skip_inline_space(in);
    t.o = read_object(in);
    skip_inline_space(in);
    if (in.peek() != '.') in.fail("expected '.' at end of statement");
    in.get();
    skip_inline_space(in);
    if (in.peek() == '#') {
      while (!in.at_end() && in.peek() != '\n') in.get();
    }
    if (!in.at_end() && in.peek() != '\n' && in.peek() != '\r') {
      in.fail("unexpected content after statement");
    }
    triples.insert(std::move(t));
  }
  return triples;
}

std::string serialize_ntriples(const TripleSet& triples) {
  std::vector<std::string> lines;
  lines.reserve(triples.size());
  for (const Triple& t : triples) lines.push_back(to_ntriples(t));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out.push_back('\n');
  }
  return out;
}

RdfFormat format_from_path(std::string_view path) {
  if (path.ends_with(".nt")) return RdfFormat::NTriples;
  if (path.ends_with(".ttl")) return RdfFormat::Turtle;
  throw Error(ErrorKind::InvalidArgument,
              "cannot infer RDF format of '" + std::string(path) + "' (expected .nt or .ttl)");
}

RdfFormat format_from_media_type(std::string_view media_type) {
  const std::string_view base = media_type.substr(0, media_type.find(';'));
  if (base == "application/n-triples" || base == "text/plain") return RdfFormat::NTriples;
  if (base == "text/turtle" || base == "application/x-turtle") return RdfFormat::Turtle;
  throw Error(ErrorKind::InvalidArgument,
              "unsupported RDF media type '" + std::string(media_type) + "'");
}

TripleSet parse_rdf(std::string_view text, RdfFormat format) {
  return format == RdfFormat::NTriples ? parse_ntriples(text) : parse_turtle(text);
}

}  // namespace sgw
