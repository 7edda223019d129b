#pragma once

#include <compare>
#include <set>
#include <string>
#include <string_view>

#include "sgw/error.hpp"

namespace sgw {

namespace vocab {
inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfsLabel =
    "http://www.w3.org/2000/01/rdf-schema#label";
inline constexpr std::string_view kRdfsSubClassOf =
    "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kXsdInteger =
    "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kXsdDecimal =
    "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kXsdDouble =
    "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view kXsdBoolean =
    "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view kXsdString =
    "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kXsdAnyUri =
    "http://www.w3.org/2001/XMLSchema#anyURI";
}  // namespace vocab

// Declaration order is the term order used by ORDER BY: Blank < Iri < Literal.
enum class TermKind { Blank, Iri, Literal };

/// An RDF term. `value` holds the IRI, the literal's lexical form, or the
/// blank node label. `datatype` and `lang` are empty when absent; at most one
/// of them is set, and only on literals.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;
  std::string datatype;
  std::string lang;

  static Term iri(std::string value);
  static Term blank(std::string label);
  static Term literal(std::string lexical, std::string datatype = {});
  static Term lang_literal(std::string lexical, std::string lang);

  bool is_iri() const noexcept { return kind == TermKind::Iri; }
  bool is_blank() const noexcept { return kind == TermKind::Blank; }
  bool is_literal() const noexcept { return kind == TermKind::Literal; }

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

struct Triple {
  Term s;
  Term p;
  Term o;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

using TripleSet = std::set<Triple>;

// True when `text` starts with an IRI scheme (ALPHA *(ALPHA/DIGIT/+/-/.) ":").
bool has_iri_scheme(std::string_view text);

// Syntactic form of a single term, as it appears in N-Triples.
std::string to_ntriples(const Term& term);
std::string to_ntriples(const Triple& triple);

/// Parses an N-Triples document. Comment and blank lines are skipped; relative
/// IRIs are rejected. Throws SyntaxError for the first malformed statement.
TripleSet parse_ntriples(std::string_view text);

/// Parses the supported Turtle subset: @prefix/PREFIX, prefixed names, `a`,
/// `;` and `,` lists, single-line strings, numeric and boolean shorthand.
/// Collections, `[...]` and long strings are rejected with SyntaxError; an
/// undeclared prefix raises SyntaxError with kind UnknownPrefix.
TripleSet parse_turtle(std::string_view text);

/// Canonical N-Triples: one statement per line, lines sorted bytewise, each
/// line terminated by '\n'. The empty set serializes to "".
std::string serialize_ntriples(const TripleSet& triples);

enum class RdfFormat { NTriples, Turtle };

// Picks a parser from a file name (.nt / .ttl) or a media type.
RdfFormat format_from_path(std::string_view path);
RdfFormat format_from_media_type(std::string_view media_type);

TripleSet parse_rdf(std::string_view text, RdfFormat format);

}  // namespace sgw
