// Random generators shared by the unit tests and the acceptance runner.
#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "sgw/graph.hpp"
#include "sgw/rdf.hpp"

namespace sgw::testkit {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline void put_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Lexical forms heavy on characters that need escaping and on multi-byte
// UTF-8.
inline std::string random_lexical(Rng& rng, std::size_t max_len = 12) {
  static const std::vector<char32_t> pool = {
      'a', 'b', 'Z', '0', '7', ' ', '.', '<', '>', '#', '@', '^', '_', ':',
      '"', '\\', '\n', '\r', '\t', '\b', '\f', 0x01, 0x1F, 0x7F,
      0x00E9, 0x00DF, 0x00A0, 0x2028, 0x4E2D, 0xFFFD, 0x1F600, 0x10348};
  std::string out;
  const std::size_t len = pick(rng, max_len + 1);
  for (std::size_t i = 0; i < len; ++i) put_utf8(out, pool[pick(rng, pool.size())]);
  return out;
}

inline std::string random_iri(Rng& rng) {
  static const std::vector<std::string> bases = {"http://ex.org/", "https://example.com/a/b#",
                                                 "urn:x:", "http://\xc3\xa9x.org/"};
  static const std::vector<char32_t> pool = {'a', 'q', 'Z', '9', '-', '.', '_', '~', '/',
                                             '?', '=', '%', '&', '#', 0x00FC, 0x4E2D, 0x1F600};
  std::string out = bases[pick(rng, bases.size())];
  const std::size_t len = 1 + pick(rng, 8);
  for (std::size_t i = 0; i < len; ++i) put_utf8(out, pool[pick(rng, pool.size())]);
  return out;
}

inline std::string random_blank_label(Rng& rng) {
  static const std::string chars = "abcXYZ019_";
  std::string out;
  const std::size_t len = 1 + pick(rng, 6);
  for (std::size_t i = 0; i < len; ++i) out += chars[pick(rng, chars.size())];
  return out;
}

inline Term random_literal(Rng& rng) {
  switch (pick(rng, 4)) {
    case 0: return Term::literal(random_lexical(rng));
    case 1: {
      static const std::vector<std::string> tags = {"en", "de-ch", "zh-hant-tw", "x-a1"};
      return Term::lang_literal(random_lexical(rng), tags[pick(rng, tags.size())]);
    }
    case 2: {
      static const std::vector<std::string_view> types = {vocab::kXsdInteger, vocab::kXsdString,
                                                          vocab::kXsdBoolean};
      return Term::literal(random_lexical(rng), std::string(types[pick(rng, types.size())]));
    }
    default: return Term::literal(random_lexical(rng), random_iri(rng));
  }
}

inline Term random_subject(Rng& rng) {
  return chance(rng, 0.25) ? Term::blank(random_blank_label(rng)) : Term::iri(random_iri(rng));
}

inline Term random_object(Rng& rng) {
  switch (pick(rng, 3)) {
    case 0: return Term::iri(random_iri(rng));
    case 1: return Term::blank(random_blank_label(rng));
    default: return random_literal(rng);
  }
}

inline TripleSet random_triple_set(Rng& rng, std::size_t max_triples) {
  TripleSet out;
  const std::size_t n = pick(rng, max_triples + 1);
  while (out.size() < n) {
    out.insert({random_subject(rng), Term::iri(random_iri(rng)), random_object(rng)});
  }
  return out;
}

// Small vocabularies so that joins and merges actually hit.
inline std::string ex(std::string_view local) { return "http://ex.org/" + std::string(local); }

// Dense store over a few subjects/predicates with numeric and plain literals.
inline TripleSet random_dense_store(Rng& rng, std::size_t max_triples) {
  static const std::vector<Term> nodes = {Term::iri(ex("a")), Term::iri(ex("b")),
                                          Term::iri(ex("c")), Term::iri(ex("d")),
                                          Term::blank("n1")};
  static const std::vector<Term> preds = {Term::iri(ex("p")), Term::iri(ex("q")),
                                          Term::iri(ex("r"))};
  static const std::vector<Term> literals = {
      Term::literal("1", std::string(vocab::kXsdInteger)),
      Term::literal("3", std::string(vocab::kXsdInteger)),
      Term::literal("-2", std::string(vocab::kXsdInteger)),
      Term::literal("2.5", std::string(vocab::kXsdDecimal)),
      Term::literal("1e1", std::string(vocab::kXsdDouble)),
      Term::literal("10"),
      Term::literal("apple"),
      Term::literal("Banana"),
      Term::lang_literal("apple", "en"),
      Term::literal("\xc3\xa9t\xc3\xa9")};
  TripleSet out;
  const std::size_t n = pick(rng, max_triples + 1);
  for (std::size_t attempts = 0; out.size() < n && attempts < 10 * n + 10; ++attempts) {
    const Term& s = nodes[pick(rng, nodes.size())];
    const Term& p = preds[pick(rng, preds.size())];
    const Term o = chance(rng, 0.5) ? nodes[pick(rng, nodes.size())]
                                    : literals[pick(rng, literals.size())];
    out.insert({s, p, o});
  }
  return out;
}

// Random graph on `n` concepts (ids 1..n, IRIs ex:c<i>) with two relation
// types; self-loops allowed.
inline SemanticGraph random_plain_graph(Rng& rng, std::size_t n, std::size_t max_relations) {
  SemanticGraph g;
  for (std::size_t i = 1; i <= n; ++i) g.create_concept(ex("c" + std::to_string(i)), "Thing", "gen");
  if (n == 0) return g;
  const std::size_t m = pick(rng, max_relations + 1);
  for (std::size_t k = 0; k < m; ++k) {
    const ConceptId a{1 + pick(rng, n)};
    const ConceptId b = chance(rng, 0.05) ? a : ConceptId{1 + pick(rng, n)};
    g.add_relation(a, b, chance(rng, 0.5) ? ex("r1") : ex("r2"), "gen");
  }
  return g;
}

inline AttributeValue attribute_from(std::string name, const Term& literal) {
  AttributeValue a{std::move(name), literal.value, std::nullopt, literal.lang};
  if (!literal.datatype.empty()) a.datatype = literal.datatype;
  return a;
}

// Graph inside the shared subset: every concept has an IRI; class ids,
// relation types and attribute names are IRIs; every concept shows up in at
// least one exported triple.
inline SemanticGraph random_shared_graph(Rng& rng) {
  SemanticGraph g;
  const std::size_t n = 1 + pick(rng, 8);
  std::vector<ConceptId> ids;
  for (std::size_t i = 0; i < n; ++i) {
    std::string iri = ex("k" + std::to_string(i));
    if (chance(rng, 0.3)) put_utf8(iri, 0x4E2D);
    const std::string cls = chance(rng, 0.3) ? "Thing" : ex("C" + std::to_string(pick(rng, 4)));
    ids.push_back(g.create_concept(iri, cls, "gen"));
  }
  for (int c = 1; c < 4; ++c) {
    if (chance(rng, 0.5)) {
      g.set_class_parent(ex("C" + std::to_string(c)), ex("C" + std::to_string(pick(rng, c))));
    }
  }
  for (ConceptId id : ids) {
    if (chance(rng, 0.5)) g.set_concept_name(id, random_lexical(rng, 6));
    const std::size_t attrs = pick(rng, 4);
    for (std::size_t k = 0; k < attrs; ++k) {
      g.add_concept_attribute(id, attribute_from(ex("a" + std::to_string(pick(rng, 3))), random_literal(rng)));
    }
  }
  const std::size_t m = pick(rng, 2 * n + 1);
  for (std::size_t k = 0; k < m; ++k) {
    g.add_relation(ids[pick(rng, n)], ids[pick(rng, n)], ex("r" + std::to_string(pick(rng, 3))), "gen");
  }
  for (ConceptId id : ids) {
    const Concept& c = g.concept_at(id);
    if (c.class_id == kDefaultClass && !c.name && c.attributes.empty() && g.outgoing(id).empty() &&
        g.incoming(id).empty()) {
      g.set_concept_class(id, ex("C0"));
    }
  }
  return g;
}

// Skolem-free TripleSet inside the shared subset: IRI subjects, rdf:type and
// rdfs:subClassOf with IRI objects, a subclass forest, labels of every kind.
inline TripleSet random_shared_triples(Rng& rng) {
  const Term type = Term::iri(std::string(vocab::kRdfType));
  const Term label = Term::iri(std::string(vocab::kRdfsLabel));
  const Term sub = Term::iri(std::string(vocab::kRdfsSubClassOf));
  auto subject = [&] { return Term::iri(ex("s" + std::to_string(pick(rng, 6)))); };
  auto cls = [&](std::size_t i) { return Term::iri(ex("C" + std::to_string(i))); };
  TripleSet out;
  for (std::size_t c = 1; c < 4; ++c) {
    if (chance(rng, 0.4)) out.insert({cls(c), sub, cls(pick(rng, c))});
  }
  const std::size_t n = pick(rng, 16);
  for (std::size_t k = 0; k < n; ++k) {
    switch (pick(rng, 5)) {
      case 0: out.insert({subject(), type, cls(pick(rng, 4))}); break;
      case 1: {
        Term lit = random_literal(rng);
        if (chance(rng, 0.5)) lit = Term::literal(random_lexical(rng, 5));
        out.insert({subject(), label, lit});
        break;
      }
      case 2: out.insert({subject(), Term::iri(ex("a" + std::to_string(pick(rng, 3)))), random_literal(rng)}); break;
      default: out.insert({subject(), Term::iri(ex("r" + std::to_string(pick(rng, 3)))), subject()}); break;
    }
  }
  return out;
}

// Concepts with overlapping accessions and source tags, two classes, a few
// plain and equ relations.
inline SemanticGraph random_accession_graph(Rng& rng, std::size_t max_concepts = 12) {
  SemanticGraph g;
  const std::size_t n = 1 + pick(rng, max_concepts);
  for (std::size_t i = 0; i < n; ++i) {
    const ConceptId id = g.create_concept(ex("m" + std::to_string(i)), chance(rng, 0.5) ? "A" : "B",
                                          "s" + std::to_string(pick(rng, 3)));
    if (chance(rng, 0.3)) g.add_concept_source(id, "s" + std::to_string(pick(rng, 3)));
    const std::size_t accs = pick(rng, 3);
    for (std::size_t k = 0; k < accs; ++k) {
      g.add_accession(id, {chance(rng, 0.7) ? "UNIPROT" : "TAIR", "P" + std::to_string(pick(rng, 5))});
    }
  }
  const std::size_t m = pick(rng, n + 1);
  for (std::size_t k = 0; k < m; ++k) {
    const ConceptId a{1 + pick(rng, n)}, b{1 + pick(rng, n)};
    g.add_relation(a, b, chance(rng, 0.3) ? std::string(kEquRelation) : ex("r"), "gen");
  }
  return g;
}

}  // namespace sgw::testkit

namespace sgw {
// Readable gtest output for terms.
inline void PrintTo(const Term& t, std::ostream* os) {
  *os << (t.is_iri() ? "<" + t.value + ">" : t.is_blank() ? "_:" + t.value : "\"" + t.value + "\"");
  if (!t.lang.empty()) *os << "@" << t.lang;
  if (!t.datatype.empty()) *os << "^^<" << t.datatype << ">";
}
}  // namespace sgw
