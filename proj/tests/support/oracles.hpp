// Brute-force reference implementations used as test oracles. None of them
// calls into the code under test except for reading graph contents.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sgw/graph.hpp"
#include "sgw/rdf.hpp"
#include "support/gen.hpp"

namespace sgw::testkit {

// ---------------------------------------------------------------------------
// Basic graph patterns

using Slot = std::variant<Term, std::string>;  // constant or variable name
using OPattern = std::array<Slot, 3>;
using Binding = std::map<std::string, Term>;

inline std::string term_text(const Term& t) {
  std::string out;
  switch (t.kind) {
    case TermKind::Iri: return "<" + t.value + ">";
    case TermKind::Blank: return "_:" + t.value;
    case TermKind::Literal: break;
  }
  out += '"';
  for (char c : t.value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += '"';
  if (!t.lang.empty()) out += "@" + t.lang;
  if (!t.datatype.empty()) out += "^^<" + t.datatype + ">";
  return out;
}

inline std::string slot_text(const Slot& s) {
  if (const auto* v = std::get_if<std::string>(&s)) return "?" + *v;
  return term_text(std::get<Term>(s));
}

namespace detail {

inline bool unify(const Slot& slot, const Term& value, Binding& b) {
  if (const auto* c = std::get_if<Term>(&slot)) return *c == value;
  const auto& name = std::get<std::string>(slot);
  auto it = b.find(name);
  if (it == b.end()) {
    b.emplace(name, value);
    return true;
  }
  return it->second == value;
}

inline void nested_loop(const std::vector<Triple>& store, const std::vector<OPattern>& patterns,
                        std::size_t i, const Binding& current, std::vector<Binding>& out) {
  if (i == patterns.size()) {
    out.push_back(current);
    return;
  }
  for (const Triple& t : store) {
    Binding next = current;
    if (unify(patterns[i][0], t.s, next) && unify(patterns[i][1], t.p, next) &&
        unify(patterns[i][2], t.o, next)) {
      nested_loop(store, patterns, i + 1, next, out);
    }
  }
}

}  // namespace detail

// Every assignment making all patterns store triples, once each.
inline std::vector<Binding> oracle_bgp(const TripleSet& store, const std::vector<OPattern>& patterns) {
  const std::vector<Triple> triples(store.begin(), store.end());
  std::vector<Binding> out;
  detail::nested_loop(triples, patterns, 0, {}, out);
  return out;
}

// ---------------------------------------------------------------------------
// Filters

struct OFilter {
  enum Kind { Cmp, And, Or, Not } kind = Cmp;
  std::string op;  // = != < <= > >=
  Slot lhs, rhs;
  std::vector<OFilter> kids;
};

inline std::string filter_text(const OFilter& f) {
  switch (f.kind) {
    case OFilter::Cmp: return "(" + slot_text(f.lhs) + " " + f.op + " " + slot_text(f.rhs) + ")";
    case OFilter::Not: return "(!" + filter_text(f.kids[0]) + ")";
    case OFilter::And:
    case OFilter::Or: {
      std::string out = "(";
      for (std::size_t i = 0; i < f.kids.size(); ++i) {
        if (i) out += f.kind == OFilter::And ? " && " : " || ";
        out += filter_text(f.kids[i]);
      }
      return out + ")";
    }
  }
  return {};
}

inline std::u32string code_points(const std::string& s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out += cp;
    i += len;
  }
  return out;
}

inline bool numeric_type(const Term& t) {
  return t.is_literal() && (t.datatype == vocab::kXsdInteger || t.datatype == vocab::kXsdDecimal ||
                            t.datatype == vocab::kXsdDouble);
}

// nullopt is the error value.
inline std::optional<bool> oracle_compare(const std::string& op, const Term& a, const Term& b) {
  int sign = 0;
  if (numeric_type(a) && numeric_type(b)) {
    const double x = std::stod(a.value);
    const double y = std::stod(b.value);
    sign = x < y ? -1 : x > y ? 1 : 0;
  } else {
    // Kinds must agree, and a number never compares with a non-number.
    if (a.kind != b.kind || numeric_type(a) != numeric_type(b)) return std::nullopt;
    const std::u32string x = code_points(a.value);
    const std::u32string y = code_points(b.value);
    sign = x < y ? -1 : x > y ? 1 : 0;
  }
  if (op == "=") return sign == 0;
  if (op == "!=") return sign != 0;
  if (op == "<") return sign < 0;
  if (op == "<=") return sign <= 0;
  if (op == ">") return sign > 0;
  return sign >= 0;
}

inline std::optional<bool> oracle_filter(const OFilter& f, const Binding& b) {
  auto resolve = [&](const Slot& s) -> Term {
    if (const auto* v = std::get_if<std::string>(&s)) return b.at(*v);
    return std::get<Term>(s);
  };
  switch (f.kind) {
    case OFilter::Cmp: return oracle_compare(f.op, resolve(f.lhs), resolve(f.rhs));
    case OFilter::Not: {
      auto v = oracle_filter(f.kids[0], b);
      if (!v) return std::nullopt;
      return !*v;
    }
    case OFilter::And: {
      bool error = false;
      for (const OFilter& k : f.kids) {
        auto v = oracle_filter(k, b);
        if (v && !*v) return false;
        if (!v) error = true;
      }
      if (error) return std::nullopt;
      return true;
    }
    case OFilter::Or: {
      bool error = false;
      for (const OFilter& k : f.kids) {
        auto v = oracle_filter(k, b);
        if (v && *v) return true;
        if (!v) error = true;
      }
      if (error) return std::nullopt;
      return false;
    }
  }
  return std::nullopt;
}

// Random BGP query over random_dense_store vocabularies, with its text.
struct OQuery {
  std::vector<OPattern> patterns;
  std::vector<OFilter> filters;
  std::vector<std::string> projection;
  bool distinct = false;
  std::optional<std::string> order_var;
  bool descending = false;

  std::string text() const {
    std::string out = "SELECT ";
    if (distinct) out += "DISTINCT ";
    for (const auto& v : projection) out += "?" + v + " ";
    out += "WHERE { ";
    for (const auto& p : patterns) {
      out += slot_text(p[0]) + " " + slot_text(p[1]) + " " + slot_text(p[2]) + " . ";
    }
    for (const auto& f : filters) out += "FILTER " + filter_text(f) + " ";
    out += "}";
    if (order_var) out += std::string(" ORDER BY ") + (descending ? "DESC" : "ASC") + "(?" + *order_var + ")";
    return out;
  }

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    for (const auto& p : patterns) {
      for (const Slot& s : p) {
        if (const auto* v = std::get_if<std::string>(&s);
            v && std::find(out.begin(), out.end(), *v) == out.end()) {
          out.push_back(*v);
        }
      }
    }
    return out;
  }
};

inline OQuery random_query(Rng& rng, const TripleSet& store, bool with_filters) {
  static const std::vector<std::string> var_pool = {"x", "y", "z", "w"};
  static const std::vector<Term> consts = {
      Term::iri(ex("a")), Term::iri(ex("b")), Term::iri(ex("p")), Term::iri(ex("q")),
      Term::iri(ex("r")), Term::literal("apple"), Term::literal("3", std::string(vocab::kXsdInteger)),
      Term::iri(ex("zz"))};
  const std::vector<Triple> triples(store.begin(), store.end());
  OQuery q;
  const std::size_t n = 1 + pick(rng, 4);
  for (std::size_t i = 0; i < n; ++i) {
    OPattern p;
    // Seed constants from actual triples so patterns tend to match.
    const Triple* t = triples.empty() ? nullptr : &triples[pick(rng, triples.size())];
    const Term parts[3] = {t ? t->s : consts[0], t ? t->p : consts[2], t ? t->o : consts[1]};
    for (int k = 0; k < 3; ++k) {
      if (chance(rng, 0.6)) {
        p[k] = var_pool[pick(rng, var_pool.size())];
      } else if (chance(rng, 0.85) && !parts[k].is_blank()) {
        p[k] = parts[k];
      } else {
        Term c = consts[pick(rng, consts.size())];
        if (k == 0 && !c.is_iri()) c = consts[0];
        if (k == 1 && !c.is_iri()) c = consts[2];
        p[k] = c;
      }
    }
    q.patterns.push_back(p);
  }
  const std::vector<std::string> vars = q.variables();
  if (vars.empty()) {
    q.patterns[0][0] = std::string("x");
  }
  const std::vector<std::string> all = q.variables();

  if (with_filters && chance(rng, 0.8)) {
    static const std::vector<std::string> ops = {"=", "!=", "<", "<=", ">", ">="};
    static const std::vector<Term> filter_consts = {
        Term::literal("2", std::string(vocab::kXsdInteger)),
        Term::literal("2.5", std::string(vocab::kXsdDecimal)),
        Term::literal("apple"),
        Term::literal("B"),
        Term::iri(ex("b")),
        Term::literal("1e0", std::string(vocab::kXsdDouble))};
    auto cmp = [&] {
      OFilter f;
      f.op = ops[pick(rng, ops.size())];
      f.lhs = all[pick(rng, all.size())];
      f.rhs = chance(rng, 0.3) ? Slot(all[pick(rng, all.size())])
                               : Slot(filter_consts[pick(rng, filter_consts.size())]);
      if (chance(rng, 0.3)) std::swap(f.lhs, f.rhs);
      return f;
    };
    const std::size_t nf = 1 + pick(rng, 2);
    for (std::size_t i = 0; i < nf; ++i) {
      OFilter f = cmp();
      switch (pick(rng, 4)) {
        case 0: {
          OFilter g{OFilter::And, {}, {}, {}, {f, cmp()}};
          f = g;
          break;
        }
        case 1: {
          OFilter g{OFilter::Or, {}, {}, {}, {f, cmp()}};
          f = g;
          break;
        }
        case 2: {
          OFilter g{OFilter::Not, {}, {}, {}, {f}};
          f = g;
          break;
        }
        default: break;
      }
      q.filters.push_back(f);
    }
  }

  for (const auto& v : all) {
    if (chance(rng, 0.7)) q.projection.push_back(v);
  }
  if (q.projection.empty()) q.projection.push_back(all[0]);
  q.distinct = chance(rng, 0.3);
  if (chance(rng, 0.3)) {
    q.order_var = all[pick(rng, all.size())];
    q.descending = chance(rng, 0.5);
  }
  return q;
}

// Filtered, projected, optionally distinct rows, as a sorted multiset.
inline std::vector<Binding> oracle_select_multiset(const TripleSet& store, const OQuery& q) {
  std::vector<Binding> rows;
  for (const Binding& b : oracle_bgp(store, q.patterns)) {
    bool keep = true;
    for (const OFilter& f : q.filters) {
      auto v = oracle_filter(f, b);
      if (!v || !*v) keep = false;
    }
    if (!keep) continue;
    Binding projected;
    for (const auto& v : q.projection) projected.emplace(v, b.at(v));
    rows.push_back(projected);
  }
  std::sort(rows.begin(), rows.end());
  if (q.distinct) rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

// Blank < Iri < Literal, then code point order of the lexical value.
inline int order_key_compare(const Term& a, const Term& b) {
  auto rank = [](const Term& t) { return t.is_blank() ? 0 : t.is_iri() ? 1 : 2; };
  if (rank(a) != rank(b)) return rank(a) < rank(b) ? -1 : 1;
  const auto x = code_points(a.value);
  const auto y = code_points(b.value);
  return x < y ? -1 : x > y ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Graph algorithms

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Floyd-Warshall over concept ids; returns dist[i][j] indexed by position in
// `ids`.
struct AllPairs {
  std::vector<ConceptId> ids;
  std::map<ConceptId, std::size_t> index;
  std::vector<std::vector<int>> dist;
  std::vector<std::vector<bool>> edge;

  int at(ConceptId a, ConceptId b) const { return dist[index.at(a)][index.at(b)]; }
  bool adjacent(ConceptId a, ConceptId b) const { return edge[index.at(a)][index.at(b)]; }
};

inline AllPairs floyd_warshall(const SemanticGraph& g, bool directed) {
  AllPairs ap;
  for (const auto& [id, c] : g.concepts()) {
    ap.index[id] = ap.ids.size();
    ap.ids.push_back(id);
  }
  const std::size_t n = ap.ids.size();
  ap.dist.assign(n, std::vector<int>(n, kInf));
  ap.edge.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) ap.dist[i][i] = 0;
  for (const auto& [rid, r] : g.relations()) {
    const std::size_t a = ap.index.at(r.from), b = ap.index.at(r.to);
    ap.edge[a][b] = true;
    if (!directed) ap.edge[b][a] = true;
    if (a != b) {
      ap.dist[a][b] = 1;
      if (!directed) ap.dist[b][a] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (ap.dist[i][k] + ap.dist[k][j] < ap.dist[i][j]) ap.dist[i][j] = ap.dist[i][k] + ap.dist[k][j];
  return ap;
}

// Lexicographically smallest shortest path from a to b, or empty.
inline std::vector<ConceptId> oracle_path(const AllPairs& ap, ConceptId a, ConceptId b) {
  if (ap.at(a, b) >= kInf) return {};
  std::vector<ConceptId> path{a};
  ConceptId cur = a;
  while (cur != b) {
    for (ConceptId next : ap.ids) {
      if (next != cur && ap.adjacent(cur, next) && ap.at(next, b) == ap.at(cur, b) - 1) {
        cur = next;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

// Component number (1..k, ordered by smallest member) per concept, by DFS on
// the undirected relation graph.
inline std::map<ConceptId, int> oracle_components(const SemanticGraph& g) {
  std::map<ConceptId, std::vector<ConceptId>> adj;
  for (const auto& [id, c] : g.concepts()) adj[id];
  for (const auto& [rid, r] : g.relations()) {
    adj[r.from].push_back(r.to);
    adj[r.to].push_back(r.from);
  }
  std::map<ConceptId, int> label;
  int k = 0;
  for (const auto& [id, c] : g.concepts()) {
    if (label.contains(id)) continue;
    ++k;
    std::vector<ConceptId> stack{id};
    label[id] = k;
    while (!stack.empty()) {
      const ConceptId cur = stack.back();
      stack.pop_back();
      for (ConceptId n : adj[cur]) {
        if (!label.contains(n)) {
          label[n] = k;
          stack.push_back(n);
        }
      }
    }
  }
  return label;
}

// Concepts within undirected distance `depth` of any seed.
inline std::set<ConceptId> oracle_ball(const SemanticGraph& g, const std::vector<ConceptId>& seeds,
                                       int depth) {
  const AllPairs ap = floyd_warshall(g, false);
  std::set<ConceptId> out;
  for (ConceptId v : ap.ids) {
    for (ConceptId s : seeds) {
      if (ap.at(s, v) <= depth) out.insert(v);
    }
  }
  return out;
}

// New equ pairs (smaller id first) by scanning every concept pair.
inline std::set<std::pair<ConceptId, ConceptId>> oracle_accession_pairs(const SemanticGraph& g,
                                                                       bool same_class) {
  std::set<std::pair<ConceptId, ConceptId>> out;
  for (const auto& [a, ca] : g.concepts()) {
    for (const auto& [b, cb] : g.concepts()) {
      if (!(a < b)) continue;
      if (same_class && ca.class_id != cb.class_id) continue;
      bool shared = false, overlap = false;
      for (const Accession& x : ca.accessions) shared = shared || cb.accessions.contains(x);
      for (const std::string& s : ca.sources) overlap = overlap || cb.sources.contains(s);
      if (!shared || overlap) continue;
      bool linked = false;
      for (const auto& [rid, r] : g.relations()) {
        if (r.rtype == kEquRelation && ((r.from == a && r.to == b) || (r.from == b && r.to == a))) {
          linked = true;
        }
      }
      if (!linked) out.emplace(a, b);
    }
  }
  return out;
}

// Smallest member of each concept's class under the reflexive-transitive
// closure of equ relations (treated as undirected).
inline std::map<ConceptId, ConceptId> oracle_equ_representative(const SemanticGraph& g) {
  std::vector<ConceptId> ids;
  std::map<ConceptId, std::size_t> index;
  for (const auto& [id, c] : g.concepts()) {
    index[id] = ids.size();
    ids.push_back(id);
  }
  const std::size_t n = ids.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
  for (const auto& [rid, r] : g.relations()) {
    if (r.rtype != kEquRelation) continue;
    reach[index.at(r.from)][index.at(r.to)] = true;
    reach[index.at(r.to)][index.at(r.from)] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  std::map<ConceptId, ConceptId> rep;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (reach[i][j]) {
        rep[ids[i]] = ids[j];
        break;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Graph comparison up to ids

// Id-free description of a graph whose concepts all have IRIs: concepts keyed
// by IRI, relations by endpoint IRIs. Sources and accessions are included
// only when asked for.
inline std::string iri_dump(const SemanticGraph& g, bool with_sources = false) {
  std::ostringstream out;
  auto iri_of = [&](ConceptId id) {
    const Concept& c = g.concept_at(id);
    return c.iri ? *c.iri : "#" + std::to_string(id.value);
  };
  std::map<std::string, const Concept*> by_iri;
  for (const auto& [id, c] : g.concepts()) by_iri[iri_of(id)] = &c;
  for (const auto& [iri, c] : by_iri) {
    out << "concept " << iri << " class=" << c->class_id << " name=" << (c->name ? "'" + *c->name + "'" : "-")
        << "\n";
    for (const auto& a : c->attributes) {
      out << "  attr " << a.name << " '" << a.lexical << "' dt=" << a.datatype.value_or("-")
          << " lang=" << a.lang << "\n";
    }
    if (with_sources) {
      for (const auto& s : c->sources) out << "  source " << s << "\n";
      for (const auto& a : c->accessions) out << "  acc " << a.ns << ":" << a.value << "\n";
    }
  }
  std::set<std::string> relations;
  for (const auto& [rid, r] : g.relations()) {
    relations.insert("relation " + iri_of(r.from) + " " + r.rtype + " " + iri_of(r.to));
  }
  for (const auto& r : relations) out << r << "\n";
  for (const auto& [id, cls] : g.classes()) {
    if (cls.parent) out << "subclass " << id << " < " << *cls.parent << "\n";
  }
  return out.str();
}

}  // namespace sgw::testkit
