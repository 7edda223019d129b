#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sgw/rdf.hpp"

namespace sgw {

// ---------------------------------------------------------------------------
// Triple store

/// In-memory triple store. Terms are dictionary-encoded and every triple is
/// kept in three orderings (SPO, POS, OSP) so that any pattern with bound
/// positions is answered by a prefix range scan.
///
/// Many readers XOR one writer; callers serialize writes.
class TripleStore {
 public:
  using TermId = std::uint32_t;
  using Key = std::array<TermId, 3>;

  enum class Order { SPO, POS, OSP };

  TripleStore() = default;
  explicit TripleStore(const TripleSet& triples);

  // Returns true iff the triple was not present before.
  bool insert(const Triple& triple);
  bool contains(const Triple& triple) const;
  std::size_t size() const noexcept { return spo_.size(); }
  void clear();

  // All triples matching the pattern; std::nullopt positions are wildcards.
  std::vector<Triple> match(const std::optional<Term>& s, const std::optional<Term>& p,
                            const std::optional<Term>& o) const;
  std::size_t count(const std::optional<Term>& s, const std::optional<Term>& p,
                    const std::optional<Term>& o) const;

  // Full scan of one index, in that index's order.
  std::vector<Triple> scan(Order order) const;

  TripleSet triples() const;

  // Encoded access used by the evaluator.
  std::optional<TermId> lookup(const Term& term) const;
  const Term& term(TermId id) const { return terms_[id]; }

  template <class Fn>
  void for_each_match(const std::array<std::optional<TermId>, 3>& pattern, Fn&& fn) const;

 private:
  TermId intern(const Term& term);
  Triple decode(const Key& spo) const;

  std::vector<Term> terms_;
  std::map<Term, TermId> ids_;
  std::set<Key> spo_;
  std::set<Key> pos_;
  std::set<Key> osp_;
};

// ---------------------------------------------------------------------------
// Query AST

struct Variable {
  std::string name;

  auto operator<=>(const Variable&) const = default;
  bool operator==(const Variable&) const = default;
};

using PatternTerm = std::variant<Term, Variable>;

struct TriplePattern {
  PatternTerm s;
  PatternTerm p;
  PatternTerm o;

  bool operator==(const TriplePattern&) const = default;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

/// Filter expression tree. Comparisons use `lhs`/`rhs`; And/Or hold two or
/// more children; Not holds exactly one.
struct FilterExpr {
  enum class Kind { Compare, And, Or, Not };

  Kind kind = Kind::Compare;
  CompareOp op = CompareOp::Eq;
  PatternTerm lhs;
  PatternTerm rhs;
  std::vector<FilterExpr> children;

  bool operator==(const FilterExpr&) const = default;
};

struct SelectForm {
  bool distinct = false;
  bool star = false;
  std::vector<std::string> vars;  // filled from WHERE when star

  bool operator==(const SelectForm&) const = default;
};

struct ConstructForm {
  std::vector<TriplePattern> templ;

  bool operator==(const ConstructForm&) const = default;
};

struct OrderBy {
  std::string var;
  bool descending = false;

  bool operator==(const OrderBy&) const = default;
};

struct QueryAst {
  std::variant<SelectForm, ConstructForm> form;
  std::map<std::string, std::string> prefixes;
  std::vector<TriplePattern> where;
  std::vector<FilterExpr> filters;
  std::optional<OrderBy> order_by;
  std::optional<std::uint64_t> limit;
  std::optional<std::uint64_t> offset;

  bool is_select() const { return std::holds_alternative<SelectForm>(form); }
  bool is_construct() const { return std::holds_alternative<ConstructForm>(form); }
  const SelectForm& select() const { return std::get<SelectForm>(form); }
  const ConstructForm& construct() const { return std::get<ConstructForm>(form); }

  bool operator==(const QueryAst&) const = default;
};

/// Parses the supported SPARQL subset: PREFIX*, SELECT [DISTINCT] (vars|*) or
/// CONSTRUCT { template }, WHERE { triple patterns and FILTERs }, ORDER BY,
/// LIMIT, OFFSET. Prefixed names are expanded during parsing.
///
/// Throws SyntaxError with kind Syntax, UnknownPrefix, UnboundProjection
/// (projected or ordered variable absent from WHERE) or UnboundVariable
/// (filter variable absent from WHERE).
QueryAst parse_query(std::string_view text);

// Names of all variables in the patterns, in order of first appearance.
std::vector<std::string> pattern_variables(const std::vector<TriplePattern>& patterns);

// ---------------------------------------------------------------------------
// Evaluation

using Solution = std::map<std::string, Term>;

/// Basic graph pattern matching. Returns every assignment under which all
/// patterns, after substitution, are triples of the store; multiplicity one
/// per distinct assignment. Patterns are joined most-selective-first; the
/// output order is the backtracking order and carries no meaning.
std::vector<Solution> eval_bgp(const TripleStore& store,
                               const std::vector<TriplePattern>& patterns);

// Three-valued filter evaluation: nullopt is the SPARQL "error" value.
std::optional<bool> eval_filter(const FilterExpr& expr, const Solution& solution);

/// SELECT evaluation: BGP, filters, ORDER BY, projection, DISTINCT,
/// OFFSET/LIMIT. Without ORDER BY, rows come in engine order (or, with
/// DISTINCT, in lexicographic order of the projected terms).
std::vector<Solution> eval_select(const TripleStore& store, const QueryAst& query);

/// CONSTRUCT evaluation; instantiations with unbound variables, literal
/// subjects or non-IRI predicates are dropped.
TripleSet eval_construct(const TripleStore& store, const QueryAst& query);

// ---------------------------------------------------------------------------
// SPARQL 1.1 Query Results JSON Format

struct SolutionTable {
  std::vector<std::string> vars;
  std::vector<Solution> rows;
};

std::string results_to_json(const SolutionTable& table);
// Throws Error(Protocol) when the document does not follow the format.
SolutionTable results_from_json(std::string_view text);

// ---------------------------------------------------------------------------

template <class Fn>
void TripleStore::for_each_match(const std::array<std::optional<TermId>, 3>& pattern,
                                 Fn&& fn) const {
  const auto& [s, p, o] = pattern;
  // Pick the index whose leading positions are exactly the bound ones.
  const std::set<Key>* index = &spo_;
  std::array<int, 3> perm{0, 1, 2};  // index position -> spo position
  if (s && !p && o) {
    index = &osp_;
    perm = {2, 0, 1};
  } else if (!s && p) {
    index = &pos_;
    perm = {1, 2, 0};
  } else if (!s && !p && o) {
    index = &osp_;
    perm = {2, 0, 1};
  }
  Key low{0, 0, 0};
  std::size_t bound = 0;
  for (; bound < 3; ++bound) {
    const auto& v = pattern[perm[bound]];
    if (!v) break;
    low[bound] = *v;
  }
  for (auto it = index->lower_bound(low); it != index->end(); ++it) {
    const Key& k = *it;
    bool prefix_ok = true;
    for (std::size_t i = 0; i < bound; ++i) {
      if (k[i] != low[i]) {
        prefix_ok = false;
        break;
      }
    }
    if (!prefix_ok) break;
    Key spo{};
    for (std::size_t i = 0; i < 3; ++i) spo[perm[i]] = k[i];
    fn(spo);
  }
}

}  // namespace sgw
