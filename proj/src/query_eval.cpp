#include <algorithm>
#include <charconv>
#include <set>

#include "json.hpp"
#include "sgw/error.hpp"
#include "sgw/sparql.hpp"

namespace sgw {

namespace {

using TermId = TripleStore::TermId;

// A pattern position after constant resolution: either a fixed term id or a
// variable slot.
struct Slot {
  bool is_var = false;
  std::size_t var = 0;
  TermId id = 0;
};

struct CompiledPattern {
  std::array<Slot, 3> slots;
  std::size_t estimate = 0;
};

class BgpEvaluator {
 public:
  BgpEvaluator(const TripleStore& store, const std::vector<TriplePattern>& patterns)
      : store_(store) {
    names_ = pattern_variables(patterns);
    for (const TriplePattern& tp : patterns) {
      CompiledPattern cp;
      const PatternTerm* parts[3] = {&tp.s, &tp.p, &tp.o};
      std::array<std::optional<TermId>, 3> constants;
      for (int i = 0; i < 3; ++i) {
        if (const auto* v = std::get_if<Variable>(parts[i])) {
          cp.slots[i].is_var = true;
          cp.slots[i].var = static_cast<std::size_t>(
              std::find(names_.begin(), names_.end(), v->name) - names_.begin());
        } else {
          auto id = store.lookup(std::get<Term>(*parts[i]));
          if (!id) {
            unsatisfiable_ = true;
            return;
          }
          cp.slots[i].id = *id;
          constants[i] = *id;
        }
      }
      store.for_each_match(constants, [&cp](const TripleStore::Key&) { ++cp.estimate; });
      compiled_.push_back(cp);
    }
    plan();
  }

  std::vector<Solution> run() {
    std::vector<Solution> out;
    if (unsatisfiable_) return out;
    std::vector<std::optional<TermId>> bindings(names_.size());
    search(0, bindings, out);
    return out;
  }

 private:
  // Greedy join order: fewest unbound variables given what earlier patterns
  // bind, then smallest estimate, then original position.
  void plan() {
    std::vector<bool> used(compiled_.size(), false);
    std::vector<bool> bound(names_.size(), false);
    for (std::size_t step = 0; step < compiled_.size(); ++step) {
      std::size_t best = compiled_.size();
      std::size_t best_unbound = 4;
      for (std::size_t i = 0; i < compiled_.size(); ++i) {
        if (used[i]) continue;
        std::set<std::size_t> unbound;
        for (const Slot& s : compiled_[i].slots) {
          if (s.is_var && !bound[s.var]) unbound.insert(s.var);
        }
        if (best == compiled_.size() || unbound.size() < best_unbound ||
            (unbound.size() == best_unbound &&
             compiled_[i].estimate < compiled_[best].estimate)) {
          best = i;
          best_unbound = unbound.size();
        }
      }
      used[best] = true;
      for (const Slot& s : compiled_[best].slots) {
        if (s.is_var) bound[s.var] = true;
      }
      order_.push_back(best);
    }
  }

  void search(std::size_t depth, std::vector<std::optional<TermId>>& bindings,
              std::vector<Solution>& out) const {
    if (depth == order_.size()) {
      Solution sol;
      for (std::size_t v = 0; v < names_.size(); ++v) {
        sol.emplace(names_[v], store_.term(*bindings[v]));
      }
      out.push_back(std::move(sol));
      return;
    }
    const CompiledPattern& cp = compiled_[order_[depth]];
    std::array<std::optional<TermId>, 3> probe;
    for (int i = 0; i < 3; ++i) {
      const Slot& s = cp.slots[i];
      probe[i] = s.is_var ? bindings[s.var] : std::optional<TermId>(s.id);
    }
    store_.for_each_match(probe, [&](const TripleStore::Key& key) {
      std::vector<std::size_t> newly_bound;
      bool consistent = true;
      for (int i = 0; i < 3 && consistent; ++i) {
        const Slot& s = cp.slots[i];
        if (!s.is_var) continue;
        if (bindings[s.var]) {
          consistent = *bindings[s.var] == key[i];
        } else {
          bindings[s.var] = key[i];
          newly_bound.push_back(s.var);
        }
      }
      if (consistent) search(depth + 1, bindings, out);
      for (std::size_t v : newly_bound) bindings[v].reset();
    });
  }

  const TripleStore& store_;
  std::vector<std::string> names_;
  std::vector<CompiledPattern> compiled_;
  std::vector<std::size_t> order_;
  bool unsatisfiable_ = false;
};

bool is_numeric(const Term& t) {
  return t.is_literal() && (t.datatype == vocab::kXsdInteger ||
                            t.datatype == vocab::kXsdDecimal || t.datatype == vocab::kXsdDouble);
}

std::optional<double> parse_number(std::string_view lexical) {
  if (lexical.starts_with('+')) lexical.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(lexical.data(), lexical.data() + lexical.size(), value);
  if (ec != std::errc() || ptr != lexical.data() + lexical.size() || lexical.empty()) {
    return std::nullopt;
  }
  return value;
}

enum class Category { Blank, Iri, Numeric, Literal };

Category category(const Term& t) {
  if (is_numeric(t)) return Category::Numeric;
  switch (t.kind) {
    case TermKind::Blank: return Category::Blank;
    case TermKind::Iri: return Category::Iri;
    default: return Category::Literal;
  }
}

const Term* resolve(const PatternTerm& operand, const Solution& solution) {
  if (const auto* v = std::get_if<Variable>(&operand)) {
    auto it = solution.find(v->name);
    return it == solution.end() ? nullptr : &it->second;
  }
  return &std::get<Term>(operand);
}

template <class T>
bool apply(CompareOp op, const T& a, const T& b) {
  switch (op) {
    case CompareOp::Eq: return a == b;
    case CompareOp::Ne: return a != b;
    case CompareOp::Lt: return a < b;
    case CompareOp::Le: return a <= b;
    case CompareOp::Gt: return a > b;
    case CompareOp::Ge: return a >= b;
  }
  return false;
}

std::optional<bool> compare(const FilterExpr& expr, const Solution& solution) {
  const Term* lhs = resolve(expr.lhs, solution);
  const Term* rhs = resolve(expr.rhs, solution);
  if (!lhs || !rhs) return std::nullopt;
  const Category cl = category(*lhs);
  if (cl != category(*rhs)) return std::nullopt;
  if (cl == Category::Numeric) {
    const auto a = parse_number(lhs->value);
    const auto b = parse_number(rhs->value);
    if (!a || !b) return std::nullopt;
    return apply(expr.op, *a, *b);
  }
  return apply(expr.op, lhs->value, rhs->value);
}

// Filters, then ORDER BY (stable) with the DISTINCT pre-sort; solutions are
// not yet projected.
std::vector<Solution> filtered_and_ordered(const TripleStore& store, const QueryAst& q,
                                           bool distinct) {
  std::vector<Solution> sols = eval_bgp(store, q.where);
  std::erase_if(sols, [&q](const Solution& s) {
    return !std::all_of(q.filters.begin(), q.filters.end(), [&s](const FilterExpr& f) {
      return eval_filter(f, s).value_or(false);
    });
  });
  if (distinct) {
    // Projected terms first, so that deduplicated rows come out sorted.
    const std::vector<std::string>& vars = q.select().vars;
    std::sort(sols.begin(), sols.end(), [&vars](const Solution& a, const Solution& b) {
      for (const std::string& v : vars) {
        const auto ia = a.find(v);
        const auto ib = b.find(v);
        const bool ha = ia != a.end(), hb = ib != b.end();
        if (ha != hb) return !ha;
        if (ha && ia->second != ib->second) return ia->second < ib->second;
      }
      return a < b;
    });
  }
  if (q.order_by) {
    const std::string& key = q.order_by->var;
    const bool desc = q.order_by->descending;
    std::stable_sort(sols.begin(), sols.end(), [&](const Solution& a, const Solution& b) {
      const Term& ta = a.at(key);
      const Term& tb = b.at(key);
      return desc ? tb < ta : ta < tb;
    });
  }
  return sols;
}

template <class T>
void slice(std::vector<T>& rows, const QueryAst& q) {
  const std::size_t offset = std::min<std::uint64_t>(q.offset.value_or(0), rows.size());
  rows.erase(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(offset));
  if (q.limit && *q.limit < rows.size()) rows.resize(static_cast<std::size_t>(*q.limit));
}

}  // namespace

std::vector<Solution> eval_bgp(const TripleStore& store,
                               const std::vector<TriplePattern>& patterns) {
  if (patterns.empty()) return {};
  return BgpEvaluator(store, patterns).run();
}

std::optional<bool> eval_filter(const FilterExpr& expr, const Solution& solution) {
  switch (expr.kind) {
    case FilterExpr::Kind::Compare:
      return compare(expr, solution);
    case FilterExpr::Kind::Not: {
      const auto inner = eval_filter(expr.children.at(0), solution);
      if (!inner) return std::nullopt;
      return !*inner;
    }
    case FilterExpr::Kind::And: {
      bool error = false;
      for (const FilterExpr& c : expr.children) {
        const auto v = eval_filter(c, solution);
        if (v && !*v) return false;
        error = error || !v;
      }
      if (error) return std::nullopt;
      return true;
    }
    case FilterExpr::Kind::Or: {
      bool error = false;
      for (const FilterExpr& c : expr.children) {
        const auto v = eval_filter(c, solution);
        if (v && *v) return true;
        error = error || !v;
      }
      if (error) return std::nullopt;
      return false;
    }
  }
  return std::nullopt;
}

std::vector<Solution> eval_select(const TripleStore& store, const QueryAst& query) {
  if (!query.is_select()) throw Error(ErrorKind::InvalidArgument, "query is not a SELECT");
  const SelectForm& form = query.select();
  std::vector<Solution> sols = filtered_and_ordered(store, query, form.distinct);

  std::vector<Solution> rows;
  rows.reserve(sols.size());
  std::set<Solution> seen;
  for (Solution& s : sols) {
    Solution projected;
    for (const std::string& v : form.vars) {
      if (auto it = s.find(v); it != s.end()) projected.emplace(v, std::move(it->second));
    }
    if (form.distinct && !seen.insert(projected).second) continue;
    rows.push_back(std::move(projected));
  }
  slice(rows, query);
  return rows;
}

TripleSet eval_construct(const TripleStore& store, const QueryAst& query) {
  if (!query.is_construct()) throw Error(ErrorKind::InvalidArgument, "query is not a CONSTRUCT");
  std::vector<Solution> sols = filtered_and_ordered(store, query, false);
  slice(sols, query);

  TripleSet out;
  for (const Solution& s : sols) {
    for (const TriplePattern& tp : query.construct().templ) {
      const Term* sub = resolve(tp.s, s);
      const Term* pred = resolve(tp.p, s);
      const Term* obj = resolve(tp.o, s);
      if (!sub || !pred || !obj) continue;
      if (sub->is_literal() || !pred->is_iri()) continue;
      out.insert(Triple{*sub, *pred, *obj});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

using nlohmann::json;

namespace {

json term_to_json(const Term& t) {
  switch (t.kind) {
    case TermKind::Iri: return {{"type", "uri"}, {"value", t.value}};
    case TermKind::Blank: return {{"type", "bnode"}, {"value", t.value}};
    case TermKind::Literal: {
      json j = {{"type", "literal"}, {"value", t.value}};
      if (!t.lang.empty()) j["xml:lang"] = t.lang;
      if (!t.datatype.empty()) j["datatype"] = t.datatype;
      return j;
    }
  }
  return nullptr;
}

// Remote labels may use characters outside [A-Za-z0-9_]; those are hex-encoded.
std::string sanitize_blank_label(const std::string& label) {
  const bool ok = !label.empty() && std::all_of(label.begin(), label.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
  if (ok) return label;
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out = "x";
  for (char c : label) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      out.push_back(c);
    } else {
      out.push_back('_');
      out.push_back(kHex[u >> 4]);
      out.push_back(kHex[u & 0xF]);
    }
  }
  return out;
}

Term term_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  std::string value = j.at("value").get<std::string>();
  if (type == "uri") return Term::iri(std::move(value));
  if (type == "bnode") return Term::blank(sanitize_blank_label(value));
  if (type == "literal" || type == "typed-literal") {
    if (auto lang = j.find("xml:lang"); lang != j.end()) {
      return Term::lang_literal(std::move(value), lang->get<std::string>());
    }
    if (auto dt = j.find("datatype"); dt != j.end()) {
      return Term::literal(std::move(value), dt->get<std::string>());
    }
    return Term::literal(std::move(value));
  }
  throw Error(ErrorKind::Protocol, "unknown RDF term type '" + type + "' in results");
}

}  // namespace

std::string results_to_json(const SolutionTable& table) {
  json bindings = json::array();
  for (const Solution& row : table.rows) {
    json b = json::object();
    for (const auto& [var, term] : row) b[var] = term_to_json(term);
    bindings.push_back(std::move(b));
  }
  json doc = {{"head", {{"vars", table.vars}}}, {"results", {{"bindings", std::move(bindings)}}}};
  return doc.dump();
}

SolutionTable results_from_json(std::string_view text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::Protocol, "results body is not valid JSON");
  try {
    SolutionTable table;
    table.vars = doc.at("head").at("vars").get<std::vector<std::string>>();
    for (const json& b : doc.at("results").at("bindings")) {
      Solution row;
      for (const auto& [var, term] : b.items()) row.emplace(var, term_from_json(term));
      table.rows.push_back(std::move(row));
    }
    return table;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Protocol, std::string("malformed SPARQL results JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Protocol) throw;
    throw Error(ErrorKind::Protocol, std::string("malformed SPARQL results JSON: ") + e.what());
  }
}

}  // namespace sgw
