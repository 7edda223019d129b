#include "sgw/sparql.hpp"

namespace sgw {

TripleStore::TripleStore(const TripleSet& triples) {
  for (const Triple& t : triples) insert(t);
}

TripleStore::TermId TripleStore::intern(const Term& term) {
  auto [it, inserted] = ids_.try_emplace(term, static_cast<TermId>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

std::optional<TripleStore::TermId> TripleStore::lookup(const Term& term) const {
  auto it = ids_.find(term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool TripleStore::insert(const Triple& t) {
  const Key spo{intern(t.s), intern(t.p), intern(t.o)};
  if (!spo_.insert(spo).second) return false;
  pos_.insert(Key{spo[1], spo[2], spo[0]});
  osp_.insert(Key{spo[2], spo[0], spo[1]});
  return true;
}

bool TripleStore::contains(const Triple& t) const {
  const auto s = lookup(t.s);
  const auto p = lookup(t.p);
  const auto o = lookup(t.o);
  return s && p && o && spo_.contains(Key{*s, *p, *o});
}

void TripleStore::clear() {
  terms_.clear();
  ids_.clear();
  spo_.clear();
  pos_.clear();
  osp_.clear();
}

Triple TripleStore::decode(const Key& spo) const {
  return Triple{terms_[spo[0]], terms_[spo[1]], terms_[spo[2]]};
}

namespace {

// Resolves bound terms to ids; returns false when a bound term is unknown,
// in which case nothing can match.
bool encode(const TripleStore& store, const std::optional<Term>& s,
            const std::optional<Term>& p, const std::optional<Term>& o,
            std::array<std::optional<TripleStore::TermId>, 3>& out) {
  const std::optional<Term>* parts[3] = {&s, &p, &o};
  for (int i = 0; i < 3; ++i) {
    if (!*parts[i]) continue;
    out[i] = store.lookup(**parts[i]);
    if (!out[i]) return false;
  }
  return true;
}

}  // namespace

std::vector<Triple> TripleStore::match(const std::optional<Term>& s,
                                       const std::optional<Term>& p,
                                       const std::optional<Term>& o) const {
  std::vector<Triple> out;
  std::array<std::optional<TermId>, 3> pattern;
  if (!encode(*this, s, p, o, pattern)) return out;
  for_each_match(pattern, [&](const Key& spo) { out.push_back(decode(spo)); });
  return out;
}

std::size_t TripleStore::count(const std::optional<Term>& s, const std::optional<Term>& p,
                               const std::optional<Term>& o) const {
  std::size_t n = 0;
  std::array<std::optional<TermId>, 3> pattern;
  if (!encode(*this, s, p, o, pattern)) return 0;
  for_each_match(pattern, [&](const Key&) { ++n; });
  return n;
}

std::vector<Triple> TripleStore::scan(Order order) const {
  std::vector<Triple> out;
  const std::set<Key>& index = order == Order::SPO ? spo_ : order == Order::POS ? pos_ : osp_;
  out.reserve(index.size());
  for (const Key& k : index) {
    switch (order) {
      case Order::SPO: out.push_back(decode(k)); break;
      case Order::POS: out.push_back(decode(Key{k[2], k[0], k[1]})); break;
      case Order::OSP: out.push_back(decode(Key{k[1], k[2], k[0]})); break;
    }
  }
  return out;
}

TripleSet TripleStore::triples() const {
  TripleSet out;
  for (const Key& k : spo_) out.insert(decode(k));
  return out;
}

}  // namespace sgw
