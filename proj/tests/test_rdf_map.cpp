#include <gtest/gtest.h>

#include "sgw/error.hpp"
#include "sgw/graph_json.hpp"
#include "sgw/rdf_map.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace sgw;

namespace {

const Term kType = Term::iri(std::string(vocab::kRdfType));
const Term kLabel = Term::iri(std::string(vocab::kRdfsLabel));
const Term kSub = Term::iri(std::string(vocab::kRdfsSubClassOf));
const Term kA = Term::iri("http://ex/a");
const Term kB = Term::iri("http://ex/b");

Term ex(const std::string& local) { return Term::iri("http://ex/" + local); }

SemanticGraph imported(const TripleSet& ts, const std::string& source = "src") {
  SemanticGraph g;
  import_triples(g, ts, source);
  return g;
}

}  // namespace

TEST(Skolemize, Examples) {
  const TripleSet plain = {{kA, ex("p"), kB}, {kA, ex("p"), Term::literal("x")}};
  EXPECT_EQ(skolemize(plain, "s"), plain);

  const TripleSet blanks = {{Term::blank("b1"), ex("p"), Term::blank("b1")},
                            {kA, ex("q"), Term::blank("b1")}};
  const Term sk = Term::iri("urn:skolem:s:b1");
  const TripleSet expected = {{sk, ex("p"), sk}, {kA, ex("q"), sk}};
  EXPECT_EQ(skolemize(blanks, "s"), expected);
  EXPECT_EQ(skolemize(blanks, "s"), skolemize(blanks, "s"));
  EXPECT_NE(skolemize(blanks, "s"), skolemize(blanks, "t"));
  EXPECT_THROW(skolemize(blanks, ""), Error);
}

TEST(SkolemizeProperty, InjectiveAndBlankFree) {
  testkit::Rng rng(33);
  for (int i = 0; i < 100; ++i) {
    const TripleSet ts = testkit::random_triple_set(rng, 30);
    const TripleSet sk = skolemize(ts, "scope");
    EXPECT_EQ(sk.size(), ts.size());
    for (const Triple& t : sk) {
      EXPECT_FALSE(t.s.is_blank());
      EXPECT_FALSE(t.o.is_blank());
    }
  }
}

TEST(Import, RuleOneType) {
  const SemanticGraph g = imported({{kA, kType, ex("Protein")}});
  ASSERT_EQ(g.concept_count(), 1u);
  EXPECT_EQ(g.concepts().begin()->second.class_id, "http://ex/Protein");
  EXPECT_EQ(g.relation_count(), 0u);
  EXPECT_EQ(export_graph(g), (TripleSet{{kA, kType, ex("Protein")}}));
}

TEST(Import, RuleFiveRelation) {
  SemanticGraph g;
  const ImportReport r = import_triples(g, {{kA, ex("interacts"), kB}}, "src");
  ASSERT_EQ(g.concept_count(), 2u);
  for (const auto& [id, c] : g.concepts()) EXPECT_EQ(c.class_id, kDefaultClass);
  ASSERT_EQ(g.relation_count(), 1u);
  EXPECT_EQ(g.relations().begin()->second.rtype, "http://ex/interacts");
  EXPECT_EQ(r.concepts_created, 2u);
  EXPECT_EQ(r.relations_created, 1u);
}

// Expected graph built step by step through the graph-core API, following
// the label rule and the literal rule by hand.
TEST(Import, LabelAndTypedAttributeFullDump) {
  const TripleSet ts = {{kA, kLabel, Term::literal("kinase")},
                        {kA, ex("mass"), Term::literal("42", std::string(vocab::kXsdInteger))}};
  SemanticGraph expected;
  const ConceptId a = expected.create_concept("http://ex/a", kDefaultClass, "src");
  expected.set_concept_name(a, "kinase");
  expected.add_concept_attribute(
      a, AttributeValue{"http://ex/mass", "42", std::string(vocab::kXsdInteger), ""});
  EXPECT_EQ(dump_graph(imported(ts)), dump_graph(expected));
}

TEST(Import, BlankNodesRejected) {
  SemanticGraph g;
  EXPECT_THROW(
      {
        try {
          import_triples(g, {{Term::blank("x"), ex("p"), kB}}, "src");
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::BlankNodePresent);
          throw;
        }
      },
      Error);
  EXPECT_EQ(g.concept_count(), 0u);
}

TEST(Import, MultipleTypesSmallestWins) {
  const TripleSet ts = {{kA, kType, ex("Zeta")}, {kA, kType, ex("Alpha")}, {kA, kType, ex("Mid")}};
  const SemanticGraph g = imported(ts);
  const Concept& c = g.concepts().begin()->second;
  EXPECT_EQ(c.class_id, "http://ex/Alpha");
  std::set<std::string> demoted;
  for (const AttributeValue& v : c.attributes) {
    EXPECT_EQ(v.name, vocab::kRdfType);
    EXPECT_EQ(v.datatype, std::string(vocab::kXsdAnyUri));
    demoted.insert(v.lexical);
  }
  EXPECT_EQ(demoted, (std::set<std::string>{"http://ex/Mid", "http://ex/Zeta"}));
  EXPECT_EQ(export_graph(g), ts);
}

TEST(Import, LabelConflictsDemoted) {
  const TripleSet ts = {{kA, kLabel, Term::literal("alpha")},
                        {kA, kLabel, Term::literal("beta")},
                        {kA, kLabel, Term::lang_literal("alfa", "it")}};
  const SemanticGraph g = imported(ts);
  const Concept& c = g.concepts().begin()->second;
  EXPECT_EQ(c.name, "alpha");
  EXPECT_EQ(c.attributes.size(), 2u);
  EXPECT_EQ(export_graph(g), ts);
}

TEST(Import, SubclassCycleSkipped) {
  const TripleSet ts = {{ex("A"), kSub, ex("B")}, {ex("B"), kSub, ex("C")}, {ex("C"), kSub, ex("A")}};
  SemanticGraph g;
  const ImportReport r = import_triples(g, ts, "src");
  EXPECT_EQ(g.concept_count(), 0u);
  ASSERT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.skipped[0].triple, (Triple{ex("C"), kSub, ex("A")}));
  EXPECT_TRUE(g.is_subclass_of("http://ex/A", "http://ex/C"));
  EXPECT_TRUE(g.check_invariants().empty());
  EXPECT_EQ(r.triples_seen, 3u);
}

TEST(Import, LiteralTypeObjectSkipped) {
  SemanticGraph g;
  const ImportReport r = import_triples(g, {{kA, kType, Term::literal("Protein")}}, "src");
  EXPECT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(g.concept_count(), 0u);
}

TEST(Import, SourcesTagged) {
  SemanticGraph g;
  import_triples(g, {{kA, ex("r"), kB}}, "one");
  import_triples(g, {{kA, ex("r"), kB}}, "two");
  for (const auto& [id, c] : g.concepts()) EXPECT_EQ(c.sources, (std::set<std::string>{"one", "two"}));
  EXPECT_EQ(g.relations().begin()->second.sources, (std::set<std::string>{"one", "two"}));
}

TEST(Export, EmptyAndReport) {
  EXPECT_TRUE(export_graph(SemanticGraph{}).empty());
  SemanticGraph g;
  const ConceptId a = g.create_concept(std::nullopt, "Gene", "src");
  const ConceptId b = g.create_concept("http://ex/b", "http://ex/Gene", "src");
  g.add_concept_attribute(a, {"plain", "v", std::nullopt, ""});
  g.add_accession(a, {"NS", "1"});
  g.add_relation(a, b, "local", "src");
  g.add_relation(a, b, "http://ex/r", "src");
  const ExportResult out = export_graph_with_report(g);
  const TripleSet expected = {{kB, kType, ex("Gene")},
                              {Term::iri("urn:concept:1"), ex("r"), kB}};
  EXPECT_EQ(out.triples, expected);
  EXPECT_EQ(out.report.non_iri_attributes, 1u);
  EXPECT_EQ(out.report.non_iri_relations, 1u);
  EXPECT_EQ(out.report.accessions, 1u);
  EXPECT_EQ(out.report.source_tags, 2u);
  EXPECT_EQ(out.report.triples, 2u);
}

TEST(RoundTripProperty, TripleSide) {
  testkit::Rng rng(1001);
  for (int i = 0; i < 200; ++i) {
    const TripleSet ts = testkit::random_shared_triples(rng);
    ASSERT_EQ(export_graph(imported(ts)), ts) << serialize_ntriples(ts);
  }
}

TEST(RoundTripProperty, GraphSide) {
  testkit::Rng rng(2002);
  for (int i = 0; i < 200; ++i) {
    const SemanticGraph g = testkit::random_shared_graph(rng);
    const SemanticGraph back = imported(export_graph(g));
    ASSERT_EQ(testkit::iri_dump(back), testkit::iri_dump(g));
  }
}

TEST(ImportProperty, IdempotentAndConservative) {
  testkit::Rng rng(3003);
  for (int i = 0; i < 200; ++i) {
    TripleSet ts = testkit::random_shared_triples(rng);
    if (testkit::chance(rng, 0.5)) ts = skolemize(testkit::random_triple_set(rng, 20), "x");
    SemanticGraph g;
    const ImportReport first = import_triples(g, ts, "src");
    const std::string once = dump_graph(g);
    const ImportReport second = import_triples(g, ts, "src");
    EXPECT_EQ(dump_graph(g), once);
    for (const ImportReport& r : {first, second}) {
      EXPECT_EQ(r.triples_seen, ts.size());
      EXPECT_LE(r.concepts_created + r.concepts_merged, 2 * r.triples_seen);
    }
    EXPECT_EQ(second.concepts_created, 0u);
    EXPECT_EQ(second.relations_created, 0u);
    EXPECT_EQ(second.attributes_added, 0u);
    EXPECT_EQ(second.classes_registered, 0u);
    EXPECT_TRUE(g.check_invariants().empty());
  }
}

TEST(Reports, Json) {
  SemanticGraph g;
  const ImportReport r = import_triples(g, {{kA, kType, Term::literal("x")}}, "src");
  const nlohmann::json j = report_to_json(r);
  EXPECT_EQ(j["triples_seen"], 1);
  ASSERT_EQ(j["skipped"].size(), 1u);
  EXPECT_EQ(j["skipped"][0]["reason"], "rdf:type object must be an IRI");
}
