#include <gtest/gtest.h>

#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>

#include <cstdio>

#include "sgw/graph_json.hpp"
#include "support/scenarios.hpp"

using namespace sgw;
using nlohmann::json;
using testkit::fixture_path;
using testkit::read_text;

extern char** environ;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& arg) {
  std::string q = "'";
  for (char c : arg) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Outcome sgw_cli(const std::vector<std::string>& args, const std::filesystem::path& scratch) {
  std::string cmd = quote(SGW_CLI_PATH);
  for (const std::string& a : args) cmd += " " + quote(a);
  const auto out = scratch / "stdout";
  const auto err = scratch / "stderr";
  cmd += " > " + quote(out.string()) + " 2> " + quote(err.string());
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = read_text(out);
  o.err = read_text(err);
  return o;
}

}  // namespace

TEST(Cli, RunPrintsReport) {
  testkit::ScratchDir dir;
  const Outcome o = sgw_cli({"run", fixture_path("workflows/basic.wf.json").string()}, dir.path());
  ASSERT_EQ(o.code, 0) << o.err;
  const json report = json::parse(o.out);
  EXPECT_EQ(report["name"], "basic");
  EXPECT_EQ(report["status"], "ok");
  EXPECT_EQ(report["graph"], (json{{"concepts", 2}, {"relations", 1}}));
}

TEST(Cli, MissingFileIsUserError) {
  testkit::ScratchDir dir;
  const Outcome o = sgw_cli({"import", "missing.nt"}, dir.path());
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("missing.nt"), std::string::npos) << o.err;
  EXPECT_TRUE(o.out.empty());
}

TEST(Cli, UsageErrors) {
  testkit::ScratchDir dir;
  EXPECT_EQ(sgw_cli({}, dir.path()).code, 1);
  EXPECT_EQ(sgw_cli({"frobnicate"}, dir.path()).code, 1);
  EXPECT_EQ(sgw_cli({"import", fixture_path("rdf/small.nt").string(), "--format", "xml"}, dir.path()).code, 1);
  EXPECT_EQ(sgw_cli({"--help"}, dir.path()).code, 0);
}

TEST(Cli, ImportExportStats) {
  testkit::ScratchDir dir;
  const std::string dump = (dir.path() / "g.json").string();
  const std::string seed = fixture_path("console/seed.nt").string();
  const Outcome imported = sgw_cli({"import", seed, "--graph", dump}, dir.path());
  ASSERT_EQ(imported.code, 0) << imported.err;
  const json report = json::parse(imported.out);
  EXPECT_EQ(report["triples_seen"], 30);
  // P1-P4, G1, G2 and C1; Kinase and the rdf:type objects are classes.
  EXPECT_EQ(report["graph"]["concepts"], 7);
  EXPECT_EQ(report["graph"]["relations"], 8);

  const std::string out = (dir.path() / "out.nt").string();
  const Outcome exported = sgw_cli({"export", dump, out}, dir.path());
  ASSERT_EQ(exported.code, 0) << exported.err;
  EXPECT_EQ(parse_ntriples(read_text(out)), parse_ntriples(read_text(seed)));
  EXPECT_EQ(json::parse(exported.out)["triples"], 30);

  const Outcome stats = sgw_cli({"stats", dump}, dir.path());
  ASSERT_EQ(stats.code, 0) << stats.err;
  const json s = json::parse(stats.out);
  EXPECT_EQ(s["concepts"], 7);
  EXPECT_EQ(s["relations"], 8);
  EXPECT_EQ(s["classes"]["http://example.org/bio/Gene"], 2);
  EXPECT_EQ(s["sources"]["seed.nt"], 7);

  const Outcome again = sgw_cli({"import", fixture_path("workflows/three.nt").string(), "--graph", dump},
                                dir.path());
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(load_graph(read_text(dump)).concept_count(), 9u);
}

TEST(Cli, QueryAgainstService) {
  testkit::ScratchDir dir;
  testkit::RunningServer srv;
  ASSERT_EQ(srv.seed(read_text(fixture_path("workflows/three.nt"))), 200);
  const auto select = dir.path() / "q.rq";
  std::ofstream(select) << "SELECT ?s WHERE { ?s <http://ex.org/interacts> ?o }";
  const Outcome rows = sgw_cli({"query", "--endpoint", srv.sparql_url(), "--file", select.string()}, dir.path());
  ASSERT_EQ(rows.code, 0) << rows.err;
  const SolutionTable table = results_from_json(rows.out);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0].at("s"), Term::iri("http://ex.org/p1"));

  EXPECT_EQ(sgw_cli({"query", "--endpoint", srv.sparql_url(), "--file", select.string(), "--construct"},
                    dir.path())
                .code,
            1);

  const auto construct = dir.path() / "c.rq";
  std::ofstream(construct) << testkit::kIdentityConstruct;
  const Outcome triples =
      sgw_cli({"query", "--endpoint", srv.sparql_url(), "--file", construct.string(), "--construct"}, dir.path());
  ASSERT_EQ(triples.code, 0) << triples.err;
  EXPECT_EQ(triples.out, serialize_ntriples(parse_ntriples(read_text(fixture_path("workflows/three.nt")))));

  const Outcome down = sgw_cli({"query", "--endpoint",
                                "http://127.0.0.1:" + std::to_string(testkit::closed_port()) + "/sparql",
                                "--file", select.string()},
                               dir.path());
  EXPECT_EQ(down.code, 1);
  EXPECT_FALSE(down.err.empty());
}

TEST(Cli, ServeAnnouncesPort) {
  int pipe_fds[2];
  ASSERT_EQ(::pipe(pipe_fds), 0);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, pipe_fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, pipe_fds[0]);
  std::string cli = SGW_CLI_PATH;
  std::vector<char*> argv = {cli.data(), const_cast<char*>("serve"), const_cast<char*>("--port"),
                             const_cast<char*>("0"), nullptr};
  pid_t pid = 0;
  ASSERT_EQ(posix_spawn(&pid, cli.c_str(), &actions, nullptr, argv.data(), environ), 0);
  posix_spawn_file_actions_destroy(&actions);
  ::close(pipe_fds[1]);

  FILE* out = ::fdopen(pipe_fds[0], "r");
  char line[128] = {};
  ASSERT_NE(std::fgets(line, sizeof line, out), nullptr);
  int port = 0;
  ASSERT_EQ(std::sscanf(line, "LISTENING %d", &port), 1) << line;
  EXPECT_GT(port, 0);

  httplib::Client http("127.0.0.1", port);
  auto res = http.Post("/graphs");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);

  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);
  std::fclose(out);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}
