#include <cstdlib>
#include <sstream>

#include "ansgen/cli.hpp"
#include "ansgen/diagnostics.hpp"
#include "ansgen/metrics.hpp"
#include "diff_fixtures.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "mock_gec_server.hpp"

using namespace ansgen;

namespace {

struct Run {
  int status = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ansgen");
  std::ostringstream out, err;
  const int status = cli_main(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<nlohmann::json> records(const std::string& jsonl) {
  std::vector<nlohmann::json> out;
  std::istringstream in(jsonl);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

/// Writes the named fixture samples (optionally overriding targets) to a corpus file.
std::string subset(const fixtures::TempDir& dir, const std::string& name, const std::vector<std::string>& ids) {
  std::vector<Sample> samples;
  for (const auto& id : ids) samples.push_back(fixtures::sample(id));
  std::ofstream out(dir.file(name));
  write_jsonl(out, samples);
  return dir.file(name).string();
}

nlohmann::json strip_timing(nlohmann::json j) {
  j.erase("timing");
  return j;
}

const std::string kCorpus = fixtures::mini_corpus_path().string();

}  // namespace

TEST_CASE("generate with the identity corrector") {
  const auto r = cli({"generate", "--corpus", kCorpus});
  CHECK(r.status == 0);
  CHECK(r.err.empty());
  const auto recs = records(r.out);
  REQUIRE(recs.size() == 30);
  for (const auto& rec : recs) {
    if (rec["id"] != "tab4") continue;
    CHECK(rec["answer"] == "the bus was going phoenix, arizona .");
    CHECK(rec["rule_case"] == "V2_SPLIT");
    CHECK(rec["changed_by_gec"] == false);
  }
  CHECK(recs[0]["id"] == fixtures::mini_corpus()[0].id);
}

TEST_CASE("generate through the remote corrector") {
  fixtures::MockGecServer server;
  const auto r = cli({"generate", "--corpus", kCorpus, "--corrector", "remote", "--endpoint", server.endpoint()});
  CHECK(r.status == 0);
  std::map<std::string, nlohmann::json> by_id;
  for (const auto& rec : records(r.out)) by_id[rec["id"]] = rec;
  REQUIRE(by_id.size() == 30);
  CHECK(by_id["tab4"] == nlohmann::json{{"id", "tab4"},
                                        {"answer", "The bus was going to Phoenix, Arizona."},
                                        {"rule_case", "V2_SPLIT"},
                                        {"changed_by_gec", true}});
  CHECK(by_id["ex5"]["answer"] == "Yes, fridge does support quick freeze feature.");
  CHECK(by_id["ex5"]["rule_case"] == "EX_INDIRECT");
  CHECK(by_id["ex3"]["changed_by_gec"] == false);
  CHECK(by_id["tab4"]["answer"] == fixtures::sample("tab4").extra["expected"]["v2_gcm"]);
  CHECK(by_id["ex5"]["answer"] == fixtures::sample("ex5").extra["expected"]["existential_gcm"]);
}

TEST_CASE("endpoint defaults from the environment") {
  fixtures::MockGecServer server;
  fixtures::TempDir dir;
  const auto corpus = subset(dir, "bus.jsonl", {"tab4"});
  ::setenv("ANSGEN_GEC_ENDPOINT", server.endpoint().c_str(), 1);
  const auto r = cli({"generate", "--corpus", corpus, "--corrector", "remote"});
  ::unsetenv("ANSGEN_GEC_ENDPOINT");
  CHECK(r.status == 0);
  CHECK(records(r.out).at(0)["answer"] == "The bus was going to Phoenix, Arizona.");
  CHECK(server.correct_calls() == 1);
}

TEST_CASE("remote corrector without an endpoint is a config error") {
  ::unsetenv("ANSGEN_GEC_ENDPOINT");
  const auto r = cli({"generate", "--corpus", kCorpus, "--corrector", "remote"});
  CHECK(r.status == 2);
  CHECK(r.err.find("endpoint") != std::string::npos);
}

TEST_CASE("unreachable corrector") {
  fixtures::TempDir dir;
  const auto corpus = subset(dir, "bus.jsonl", {"tab4", "ex3"});
  std::string dead;
  {
    fixtures::MockGecServer server;
    dead = server.endpoint();
  }
  const std::vector<std::string> base{"--corpus",     corpus, "--corrector", "remote", "--endpoint",
                                      dead,           "--retries", "0", "--timeout-ms", "300"};
  auto args = base;
  args.insert(args.begin(), "evaluate");
  const auto failed = cli(args);
  CHECK(failed.status != 0);
  CHECK(failed.out.empty());
  CHECK(failed.err.find("error: sample") != std::string::npos);

  args = base;
  args.insert(args.begin(), "generate");
  args.insert(args.end(), {"--on-gec-error", "passthrough"});
  const auto passed = cli(args);
  CHECK(passed.status == 0);
  CHECK(passed.err.find("warning: sample tab4") != std::string::npos);
  CHECK(records(passed.out).at(0)["answer"] == "the bus was going phoenix, arizona .");
}

TEST_CASE("empty corpus") {
  fixtures::TempDir dir;
  const auto empty = dir.write("empty.jsonl", "").string();
  const auto gen = cli({"generate", "--corpus", empty});
  CHECK(gen.status != 0);
  CHECK(gen.err.find("no samples") != std::string::npos);
  CHECK(cli({"evaluate", "--corpus", empty}).status != 0);

  const auto st = cli({"stats", "--corpus", empty});
  CHECK(st.status == 0);
  CHECK(st.out.find("total: 0") == 0);
}

TEST_CASE("invalid corpus is a hard error") {
  fixtures::TempDir dir;
  const auto bad = dir.write("bad.jsonl", "{nope\n").string();
  const auto r = cli({"generate", "--corpus", bad});
  CHECK(r.status == 1);
  CHECK(r.err.find("line 1") != std::string::npos);
  CHECK(cli({"generate", "--corpus", dir.file("missing.jsonl").string()}).status == 1);
}

TEST_CASE("bad flags") {
  CHECK(cli({"generate", "--corpus", kCorpus, "--rule", "v3"}).status == 2);
  CHECK(cli({"generate"}).status == 2);
  CHECK(cli({}).status != 0);
  CHECK(cli({"generate", "--corpus", kCorpus, "--workers", "0"}).status == 2);
  CHECK(cli({"generate", "--corpus", kCorpus, "--corrector", "remote", "--endpoint", "ftp://x"}).status == 2);
}

TEST_CASE("rule selection flags") {
  fixtures::TempDir dir;
  const auto corpus = subset(dir, "ex3.jsonl", {"ex3"});
  CHECK(records(cli({"generate", "--corpus", corpus, "--rule", "v1"}).out).at(0)["answer"] ==
        "Delhi is the capital of India .");
  CHECK(records(cli({"generate", "--corpus", corpus, "--rule", "v2"}).out).at(0)["answer"] ==
        "the capital of India is Delhi .");

  const auto yesno = subset(dir, "ex2.jsonl", {"ex2-no"});
  CHECK(records(cli({"generate", "--corpus", yesno, "--pronoun-swap", "off"}).out).at(0)["answer"] ==
        "No, my fridge does not support quick freeze feature .");
  CHECK(records(cli({"generate", "--corpus", yesno, "--pronoun-swap", "on"}).out).at(0)["answer"] ==
        "No, your fridge does not support quick freeze feature .");
  const auto explicit_rule = cli({"generate", "--corpus", yesno, "--rule", "existential"});
  CHECK(explicit_rule.status == 0);
  const auto factoid_as_yesno = cli({"generate", "--corpus", corpus, "--rule", "existential"});
  CHECK(factoid_as_yesno.status == 1);
  CHECK(factoid_as_yesno.err.find("error: sample ex3") != std::string::npos);
}

TEST_CASE("evaluate text report") {
  const auto r = cli({"evaluate", "--corpus", kCorpus});
  CHECK(r.status == 0);
  CHECK(r.out.find("Model") == 0);
  CHECK(r.out.find("ROUGE-L") != std::string::npos);
  CHECK(r.out.find("Avg. time (sec.)") != std::string::npos);
  CHECK(r.out.find("RBV2/RB ") != std::string::npos);
}

TEST_CASE("golden fixtures score 100 when rule output is among the targets") {
  fixtures::TempDir dir;
  const auto corpus = subset(dir, "golden.jsonl", {"ex3", "ex4", "tab4", "lead", "ex2-no"});
  const auto r = cli({"evaluate", "--corpus", corpus, "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["aggregate"]["rouge1"].get<double>() == doctest::Approx(100.0));
  CHECK(j["aggregate"]["rougeL"].get<double>() == doctest::Approx(100.0));
}

TEST_CASE("aggregate of one exact and one disjoint answer") {
  fixtures::TempDir dir;
  auto hit = fixtures::sample("ex4");
  hit.targets = {"the space station crew was forced to take shelter from a piece of debris ."};
  auto miss = fixtures::sample("ex3");
  miss.id = "miss";
  miss.targets = {"lorem ipsum dolor sit amet"};
  {
    std::ofstream out(dir.file("mix.jsonl"));
    write_jsonl(out, {hit, miss});
  }
  const auto r = cli({"evaluate", "--corpus", dir.file("mix.jsonl").string(), "--format", "json"});
  REQUIRE(r.status == 0);
  const auto agg = nlohmann::json::parse(r.out)["aggregate"];
  for (const char* k : {"bleu", "rouge1", "rouge2", "rougeL"}) CHECK(agg[k].get<double>() == doctest::Approx(50.0));
}

TEST_CASE("JSON report aggregates can be recomputed from its rows") {
  const auto r = cli({"evaluate", "--corpus", kCorpus, "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["model"] == "RBV2/RB");
  CHECK(j["timing"]["sample_count"] == 30);
  CHECK(j["timing"]["scope"].get<std::string>().find("analysis + rules") == 0);
  std::vector<EvalScores> rows;
  for (const auto& s : j["samples"]) {
    const auto& sc = s["scores"];
    rows.push_back({sc["bleu"], sc["rouge1"], sc["rouge2"], sc["rougeL"]});
  }
  const auto again = aggregate(rows);
  CHECK(again.bleu == j["aggregate"]["bleu"].get<double>());
  CHECK(again.rouge1 == j["aggregate"]["rouge1"].get<double>());
  CHECK(again.rouge2 == j["aggregate"]["rouge2"].get<double>());
  CHECK(again.rougeL == j["aggregate"]["rougeL"].get<double>());
}

TEST_CASE("evaluate is deterministic across runs and worker counts") {
  fixtures::TempDir dir;
  const auto a = dir.file("a.json").string(), b = dir.file("b.json").string();
  REQUIRE(cli({"evaluate", "--corpus", kCorpus, "--format", "json", "--out", a, "--workers", "1"}).status == 0);
  REQUIRE(cli({"evaluate", "--corpus", kCorpus, "--format", "json", "--out", b, "--workers", "4"}).status == 0);
  const auto ja = nlohmann::json::parse(fixtures::read_file(a));
  const auto jb = nlohmann::json::parse(fixtures::read_file(b));
  CHECK(strip_timing(ja).dump(2) == strip_timing(jb).dump(2));
}

TEST_CASE("remote evaluation labels the model") {
  fixtures::MockGecServer server;
  fixtures::TempDir dir;
  const auto corpus = subset(dir, "bus.jsonl", {"tab4"});
  const auto r = cli({"evaluate", "--corpus", corpus, "--rule", "v2", "--corrector", "remote", "--endpoint",
                      server.endpoint(), "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["model"] == "RBV2+stub");
  CHECK(j["samples"][0]["candidate"] == "The bus was going to Phoenix, Arizona.");
  CHECK(j["samples"][0]["rule_output"] == "the bus was going phoenix, arizona .");
  CHECK(j["aggregate"]["rouge1"].get<double>() == doctest::Approx(100.0));
}

TEST_CASE("diagnose") {
  SUBCASE("identity corrector finds nothing") {
    const auto r = cli({"diagnose", "--corpus", kCorpus});
    CHECK(r.status == 0);
    CHECK(r.out.find("Grammar Error [extra]") != std::string::npos);
    CHECK(r.out.find("Grammar Error [missing]") != std::string::npos);
    const auto j = nlohmann::json::parse(cli({"diagnose", "--corpus", kCorpus, "--format", "json"}).out);
    CHECK(j == nlohmann::json{{"pairs", 30}, {"extra", 0}, {"incorrect", 0}, {"misplaced", 0}, {"missing", 0}});
  }
  SUBCASE("stub corrections") {
    fixtures::MockGecServer server;
    const auto r = cli({"diagnose", "--corpus", kCorpus, "--corrector", "remote", "--endpoint", server.endpoint(),
                        "--format", "json"});
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["missing"] == 1);
    CHECK(j["incorrect"] == 1);
    CHECK(j["extra"] == 0);
    CHECK(j["misplaced"] == 0);
  }
}

TEST_CASE("diagnose counts one missing word per sample") {
  // A service that appends one word to every answer.
  httplib::Server server;
  server.Post("/correct", [](const httplib::Request& req, httplib::Response& res) {
    const auto text = nlohmann::json::parse(req.body)["text"].get<std::string>();
    res.set_content(nlohmann::json{{"corrected", text + " indeed"}, {"model", "append"}}.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const auto r = cli({"diagnose", "--corpus", kCorpus, "--corrector", "remote", "--endpoint",
                      "http://127.0.0.1:" + std::to_string(port), "--format", "json"});
  server.stop();
  t.join();
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["missing"] == 30);
  CHECK(j["extra"].get<int>() + j["incorrect"].get<int>() + j["misplaced"].get<int>() == 0);
}

TEST_CASE("stats") {
  const auto r = cli({"stats", "--corpus", kCorpus});
  CHECK(r.status == 0);
  CHECK(r.out.find("total: 30\n") == 0);
  CHECK(r.out.find("qtype existential: 6") != std::string::npos);
  CHECK(r.out.find("warnings: 0") != std::string::npos);
}

TEST_CASE("stats in lenient mode counts warnings") {
  fixtures::TempDir dir;
  std::string text;
  for (const auto& s : fixtures::mini_corpus()) text += to_json(s).dump() + "\n";
  for (int k = 0; k < 5; ++k) text += "{broken " + std::to_string(k) + "\n";
  const auto r = cli({"stats", "--corpus", dir.write("noisy.jsonl", text).string(), "--format", "json"});
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["total"] == 30);
  CHECK(j["warnings"] == 5);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 5);
}

TEST_CASE("stats on a dataset-sized corpus") {
  fixtures::TempDir dir;
  std::string text;
  auto add = [&](const std::string& proto, const std::string& source, int count) {
    auto j = to_json(fixtures::sample(proto));
    j["source"] = source;
    for (int k = 0; k < count; ++k) {
      j["id"] = source + std::to_string(k);
      text += j.dump() + "\n";
    }
  };
  add("ex3", "newsqa", 380);
  add("ex3", "squad", 6768);
  add("ex5", "yesno", 166);
  const auto r = cli({"stats", "--corpus", dir.write("table1.jsonl", text).string()});
  CHECK(r.status == 0);
  CHECK(r.out.find("source newsqa: 380") != std::string::npos);
  CHECK(r.out.find("source squad: 6768") != std::string::npos);
  CHECK(r.out.find("source yesno: 166") != std::string::npos);
}

TEST_CASE("--out writes the report to a file") {
  fixtures::TempDir dir;
  const auto path = dir.file("stats.txt").string();
  const auto r = cli({"stats", "--corpus", kCorpus, "--out", path});
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  CHECK(fixtures::read_file(path).find("total: 30") == 0);
}
