#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "greeta/corpus.hpp"
#include "oracle.hpp"
#include "process.hpp"

namespace fs = std::filesystem;
using testproc::run_cli;

namespace {

const fs::path kData = fs::path(GREETA_DATA_DIR) / "synthetic";
const std::string kCorpus = (kData / "corpus.jsonl").string();
const std::string kLexicon = (kData / "lexicon.tsv").string();

const std::vector<std::string> kGoldenArgs = {"analyze-corpus",        "--corpus", kCorpus, "--lexicon", kLexicon,
                                              "-k",                    "2",        "--min-unique-keywords",
                                              "1",                     "--min-avg-frequency",
                                              "1",                     "--seed",   "42"};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> with(std::vector<std::string> base, const std::vector<std::string>& more) {
  base.insert(base.end(), more.begin(), more.end());
  return base;
}

fs::path temp_file(const std::string& name, const std::string& content) {
  auto p = fs::temp_directory_path() / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST_CASE("analyze-corpus reproduces the golden report byte for byte") {
  auto r = run_cli(kGoldenArgs);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out == slurp(fs::path(GREETA_GOLDEN_DIR) / "synthetic_report.json"));
  CHECK(run_cli(kGoldenArgs).out == r.out);
}

TEST_CASE("golden report agrees with the brute-force oracle") {
  auto corpus = greeta::load_corpus(kCorpus);
  std::vector<std::string> female, male;
  for (const auto& m : corpus) {
    if (m.recipient_gender == greeta::RecipientGender::kFemale) female.push_back(m.text);
    if (m.recipient_gender == greeta::RecipientGender::kMale) male.push_back(m.text);
  }
  oracle::Lexicon lex;
  std::istringstream tsv(slurp(kLexicon));
  for (std::string line; std::getline(tsv, line);) {
    std::istringstream fields(line);
    std::string topic, kw;
    std::getline(fields, topic, '\t');
    while (std::getline(fields, kw, '\t')) lex[topic].insert(kw);
  }
  auto want = oracle::rank(female, male, lex, 1, 1.0, 0.30, 2);

  auto doc = nlohmann::json::parse(slurp(fs::path(GREETA_GOLDEN_DIR) / "synthetic_report.json"));
  const auto& report = doc.at("reports").at(0);
  std::vector<std::string> fem, masc;
  for (const auto& t : report.at("feminine_topics")) fem.push_back(t.at("topic"));
  for (const auto& t : report.at("masculine_topics")) masc.push_back(t.at("topic"));
  CHECK(fem == want.feminine);
  CHECK(masc == want.masculine);
  CHECK(report.at("gap").get<double>() == doctest::Approx(want.gap).epsilon(1e-12));
  REQUIRE(report.at("surviving_topics").size() == want.surviving.size());
  for (const auto& t : report.at("surviving_topics")) {
    CHECK(t.at("or").get<double>() == doctest::Approx(want.surviving.at(t.at("topic"))).epsilon(1e-12));
  }
}

TEST_CASE("table output and output file") {
  auto table = run_cli(with(kGoldenArgs, {"--format", "table"}));
  CHECK(table.exit_code == 0);
  CHECK(table.out.find("T-all") != std::string::npos);

  auto out = fs::temp_directory_path() / "greeta_cli_report.json";
  auto r = run_cli(with(kGoldenArgs, {"-o", out.string()}));
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(out) == slurp(fs::path(GREETA_GOLDEN_DIR) / "synthetic_report.json"));
  fs::remove(out);
}

TEST_CASE("balanced runs are reproducible under a fixed seed") {
  auto args = with(kGoldenArgs, {"--groups", "gendered-neutral", "--balance"});
  auto first = run_cli(args);
  REQUIRE(first.exit_code == 0);
  CHECK(run_cli(args).out == first.out);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}).exit_code == 1);
  CHECK(run_cli({"analyze-corpus", "--lexicon", kLexicon}).exit_code == 1);
  CHECK(run_cli({"analyze-corpus", "--corpus", "/nonexistent.jsonl", "--lexicon", kLexicon}).exit_code == 1);
  CHECK(run_cli(with(kGoldenArgs, {"--quantile", "3"})).exit_code == 1);
  CHECK(run_cli(with(kGoldenArgs, {"--scenario", "graduation"})).exit_code == 1);

  auto bad = temp_file("greeta_cli_bad.jsonl", "{\"id\":\"a\",\"scenario\":\"birthday\",\"source\":\"template\"}\n");
  CHECK(run_cli({"analyze-corpus", "--corpus", bad.string(), "--lexicon", kLexicon}).exit_code == 1);
  fs::remove(bad);

  // No male messages at all.
  auto one_sided = temp_file("greeta_cli_female.jsonl",
                             "{\"id\":\"a\",\"text\":\"Happy birthday sister, you glow\",\"scenario\":\"birthday\","
                             "\"source\":\"template\"}\n");
  CHECK(run_cli({"analyze-corpus", "--corpus", one_sided.string(), "--lexicon", kLexicon}).exit_code == 2);
  fs::remove(one_sided);

  CHECK(run_cli(with(kGoldenArgs, {"--age-group", "grandparent"})).exit_code == 2);
}

TEST_CASE("build-snapshot is deterministic and matches the report") {
  std::vector<std::string> args = {"build-snapshot", "--corpus", kCorpus, "--lexicon", kLexicon,
                                   "-k", "2", "--min-unique-keywords", "1", "--min-avg-frequency", "1"};
  auto a = run_cli(args);
  auto b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  auto snap = nlohmann::json::parse(a.out);
  auto report = nlohmann::json::parse(run_cli(kGoldenArgs).out).at("reports").at(0);
  for (const auto& t : report.at("surviving_topics")) {
    CHECK(snap.at("topic_or").at(t.at("topic").get<std::string>()).get<double>() == t.at("or").get<double>());
  }
  CHECK(snap.at("tau").get<double>() == 2.0);

  auto other = run_cli(with(args, {"--tau", "3"}));
  CHECK(nlohmann::json::parse(other.out).at("version") != snap.at("version"));
}

TEST_CASE("build-prompts emits generation settings and endearments") {
  auto r = run_cli({"build-prompts", "--scenario", "birthday"});
  REQUIRE(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("generation").at("top_p").get<double>() == 0.1);
  CHECK(doc.at("generation").at("max_chars").get<int>() == 200);
  bool grandma = false;
  for (const auto& p : doc.at("prompts")) {
    CHECK(p.at("template") != "name");
    if (p.at("prompt") == "Happy birthday grandma!") grandma = p.at("age_group") == "grandparent";
  }
  CHECK(grandma);

  auto named = run_cli({"build-prompts", "--scenario", "birthday", "--names", (kData / "names.csv").string()});
  REQUIRE(named.exit_code == 0);
  CHECK(named.out.find("Happy birthday my little baby girl Emma!") != std::string::npos);

  auto prefixed = run_cli({"build-prompts", "--scenario", "other", "--prefix", "other=Congratulations"});
  CHECK(prefixed.exit_code == 0);
  CHECK(prefixed.out.find("Congratulations niece!") != std::string::npos);
  CHECK(run_cli({"build-prompts", "--scenario", "other"}).exit_code == 1);
}

TEST_CASE("weat on the tiny embeddings") {
  std::vector<std::string> args = {"weat", "--corpus", kCorpus, "--lexicon", kLexicon, "-k", "2",
                                   "--min-unique-keywords", "1", "--min-avg-frequency", "1",
                                   "--embeddings", (kData / "embeddings.txt").string()};
  auto r = run_cli(args);
  REQUIRE(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("weat").at(0).at("effect_size").get<double>() == doctest::Approx(2.0).epsilon(1e-12));

  auto report = temp_file("greeta_cli_golden_copy.json", slurp(fs::path(GREETA_GOLDEN_DIR) / "synthetic_report.json"));
  auto reused = run_cli({"weat", "--report", report.string(), "--lexicon", kLexicon, "--embeddings",
                         (kData / "embeddings.txt").string()});
  CHECK(reused.exit_code == 0);
  CHECK(reused.out == r.out);
  fs::remove(report);

  auto oov = temp_file("greeta_cli_oov.txt", "zebra 1 0\nyak 0 1\n");
  CHECK(run_cli(with(std::vector<std::string>(args.begin(), args.end() - 1), {oov.string()})).exit_code == 2);
  fs::remove(oov);
}
