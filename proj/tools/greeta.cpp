// greeta: batch analysis of greeting-message corpora and the GreetA service.
//
//   greeta analyze-corpus --corpus msgs.jsonl --lexicon categories.tsv
//   greeta weat           --corpus msgs.jsonl --lexicon categories.tsv --embeddings glove.txt
//   greeta build-snapshot --corpus msgs.jsonl --lexicon categories.tsv --output snapshot.json
//   greeta build-prompts  --scenario birthday --names names.csv
//   greeta serve          --lexicon categories.tsv --snapshot snapshot.json --reference msgs.jsonl
//
// Exit codes: 0 success, 1 input error, 2 degenerate data.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "greeta/error.hpp"
#include "greeta/pipeline.hpp"
#include "greeta/service.hpp"

namespace {

using namespace greeta;

constexpr int kExitInput = 1;
constexpr int kExitDegenerate = 2;

struct CliOptions {
  RunConfig run;
  std::vector<std::string> scenario_names;
  std::vector<std::string> age_names{"all"};
  std::string group_pair = "female-male";
  std::string format = "json";
  std::string output;

  // weat
  std::string report_path;
  bool disjoint_targets = false;
  std::size_t permutations = 0;

  // build-prompts
  std::string names_path;
  std::vector<std::string> prefix_overrides;

  // serve
  std::string snapshot_path;
  std::string reference_path;
  std::string ui_dir;
  std::string host = "127.0.0.1";
  int port = 0;
};

void add_corpus_options(CLI::App* cmd, CliOptions& o, bool corpus_required = true) {
  auto* corpus = cmd->add_option("--corpus", o.run.corpus_paths, "Corpus file(s), one JSON record per line");
  if (corpus_required) corpus->required();
  cmd->add_option("--lexicon", o.run.lexicon_path, "Topic lexicon (tab-separated)")->required();
  cmd->add_option("--indicators", o.run.indicator_path, "Indicator word lists (JSON); defaults to bundled lists");
  cmd->add_option("--scenario", o.scenario_names, "Scenario(s) to analyze; default: all present");
  cmd->add_option("--groups", o.group_pair, "Group pair: female-male or gendered-neutral");
  cmd->add_option("--age-group", o.age_names, "Age group(s): all, baby, parent, grandparent, unknown");
  cmd->add_option("-k,--top-k", o.run.rank.k, "Topics per side");
  cmd->add_option("--quantile", o.run.rank.quantile, "Drop topics below this quantile of message counts");
  cmd->add_option("--min-unique-keywords", o.run.filter.min_unique_keywords,
                  "Keep topics with more unique keywords than this");
  cmd->add_option("--min-avg-frequency", o.run.filter.min_avg_frequency,
                  "Keep topics whose keywords occur more often than this on average");
  cmd->add_flag("--balance", o.run.balance_groups, "Subsample the larger group to the size of the smaller");
  cmd->add_option("--seed", o.run.seed, "Random seed");
  cmd->add_option("--format", o.format, "Output format: json or table");
  cmd->add_option("-o,--output", o.output, "Output file (default stdout)");
}

void finish_config(CliOptions& o) {
  o.run.scenarios.clear();
  for (const auto& s : o.scenario_names) o.run.scenarios.push_back(parse_scenario(s));
  o.run.age_groups.clear();
  for (const auto& a : o.age_names) o.run.age_groups.push_back(parse_age_group(a));
  o.run.groups = parse_group_pair(o.group_pair);
  if (o.format == "json") {
    o.run.format = OutputFormat::kJson;
  } else if (o.format == "table") {
    o.run.format = OutputFormat::kTable;
  } else {
    throw InputError("unknown format '" + o.format + "'");
  }
  o.run.validate();
}

IndicatorSets indicators_for(const RunConfig& cfg) {
  return cfg.indicator_path ? IndicatorSets::load(*cfg.indicator_path) : IndicatorSets::defaults();
}

void emit(const CliOptions& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw InputError("cannot write " + o.output);
  out << text;
}

int run_analyze(CliOptions& o) {
  finish_config(o);
  auto indicators = indicators_for(o.run);
  auto corpus = load_corpora(o.run.corpus_paths, indicators);
  auto lexicon = TopicLexicon::load(o.run.lexicon_path);
  auto reports = analyze_corpus(corpus, lexicon, o.run);
  for (const auto& r : reports) {
    for (const auto& w : r.warnings) std::cerr << "warning: " << r.scenario << "/" << r.group_label << ": " << w << "\n";
  }
  emit(o, o.run.format == OutputFormat::kJson ? report_to_json(reports) : report_to_table(reports));
  return 0;
}

int run_weat(CliOptions& o) {
  finish_config(o);
  if (!o.run.embedding_path) throw InputError("--embeddings is required");
  auto indicators = indicators_for(o.run);
  auto lexicon = TopicLexicon::load(o.run.lexicon_path);

  std::vector<GenderTopicReport> reports;
  if (!o.report_path.empty()) {
    std::ifstream in(o.report_path);
    if (!in) throw InputError("cannot open report " + o.report_path);
    std::stringstream ss;
    ss << in.rdbuf();
    reports = reports_from_json(ss.str());
  } else {
    if (o.run.corpus_paths.empty()) throw InputError("either --corpus or --report is required");
    reports = analyze_corpus(load_corpora(o.run.corpus_paths, indicators), lexicon, o.run);
  }

  std::set<std::string> needed;
  for (const auto& r : reports) {
    for (const auto* list : {&r.feminine_topics, &r.masculine_topics}) {
      for (const auto& t : *list) {
        const auto& kws = lexicon.keywords_of(t.topic);
        needed.insert(kws.begin(), kws.end());
      }
    }
  }
  for (const auto& w : indicators.female_side()) needed.insert(w);
  for (const auto& w : indicators.male_side()) needed.insert(w);
  auto store = EmbeddingStore::load(*o.run.embedding_path, needed);
  for (const auto& s : store.skipped()) std::cerr << "warning: embeddings line " << s.line << ": " << s.reason << "\n";

  std::vector<WeatRow> rows;
  for (const auto& r : reports) {
    rows.push_back(weat_for_report(r, lexicon, indicators, store, o.disjoint_targets));
    if (!rows.back().result.dropped_oov.empty()) {
      std::cerr << "note: " << r.scenario << ": " << rows.back().result.dropped_oov.size()
                << " words not in the embeddings\n";
    }
    if (o.permutations > 0) {
      std::cerr << r.scenario << ": permutation p = "
                << weat_p_value(rows.back().result, o.permutations, o.run.seed) << "\n";
    }
  }
  emit(o, o.run.format == OutputFormat::kJson ? weat_rows_to_json(rows) : weat_rows_to_table(rows));
  return 0;
}

int run_build_snapshot(CliOptions& o) {
  finish_config(o);
  auto indicators = indicators_for(o.run);
  auto corpus = load_corpora(o.run.corpus_paths, indicators);
  auto lexicon = TopicLexicon::load(o.run.lexicon_path);
  std::vector<std::string> warnings;
  auto snap = build_snapshot(corpus, lexicon, o.run, warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  emit(o, snap.to_json());
  return 0;
}

int run_build_prompts(CliOptions& o) {
  auto indicators = indicators_for(o.run);
  ScenarioPrefixes prefixes = default_scenario_prefixes();
  for (const auto& p : o.prefix_overrides) {
    auto eq = p.find('=');
    if (eq == std::string::npos) throw InputError("--prefix expects scenario=text");
    prefixes[parse_scenario(p.substr(0, eq))] = p.substr(eq + 1);
  }
  std::vector<NamedRecipient> names;
  if (!o.names_path.empty()) names = load_names(o.names_path);

  std::vector<Scenario> scenarios;
  for (const auto& s : o.scenario_names) scenarios.push_back(parse_scenario(s));
  if (scenarios.empty()) scenarios = {Scenario::kBirthday, Scenario::kValentine, Scenario::kWedding};

  std::vector<std::pair<Scenario, std::vector<Prompt>>> all;
  for (Scenario s : scenarios) all.emplace_back(s, build_prompts(s, indicators, names, prefixes));
  emit(o, prompts_to_json(all));
  return 0;
}

GreetaService* g_service = nullptr;

void handle_signal(int) {
  if (g_service) g_service->stop();
}

int run_serve(CliOptions& o) {
  auto indicators = indicators_for(o.run);
  auto lexicon = TopicLexicon::load(o.run.lexicon_path);
  std::optional<GenderStatsSnapshot> snap;
  ServiceOptions opts;
  if (!o.snapshot_path.empty()) {
    snap = GenderStatsSnapshot::load(o.snapshot_path);
    opts.snapshot_path = o.snapshot_path;
  }
  std::optional<Corpus> reference;
  if (!o.reference_path.empty()) reference = load_corpus(o.reference_path, indicators);
  if (!o.ui_dir.empty()) opts.ui_dir = o.ui_dir;

  int port = o.port;
  if (port == 0) {
    if (const char* env = std::getenv("PORT")) port = std::atoi(env);
  }
  if (port == 0) port = 8080;

  GreetaService service(std::move(lexicon), std::move(snap), std::move(reference), opts);
  const int bound = service.bind(o.host, port);
  if (bound < 0) throw InputError("cannot bind " + o.host + ":" + std::to_string(port));
  g_service = &service;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cerr << "listening on http://" << o.host << ":" << bound << "\n";
  service.serve();
  g_service = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gender-role topic analysis for greeting-card messages"};
  app.require_subcommand(1);
  CliOptions o;

  auto* analyze = app.add_subcommand("analyze-corpus", "Rank gender-distinct topics per scenario and age group");
  add_corpus_options(analyze, o);

  auto* weat = app.add_subcommand("weat", "WEAT effect sizes of the ranked topic lists");
  add_corpus_options(weat, o, /*corpus_required=*/false);
  weat->add_option("--embeddings", o.run.embedding_path, "Word vectors, one 'word v1 ... vD' per line")->required();
  weat->add_option("--report", o.report_path, "Reuse a report written by analyze-corpus");
  weat->add_flag("--disjoint-targets", o.disjoint_targets, "Drop keywords shared by both topic lists");
  weat->add_option("--permutations", o.permutations, "Also print a permutation-test p-value");

  auto* snapshot = app.add_subcommand("build-snapshot", "Write the topic odds-ratio snapshot used by the scorer");
  add_corpus_options(snapshot, o);
  snapshot->add_option("--tau", o.run.tau, "Score temperature");

  auto* prompts = app.add_subcommand("build-prompts", "Emit generation prompts from the indicator lists");
  prompts->add_option("--scenario", o.scenario_names, "Scenario(s); default birthday, valentine, wedding");
  prompts->add_option("--indicators", o.run.indicator_path, "Indicator word lists (JSON)");
  prompts->add_option("--names", o.names_path, "Names file, 'name,gender' per line");
  prompts->add_option("--prefix", o.prefix_overrides, "Override a scenario prefix: scenario=text");
  prompts->add_option("-o,--output", o.output, "Output file (default stdout)");

  auto* serve = app.add_subcommand("serve", "Run the GreetA HTTP service");
  serve->add_option("--lexicon", o.run.lexicon_path, "Topic lexicon (tab-separated)")->required();
  serve->add_option("--indicators", o.run.indicator_path, "Indicator word lists (JSON)");
  serve->add_option("--snapshot", o.snapshot_path, "Snapshot written by build-snapshot");
  serve->add_option("--reference", o.reference_path, "Reference corpus for topic exploration");
  serve->add_option("--ui", o.ui_dir, "Directory with the browser UI bundle");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--port", o.port, "Port (default $PORT or 8080)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  try {
    if (*analyze) return run_analyze(o);
    if (*weat) return run_weat(o);
    if (*snapshot) return run_build_snapshot(o);
    if (*prompts) return run_build_prompts(o);
    if (*serve) return run_serve(o);
  } catch (const DegenerateDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const OovError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  }
  return kExitInput;
}
