#include "greeta/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "greeta/error.hpp"

namespace greeta {

namespace {

using ojson = nlohmann::ordered_json;

std::string_view age_label(AgeGroup age) {
  switch (age) {
    case AgeGroup::kAll: return "all";
    case AgeGroup::kBaby: return "babies";
    case AgeGroup::kParent: return "parents";
    case AgeGroup::kGrandparent: return "grand";
    case AgeGroup::kUnknown: return "unknown";
  }
  return "all";
}

char source_initial(Source s) {
  switch (s) {
    case Source::kTemplate: return 'T';
    case Source::kGenerated: return 'G';
    case Source::kSocial: return 'S';
  }
  return 'T';
}

std::vector<std::string_view> texts_of(const std::vector<const GreetingMessage*>& msgs) {
  std::vector<std::string_view> out;
  out.reserve(msgs.size());
  for (const auto* m : msgs) out.push_back(m->text);
  return out;
}

void subsample(std::vector<const GreetingMessage*>& msgs, std::size_t n, std::mt19937_64& rng) {
  if (msgs.size() <= n) return;
  // Partial Fisher-Yates; profiles do not depend on message order.
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, msgs.size() - 1);
    std::swap(msgs[i], msgs[pick(rng)]);
  }
  msgs.resize(n);
}

TopicOddsRecord record_from_json(const nlohmann::json& j) {
  TopicOddsRecord r;
  r.topic = j.at("topic").get<std::string>();
  r.or_value = j.at("or").get<double>();
  r.smoothing = j.value("smoothing", 0.0);
  r.count_a = j.value("count_a", std::size_t{0});
  r.count_b = j.value("count_b", std::size_t{0});
  return r;
}

}  // namespace

std::string_view to_string(GroupPair p) {
  return p == GroupPair::kFemaleMale ? "female-male" : "gendered-neutral";
}

GroupPair parse_group_pair(std::string_view s) {
  if (s == "female-male") return GroupPair::kFemaleMale;
  if (s == "gendered-neutral") return GroupPair::kGenderedNeutral;
  throw InputError("unknown group pair '" + std::string(s) + "' (expected female-male or gendered-neutral)");
}

void RunConfig::validate() const {
  rank.validate();
  filter.validate();
  if (!(tau > 0.0)) throw InputError("tau must be positive");
  if (age_groups.empty()) throw InputError("at least one age group is required");
}

Corpus load_corpora(const std::vector<std::filesystem::path>& paths, const IndicatorSets& indicators) {
  if (paths.empty()) throw InputError("no corpus file given");
  Corpus all;
  std::set<std::string> ids;
  for (const auto& p : paths) {
    for (auto& m : load_corpus(p, indicators)) {
      if (!ids.insert(m.id).second) throw InputError("duplicate message id '" + m.id + "' across corpus files");
      all.push_back(std::move(m));
    }
  }
  return all;
}

std::vector<Scenario> scenarios_in(const Corpus& corpus) {
  std::vector<Scenario> out;
  for (Scenario s : kAllScenarios) {
    if (std::any_of(corpus.begin(), corpus.end(), [&](const GreetingMessage& m) { return m.scenario == s; })) {
      out.push_back(s);
    }
  }
  return out;
}

GroupSplit split_groups(const Corpus& corpus, const std::vector<Scenario>& scenarios, AgeGroup age, GroupPair pair,
                        bool balance, std::uint64_t seed) {
  GroupSplit split;
  for (const auto& m : corpus) {
    if (!scenarios.empty() && std::find(scenarios.begin(), scenarios.end(), m.scenario) == scenarios.end()) continue;
    if (age != AgeGroup::kAll && m.age_group != age) continue;
    const auto g = m.recipient_gender;
    if (g == RecipientGender::kMixed) continue;
    if (pair == GroupPair::kFemaleMale) {
      if (g == RecipientGender::kFemale) split.a.push_back(&m);
      if (g == RecipientGender::kMale) split.b.push_back(&m);
    } else {
      if (g == RecipientGender::kNeutral) {
        split.b.push_back(&m);
      } else {
        split.a.push_back(&m);
      }
    }
  }
  if (balance) {
    std::mt19937_64 rng(seed);
    const std::size_t n = std::min(split.a.size(), split.b.size());
    subsample(split.a, n, rng);
    subsample(split.b, n, rng);
  }
  return split;
}

std::string group_label(const GroupSplit& split, AgeGroup age) {
  std::set<char> initials;
  for (const auto* group : {&split.a, &split.b}) {
    for (const auto* m : *group) initials.insert(source_initial(m->source));
  }
  std::string prefix = initials.size() == 1 ? std::string(1, *initials.begin()) : std::string("X");
  return prefix + "-" + std::string(age_label(age));
}

GenderTopicReport analyze_split(const GroupSplit& split, const TopicLexicon& lexicon, const RunConfig& cfg) {
  const auto& [name_a, name_b] = cfg.groups == GroupPair::kFemaleMale ? std::pair{"female", "male"}
                                                                        : std::pair{"gendered", "neutral"};
  if (split.a.empty() || split.b.empty()) {
    throw DegenerateDataError(std::string("no ") + (split.a.empty() ? name_a : name_b) +
                              " messages left after filtering");
  }
  auto profile_a = filter_topics(profile_texts(texts_of(split.a), lexicon), cfg.filter);
  auto profile_b = filter_topics(profile_texts(texts_of(split.b), lexicon), cfg.filter);
  auto report = rank_gendered_topics(profile_a, profile_b, cfg.rank);
  report.group_a = name_a;
  report.group_b = name_b;
  report.filter_config = cfg.filter;
  return report;
}

std::vector<GenderTopicReport> analyze_corpus(const Corpus& corpus, const TopicLexicon& lexicon,
                                              const RunConfig& cfg) {
  cfg.validate();
  auto scenarios = cfg.scenarios.empty() ? scenarios_in(corpus) : cfg.scenarios;
  if (scenarios.empty()) throw DegenerateDataError("corpus is empty");
  std::vector<GenderTopicReport> reports;
  for (Scenario s : scenarios) {
    for (AgeGroup age : cfg.age_groups) {
      auto split = split_groups(corpus, {s}, age, cfg.groups, cfg.balance_groups, cfg.seed);
      GenderTopicReport report;
      try {
        report = analyze_split(split, lexicon, cfg);
      } catch (const DegenerateDataError& e) {
        throw DegenerateDataError(std::string(to_string(s)) + "/" + std::string(to_string(age)) + ": " + e.what());
      }
      report.scenario = to_string(s);
      report.group_label = group_label(split, age);
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

std::vector<GenderTopicReport> reports_from_json(std::string_view json) {
  std::vector<GenderTopicReport> out;
  try {
    auto doc = nlohmann::json::parse(json);
    for (const auto& rj : doc.at("reports")) {
      GenderTopicReport r;
      r.scenario = rj.at("scenario").get<std::string>();
      r.group_label = rj.value("group_label", std::string());
      r.group_a = rj.value("group_a", std::string("female"));
      r.group_b = rj.value("group_b", std::string("male"));
      for (const auto& t : rj.at("feminine_topics")) r.feminine_topics.push_back(record_from_json(t));
      for (const auto& t : rj.at("masculine_topics")) r.masculine_topics.push_back(record_from_json(t));
      r.gap = rj.value("gap", 0.0);
      if (rj.contains("surviving_topics")) {
        for (const auto& t : rj.at("surviving_topics")) r.surviving.push_back(record_from_json(t));
      }
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  return out;
}

WeatRow weat_for_report(const GenderTopicReport& report, const TopicLexicon& lexicon, const IndicatorSets& indicators,
                        const EmbeddingStore& store, bool disjoint_targets) {
  auto keyword_union = [&](const std::vector<TopicOddsRecord>& topics) {
    std::vector<std::string> words;
    std::set<std::string> seen;
    for (const auto& t : topics) {
      for (const auto& k : lexicon.keywords_of(t.topic)) {
        if (seen.insert(k).second) words.push_back(k);
      }
    }
    return words;
  };
  WeatInput input;
  input.targets_x = keyword_union(report.feminine_topics);
  input.targets_y = keyword_union(report.masculine_topics);
  auto female = indicators.female_side();
  auto male = indicators.male_side();
  input.attributes_a.assign(female.begin(), female.end());
  input.attributes_b.assign(male.begin(), male.end());
  input.disjoint_targets = disjoint_targets;

  WeatRow row;
  row.scenario = report.scenario;
  row.group_label = report.group_label;
  try {
    row.result = weat_effect_size(input, store);
  } catch (const DegenerateDataError& e) {
    throw DegenerateDataError(report.scenario + ": " + e.what());
  }

  std::map<std::string, double> by_word(row.result.associations.begin(), row.result.associations.end());
  for (const auto* list : {&report.feminine_topics, &report.masculine_topics}) {
    for (const auto& t : *list) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& k : lexicon.keywords_of(t.topic)) {
        if (auto it = by_word.find(k); it != by_word.end()) {
          sum += it->second;
          ++n;
        }
      }
      if (n > 0) row.topic_associations.emplace_back(t.topic, sum / static_cast<double>(n));
    }
  }
  return row;
}

std::string weat_rows_to_json(const std::vector<WeatRow>& rows) {
  ojson doc;
  doc["weat"] = ojson::array();
  for (const auto& r : rows) {
    ojson j;
    j["scenario"] = r.scenario;
    j["group_label"] = r.group_label;
    j["effect_size"] = r.result.effect_size;
    j["x_size"] = r.result.x_size;
    j["y_size"] = r.result.y_size;
    j["dropped_oov"] = r.result.dropped_oov;
    j["topic_associations"] = ojson::object();
    for (const auto& [t, v] : r.topic_associations) j["topic_associations"][t] = v;
    doc["weat"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string weat_rows_to_table(const std::vector<WeatRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "scenario" << std::setw(12) << "group" << std::setw(10) << "WEAT"
      << "targets(X/Y)  oov\n";
  for (const auto& r : rows) {
    std::ostringstream d;
    d << std::fixed << std::setprecision(3) << r.result.effect_size;
    out << std::setw(12) << r.scenario << std::setw(12) << r.group_label << std::setw(10) << d.str()
        << std::setw(14) << (std::to_string(r.result.x_size) + "/" + std::to_string(r.result.y_size))
        << r.result.dropped_oov.size() << "\n";
  }
  return out.str();
}

GenderStatsSnapshot build_snapshot(const Corpus& corpus, const TopicLexicon& lexicon, const RunConfig& cfg,
                                   std::vector<std::string>& warnings) {
  cfg.validate();
  const AgeGroup age = cfg.age_groups.front();
  auto split = split_groups(corpus, cfg.scenarios, age, cfg.groups, cfg.balance_groups, cfg.seed);
  auto report = analyze_split(split, lexicon, cfg);
  auto snap = GenderStatsSnapshot::from_report(report, cfg.tau);
  const bool any_feminine = std::any_of(snap.topic_or.begin(), snap.topic_or.end(),
                                        [](const auto& kv) { return kv.second < 1.0; });
  const bool any_masculine = std::any_of(snap.topic_or.begin(), snap.topic_or.end(),
                                         [](const auto& kv) { return kv.second > 1.0; });
  if (!any_feminine) warnings.push_back("snapshot has no " + report.group_a + "-leaning topic");
  if (!any_masculine) warnings.push_back("snapshot has no " + report.group_b + "-leaning topic");
  for (const auto& w : report.warnings) warnings.push_back(w);
  return snap;
}

std::string prompts_to_json(const std::vector<std::pair<Scenario, std::vector<Prompt>>>& prompts) {
  ojson doc;
  doc["generation"] = {{"top_p", kGenerationTopP}, {"max_chars", kGenerationMaxChars}};
  doc["prompts"] = ojson::array();
  for (const auto& [scenario, list] : prompts) {
    for (const auto& p : list) {
      doc["prompts"].push_back({{"scenario", to_string(scenario)},
                                {"prompt", p.text},
                                {"gender", to_string(p.gender)},
                                {"age_group", to_string(p.age_group)},
                                {"template", to_string(p.template_kind)}});
    }
  }
  return doc.dump(2) + "\n";
}

std::vector<NamedRecipient> load_names(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open names file: " + path.string());
  std::vector<NamedRecipient> names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto sep = line.find_first_of(",\t");
    if (sep == std::string::npos) throw RecordError(line_no, "expected 'name,gender'");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string name = trim(line.substr(0, sep));
    std::string gender = trim(line.substr(sep + 1));
    if (name.empty()) throw RecordError(line_no, "empty name");
    RecipientGender g;
    try {
      g = parse_gender(gender);
    } catch (const InputError& e) {
      throw RecordError(line_no, e.what());
    }
    names.push_back({name, g});
  }
  return names;
}

}  // namespace greeta
