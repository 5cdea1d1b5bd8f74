#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "greeta/corpus.hpp"
#include "greeta/genderstats.hpp"
#include "greeta/lexicon.hpp"
#include "greeta/scorer.hpp"
#include "greeta/weat.hpp"

namespace greeta {

// Which two message groups are compared. Group B is the high-OR side.
enum class GroupPair {
  kFemaleMale,       // A = female recipients, B = male recipients
  kGenderedNeutral,  // A = female + male recipients, B = no indicator
};

std::string_view to_string(GroupPair p);
GroupPair parse_group_pair(std::string_view s);

enum class OutputFormat { kJson, kTable };

struct RunConfig {
  std::vector<std::filesystem::path> corpus_paths;
  std::filesystem::path lexicon_path;
  std::optional<std::filesystem::path> indicator_path;
  // Empty means every scenario present in the corpus, in enum order.
  std::vector<Scenario> scenarios;
  GroupPair groups = GroupPair::kFemaleMale;
  // kAll keeps every message.
  std::vector<AgeGroup> age_groups{AgeGroup::kAll};
  RankConfig rank;
  FilterConfig filter;
  // Subsample the larger group down to the size of the smaller one.
  bool balance_groups = false;
  std::optional<std::filesystem::path> embedding_path;
  OutputFormat format = OutputFormat::kJson;
  std::uint64_t seed = 0;
  double tau = 2.0;

  void validate() const;
};

// Loads every corpus file in order; ids must stay unique across files.
Corpus load_corpora(const std::vector<std::filesystem::path>& paths, const IndicatorSets& indicators);

struct GroupSplit {
  std::vector<const GreetingMessage*> a;
  std::vector<const GreetingMessage*> b;
};

// Messages of the scenarios (empty = all) and age group, split per the group
// pair. Mixed recipients are always excluded.
GroupSplit split_groups(const Corpus& corpus, const std::vector<Scenario>& scenarios, AgeGroup age, GroupPair pair,
                        bool balance, std::uint64_t seed);

// "T-all", "G-parents", ...: source initial of the compared messages, then the
// age group.
std::string group_label(const GroupSplit& split, AgeGroup age);

// Profile, filter and rank one split.
GenderTopicReport analyze_split(const GroupSplit& split, const TopicLexicon& lexicon, const RunConfig& cfg);

// One report per (scenario, age group). Throws DegenerateDataError when a
// group is empty.
std::vector<GenderTopicReport> analyze_corpus(const Corpus& corpus, const TopicLexicon& lexicon,
                                              const RunConfig& cfg);

std::vector<Scenario> scenarios_in(const Corpus& corpus);

// Parsed back from report_to_json output, enough for WEAT targets.
std::vector<GenderTopicReport> reports_from_json(std::string_view json);

struct WeatRow {
  std::string scenario;
  std::string group_label;
  WeatResult result;
  // Mean association of each listed topic's in-vocabulary keywords.
  std::vector<std::pair<std::string, double>> topic_associations;
};

// X/Y are the keyword unions of the report's two topic lists; A/B are the
// female-side and male-side indicators.
WeatRow weat_for_report(const GenderTopicReport& report, const TopicLexicon& lexicon, const IndicatorSets& indicators,
                        const EmbeddingStore& store, bool disjoint_targets = false);

std::string weat_rows_to_json(const std::vector<WeatRow>& rows);
std::string weat_rows_to_table(const std::vector<WeatRow>& rows);

// Snapshot over every selected message pooled across scenarios, for the
// first configured age group.
GenderStatsSnapshot build_snapshot(const Corpus& corpus, const TopicLexicon& lexicon, const RunConfig& cfg,
                                   std::vector<std::string>& warnings);

inline constexpr double kGenerationTopP = 0.1;
inline constexpr int kGenerationMaxChars = 200;

// Prompt list plus inert generation settings for an external generator.
std::string prompts_to_json(const std::vector<std::pair<Scenario, std::vector<Prompt>>>& prompts);

// CSV/TSV lines "name,gender"; '#' starts a comment.
std::vector<NamedRecipient> load_names(const std::filesystem::path& path);

}  // namespace greeta
