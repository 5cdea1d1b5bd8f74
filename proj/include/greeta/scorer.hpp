#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "greeta/genderstats.hpp"
#include "greeta/lexicon.hpp"

namespace greeta {

// Topic odds ratios published to the scorer and the service.
struct GenderStatsSnapshot {
  std::string version;
  double tau = 2.0;
  std::map<std::string, double> topic_or;

  // Throws InputError unless tau > 0 and every OR is finite and positive.
  void validate() const;

  // Content hash of tau and topic_or, stable across runs.
  static std::string compute_version(double tau, const std::map<std::string, double>& topic_or);

  // Every surviving topic of the report, with version filled in.
  static GenderStatsSnapshot from_report(const GenderTopicReport& report, double tau = 2.0);

  // {"version", "tau", "topic_or": {topic: number}}
  std::string to_json() const;
  static GenderStatsSnapshot from_json(std::string_view text);
  static GenderStatsSnapshot load(const std::filesystem::path& path);
};

enum class Band { kFeminine, kMasculine, kNeutral };
enum class GenderAssoc { kFeminine, kMasculine, kNeutral };
std::string_view to_string(Band b);
std::string_view to_string(GenderAssoc g);

// feminine above 51, masculine below 49, neutral in [49, 51]. Throws
// std::out_of_range outside [0, 100].
Band band_of(double score);

// OR < 1 feminine, OR > 1 masculine, otherwise (or unknown) neutral.
GenderAssoc gender_assoc_of(const GenderStatsSnapshot& stats, const std::string& topic);

struct ScoredTopic {
  std::string topic;
  std::size_t weight = 0;
  GenderAssoc gender_assoc = GenderAssoc::kNeutral;
  std::vector<KeywordMatch> matches;
};

struct MessageAnalysis {
  double score = 50.0;  // femininity, 0..100
  Band band = Band::kNeutral;
  double raw = 0.0;
  std::vector<ScoredTopic> topics;
  double feminine_fraction = 0.5;
  double masculine_fraction = 0.5;
  std::string snapshot_version;
};

// raw = sum over matched topics of occurrences(t) * -ln OR_t, topics missing
// from the snapshot contributing zero; score = 100 * logistic(raw / tau).
MessageAnalysis score_message(std::string_view text, const TopicLexicon& lexicon, const GenderStatsSnapshot& stats);

std::string analysis_to_json(const MessageAnalysis& analysis);

}  // namespace greeta
