#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "greeta/lexicon.hpp"

namespace greeta {

// Haldane-Anscombe correction used when a 2x2 table has a zero cell.
inline constexpr double kZeroCellSmoothing = 0.5;

// Odds of the topic in group B over its odds in group A:
//   [(b + s) / (n_b - b + s)] / [(a + s) / (n_a - a + s)]
// Throws DegenerateDataError if either group is empty and
// std::invalid_argument if a topic count exceeds its group size.
double odds_ratio(std::size_t n_topic_a, std::size_t n_a, std::size_t n_topic_b, std::size_t n_b, double smoothing);

// The four (possibly smoothed) cells of a 2x2 table, doubled so that a 0.5
// correction stays integral. Ranking compares these exactly.
struct OddsFraction {
  std::uint64_t present_a2 = 2;
  std::uint64_t absent_a2 = 2;
  std::uint64_t present_b2 = 2;
  std::uint64_t absent_b2 = 2;
  double smoothing = 0.0;

  double value() const;
  // Exact comparison of the two ratios.
  friend bool operator<(const OddsFraction& x, const OddsFraction& y);
  friend bool operator==(const OddsFraction& x, const OddsFraction& y);
};

// Applies kZeroCellSmoothing only when one of the four cells is zero.
OddsFraction topic_odds(std::size_t n_topic_a, std::size_t n_a, std::size_t n_topic_b, std::size_t n_b);

enum class Tier { kHigh, kMid, kLow };
std::string_view to_string(Tier t);

// Rank by count descending; positions below ceil(n/3) are high, below
// ceil(2n/3) mid, the rest low. Tied counts share the better tier.
std::map<std::string, Tier> assign_tiers(const std::map<std::string, std::size_t>& frequencies);

struct TopicOddsRecord {
  std::string topic;
  OddsFraction odds;
  double or_value = 1.0;
  double smoothing = 0.0;
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  Tier tier_a = Tier::kLow;
  Tier tier_b = Tier::kLow;
};

struct RankConfig {
  double quantile = 0.30;
  std::size_t k = 5;

  void validate() const;
};

struct GenderTopicReport {
  std::string scenario;
  std::string group_label;
  std::string group_a = "female";
  std::string group_b = "male";
  std::size_t messages_a = 0;
  std::size_t messages_b = 0;
  // Ascending by OR (group A leaning first).
  std::vector<TopicOddsRecord> feminine_topics;
  // Descending by OR (group B leaning first).
  std::vector<TopicOddsRecord> masculine_topics;
  double gap = 0.0;
  // OR and counts of every topic that survived the quantile filter, by name.
  std::vector<TopicOddsRecord> surviving;
  bool short_lists = false;
  std::vector<std::string> warnings;
  RankConfig rank_config;
  FilterConfig filter_config;
};

// Candidates are topics present in either profile; a topic missing from one
// profile counts as absent from every message of that group. Topics whose
// combined message count is below the linear-interpolated `quantile` of the
// candidates' combined counts are dropped. The survivors sorted by OR give
// min(k, floor(n/2)) topics to each side. gap = ln(OR_masc[0] / OR_fem[0]).
// Throws DegenerateDataError if either profile has no messages or no
// candidate topic exists.
GenderTopicReport rank_gendered_topics(const TopicProfile& profile_a, const TopicProfile& profile_b,
                                       const RankConfig& cfg = {});

// Value at fraction q of the sorted values, interpolating linearly between
// neighbouring order statistics.
double linear_quantile(std::vector<double> values, double q);

// Report rendering.
std::string report_to_json(const std::vector<GenderTopicReport>& reports);
std::string report_to_table(const std::vector<GenderTopicReport>& reports);

}  // namespace greeta
