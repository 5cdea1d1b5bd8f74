#include "greeta/genderstats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include "greeta/error.hpp"

namespace greeta {

namespace {

using u128 = unsigned __int128;

void check_counts(std::size_t n_topic_a, std::size_t n_a, std::size_t n_topic_b, std::size_t n_b) {
  if (n_a == 0 || n_b == 0) throw DegenerateDataError("odds ratio: a group has no messages");
  if (n_topic_a > n_a || n_topic_b > n_b) {
    throw std::invalid_argument("odds ratio: topic count exceeds group size");
  }
}

}  // namespace

double odds_ratio(std::size_t n_topic_a, std::size_t n_a, std::size_t n_topic_b, std::size_t n_b, double smoothing) {
  check_counts(n_topic_a, n_a, n_topic_b, n_b);
  if (smoothing < 0.0) throw std::invalid_argument("odds ratio: negative smoothing");
  const double s = smoothing;
  const double odds_b = (static_cast<double>(n_topic_b) + s) / (static_cast<double>(n_b - n_topic_b) + s);
  const double odds_a = (static_cast<double>(n_topic_a) + s) / (static_cast<double>(n_a - n_topic_a) + s);
  return odds_b / odds_a;
}

double OddsFraction::value() const {
  // Reduced first, so equal ratios built from different cells give equal doubles.
  u128 num = u128(present_b2) * absent_a2;
  u128 den = u128(absent_b2) * present_a2;
  u128 x = num, y = den;
  while (y != 0) x = std::exchange(y, x % y);
  if (x > 1) {
    num /= x;
    den /= x;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

bool operator<(const OddsFraction& x, const OddsFraction& y) {
  // x.pb/x.ab * x.aa/x.pa  <  y.pb/y.ab * y.aa/y.pa
  return u128(x.present_b2) * x.absent_a2 * y.absent_b2 * y.present_a2 <
         u128(y.present_b2) * y.absent_a2 * x.absent_b2 * x.present_a2;
}

bool operator==(const OddsFraction& x, const OddsFraction& y) { return !(x < y) && !(y < x); }

OddsFraction topic_odds(std::size_t n_topic_a, std::size_t n_a, std::size_t n_topic_b, std::size_t n_b) {
  check_counts(n_topic_a, n_a, n_topic_b, n_b);
  const bool zero_cell = n_topic_a == 0 || n_topic_a == n_a || n_topic_b == 0 || n_topic_b == n_b;
  const std::uint64_t s2 = zero_cell ? 1 : 0;
  OddsFraction f;
  f.present_a2 = 2 * n_topic_a + s2;
  f.absent_a2 = 2 * (n_a - n_topic_a) + s2;
  f.present_b2 = 2 * n_topic_b + s2;
  f.absent_b2 = 2 * (n_b - n_topic_b) + s2;
  f.smoothing = zero_cell ? kZeroCellSmoothing : 0.0;
  return f;
}

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::kHigh: return "high";
    case Tier::kMid: return "mid";
    case Tier::kLow: return "low";
  }
  return "low";
}

std::map<std::string, Tier> assign_tiers(const std::map<std::string, std::size_t>& frequencies) {
  std::vector<std::pair<std::string, std::size_t>> ranked(frequencies.begin(), frequencies.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t n = ranked.size();
  const std::size_t high_end = (n + 2) / 3;
  const std::size_t mid_end = (2 * n + 2) / 3;
  auto tier_at = [&](std::size_t pos) {
    if (pos < high_end) return Tier::kHigh;
    if (pos < mid_end) return Tier::kMid;
    return Tier::kLow;
  };

  std::map<std::string, Tier> tiers;
  std::size_t first_of_run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && ranked[i].second != ranked[i - 1].second) first_of_run = i;
    tiers[ranked[i].first] = tier_at(first_of_run);
  }
  return tiers;
}

void RankConfig::validate() const {
  if (!(quantile >= 0.0 && quantile <= 1.0)) throw InputError("quantile must lie in [0, 1]");
  if (k == 0) throw InputError("k must be at least 1");
}

double linear_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

GenderTopicReport rank_gendered_topics(const TopicProfile& profile_a, const TopicProfile& profile_b,
                                       const RankConfig& cfg) {
  cfg.validate();
  if (profile_a.total_messages == 0 || profile_b.total_messages == 0) {
    throw DegenerateDataError("cannot compare topics: a message group is empty");
  }

  std::set<std::string> candidates;
  for (const auto& [t, _] : profile_a.message_count) candidates.insert(t);
  for (const auto& [t, _] : profile_b.message_count) candidates.insert(t);
  if (candidates.empty()) throw DegenerateDataError("no topic survived filtering in either group");

  std::vector<double> combined;
  combined.reserve(candidates.size());
  for (const auto& t : candidates) {
    combined.push_back(static_cast<double>(profile_a.messages_with(t) + profile_b.messages_with(t)));
  }
  const double cutoff = linear_quantile(combined, cfg.quantile);

  const auto tiers_a = assign_tiers(profile_a.message_count);
  const auto tiers_b = assign_tiers(profile_b.message_count);
  auto tier_or_low = [](const std::map<std::string, Tier>& tiers, const std::string& t) {
    auto it = tiers.find(t);
    return it == tiers.end() ? Tier::kLow : it->second;
  };

  GenderTopicReport report;
  report.rank_config = cfg;
  report.messages_a = profile_a.total_messages;
  report.messages_b = profile_b.total_messages;
  for (const auto& t : candidates) {
    const std::size_t a = profile_a.messages_with(t);
    const std::size_t b = profile_b.messages_with(t);
    if (static_cast<double>(a + b) < cutoff) continue;
    TopicOddsRecord rec;
    rec.topic = t;
    rec.odds = topic_odds(a, profile_a.total_messages, b, profile_b.total_messages);
    rec.or_value = rec.odds.value();
    rec.smoothing = rec.odds.smoothing;
    rec.count_a = a;
    rec.count_b = b;
    rec.tier_a = tier_or_low(tiers_a, t);
    rec.tier_b = tier_or_low(tiers_b, t);
    report.surviving.push_back(std::move(rec));
  }

  std::vector<TopicOddsRecord> ascending = report.surviving;
  std::stable_sort(ascending.begin(), ascending.end(),
                   [](const TopicOddsRecord& x, const TopicOddsRecord& y) { return x.odds < y.odds; });
  std::vector<TopicOddsRecord> descending = report.surviving;
  std::stable_sort(descending.begin(), descending.end(),
                   [](const TopicOddsRecord& x, const TopicOddsRecord& y) { return y.odds < x.odds; });

  // Both sides select from the full survivor list with name-ordered ties, so a
  // group swap exchanges the lists exactly. They can only share a topic when
  // ORs tie across the middle of the ranking.
  const std::size_t per_side = std::min(cfg.k, ascending.size() / 2);
  report.feminine_topics.assign(ascending.begin(), ascending.begin() + static_cast<std::ptrdiff_t>(per_side));
  report.masculine_topics.assign(descending.begin(), descending.begin() + static_cast<std::ptrdiff_t>(per_side));

  if (per_side < cfg.k) {
    report.short_lists = true;
    report.warnings.push_back("only " + std::to_string(report.surviving.size()) + " topics survived filtering; " +
                              std::to_string(per_side) + " per side instead of " + std::to_string(cfg.k));
  }
  if (per_side > 0) {
    const auto& masc = report.masculine_topics.front();
    const auto& fem = report.feminine_topics.front();
    report.gap = masc.odds == fem.odds ? 0.0 : std::max(0.0, std::log(masc.or_value / fem.or_value));
  }
  return report;
}

}  // namespace greeta
