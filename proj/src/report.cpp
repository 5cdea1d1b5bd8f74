#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "greeta/genderstats.hpp"

namespace greeta {

namespace {

using ojson = nlohmann::ordered_json;

ojson record_json(const TopicOddsRecord& r) {
  ojson j;
  j["topic"] = r.topic;
  j["or"] = r.or_value;
  j["smoothing"] = r.smoothing;
  j["count_a"] = r.count_a;
  j["count_b"] = r.count_b;
  j["tier_a"] = to_string(r.tier_a);
  j["tier_b"] = to_string(r.tier_b);
  return j;
}

ojson records_json(const std::vector<TopicOddsRecord>& records) {
  ojson arr = ojson::array();
  for (const auto& r : records) arr.push_back(record_json(r));
  return arr;
}

std::string_view tier_marker(Tier t) {
  switch (t) {
    case Tier::kHigh: return "●";
    case Tier::kMid: return "◐";
    case Tier::kLow: return "○";
  }
  return "○";
}

std::string topic_cell(const std::vector<TopicOddsRecord>& records, bool use_tier_a) {
  std::string out;
  for (const auto& r : records) {
    if (!out.empty()) out += ", ";
    out += tier_marker(use_tier_a ? r.tier_a : r.tier_b);
    out += ' ';
    out += r.topic;
  }
  return out.empty() ? "-" : out;
}

}  // namespace

std::string report_to_json(const std::vector<GenderTopicReport>& reports) {
  ojson doc;
  doc["reports"] = ojson::array();
  for (const auto& r : reports) {
    ojson j;
    j["scenario"] = r.scenario;
    j["group_label"] = r.group_label;
    j["group_a"] = r.group_a;
    j["group_b"] = r.group_b;
    j["messages_a"] = r.messages_a;
    j["messages_b"] = r.messages_b;
    j["feminine_topics"] = records_json(r.feminine_topics);
    j["masculine_topics"] = records_json(r.masculine_topics);
    j["gap"] = r.gap;
    j["short_lists"] = r.short_lists;
    j["warnings"] = r.warnings;
    j["surviving_topics"] = records_json(r.surviving);
    j["config"] = {
        {"k", r.rank_config.k},
        {"quantile", r.rank_config.quantile},
        {"min_unique_keywords", r.filter_config.min_unique_keywords},
        {"min_avg_frequency", r.filter_config.min_avg_frequency},
    };
    doc["reports"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string report_to_table(const std::vector<GenderTopicReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    out << "scenario: " << r.scenario << "  (" << r.group_a << " n=" << r.messages_a << ", " << r.group_b
        << " n=" << r.messages_b << ")\n";
    out << "  Group       | " << r.group_a << "-leaning topics | " << r.group_b << "-leaning topics | Gap\n";
    out << "  " << std::left << std::setw(11) << r.group_label << " | " << topic_cell(r.feminine_topics, true)
        << " | " << topic_cell(r.masculine_topics, false) << " | " << std::fixed << std::setprecision(2) << r.gap
        << "\n";
    for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
    out.unsetf(std::ios::floatfield);
  }
  out << "tiers: ● top third, ◐ middle third, ○ bottom third of within-group topic frequency\n";
  return out.str();
}

}  // namespace greeta
