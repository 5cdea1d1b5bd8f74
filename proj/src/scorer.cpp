#include "greeta/scorer.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "greeta/error.hpp"

namespace greeta {

namespace {

using ojson = nlohmann::ordered_json;

double logistic(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace

void GenderStatsSnapshot::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InputError("snapshot tau must be positive");
  for (const auto& [topic, value] : topic_or) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw InputError("snapshot odds ratio for '" + topic + "' must be positive and finite");
    }
  }
}

std::string GenderStatsSnapshot::compute_version(double tau, const std::map<std::string, double>& topic_or) {
  ojson body;
  body["tau"] = tau;
  body["topic_or"] = ojson::object();
  for (const auto& [t, v] : topic_or) body["topic_or"][t] = v;
  // FNV-1a over the canonical serialization.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : body.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GenderStatsSnapshot GenderStatsSnapshot::from_report(const GenderTopicReport& report, double tau) {
  GenderStatsSnapshot snap;
  snap.tau = tau;
  for (const auto& rec : report.surviving) snap.topic_or[rec.topic] = rec.or_value;
  snap.validate();
  snap.version = compute_version(snap.tau, snap.topic_or);
  return snap;
}

std::string GenderStatsSnapshot::to_json() const {
  ojson j;
  j["version"] = version;
  j["tau"] = tau;
  j["topic_or"] = ojson::object();
  for (const auto& [t, v] : topic_or) j["topic_or"][t] = v;
  return j.dump(2) + "\n";
}

GenderStatsSnapshot GenderStatsSnapshot::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("snapshot is not valid JSON: ") + e.what());
  }
  GenderStatsSnapshot snap;
  try {
    snap.tau = j.at("tau").get<double>();
    for (const auto& [t, v] : j.at("topic_or").items()) snap.topic_or[t] = v.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed snapshot: ") + e.what());
  }
  snap.validate();
  if (j.contains("version") && j["version"].is_string()) {
    snap.version = j["version"].get<std::string>();
  } else {
    snap.version = compute_version(snap.tau, snap.topic_or);
  }
  return snap;
}

GenderStatsSnapshot GenderStatsSnapshot::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open snapshot file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string_view to_string(Band b) {
  switch (b) {
    case Band::kFeminine: return "feminine";
    case Band::kMasculine: return "masculine";
    case Band::kNeutral: return "neutral";
  }
  return "neutral";
}

std::string_view to_string(GenderAssoc g) {
  switch (g) {
    case GenderAssoc::kFeminine: return "feminine";
    case GenderAssoc::kMasculine: return "masculine";
    case GenderAssoc::kNeutral: return "neutral";
  }
  return "neutral";
}

Band band_of(double score) {
  if (!(score >= 0.0 && score <= 100.0)) throw std::out_of_range("score outside [0, 100]");
  if (score > 51.0) return Band::kFeminine;
  if (score < 49.0) return Band::kMasculine;
  return Band::kNeutral;
}

GenderAssoc gender_assoc_of(const GenderStatsSnapshot& stats, const std::string& topic) {
  auto it = stats.topic_or.find(topic);
  if (it == stats.topic_or.end()) return GenderAssoc::kNeutral;
  if (it->second < 1.0) return GenderAssoc::kFeminine;
  if (it->second > 1.0) return GenderAssoc::kMasculine;
  return GenderAssoc::kNeutral;
}

MessageAnalysis score_message(std::string_view text, const TopicLexicon& lexicon, const GenderStatsSnapshot& stats) {
  MessageAnalysis out;
  out.snapshot_version = stats.version;
  double raw = 0.0;
  for (auto& m : match_topics(text, lexicon)) {
    auto it = stats.topic_or.find(m.topic);
    if (it != stats.topic_or.end()) raw += static_cast<double>(m.weight) * -std::log(it->second);
    out.topics.push_back({m.topic, m.weight, gender_assoc_of(stats, m.topic), std::move(m.matches)});
  }
  out.raw = raw;
  out.feminine_fraction = logistic(raw / stats.tau);
  out.masculine_fraction = 1.0 - out.feminine_fraction;
  out.score = 100.0 * out.feminine_fraction;
  out.band = band_of(out.score);
  return out;
}

std::string analysis_to_json(const MessageAnalysis& a) {
  ojson j;
  j["score"] = a.score;
  j["band"] = to_string(a.band);
  j["raw"] = a.raw;
  j["fragments"] = {{"feminine", a.feminine_fraction}, {"masculine", a.masculine_fraction}};
  j["topics"] = ojson::array();
  for (const auto& t : a.topics) {
    ojson tj;
    tj["topic"] = t.topic;
    tj["weight"] = t.weight;
    tj["gender_assoc"] = to_string(t.gender_assoc);
    tj["matches"] = ojson::array();
    for (const auto& m : t.matches) {
      tj["matches"].push_back({{"keyword", m.keyword}, {"start", m.span.start}, {"end", m.span.end}});
    }
    j["topics"].push_back(std::move(tj));
  }
  j["snapshot_version"] = a.snapshot_version;
  return j.dump();
}

}  // namespace greeta
