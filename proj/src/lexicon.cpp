#include "greeta/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "greeta/error.hpp"

namespace greeta {

namespace {

bool is_token_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

const std::set<std::string> kNoTopics;
const TopicLexicon::KeywordSet kNoKeywords;

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_token_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    tokens.push_back({lowercase(text.substr(start, i - start)), {start, i}});
  }
  return tokens;
}

TopicLexicon::TopicLexicon(std::map<std::string, KeywordSet> entries) {
  for (auto& [topic, keywords] : entries) {
    KeywordSet folded;
    for (const auto& k : keywords) {
      if (!k.empty()) folded.insert(lowercase(k));
    }
    if (topic.empty()) throw InputError("lexicon: empty topic name");
    if (folded.empty()) throw InputError("lexicon: topic '" + topic + "' has no keywords");
    for (const auto& k : folded) inverted_[k].insert(topic);
    entries_.emplace(topic, std::move(folded));
  }
}

TopicLexicon TopicLexicon::parse(std::istream& in) {
  std::map<std::string, KeywordSet> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream fs(line);
    std::string field;
    while (std::getline(fs, field, '\t')) fields.push_back(field);
    const std::string& topic = fields.front();
    if (topic.empty()) throw RecordError(line_no, "missing topic name");
    KeywordSet& keywords = entries[topic];
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string& kw = fields[i];
      if (kw.empty() || kw.find(' ') != std::string::npos) continue;
      keywords.insert(kw);
    }
    if (keywords.empty()) throw RecordError(line_no, "topic '" + topic + "' has no keywords");
  }
  return TopicLexicon(std::move(entries));
}

TopicLexicon TopicLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon file: " + path.string());
  return parse(in);
}

const std::set<std::string>& TopicLexicon::topics_of(const std::string& keyword) const {
  auto it = inverted_.find(keyword);
  return it == inverted_.end() ? kNoTopics : it->second;
}

const TopicLexicon::KeywordSet& TopicLexicon::keywords_of(const std::string& topic) const {
  auto it = entries_.find(topic);
  return it == entries_.end() ? kNoKeywords : it->second;
}

std::size_t TopicProfile::unique_keywords(const std::string& topic) const {
  auto it = keyword_counts.find(topic);
  return it == keyword_counts.end() ? 0 : it->second.size();
}

std::size_t TopicProfile::messages_with(const std::string& topic) const {
  auto it = message_count.find(topic);
  return it == message_count.end() ? 0 : it->second;
}

TopicProfile& TopicProfile::operator+=(const TopicProfile& other) {
  for (const auto& [t, c] : other.topic_counts) topic_counts[t] += c;
  for (const auto& [t, kws] : other.keyword_counts) {
    auto& mine = keyword_counts[t];
    for (const auto& [k, c] : kws) mine[k] += c;
  }
  for (const auto& [t, c] : other.message_count) message_count[t] += c;
  total_messages += other.total_messages;
  return *this;
}

TopicProfile profile_text(std::string_view text, const TopicLexicon& lexicon) {
  TopicProfile p;
  p.total_messages = 1;
  for (const auto& tok : tokenize(text)) {
    for (const auto& topic : lexicon.topics_of(tok.text)) {
      ++p.topic_counts[topic];
      ++p.keyword_counts[topic][tok.text];
    }
  }
  for (const auto& [topic, _] : p.topic_counts) p.message_count[topic] = 1;
  return p;
}

TopicProfile profile_texts(const std::vector<std::string_view>& texts, const TopicLexicon& lexicon) {
  TopicProfile p;
  for (auto text : texts) p += profile_text(text, lexicon);
  return p;
}

void FilterConfig::validate() const {
  if (min_unique_keywords == 0) throw InputError("min_unique_keywords must be positive");
  if (!(min_avg_frequency > 0.0)) throw InputError("min_avg_frequency must be positive");
}

TopicProfile filter_topics(const TopicProfile& profile, const FilterConfig& cfg) {
  TopicProfile kept;
  kept.total_messages = profile.total_messages;
  for (const auto& [topic, count] : profile.topic_counts) {
    std::size_t unique = profile.unique_keywords(topic);
    if (unique <= cfg.min_unique_keywords) continue;
    double avg = static_cast<double>(count) / static_cast<double>(unique);
    if (!(avg > cfg.min_avg_frequency)) continue;
    kept.topic_counts[topic] = count;
    kept.keyword_counts[topic] = profile.keyword_counts.at(topic);
    kept.message_count[topic] = profile.messages_with(topic);
  }
  return kept;
}

std::vector<MessageTopic> match_topics(std::string_view text, const TopicLexicon& lexicon) {
  std::map<std::string, MessageTopic> by_topic;
  for (const auto& tok : tokenize(text)) {
    for (const auto& topic : lexicon.topics_of(tok.text)) {
      auto& entry = by_topic[topic];
      entry.topic = topic;
      ++entry.weight;
      entry.matches.push_back({tok.text, tok.span});
    }
  }
  std::vector<MessageTopic> out;
  out.reserve(by_topic.size());
  for (auto& [_, entry] : by_topic) out.push_back(std::move(entry));
  // by_topic iterates in name order, so a stable sort on weight breaks ties by name.
  std::stable_sort(out.begin(), out.end(),
                   [](const MessageTopic& a, const MessageTopic& b) { return a.weight > b.weight; });
  return out;
}

std::vector<MessageTopic> top_topics_for_message(std::string_view text, const TopicLexicon& lexicon,
                                                 std::size_t k) {
  if (k == 0) throw std::invalid_argument("top_topics_for_message: k must be at least 1");
  auto all = match_topics(text, lexicon);
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace greeta
