#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace greeta {

struct ByteSpan {
  std::size_t start = 0;
  std::size_t end = 0;  // one past the last byte
  bool operator==(const ByteSpan&) const = default;
};

struct Token {
  std::string text;  // lowercased
  ByteSpan span;     // into the original text
};

// Splits on ASCII whitespace and punctuation. ASCII letters are lowercased;
// bytes >= 0x80 are kept inside tokens so UTF-8 sequences are never cut.
std::vector<Token> tokenize(std::string_view text);

class TopicLexicon {
 public:
  using KeywordSet = std::set<std::string>;

  TopicLexicon() = default;
  // Keywords are lowercased. Throws InputError on an empty topic.
  explicit TopicLexicon(std::map<std::string, KeywordSet> entries);

  // Tab-separated: topic name, then its keywords. Multi-word keywords are
  // skipped.
  static TopicLexicon load(const std::filesystem::path& path);
  static TopicLexicon parse(std::istream& in);

  const std::map<std::string, KeywordSet>& entries() const { return entries_; }
  const std::map<std::string, std::set<std::string>>& inverted() const { return inverted_; }

  // Topics a keyword maps to; empty for unknown words.
  const std::set<std::string>& topics_of(const std::string& keyword) const;
  const KeywordSet& keywords_of(const std::string& topic) const;
  bool has_topic(const std::string& topic) const { return entries_.contains(topic); }
  std::size_t size() const { return entries_.size(); }
  std::size_t keyword_count() const { return inverted_.size(); }

 private:
  std::map<std::string, KeywordSet> entries_;
  std::map<std::string, std::set<std::string>> inverted_;
};

// Aggregated topic occurrences over a set of messages.
struct TopicProfile {
  std::map<std::string, std::size_t> topic_counts;
  std::map<std::string, std::map<std::string, std::size_t>> keyword_counts;
  std::map<std::string, std::size_t> message_count;
  std::size_t total_messages = 0;

  std::size_t unique_keywords(const std::string& topic) const;
  std::size_t messages_with(const std::string& topic) const;
  bool contains(const std::string& topic) const { return topic_counts.contains(topic); }

  // Element-wise sum.
  TopicProfile& operator+=(const TopicProfile& other);
  bool operator==(const TopicProfile&) const = default;
};

TopicProfile profile_text(std::string_view text, const TopicLexicon& lexicon);
TopicProfile profile_texts(const std::vector<std::string_view>& texts, const TopicLexicon& lexicon);

// Thresholds of the diversity/frequency topic filter.
struct FilterConfig {
  std::size_t min_unique_keywords = 5;
  double min_avg_frequency = 3.0;

  // Throws InputError unless both are strictly positive.
  void validate() const;
};

// Keeps topic t iff unique(t) > min_unique_keywords and
// topic_counts[t] / unique(t) > min_avg_frequency.
TopicProfile filter_topics(const TopicProfile& profile, const FilterConfig& cfg);

struct KeywordMatch {
  std::string keyword;
  ByteSpan span;
};

struct MessageTopic {
  std::string topic;
  std::size_t weight = 0;  // keyword occurrences in the message
  std::vector<KeywordMatch> matches;
};

// Every matched topic, sorted by weight descending, then by name.
std::vector<MessageTopic> match_topics(std::string_view text, const TopicLexicon& lexicon);

// The first k entries of match_topics. Throws std::invalid_argument if k == 0.
std::vector<MessageTopic> top_topics_for_message(std::string_view text, const TopicLexicon& lexicon,
                                                 std::size_t k);

}  // namespace greeta
