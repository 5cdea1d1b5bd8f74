#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace greeta {

struct SkippedLine {
  std::size_t line = 0;
  std::string reason;
};

// Word vectors keyed by lowercased word.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dimension) : dimension_(dimension) {}

  // Whitespace-delimited `word v1 ... vD` lines. D comes from the first vector
  // line; a leading "<count> <dim>" header line is accepted. Malformed lines
  // are skipped and listed in skipped(). When a filter is given only those
  // words are kept; the result may then be empty. Throws InputError if the
  // file holds no well-formed vector line.
  static EmbeddingStore load(const std::filesystem::path& path,
                             const std::optional<std::set<std::string>>& vocab_filter = std::nullopt);
  static EmbeddingStore parse(std::istream& in,
                              const std::optional<std::set<std::string>>& vocab_filter = std::nullopt);

  // Throws std::invalid_argument on a dimension mismatch. The first vector
  // stored for a case-folded word wins.
  void add(const std::string& word, std::vector<double> vec);

  const std::vector<double>* find(const std::string& word) const;
  bool contains(const std::string& word) const { return find(word) != nullptr; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<SkippedLine>& skipped() const { return skipped_; }

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::vector<SkippedLine> skipped_;
};

double cosine(const std::vector<double>& u, const std::vector<double>& v);

// s(w, A, B) = mean_a cos(w, a) - mean_b cos(w, b), over in-vocabulary
// attribute words. Throws OovError if w is unknown and DegenerateDataError if
// an attribute set has no known word.
double association(const std::string& word, const std::vector<std::string>& attrs_a,
                   const std::vector<std::string>& attrs_b, const EmbeddingStore& store);

class OovError : public std::runtime_error {
 public:
  explicit OovError(const std::string& word) : std::runtime_error("out of vocabulary: " + word), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

struct WeatInput {
  std::vector<std::string> targets_x;
  std::vector<std::string> targets_y;
  std::vector<std::string> attributes_a;
  std::vector<std::string> attributes_b;
  // Remove words shared by X and Y from both before scoring.
  bool disjoint_targets = false;
};

struct WeatResult {
  double effect_size = 0.0;
  // X words first, then Y words, in input order after OOV removal.
  std::vector<std::pair<std::string, double>> associations;
  std::vector<std::string> dropped_oov;
  std::size_t x_size = 0;
  std::size_t y_size = 0;
};

// d = (mean_X s - mean_Y s) / pstdev_{X ++ Y} s. Positive when X sits closer
// to A than Y does. Throws DegenerateDataError when a set is empty after OOV
// removal or the associations have zero spread.
WeatResult weat_effect_size(const WeatInput& input, const EmbeddingStore& store);

// One-sided permutation p-value of the test statistic
// sum_X s - sum_Y s over random equal-size re-partitions of X ++ Y.
double weat_p_value(const WeatResult& result, std::size_t permutations, std::uint64_t seed);

}  // namespace greeta
