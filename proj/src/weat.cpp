#include "greeta/weat.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "greeta/error.hpp"

namespace greeta {

namespace {

std::string fold(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(c < 0x80 ? std::tolower(c) : c); });
  return s;
}

bool parse_double(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool is_count(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Removes duplicates and words missing from the store; missing words go to
// `dropped`.
std::vector<std::string> known_words(const std::vector<std::string>& words, const EmbeddingStore& store,
                                     std::vector<std::string>& dropped) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& raw : words) {
    std::string w = fold(raw);
    if (!seen.insert(w).second) continue;
    if (store.contains(w)) {
      out.push_back(w);
    } else {
      dropped.push_back(w);
    }
  }
  return out;
}

double mean_cosine(const std::vector<double>& v, const std::vector<std::string>& words, const EmbeddingStore& store) {
  double sum = 0.0;
  for (const auto& w : words) sum += cosine(v, *store.find(w));
  return sum / static_cast<double>(words.size());
}

}  // namespace

void EmbeddingStore::add(const std::string& word, std::vector<double> vec) {
  if (dimension_ == 0) dimension_ = vec.size();
  if (vec.size() != dimension_ || dimension_ == 0) {
    throw std::invalid_argument("embedding for '" + word + "' has " + std::to_string(vec.size()) +
                                " components, expected " + std::to_string(dimension_));
  }
  vectors_.try_emplace(fold(word), std::move(vec));
}

const std::vector<double>* EmbeddingStore::find(const std::string& word) const {
  auto it = vectors_.find(fold(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingStore EmbeddingStore::parse(std::istream& in, const std::optional<std::set<std::string>>& vocab_filter) {
  std::optional<std::set<std::string>> filter;
  if (vocab_filter) {
    filter.emplace();
    for (const auto& w : *vocab_filter) filter->insert(fold(w));
  }

  EmbeddingStore store;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  bool any_vector = false;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    ++line_no;
    fields.clear();
    std::istringstream ls(line);
    for (std::string f; ls >> f;) fields.push_back(std::move(f));
    if (fields.empty()) continue;

    if (first_content_line) {
      first_content_line = false;
      if (fields.size() == 2 && is_count(fields[0]) && is_count(fields[1])) {
        store.dimension_ = std::stoul(fields[1]);
        continue;
      }
    }
    if (fields.size() < 2) {
      store.skipped_.push_back({line_no, "no vector components"});
      continue;
    }
    const std::size_t dim = fields.size() - 1;
    if (store.dimension_ == 0) store.dimension_ = dim;
    if (dim != store.dimension_) {
      store.skipped_.push_back({line_no, "expected " + std::to_string(store.dimension_) + " components, found " +
                                             std::to_string(dim)});
      continue;
    }
    std::vector<double> vec(dim);
    bool ok = true;
    for (std::size_t i = 0; i < dim && ok; ++i) ok = parse_double(fields[i + 1], vec[i]);
    if (!ok) {
      store.skipped_.push_back({line_no, "non-numeric component"});
      continue;
    }
    std::string word = fold(fields[0]);
    if (filter && !filter->contains(word)) {
      any_vector = true;
      continue;
    }
    any_vector = true;
    store.vectors_.try_emplace(std::move(word), std::move(vec));
  }
  if (!any_vector) throw InputError("embedding file yielded no usable vectors");
  return store;
}

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& path,
                                    const std::optional<std::set<std::string>>& vocab_filter) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embedding file: " + path.string());
  return parse(in, vocab_filter);
}

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

double association(const std::string& word, const std::vector<std::string>& attrs_a,
                   const std::vector<std::string>& attrs_b, const EmbeddingStore& store) {
  const auto* v = store.find(word);
  if (v == nullptr) throw OovError(fold(word));
  std::vector<std::string> dropped;
  auto a = known_words(attrs_a, store, dropped);
  auto b = known_words(attrs_b, store, dropped);
  if (a.empty() || b.empty()) throw DegenerateDataError("attribute set has no in-vocabulary word");
  return mean_cosine(*v, a, store) - mean_cosine(*v, b, store);
}

WeatResult weat_effect_size(const WeatInput& input, const EmbeddingStore& store) {
  WeatResult result;
  auto x = known_words(input.targets_x, store, result.dropped_oov);
  auto y = known_words(input.targets_y, store, result.dropped_oov);
  auto a = known_words(input.attributes_a, store, result.dropped_oov);
  auto b = known_words(input.attributes_b, store, result.dropped_oov);
  if (input.disjoint_targets) {
    std::set<std::string> ys(y.begin(), y.end());
    std::set<std::string> shared;
    for (const auto& w : x) {
      if (ys.contains(w)) shared.insert(w);
    }
    std::erase_if(x, [&](const std::string& w) { return shared.contains(w); });
    std::erase_if(y, [&](const std::string& w) { return shared.contains(w); });
  }
  if (x.empty() || y.empty()) throw DegenerateDataError("a target set is empty after dropping unknown words");
  if (a.empty() || b.empty()) throw DegenerateDataError("an attribute set is empty after dropping unknown words");

  auto s = [&](const std::string& w) {
    const auto& v = *store.find(w);
    return mean_cosine(v, a, store) - mean_cosine(v, b, store);
  };
  double sum_x = 0.0, sum_y = 0.0;
  for (const auto& w : x) {
    result.associations.emplace_back(w, s(w));
    sum_x += result.associations.back().second;
  }
  for (const auto& w : y) {
    result.associations.emplace_back(w, s(w));
    sum_y += result.associations.back().second;
  }
  result.x_size = x.size();
  result.y_size = y.size();

  const double n = static_cast<double>(result.associations.size());
  const double mean_all = (sum_x + sum_y) / n;
  double var = 0.0;
  for (const auto& [_, v] : result.associations) var += (v - mean_all) * (v - mean_all);
  const double sd = std::sqrt(var / n);
  if (!(sd > 1e-15)) throw DegenerateDataError("target associations have zero spread");

  result.effect_size = (sum_x / static_cast<double>(x.size()) - sum_y / static_cast<double>(y.size())) / sd;
  return result;
}

double weat_p_value(const WeatResult& result, std::size_t permutations, std::uint64_t seed) {
  if (permutations == 0) throw std::invalid_argument("permutations must be positive");
  std::vector<double> values;
  values.reserve(result.associations.size());
  for (const auto& [_, v] : result.associations) values.push_back(v);
  auto statistic = [&](const std::vector<double>& vals) {
    double sx = std::accumulate(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(result.x_size), 0.0);
    double sy = std::accumulate(vals.begin() + static_cast<std::ptrdiff_t>(result.x_size), vals.end(), 0.0);
    return sx - sy;
  };
  const double observed = statistic(values);
  std::mt19937_64 rng(seed);
  std::size_t at_least = 0;
  for (std::size_t i = 0; i < permutations; ++i) {
    std::shuffle(values.begin(), values.end(), rng);
    if (statistic(values) >= observed - 1e-12) ++at_least;
  }
  return static_cast<double>(at_least + 1) / static_cast<double>(permutations + 1);
}

}  // namespace greeta
