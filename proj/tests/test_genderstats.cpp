#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "greeta/error.hpp"
#include "greeta/genderstats.hpp"
#include "oracle.hpp"

using namespace greeta;

namespace {

TopicProfile profile_of(const std::vector<std::string>& msgs, const TopicLexicon& lex, const FilterConfig& f) {
  std::vector<std::string_view> views(msgs.begin(), msgs.end());
  return filter_topics(profile_texts(views, lex), f);
}

std::vector<std::string> names(const std::vector<TopicOddsRecord>& recs) {
  std::vector<std::string> out;
  for (const auto& r : recs) out.push_back(r.topic);
  return out;
}

// Profile holding only per-topic message counts, which is all ranking reads.
TopicProfile counts_profile(std::size_t total, const std::map<std::string, std::size_t>& counts) {
  TopicProfile p;
  p.total_messages = total;
  for (const auto& [t, c] : counts) {
    p.message_count[t] = c;
    p.topic_counts[t] = c;
    p.keyword_counts[t][t] = c;
  }
  return p;
}

}  // namespace

TEST_CASE("odds ratio hand cases") {
  CHECK(odds_ratio(4, 10, 4, 10, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(odds_ratio(4, 10, 2, 10, 0.0) == doctest::Approx(0.375).epsilon(1e-9));
  CHECK(std::abs(odds_ratio(3, 10, 0, 10, 0.5) - (0.5 / 10.5) / (3.5 / 7.5)) < 1e-12);
  CHECK(std::abs(odds_ratio(3, 10, 0, 10, 0.5) - 0.10204) < 1e-5);

  // The automatic correction only kicks in with a zero cell.
  CHECK(topic_odds(4, 10, 2, 10).smoothing == 0.0);
  CHECK(topic_odds(4, 10, 2, 10).value() == doctest::Approx(0.375));
  CHECK(topic_odds(3, 10, 0, 10).smoothing == kZeroCellSmoothing);
  CHECK(std::abs(topic_odds(3, 10, 0, 10).value() - 0.10204) < 1e-5);
  CHECK(topic_odds(10, 10, 3, 10).smoothing == kZeroCellSmoothing);

  CHECK_THROWS_AS(odds_ratio(0, 0, 1, 10, 0.5), DegenerateDataError);
  CHECK_THROWS_AS(odds_ratio(1, 10, 0, 0, 0.5), DegenerateDataError);
  CHECK_THROWS_AS(odds_ratio(11, 10, 0, 10, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(odds_ratio(1, 10, 1, 10, -1.0), std::invalid_argument);
}

TEST_CASE("swapping groups gives the reciprocal odds ratio") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::size_t> n_d(1, 500);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t na = n_d(rng), nb = n_d(rng);
    const std::size_t a = std::uniform_int_distribution<std::size_t>(0, na)(rng);
    const std::size_t b = std::uniform_int_distribution<std::size_t>(0, nb)(rng);
    const double fwd = topic_odds(a, na, b, nb).value();
    const double rev = topic_odds(b, nb, a, na).value();
    CHECK(std::abs(fwd * rev - 1.0) < 1e-12);
    CHECK(std::abs(odds_ratio(a, na, b, nb, 0.5) * odds_ratio(b, nb, a, na, 0.5) - 1.0) < 1e-12);
    CHECK(std::abs(fwd - oracle::odds_value(long(a), long(na), long(b), long(nb))) < 1e-12 * fwd);
  }
}

TEST_CASE("exact odds comparison") {
  CHECK(topic_odds(4, 10, 4, 10) == topic_odds(1, 7, 3, 21));
  CHECK(topic_odds(4, 10, 2, 10) < topic_odds(4, 10, 4, 10));
  CHECK_FALSE(topic_odds(4, 10, 4, 10) < topic_odds(4, 10, 2, 10));
}

TEST_CASE("tier examples") {
  auto t = assign_tiers({{"a", 10}, {"b", 5}, {"c", 1}});
  CHECK(t["a"] == Tier::kHigh);
  CHECK(t["b"] == Tier::kMid);
  CHECK(t["c"] == Tier::kLow);

  auto eq = assign_tiers({{"a", 3}, {"b", 3}, {"c", 3}, {"d", 3}});
  for (const auto& [_, tier] : eq) CHECK(tier == Tier::kHigh);

  CHECK(assign_tiers({}).empty());
  CHECK(assign_tiers({{"solo", 1}}).at("solo") == Tier::kHigh);
}

TEST_CASE("tiers of distinct counts match a sort oracle") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> pool(40);
    std::iota(pool.begin(), pool.end(), 1);
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 12);
    std::map<std::string, std::size_t> freq;
    for (std::size_t i = 0; i < n; ++i) freq["t" + std::to_string(i)] = pool[i];

    std::vector<std::pair<std::size_t, std::string>> sorted;
    for (const auto& [k, v] : freq) sorted.emplace_back(v, k);
    std::sort(sorted.rbegin(), sorted.rend());
    const auto hi = static_cast<std::size_t>(std::ceil(n / 3.0));
    const auto mid = static_cast<std::size_t>(std::ceil(2.0 * n / 3.0));

    auto tiers = assign_tiers(freq);
    for (std::size_t i = 0; i < n; ++i) {
      Tier want = i < hi ? Tier::kHigh : i < mid ? Tier::kMid : Tier::kLow;
      CHECK(tiers.at(sorted[i].second) == want);
    }
    if (n == 6) {
      std::map<Tier, int> per;
      for (const auto& [_, tier] : tiers) ++per[tier];
      CHECK(per[Tier::kHigh] == 2);
      CHECK(per[Tier::kMid] == 2);
      CHECK(per[Tier::kLow] == 2);
    }
  }
}

TEST_CASE("two-topic corpus splits cleanly") {
  TopicLexicon lex({{"flowers", {"rose", "tulip", "lily"}}, {"tools", {"hammer", "drill", "saw"}}});
  const std::vector<std::string> a = {"a rose for you",  "tulip and lily",   "rose rose", "just a card",
                                      "lily of the day", "a tulip in bloom", "hello",     "rose and lily"};
  const std::vector<std::string> b = {"hammer time", "drill and saw", "a saw", "hello there",
                                      "hammer on",   "drill it",      "thanks", "saw and hammer"};
  const FilterConfig f{1, 1.0};
  auto report = rank_gendered_topics(profile_of(a, lex, f), profile_of(b, lex, f), {0.3, 5});
  CHECK(names(report.feminine_topics) == std::vector<std::string>{"flowers"});
  CHECK(names(report.masculine_topics) == std::vector<std::string>{"tools"});
  CHECK(report.short_lists);
  CHECK(report.gap > 0.0);
  const double or_f = oracle::odds_value(6, 8, 0, 8);
  const double or_m = oracle::odds_value(0, 8, 6, 8);
  CHECK(report.gap == doctest::Approx(std::log(or_m / or_f)).epsilon(1e-12));
}

TEST_CASE("identical groups give unit odds and zero gap") {
  auto p = counts_profile(20, {{"x", 5}, {"y", 8}, {"z", 12}, {"w", 3}});
  auto report = rank_gendered_topics(p, p, {0.0, 5});
  for (const auto& r : report.surviving) CHECK(r.or_value == 1.0);
  CHECK(report.gap == 0.0);
  CHECK(report.feminine_topics.size() == report.masculine_topics.size());
}

TEST_CASE("empty groups and empty candidate sets are degenerate") {
  auto p = counts_profile(10, {{"x", 3}});
  CHECK_THROWS_AS(rank_gendered_topics(counts_profile(0, {}), p), DegenerateDataError);
  CHECK_THROWS_AS(rank_gendered_topics(counts_profile(5, {}), counts_profile(5, {})), DegenerateDataError);
  CHECK_THROWS_AS(rank_gendered_topics(p, p, {1.5, 5}), InputError);
  CHECK_THROWS_AS(rank_gendered_topics(p, p, {0.3, 0}), InputError);
}

TEST_CASE("quantile cutoff uses linear interpolation over combined counts") {
  CHECK(linear_quantile({1, 2, 3, 4, 5}, 0.3) == doctest::Approx(2.2));
  CHECK(linear_quantile({7}, 0.3) == 7.0);
  CHECK(linear_quantile({4, 1}, 0.0) == 1.0);

  // combined counts 2, 4, 6, 8, 10 -> cutoff 4.4, so a and b drop out
  auto pa = counts_profile(20, {{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}, {"e", 5}});
  auto pb = counts_profile(20, {{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}, {"e", 5}});
  auto report = rank_gendered_topics(pa, pb, {0.3, 5});
  CHECK(names(report.surviving) == std::vector<std::string>{"c", "d", "e"});
  CHECK(report.feminine_topics.size() == 1);
}

TEST_CASE("group swap reciprocates ORs, swaps lists, keeps gap") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto rc = oracle::random_corpus(rng);
    TopicLexicon lex(rc.lexicon);
    const FilterConfig f{1, 1.0};
    auto pa = profile_of(rc.group_a, lex, f);
    auto pb = profile_of(rc.group_b, lex, f);
    if (pa.topic_counts.empty() && pb.topic_counts.empty()) continue;
    auto fwd = rank_gendered_topics(pa, pb);
    auto rev = rank_gendered_topics(pb, pa);
    CHECK(names(fwd.feminine_topics) == names(rev.masculine_topics));
    CHECK(names(fwd.masculine_topics) == names(rev.feminine_topics));
    CHECK(std::abs(fwd.gap - rev.gap) < 1e-12);
    REQUIRE(fwd.surviving.size() == rev.surviving.size());
    for (std::size_t i = 0; i < fwd.surviving.size(); ++i) {
      CHECK(std::abs(fwd.surviving[i].or_value * rev.surviving[i].or_value - 1.0) < 1e-12);
      CHECK(fwd.surviving[i].tier_a == rev.surviving[i].tier_b);
    }
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("duplicating every message keeps unsmoothed ORs") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    auto rc = oracle::random_corpus(rng, 25);
    TopicLexicon lex(rc.lexicon);
    auto twice = [](std::vector<std::string> v) {
      auto copy = v;
      v.insert(v.end(), copy.begin(), copy.end());
      return v;
    };
    // Filter thresholds scale with duplication, so compare unfiltered profiles.
    const FilterConfig f{1, 0.5};
    auto pa = profile_of(rc.group_a, lex, f), pb = profile_of(rc.group_b, lex, f);
    if (pa.topic_counts.empty() && pb.topic_counts.empty()) continue;
    auto base = rank_gendered_topics(pa, pb);
    auto dup = rank_gendered_topics(profile_of(twice(rc.group_a), lex, f), profile_of(twice(rc.group_b), lex, f));
    REQUIRE(base.surviving.size() == dup.surviving.size());
    for (std::size_t i = 0; i < base.surviving.size(); ++i) {
      if (base.surviving[i].smoothing != 0.0) continue;
      CHECK(std::abs(base.surviving[i].or_value - dup.surviving[i].or_value) < 1e-12);
    }
  }
}

TEST_CASE("ranking equals a brute-force enumeration") {
  std::mt19937_64 rng(2024);
  const std::vector<FilterConfig> filters = {{1, 1.0}, {2, 1.2}, {1, 0.5}};
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto rc = oracle::random_corpus(rng);
    const auto& f = filters[static_cast<std::size_t>(trial) % filters.size()];
    const double q = (trial % 4) * 0.15;
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 6);
    TopicLexicon lex(rc.lexicon);
    auto pa = profile_of(rc.group_a, lex, f);
    auto pb = profile_of(rc.group_b, lex, f);
    auto want = oracle::rank(rc.group_a, rc.group_b, rc.lexicon, static_cast<long>(f.min_unique_keywords),
                             f.min_avg_frequency, q, k);
    if (want.surviving.empty()) {
      CHECK_THROWS_AS(rank_gendered_topics(pa, pb, {q, k}), DegenerateDataError);
      continue;
    }
    auto got = rank_gendered_topics(pa, pb, {q, k});
    CHECK(names(got.feminine_topics) == want.feminine);
    CHECK(names(got.masculine_topics) == want.masculine);
    REQUIRE(got.surviving.size() == want.surviving.size());
    for (const auto& r : got.surviving) {
      REQUIRE(want.surviving.contains(r.topic));
      CHECK(std::abs(r.or_value - want.surviving.at(r.topic)) <= 1e-12 * want.surviving.at(r.topic));
    }
    CHECK(std::abs(got.gap - want.gap) < 1e-12);
    CHECK(got.gap >= 0.0);
    if (!got.feminine_topics.empty()) {
      CHECK((got.gap == 0.0) == (got.feminine_topics[0].odds == got.masculine_topics[0].odds));
    }
    for (std::size_t i = 1; i < got.feminine_topics.size(); ++i) {
      CHECK(got.feminine_topics[i - 1].or_value <= got.feminine_topics[i].or_value);
      CHECK(got.masculine_topics[i - 1].or_value >= got.masculine_topics[i].or_value);
    }
    ++compared;
  }
  CHECK(compared > 200);
}

TEST_CASE("report renderings") {
  auto pa = counts_profile(10, {{"beauty", 6}, {"work", 1}, {"family", 3}});
  auto pb = counts_profile(10, {{"beauty", 1}, {"work", 6}, {"family", 3}});
  auto report = rank_gendered_topics(pa, pb, {0.0, 1});
  report.scenario = "birthday";
  report.group_label = "T-all";
  auto json = report_to_json({report});
  CHECK(json.find("\"feminine_topics\"") != std::string::npos);
  CHECK(json.find("\"beauty\"") != std::string::npos);
  CHECK(json.back() == '\n');
  auto table = report_to_table({report});
  CHECK(table.find("T-all") != std::string::npos);
  CHECK(table.find("work") != std::string::npos);
}
