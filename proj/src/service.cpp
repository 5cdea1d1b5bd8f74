#include "greeta/service.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>
#include <random>

#include <httplib.h>
#include <json.hpp>

#include "greeta/error.hpp"

namespace greeta {

namespace {

using ojson = nlohmann::ordered_json;

HttpReply error_reply(int status, std::string_view message) {
  return {status, ojson{{"error", message}}.dump()};
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// First `n` entries of a seeded partial Fisher-Yates shuffle.
template <typename T>
std::vector<T> sample(std::vector<T> items, std::size_t n, std::mt19937_64& rng) {
  n = std::min(n, items.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
    std::swap(items[i], items[pick(rng)]);
  }
  items.resize(n);
  return items;
}

}  // namespace

std::optional<std::size_t> utf8_length(std::string_view s) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      len = 1;
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return std::nullopt;
    }
    if (i + len > s.size()) return std::nullopt;
    for (std::size_t j = 1; j < len; ++j) {
      const auto cc = static_cast<unsigned char>(s[i + j]);
      if ((cc & 0xC0) != 0x80) return std::nullopt;
      cp = (cp << 6) | (cc & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
    i += len;
    ++count;
  }
  return count;
}

struct GreetaService::Server {
  httplib::Server http;
};

GreetaService::GreetaService(TopicLexicon lexicon, std::optional<GenderStatsSnapshot> snapshot,
                             std::optional<Corpus> reference_corpus, ServiceOptions options, LogSink log)
    : lexicon_(std::move(lexicon)),
      reference_(std::move(reference_corpus)),
      options_(std::move(options)),
      log_(std::move(log)) {
  if (snapshot) snapshot_ = std::make_shared<const GenderStatsSnapshot>(std::move(*snapshot));
  if (reference_) {
    for (std::size_t i = 0; i < reference_->size(); ++i) {
      for (const auto& t : match_topics((*reference_)[i].text, lexicon_)) topic_examples_[t.topic].push_back(i);
    }
  }
}

GreetaService::~GreetaService() { stop(); }

void GreetaService::log(std::string_view line) const {
  if (log_) {
    log_(line);
  } else {
    std::clog << line << '\n';
  }
}

std::shared_ptr<const GenderStatsSnapshot> GreetaService::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

void GreetaService::replace_snapshot(GenderStatsSnapshot snapshot) {
  auto next = std::make_shared<const GenderStatsSnapshot>(std::move(snapshot));
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(next);
}

void GreetaService::reload_snapshot() {
  if (!options_.snapshot_path) throw InputError("no snapshot path configured");
  replace_snapshot(GenderStatsSnapshot::load(*options_.snapshot_path));
}

HttpReply GreetaService::analyze(std::string_view body) const {
  std::string text;
  try {
    auto doc = nlohmann::json::parse(body);
    if (!doc.is_object() || !doc.contains("text") || !doc["text"].is_string()) {
      return error_reply(400, "expected a JSON object with a string field 'text'");
    }
    text = doc["text"].get<std::string>();
  } catch (const nlohmann::json::exception&) {
    // The parser's message quotes input bytes; keep it out of the reply.
    return error_reply(400, "request body is not valid JSON");
  }
  auto chars = utf8_length(text);
  if (!chars) return error_reply(400, "text is not valid UTF-8");
  if (*chars == 0 || text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return error_reply(400, "text is empty");
  }
  if (*chars > options_.max_text_chars) {
    return error_reply(400, "text exceeds " + std::to_string(options_.max_text_chars) + " characters");
  }

  static const GenderStatsSnapshot kEmpty{};
  auto snap = snapshot();
  return {200, analysis_to_json(score_message(text, lexicon_, snap ? *snap : kEmpty))};
}

HttpReply GreetaService::explore(std::optional<std::string> n_param, std::optional<std::string> seed_param) const {
  if (!reference_) return error_reply(503, "no reference corpus configured");

  std::size_t n = options_.default_explore_n;
  if (n_param) {
    auto v = parse_u64(*n_param);
    if (!v || *v == 0) return error_reply(400, "n must be a positive integer");
    n = static_cast<std::size_t>(*v);
  }
  std::uint64_t seed = 0;
  if (seed_param) {
    auto v = parse_u64(*seed_param);
    if (!v) return error_reply(400, "seed must be a non-negative integer");
    seed = *v;
  } else {
    seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
  }

  auto snap = snapshot();
  std::vector<std::string> population;
  for (const auto& [topic, _] : topic_examples_) {
    if (!snap || snap->topic_or.contains(topic)) population.push_back(topic);
  }

  std::mt19937_64 rng(seed);
  ojson topics = ojson::array();
  for (const auto& topic : sample(population, n, rng)) {
    const auto& keywords = lexicon_.keywords_of(topic);
    ojson examples = ojson::array();
    for (std::size_t idx : sample(topic_examples_.at(topic), options_.examples_per_topic, rng)) {
      const auto& msg = (*reference_)[idx];
      std::vector<std::string> matched;
      for (const auto& tok : tokenize(msg.text)) {
        if (keywords.contains(tok.text) && std::find(matched.begin(), matched.end(), tok.text) == matched.end()) {
          matched.push_back(tok.text);
        }
      }
      examples.push_back({{"id", msg.id}, {"text", msg.text}, {"keywords", matched}});
    }
    GenderAssoc assoc = snap ? gender_assoc_of(*snap, topic) : GenderAssoc::kNeutral;
    topics.push_back({{"topic", topic}, {"gender_assoc", to_string(assoc)}, {"examples", std::move(examples)}});
  }
  ojson out;
  out["seed"] = seed;
  out["topics"] = std::move(topics);
  return {200, out.dump()};
}

HttpReply GreetaService::health() const {
  auto snap = snapshot();
  ojson out;
  out["status"] = snap ? "ok" : "degraded";
  out["snapshot_version"] = snap ? ojson(snap->version) : ojson(nullptr);
  out["lexicon_size"] = lexicon_.size();
  out["reference_messages"] = reference_ ? reference_->size() : 0;
  return {200, out.dump()};
}

int GreetaService::bind(const std::string& host, int port) {
  if (!server_) {
    server_ = std::make_unique<Server>();
    auto& http = server_->http;

    auto reply = [](httplib::Response& res, const HttpReply& r) {
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    http.Post("/api/analyze", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, analyze(req.body));
    });
    http.Get("/api/explore", [this, reply](const httplib::Request& req, httplib::Response& res) {
      auto param = [&](const char* key) -> std::optional<std::string> {
        if (!req.has_param(key)) return std::nullopt;
        return req.get_param_value(key);
      };
      reply(res, explore(param("n"), param("seed")));
    });
    http.Get("/api/health", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, health()); });
    http.Post("/api/reload", [this, reply](const httplib::Request&, httplib::Response& res) {
      try {
        reload_snapshot();
        reply(res, health());
      } catch (const InputError& e) {
        reply(res, error_reply(400, e.what()));
      }
    });
    http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
    http.set_payload_max_length(1 << 20);
    http.set_exception_handler([reply](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
      reply(res, error_reply(500, "internal error"));
    });
    http.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
      log(req.method + " " + req.path + " " + std::to_string(res.status) + " " + std::to_string(req.body.size()) +
          "B");
    });
    if (options_.ui_dir) http.set_mount_point("/", options_.ui_dir->string());
  }
  if (port == 0) return server_->http.bind_to_any_port(host);
  return server_->http.bind_to_port(host, port) ? port : -1;
}

bool GreetaService::serve() {
  if (!server_) return false;
  return server_->http.listen_after_bind();
}

void GreetaService::stop() {
  if (server_) server_->http.stop();
}

void GreetaService::wait_until_ready() const {
  if (server_) server_->http.wait_until_ready();
}

}  // namespace greeta
