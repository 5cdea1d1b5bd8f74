#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "greeta/corpus.hpp"
#include "greeta/lexicon.hpp"
#include "greeta/scorer.hpp"

namespace greeta {

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

struct ServiceOptions {
  std::size_t max_text_chars = 10000;
  std::size_t default_explore_n = 5;
  std::size_t examples_per_topic = 3;
  std::optional<std::filesystem::path> ui_dir;
  std::optional<std::filesystem::path> snapshot_path;
};

// Receives one line per request: method, path, status, body size. Request
// bodies are never passed to it.
using LogSink = std::function<void(std::string_view)>;

// GreetA backend: per-message analysis, topic exploration over a reference
// corpus, health. All shared state is immutable except the snapshot pointer,
// which is swapped whole.
class GreetaService {
 public:
  GreetaService(TopicLexicon lexicon, std::optional<GenderStatsSnapshot> snapshot,
                std::optional<Corpus> reference_corpus, ServiceOptions options = {}, LogSink log = {});
  ~GreetaService();

  GreetaService(const GreetaService&) = delete;
  GreetaService& operator=(const GreetaService&) = delete;

  // POST /api/analyze with {"text": "..."}.
  HttpReply analyze(std::string_view body) const;
  // GET /api/explore?n=&seed=. A missing seed draws a fresh one.
  HttpReply explore(std::optional<std::string> n, std::optional<std::string> seed) const;
  // GET /api/health
  HttpReply health() const;

  void replace_snapshot(GenderStatsSnapshot snapshot);
  // Re-reads options.snapshot_path. Throws InputError when unset or unreadable.
  void reload_snapshot();
  std::shared_ptr<const GenderStatsSnapshot> snapshot() const;

  // Binds to host:port (0 picks a free port) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool serve();
  void stop();
  // Blocks until the server accepts connections.
  void wait_until_ready() const;

 private:
  struct Server;

  void log(std::string_view line) const;

  TopicLexicon lexicon_;
  std::optional<Corpus> reference_;
  // topic -> indices of reference messages containing one of its keywords
  std::map<std::string, std::vector<std::size_t>> topic_examples_;
  ServiceOptions options_;
  LogSink log_;

  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const GenderStatsSnapshot> snapshot_;

  std::unique_ptr<Server> server_;
};

// Number of UTF-8 code points, or nullopt if the bytes are not valid UTF-8.
std::optional<std::size_t> utf8_length(std::string_view s);

}  // namespace greeta
