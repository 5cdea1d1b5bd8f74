#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace greeta {

// Bad or unreadable input: files, records, configuration. CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A record-level problem inside a line-oriented file.
class RecordError : public InputError {
 public:
  RecordError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Data is readable but statistically unusable (empty group, zero variance,
// all words out of vocabulary). CLI exit code 2.
class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace greeta
