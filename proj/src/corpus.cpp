#include "greeta/corpus.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "greeta/error.hpp"

namespace greeta {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<Enum, N>& values, const char* what) {
  for (Enum v : values) {
    if (to_string(v) == s) return v;
  }
  throw InputError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

std::string required_string(const nlohmann::json& rec, const char* field, std::size_t line) {
  auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) throw RecordError(line, std::string("missing field '") + field + "'");
  if (!it->is_string()) throw RecordError(line, std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const nlohmann::json& rec, const char* field, std::size_t line) {
  auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw RecordError(line, std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

template <typename F>
auto in_record(std::size_t line, F&& f) {
  try {
    return f();
  } catch (const RecordError&) {
    throw;
  } catch (const InputError& e) {
    throw RecordError(line, e.what());
  }
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::kBirthday: return "birthday";
    case Scenario::kValentine: return "valentine";
    case Scenario::kWedding: return "wedding";
    case Scenario::kOther: return "other";
  }
  return "other";
}

std::string_view to_string(RecipientGender g) {
  switch (g) {
    case RecipientGender::kFemale: return "female";
    case RecipientGender::kMale: return "male";
    case RecipientGender::kNeutral: return "neutral";
    case RecipientGender::kMixed: return "mixed";
  }
  return "neutral";
}

std::string_view to_string(AgeGroup a) {
  switch (a) {
    case AgeGroup::kAll: return "all";
    case AgeGroup::kBaby: return "baby";
    case AgeGroup::kParent: return "parent";
    case AgeGroup::kGrandparent: return "grandparent";
    case AgeGroup::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Source s) {
  switch (s) {
    case Source::kTemplate: return "template";
    case Source::kGenerated: return "generated";
    case Source::kSocial: return "social";
  }
  return "template";
}

Scenario parse_scenario(std::string_view s) { return parse_enum(s, kAllScenarios, "scenario"); }

RecipientGender parse_gender(std::string_view s) {
  static constexpr std::array values{RecipientGender::kFemale, RecipientGender::kMale, RecipientGender::kNeutral,
                                     RecipientGender::kMixed};
  return parse_enum(s, values, "recipient gender");
}

AgeGroup parse_age_group(std::string_view s) {
  static constexpr std::array values{AgeGroup::kAll, AgeGroup::kBaby, AgeGroup::kParent, AgeGroup::kGrandparent,
                                     AgeGroup::kUnknown};
  return parse_enum(s, values, "age group");
}

Source parse_source(std::string_view s) {
  static constexpr std::array values{Source::kTemplate, Source::kGenerated, Source::kSocial};
  return parse_enum(s, values, "source");
}

Corpus parse_corpus(std::istream& in, const IndicatorSets& indicators) {
  Corpus corpus;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw RecordError(line_no, "not a valid JSON record");
    }
    if (!rec.is_object()) throw RecordError(line_no, "record must be a JSON object");

    GreetingMessage msg;
    msg.id = required_string(rec, "id", line_no);
    msg.text = required_string(rec, "text", line_no);
    if (msg.id.empty()) throw RecordError(line_no, "empty id");
    if (blank(msg.text)) throw RecordError(line_no, "empty text");
    auto scenario = required_string(rec, "scenario", line_no);
    auto source = required_string(rec, "source", line_no);
    msg.scenario = in_record(line_no, [&] { return parse_scenario(scenario); });
    msg.source = in_record(line_no, [&] { return parse_source(source); });

    if (auto g = optional_string(rec, "recipient_gender", line_no)) {
      msg.recipient_gender = in_record(line_no, [&] { return parse_gender(*g); });
    } else {
      msg.recipient_gender = classify_gender(msg.text, indicators);
    }
    if (auto a = optional_string(rec, "age_group", line_no)) {
      msg.age_group = in_record(line_no, [&] { return parse_age_group(*a); });
    } else {
      msg.age_group = infer_age_group(msg.text, indicators);
    }

    if (!ids.insert(msg.id).second) throw InputError("duplicate message id '" + msg.id + "'");
    corpus.push_back(std::move(msg));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, const IndicatorSets& indicators) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus file: " + path.string());
  return parse_corpus(in, indicators);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& m : corpus) {
    nlohmann::ordered_json rec;
    rec["id"] = m.id;
    rec["text"] = m.text;
    rec["scenario"] = to_string(m.scenario);
    rec["recipient_gender"] = to_string(m.recipient_gender);
    rec["age_group"] = to_string(m.age_group);
    rec["source"] = to_string(m.source);
    out << rec.dump() << '\n';
  }
}

CorpusSummary summarize(const Corpus& corpus) {
  CorpusSummary summary;
  for (const auto& m : corpus) ++summary[m.scenario][m.recipient_gender];
  return summary;
}

}  // namespace greeta
