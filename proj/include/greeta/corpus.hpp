#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace greeta {

enum class Scenario { kBirthday, kValentine, kWedding, kOther };
enum class RecipientGender { kFemale, kMale, kNeutral, kMixed };
enum class AgeGroup { kAll, kBaby, kParent, kGrandparent, kUnknown };
enum class Source { kTemplate, kGenerated, kSocial };

std::string_view to_string(Scenario s);
std::string_view to_string(RecipientGender g);
std::string_view to_string(AgeGroup a);
std::string_view to_string(Source s);

// Throw InputError on unknown names.
Scenario parse_scenario(std::string_view s);
RecipientGender parse_gender(std::string_view s);
AgeGroup parse_age_group(std::string_view s);
Source parse_source(std::string_view s);

inline constexpr std::array kAllScenarios{Scenario::kBirthday, Scenario::kValentine, Scenario::kWedding,
                                          Scenario::kOther};

struct GreetingMessage {
  std::string id;
  std::string text;
  Scenario scenario = Scenario::kOther;
  RecipientGender recipient_gender = RecipientGender::kNeutral;
  AgeGroup age_group = AgeGroup::kUnknown;
  Source source = Source::kTemplate;

  bool operator==(const GreetingMessage&) const = default;
};

// Recipient indicator word lists. The bundled defaults are the published
// general/parent/grandparent lists; all entries are lowercase single tokens.
struct IndicatorSets {
  std::vector<std::string> general_female;
  std::vector<std::string> general_male;
  std::vector<std::string> mother_variants;
  std::vector<std::string> father_variants;
  std::vector<std::string> grandmother_variants;
  std::vector<std::string> grandfather_variants;

  static const IndicatorSets& defaults();
  // JSON object with one string array per group name; missing groups keep
  // their default list.
  static IndicatorSets load(const std::filesystem::path& path);
  static IndicatorSets parse(std::istream& in);

  std::set<std::string> female_side() const;
  std::set<std::string> male_side() const;
  bool empty() const;

  // Throws InputError if an entry is not a lowercase single token or the two
  // sides overlap.
  void validate() const;
};

// Token-exact indicator matching after lowercasing and punctuation removal.
RecipientGender classify_gender(std::string_view text, const IndicatorSets& indicators);

// parent / grandparent when exactly one of those variant families matched,
// otherwise unknown.
AgeGroup infer_age_group(std::string_view text, const IndicatorSets& indicators);

using Corpus = std::vector<GreetingMessage>;

// Line-delimited JSON records. recipient_gender and age_group are optional and
// derived from the text when absent. Throws RecordError for bad records and
// InputError for duplicate ids.
Corpus load_corpus(const std::filesystem::path& path, const IndicatorSets& indicators = IndicatorSets::defaults());
Corpus parse_corpus(std::istream& in, const IndicatorSets& indicators = IndicatorSets::defaults());
void write_corpus(std::ostream& out, const Corpus& corpus);

// Message counts per scenario and recipient gender.
using CorpusSummary = std::map<Scenario, std::map<RecipientGender, std::size_t>>;
CorpusSummary summarize(const Corpus& corpus);

enum class PromptTemplate { kIndicator, kName, kBaby, kEndearment };
std::string_view to_string(PromptTemplate t);

struct PromptSpec {
  std::string scenario_prefix;
  std::string indicator_or_name;
  PromptTemplate template_kind = PromptTemplate::kIndicator;

  // "<prefix> <indicator>!", or "<prefix> my little baby girl|boy <name>!"
  // for the baby template.
  std::string render(RecipientGender gender) const;
};

struct Prompt {
  std::string text;
  RecipientGender gender = RecipientGender::kNeutral;
  AgeGroup age_group = AgeGroup::kAll;
  PromptTemplate template_kind = PromptTemplate::kIndicator;
  bool operator==(const Prompt&) const = default;
};

struct NamedRecipient {
  std::string name;
  RecipientGender gender = RecipientGender::kFemale;
};

using ScenarioPrefixes = std::map<Scenario, std::string>;
const ScenarioPrefixes& default_scenario_prefixes();

// One prompt per distinct indicator word, one per name, plus one baby prompt
// per name for birthday. Throws InputError if the scenario has no prefix.
std::vector<Prompt> build_prompts(Scenario scenario, const IndicatorSets& indicators,
                                  const std::vector<NamedRecipient>& names,
                                  const ScenarioPrefixes& prefixes = default_scenario_prefixes());

}  // namespace greeta
