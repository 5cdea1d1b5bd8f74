#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "greeta/corpus.hpp"
#include "greeta/error.hpp"
#include "greeta/lexicon.hpp"

namespace greeta {

namespace {

bool contains(const std::vector<std::string>& words, const std::string& w) {
  return std::find(words.begin(), words.end(), w) != words.end();
}

bool any_token_in(const std::vector<Token>& tokens, const std::vector<std::string>& words) {
  return std::any_of(tokens.begin(), tokens.end(), [&](const Token& t) { return contains(words, t.text); });
}

AgeGroup age_of_indicator(const IndicatorSets& ind, const std::string& word) {
  if (contains(ind.mother_variants, word) || contains(ind.father_variants, word)) return AgeGroup::kParent;
  if (contains(ind.grandmother_variants, word) || contains(ind.grandfather_variants, word)) {
    return AgeGroup::kGrandparent;
  }
  return AgeGroup::kAll;
}

}  // namespace

const IndicatorSets& IndicatorSets::defaults() {
  static const IndicatorSets sets{
      .general_female = {"daughter", "hers", "lady", "grandma", "grandmother", "female", "aunt",
                         "wife", "sis", "niece", "mother", "she", "girl", "her", "granny",
                         "granddaughter", "girlfriend", "woman", "mom", "sister"},
      .general_male = {"dude", "godfather", "grandson", "stepbrother", "boy", "sir", "he", "uncle",
                       "man", "male", "soninlaw", "boyfriend", "brother", "grandpa", "him",
                       "nephew", "son", "papa", "exboyfriend", "granddad", "husband", "stepson",
                       "dad", "fatherinlaw", "daddy", "stepdad", "father", "grandfather", "bro",
                       "his"},
      .mother_variants = {"mother", "mom", "mama", "mommy", "mum", "mumsy", "mamacita", "ma", "mam",
                          "mammy"},
      .father_variants = {"father", "dad", "dada", "daddy", "baba", "papa", "pappa", "papasita", "pa",
                          "pap", "pop"},
      .grandmother_variants = {"grandmother", "grandma", "grandmom", "grandmama", "grama", "granny",
                               "gran", "nanny", "nan", "mammaw", "meemaw", "grammy"},
      .grandfather_variants = {"grandfather", "grandpa", "gramp", "gramps", "grampa", "grandpap",
                               "granda", "grampy", "granddad", "grandad", "granddaddy", "grandpappy",
                               "pop", "pap", "pappy", "pawpaw"},
  };
  return sets;
}

IndicatorSets IndicatorSets::parse(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("indicator file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("indicator file must be a JSON object");

  IndicatorSets sets = defaults();
  const std::pair<const char*, std::vector<std::string>*> groups[] = {
      {"general_female", &sets.general_female},
      {"general_male", &sets.general_male},
      {"mother_variants", &sets.mother_variants},
      {"father_variants", &sets.father_variants},
      {"grandmother_variants", &sets.grandmother_variants},
      {"grandfather_variants", &sets.grandfather_variants},
  };
  for (const auto& [name, target] : groups) {
    if (!doc.contains(name)) continue;
    const auto& arr = doc.at(name);
    if (!arr.is_array()) throw InputError(std::string("indicator group '") + name + "' must be an array");
    target->clear();
    for (const auto& w : arr) {
      if (!w.is_string()) throw InputError(std::string("indicator group '") + name + "' has a non-string entry");
      target->push_back(w.get<std::string>());
    }
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool known = std::any_of(std::begin(groups), std::end(groups),
                             [&](const auto& g) { return it.key() == g.first; });
    if (!known) throw InputError("unknown indicator group '" + it.key() + "'");
  }
  sets.validate();
  return sets;
}

IndicatorSets IndicatorSets::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open indicator file: " + path.string());
  return parse(in);
}

std::set<std::string> IndicatorSets::female_side() const {
  std::set<std::string> out(general_female.begin(), general_female.end());
  out.insert(mother_variants.begin(), mother_variants.end());
  out.insert(grandmother_variants.begin(), grandmother_variants.end());
  return out;
}

std::set<std::string> IndicatorSets::male_side() const {
  std::set<std::string> out(general_male.begin(), general_male.end());
  out.insert(father_variants.begin(), father_variants.end());
  out.insert(grandfather_variants.begin(), grandfather_variants.end());
  return out;
}

bool IndicatorSets::empty() const { return female_side().empty() && male_side().empty(); }

void IndicatorSets::validate() const {
  for (const auto* group : {&general_female, &general_male, &mother_variants, &father_variants,
                            &grandmother_variants, &grandfather_variants}) {
    for (const auto& w : *group) {
      auto toks = tokenize(w);
      if (toks.size() != 1 || toks.front().text != w) {
        throw InputError("indicator '" + w + "' is not a lowercase single token");
      }
    }
  }
  auto female = female_side();
  for (const auto& w : male_side()) {
    if (female.contains(w)) throw InputError("indicator '" + w + "' appears on both sides");
  }
}

RecipientGender classify_gender(std::string_view text, const IndicatorSets& indicators) {
  const auto female = indicators.female_side();
  const auto male = indicators.male_side();
  bool f = false;
  bool m = false;
  for (const auto& tok : tokenize(text)) {
    f = f || female.contains(tok.text);
    m = m || male.contains(tok.text);
  }
  if (f && m) return RecipientGender::kMixed;
  if (f) return RecipientGender::kFemale;
  if (m) return RecipientGender::kMale;
  return RecipientGender::kNeutral;
}

AgeGroup infer_age_group(std::string_view text, const IndicatorSets& indicators) {
  auto tokens = tokenize(text);
  bool parent = any_token_in(tokens, indicators.mother_variants) || any_token_in(tokens, indicators.father_variants);
  bool grand = any_token_in(tokens, indicators.grandmother_variants) ||
               any_token_in(tokens, indicators.grandfather_variants);
  if (parent && !grand) return AgeGroup::kParent;
  if (grand && !parent) return AgeGroup::kGrandparent;
  return AgeGroup::kUnknown;
}

std::string_view to_string(PromptTemplate t) {
  switch (t) {
    case PromptTemplate::kIndicator: return "indicator";
    case PromptTemplate::kName: return "name";
    case PromptTemplate::kBaby: return "baby";
    case PromptTemplate::kEndearment: return "endearment";
  }
  return "indicator";
}

std::string PromptSpec::render(RecipientGender gender) const {
  if (template_kind == PromptTemplate::kBaby) {
    const char* child = gender == RecipientGender::kMale ? "boy" : "girl";
    return scenario_prefix + " my little baby " + child + " " + indicator_or_name + "!";
  }
  return scenario_prefix + " " + indicator_or_name + "!";
}

const ScenarioPrefixes& default_scenario_prefixes() {
  static const ScenarioPrefixes prefixes{
      {Scenario::kBirthday, "Happy birthday"},
      {Scenario::kValentine, "Happy Valentine's Day"},
      {Scenario::kWedding, "Congratulations on getting married"},
  };
  return prefixes;
}

std::vector<Prompt> build_prompts(Scenario scenario, const IndicatorSets& indicators,
                                  const std::vector<NamedRecipient>& names, const ScenarioPrefixes& prefixes) {
  auto it = prefixes.find(scenario);
  if (it == prefixes.end() || it->second.empty()) {
    throw InputError("no prompt prefix configured for scenario '" + std::string(to_string(scenario)) + "'");
  }
  const std::string& prefix = it->second;
  const auto female = indicators.female_side();
  for (const auto& n : names) {
    if (n.gender != RecipientGender::kFemale && n.gender != RecipientGender::kMale) {
      throw InputError("name '" + n.name + "' must be tagged female or male");
    }
  }

  std::vector<Prompt> prompts;
  std::set<std::string> seen;
  for (const auto* group : {&indicators.general_female, &indicators.general_male, &indicators.mother_variants,
                            &indicators.father_variants, &indicators.grandmother_variants,
                            &indicators.grandfather_variants}) {
    for (const auto& word : *group) {
      if (!seen.insert(word).second) continue;
      AgeGroup age = age_of_indicator(indicators, word);
      PromptSpec spec{prefix, word,
                      age == AgeGroup::kAll ? PromptTemplate::kIndicator : PromptTemplate::kEndearment};
      RecipientGender gender = female.contains(word) ? RecipientGender::kFemale : RecipientGender::kMale;
      prompts.push_back({spec.render(gender), gender, age, spec.template_kind});
    }
  }
  for (const auto& n : names) {
    PromptSpec spec{prefix, n.name, PromptTemplate::kName};
    prompts.push_back({spec.render(n.gender), n.gender, AgeGroup::kAll, PromptTemplate::kName});
  }
  if (scenario == Scenario::kBirthday) {
    for (const auto& n : names) {
      PromptSpec spec{prefix, n.name, PromptTemplate::kBaby};
      prompts.push_back({spec.render(n.gender), n.gender, AgeGroup::kBaby, PromptTemplate::kBaby});
    }
  }
  return prompts;
}

}  // namespace greeta
