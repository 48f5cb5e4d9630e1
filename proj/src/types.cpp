// Copyright 2026 The Triage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "triage/types.hpp"

#include "triage/text.hpp"

namespace triage {

namespace {

struct CategoryInfo {
  char code;
  std::string_view name;
  std::string_view label;
};

constexpr std::array<CategoryInfo, kActionabilityTypeCount> kCategories = {{
    {'A', "Needs", "Needs"},
    {'B', "ResponseGroups", "Response groups"},
    {'C', "ThreatsToResponse", "Threats to response"},
    {'D', "AccessibilityChange", "Change in accessibility"},
    {'E', "DamageInfrastructure", "Damage to infrastructure, livelihoods"},
    {'F', "GeographicMention", "Geographic names"},
    {'G', "EnvironmentChange", "Changes in environment"},
    {'H', "RescueReporting", "Reporting about the rescue"},
    {'I', "PersonalOpinion", "Personal opinions"},
}};

}  // namespace

std::string_view to_string(Source source) {
  switch (source) {
    case Source::CCSID: return "ccsid";
    case Source::CrisisLex: return "crisislex";
    case Source::Irma: return "irma";
    case Source::Other: break;
  }
  return "other";
}

Source parse_source(std::string_view name) {
  const std::string s = text::ascii_lower(name);
  if (s == "ccsid") return Source::CCSID;
  if (s == "crisislex") return Source::CrisisLex;
  if (s == "irma") return Source::Irma;
  return Source::Other;
}

std::string_view to_string(InformativenessLabel label) {
  switch (label) {
    case InformativenessLabel::Informative: return "informative";
    case InformativenessLabel::SomewhatInformative: return "somewhat";
    case InformativenessLabel::NotInformative: break;
  }
  return "not";
}

std::string_view to_string(BinaryInformativeness label) {
  return label == BinaryInformativeness::Informative ? "informative" : "not";
}

std::optional<InformativenessLabel> parse_informativeness(std::string_view s) {
  const std::string v = text::ascii_lower(text::trim(s));
  if (v == "informative") return InformativenessLabel::Informative;
  if (v == "somewhat" || v == "somewhat informative" ||
      v == "somewhat_informative")
    return InformativenessLabel::SomewhatInformative;
  if (v == "not" || v == "not informative" || v == "not_informative" ||
      v == "non-informative")
    return InformativenessLabel::NotInformative;
  return std::nullopt;
}

std::optional<BinaryInformativeness> parse_binary_informativeness(
    std::string_view s) {
  auto three = parse_informativeness(s);
  if (!three) return std::nullopt;
  return *three == InformativenessLabel::NotInformative
             ? BinaryInformativeness::NotInformative
             : BinaryInformativeness::Informative;
}

char code_of(ActionabilityType t) { return kCategories[index_of(t)].code; }
std::string_view name_of(ActionabilityType t) {
  return kCategories[index_of(t)].name;
}
std::string_view label_of(ActionabilityType t) {
  return kCategories[index_of(t)].label;
}

std::optional<ActionabilityType> parse_actionability(
    std::string_view code_or_name) {
  const std::string_view s = text::trim(code_or_name);
  for (auto t : kAllActionabilityTypes) {
    const auto& info = kCategories[index_of(t)];
    if (s.size() == 1 && (s[0] == info.code || s[0] == info.code + 32))
      return t;
    if (text::ascii_lower(s) == text::ascii_lower(info.name)) return t;
  }
  return std::nullopt;
}

std::vector<ActionabilityType> ActionSet::members() const {
  std::vector<ActionabilityType> out;
  for (auto t : kAllActionabilityTypes)
    if (contains(t)) out.push_back(t);
  return out;
}

std::vector<std::string> ActionSet::codes() const {
  std::vector<std::string> out;
  for (auto t : members()) out.emplace_back(1, code_of(t));
  return out;
}

}  // namespace triage
