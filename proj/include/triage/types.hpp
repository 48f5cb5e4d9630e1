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

#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace triage {

enum class Source { CCSID, CrisisLex, Irma, Other };

std::string_view to_string(Source source);
Source parse_source(std::string_view name);  // unknown names map to Other

// One social-media or SMS record.
struct Message {
  std::string id;
  std::optional<std::int64_t> timestamp;  // UTC seconds since epoch
  std::string text;
  Source source = Source::Other;
};

using MessageSet = std::vector<Message>;

// Three-level crowd label. Declared from least to most informative so that
// comparisons follow informativeness.
enum class InformativenessLabel : std::uint8_t {
  NotInformative = 0,
  SomewhatInformative = 1,
  Informative = 2,
};

enum class BinaryInformativeness : std::uint8_t {
  NotInformative = 0,
  Informative = 1,
};

std::string_view to_string(InformativenessLabel label);
std::string_view to_string(BinaryInformativeness label);

// Accepts "informative", "somewhat", "not" and the long forms
// ("somewhat informative", "not informative"), case-insensitive.
std::optional<InformativenessLabel> parse_informativeness(std::string_view s);
std::optional<BinaryInformativeness> parse_binary_informativeness(
    std::string_view s);

// The nine top-level actionability categories, coded A-I in listing order.
// The enumerator order carries no priority.
enum class ActionabilityType : std::uint8_t {
  Needs = 0,
  ResponseGroups,
  ThreatsToResponse,
  AccessibilityChange,
  DamageInfrastructure,
  GeographicMention,
  EnvironmentChange,
  RescueReporting,
  PersonalOpinion,
};

inline constexpr std::size_t kActionabilityTypeCount = 9;

inline constexpr std::array<ActionabilityType, kActionabilityTypeCount>
    kAllActionabilityTypes = {
        ActionabilityType::Needs,
        ActionabilityType::ResponseGroups,
        ActionabilityType::ThreatsToResponse,
        ActionabilityType::AccessibilityChange,
        ActionabilityType::DamageInfrastructure,
        ActionabilityType::GeographicMention,
        ActionabilityType::EnvironmentChange,
        ActionabilityType::RescueReporting,
        ActionabilityType::PersonalOpinion,
};

inline constexpr std::size_t index_of(ActionabilityType t) {
  return static_cast<std::size_t>(t);
}

char code_of(ActionabilityType t);
std::string_view name_of(ActionabilityType t);       // "Needs"
std::string_view label_of(ActionabilityType t);      // "Needs", "Response groups", ...
std::optional<ActionabilityType> parse_actionability(std::string_view code_or_name);

// Set of actionability categories carried by one message.
class ActionSet {
 public:
  ActionSet() = default;
  ActionSet(std::initializer_list<ActionabilityType> members) {
    for (auto t : members) insert(t);
  }

  void insert(ActionabilityType t) { bits_.set(index_of(t)); }
  void erase(ActionabilityType t) { bits_.reset(index_of(t)); }
  bool contains(ActionabilityType t) const { return bits_.test(index_of(t)); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }

  std::vector<ActionabilityType> members() const;
  // Letter codes in A-I order, e.g. {"A", "F"}.
  std::vector<std::string> codes() const;

  friend bool operator==(const ActionSet&, const ActionSet&) = default;

 private:
  std::bitset<kActionabilityTypeCount> bits_;
};

}  // namespace triage
