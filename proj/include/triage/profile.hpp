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
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "triage/types.hpp"

// Time-bucketed composition of actionability types over an event, and its
// proportional stacked bar chart.
namespace triage::profile {

inline constexpr std::int64_t kDefaultBucketWidth = 86400;

struct TimeBucket {
  std::int64_t start = 0;  // UTC seconds
  std::int64_t width = kDefaultBucketWidth;
  std::array<std::size_t, kActionabilityTypeCount> counts{};

  std::size_t total() const;
};

struct CrisisProfile {
  std::vector<TimeBucket> buckets;
  // Per bucket, count / bucket total; all zero for an empty bucket.
  std::vector<std::array<double, kActionabilityTypeCount>> proportions;
};

using TaggedMessage = std::pair<Message, ActionSet>;

// Bucket index floor((t - t_min) / width). Buckets run contiguously from the
// earliest to the latest message, empty ones included. A message adds one
// count per category in its set. Throws DataError listing the ids of undated
// messages and InvalidArgument for width <= 0 or an empty input.
CrisisProfile build_profile(std::span<const TaggedMessage> tagged,
                            std::int64_t width = kDefaultBucketWidth);

struct ChartOptions {
  double bar_width = 40;
  double bar_gap = 8;
  double bar_height = 300;
};

struct RenderedChart {
  std::string svg;
  std::string csv;  // bucket_start_iso8601, then one column per category
};

// Fill color of each category, A..I.
const std::array<const char*, kActionabilityTypeCount>& category_colors();

std::string iso8601(std::int64_t utc_seconds);  // "2013-06-20T00:00:00Z"

// One full-height bar per bucket with segments stacked bottom-up in A..I
// order, a legend and a time axis. Empty buckets are drawn as blank frames.
// Throws InvalidArgument on a profile without buckets.
RenderedChart render_chart(const CrisisProfile& profile, const ChartOptions& options = {});

}  // namespace triage::profile
