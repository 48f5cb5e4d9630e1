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

#include "triage/profile.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "triage/error.hpp"

namespace triage::profile {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// Floor division that rounds toward negative infinity.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::size_t TimeBucket::total() const {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

CrisisProfile build_profile(std::span<const TaggedMessage> tagged, std::int64_t width) {
  if (width <= 0) throw InvalidArgument("build_profile: bucket width must be positive");
  if (tagged.empty()) throw InvalidArgument("build_profile: no messages");
  std::vector<std::string> undated;
  for (const auto& [m, _] : tagged)
    if (!m.timestamp) undated.push_back(m.id);
  if (!undated.empty()) {
    std::string ids;
    for (std::size_t i = 0; i < undated.size() && i < 20; ++i) ids += (i ? ", " : "") + undated[i];
    if (undated.size() > 20) ids += ", ...";
    throw DataError("build_profile: " + std::to_string(undated.size()) +
                    " message(s) without timestamp: " + ids);
  }

  std::int64_t t_min = *tagged.front().first.timestamp, t_max = t_min;
  for (const auto& [m, _] : tagged) {
    t_min = std::min(t_min, *m.timestamp);
    t_max = std::max(t_max, *m.timestamp);
  }
  const auto n = static_cast<std::size_t>(floor_div(t_max - t_min, width)) + 1;
  CrisisProfile p;
  p.buckets.resize(n);
  for (std::size_t b = 0; b < n; ++b) {
    p.buckets[b].start = t_min + static_cast<std::int64_t>(b) * width;
    p.buckets[b].width = width;
  }
  for (const auto& [m, actions] : tagged) {
    auto& bucket = p.buckets[static_cast<std::size_t>(floor_div(*m.timestamp - t_min, width))];
    for (auto t : actions.members()) ++bucket.counts[index_of(t)];
  }
  for (const auto& b : p.buckets) {
    std::array<double, kActionabilityTypeCount> prop{};
    if (const auto total = b.total(); total > 0)
      for (std::size_t c = 0; c < kActionabilityTypeCount; ++c)
        prop[c] = static_cast<double>(b.counts[c]) / static_cast<double>(total);
    p.proportions.push_back(prop);
  }
  return p;
}

const std::array<const char*, kActionabilityTypeCount>& category_colors() {
  static const std::array<const char*, kActionabilityTypeCount> colors = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};
  return colors;
}

std::string iso8601(std::int64_t utc_seconds) {
  const std::time_t t = static_cast<std::time_t>(utc_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RenderedChart render_chart(const CrisisProfile& profile, const ChartOptions& options) {
  if (profile.buckets.empty()) throw InvalidArgument("render_chart: profile has no buckets");
  const auto& colors = category_colors();
  const double left = 60, top = 20, legend_width = 200;
  const double step = options.bar_width + options.bar_gap;
  const double plot_width = step * static_cast<double>(profile.buckets.size());
  const double width = left + plot_width + legend_width;
  const double height = top + options.bar_height + 70;
  const double base = top + options.bar_height;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" font-family=\"sans-serif\" font-size=\"10\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(top + 4)
      << "\" text-anchor=\"end\">100%</text>\n"
      << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(base)
      << "\" text-anchor=\"end\">0%</text>\n";

  for (std::size_t b = 0; b < profile.buckets.size(); ++b) {
    const double x = left + step * static_cast<double>(b) + options.bar_gap / 2;
    svg << "<g class=\"bar\" data-bucket=\"" << b << "\">\n";
    // Segment edges come from the cumulative proportion so the stack always
    // closes at full height.
    double cumulative = 0;
    for (std::size_t c = 0; c < kActionabilityTypeCount; ++c) {
      const double p = profile.proportions[b][c];
      if (p <= 0) continue;
      const double y_low = base - cumulative * options.bar_height;
      cumulative += p;
      const double y_high = base - std::min(cumulative, 1.0) * options.bar_height;
      svg << "<rect class=\"segment\" data-category=\"" << code_of(kAllActionabilityTypes[c])
          << "\" x=\"" << fmt(x) << "\" y=\"" << fmt(y_high) << "\" width=\""
          << fmt(options.bar_width) << "\" height=\"" << fmt(y_low - y_high) << "\" fill=\""
          << colors[c] << "\"/>\n";
    }
    svg << "<rect class=\"frame\" x=\"" << fmt(x) << "\" y=\"" << fmt(top) << "\" width=\""
        << fmt(options.bar_width) << "\" height=\"" << fmt(options.bar_height)
        << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"0.5\"/>\n";
    const double tx = x + options.bar_width / 2;
    svg << "<text class=\"tick\" x=\"" << fmt(tx) << "\" y=\"" << fmt(base + 12)
        << "\" text-anchor=\"end\" transform=\"rotate(-45 " << fmt(tx) << " " << fmt(base + 12)
        << ")\">" << iso8601(profile.buckets[b].start).substr(0, 16) << "</text>\n</g>\n";
  }
  svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(base) << "\" x2=\""
      << fmt(left + plot_width) << "\" y2=\"" << fmt(base) << "\" stroke=\"black\"/>\n";

  const double lx = left + plot_width + 20;
  svg << "<g class=\"legend\">\n";
  for (std::size_t c = 0; c < kActionabilityTypeCount; ++c) {
    const auto t = kAllActionabilityTypes[c];
    const double ly = top + 16 * static_cast<double>(c);
    svg << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly) << "\" width=\"10\" height=\"10\" fill=\""
        << colors[c] << "\"/>\n<text x=\"" << fmt(lx + 14) << "\" y=\"" << fmt(ly + 9) << "\">"
        << code_of(t) << " " << label_of(t) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";

  std::ostringstream csv;
  csv << "bucket_start_iso8601";
  for (auto t : kAllActionabilityTypes) csv << ',' << code_of(t);
  csv << '\n';
  char buf[32];
  for (std::size_t b = 0; b < profile.buckets.size(); ++b) {
    csv << iso8601(profile.buckets[b].start);
    for (double p : profile.proportions[b]) {
      std::snprintf(buf, sizeof(buf), ",%.6f", p);
      csv << buf;
    }
    csv << '\n';
  }
  return {svg.str(), csv.str()};
}

}  // namespace triage::profile
