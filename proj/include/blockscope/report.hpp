// Copyright 2026 The Blockscope Authors
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

#ifndef BLOCKSCOPE_REPORT_HPP_
#define BLOCKSCOPE_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace blockscope
{

enum class Verdict { ok, distorted, insufficient_window };
enum class BlockClass { uniform, edge, texture };

std::string_view to_string(Verdict verdict);
std::string_view to_string(BlockClass label);
std::optional<Verdict> parse_verdict(std::string_view text);
std::optional<BlockClass> parse_block_class(std::string_view text);

struct FrameRecord
{
  std::int64_t frame_index = 0;
  double score = 0.0;
  int boundary_offset = 0;
  double mean = 0.0;
  double stddev = 0.0;
  // Criterion value for frames that received a full verdict.
  std::optional<double> ratio;
  Verdict verdict = Verdict::insufficient_window;

  bool operator==(const FrameRecord &) const = default;
};

struct BlockSummary
{
  std::int64_t frame_index = 0;
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  BlockClass label = BlockClass::uniform;
  int dominant_directions = 0;
  std::optional<int> high_bin;
  std::optional<double> orientation_degrees;
  // nullopt means no repetition was found within the search range.
  std::optional<int> pattern_width;
  std::optional<int> pattern_height;

  bool operator==(const BlockSummary &) const = default;
};

struct EvaluationRecord
{
  std::int64_t p = 0;
  std::int64_t p_f = 0;
  std::int64_t p_m = 0;
  double precision = 0.0;
  double recall = 0.0;
  double efficiency = 0.0;

  bool operator==(const EvaluationRecord &) const = default;
};

using ConfigValue = std::variant<bool, std::int64_t, double, std::string>;
using ConfigEntry = std::pair<std::string, ConfigValue>;

struct DetectionReport
{
  std::vector<ConfigEntry> config;
  std::vector<FrameRecord> frames;
  std::optional<std::vector<BlockSummary>> blocks;
  std::optional<EvaluationRecord> evaluation;

  /// Appends or replaces a config entry, keeping first-insertion order.
  void set_config(std::string key, ConfigValue value);

  /// Throws std::invalid_argument when frames are unsorted or duplicated.
  void validate() const;

  bool operator==(const DetectionReport &) const = default;
};

enum class ReportFormat { json, csv };

std::optional<ReportFormat> parse_report_format(std::string_view tag);

/// Fixed-point rendering used everywhere in reports: six fractional digits,
/// negative zero folded to zero.
std::string format_fixed(double value);

std::string to_json(const DetectionReport &report);
std::string to_csv(const DetectionReport &report);
std::string serialize(const DetectionReport &report, ReportFormat format);

/// Bare per-frame scores, as emitted by the measure command.
struct ScoreRow
{
  std::int64_t frame_index = 0;
  double score = 0.0;
  int boundary_offset = 0;
};

std::string scores_to_csv(const std::vector<ScoreRow> &rows);
std::string scores_to_json(const std::vector<ConfigEntry> &config, const std::vector<ScoreRow> &rows);

/// Block summaries as CSV; empty optional fields are left blank.
std::string blocks_to_csv(const std::vector<BlockSummary> &blocks);

/// Inverse of to_json. Throws FormatError on malformed documents.
DetectionReport parse_report_json(std::string_view text);

/// Writes to a file, or to stdout when path is "-". Throws IoError.
void write_report(const DetectionReport &report, ReportFormat format, const std::filesystem::path &path);

}  // namespace blockscope

#endif  // BLOCKSCOPE_REPORT_HPP_
