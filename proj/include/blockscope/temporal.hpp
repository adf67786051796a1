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

#ifndef BLOCKSCOPE_TEMPORAL_HPP_
#define BLOCKSCOPE_TEMPORAL_HPP_

#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "blockscope/blockiness.hpp"
#include "blockscope/frame.hpp"
#include "blockscope/report.hpp"

namespace blockscope
{

struct WindowStats
{
  double sum = 0.0;
  double mean = 0.0;
  // Square root of the summed squared deviations, not divided by n.
  double sigma = 0.0;
};

/// Throws std::invalid_argument on an empty window.
WindowStats window_stats(std::span<const double> scores);

/// Bounded window of consecutive (frame_index, score) pairs.
class ScoreWindow
{
public:
  explicit ScoreWindow(std::size_t capacity);

  /// Appends a score, evicting the oldest entry when full. Throws
  /// std::invalid_argument if frame_index does not follow the last entry.
  void push(std::int64_t frame_index, double score);
  void clear() { entries_.clear(); }

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool full() const noexcept { return entries_.size() == capacity_; }
  const std::deque<std::pair<std::int64_t, double>> &entries() const noexcept { return entries_; }
  WindowStats stats() const;

private:
  std::size_t capacity_;
  std::deque<std::pair<std::int64_t, double>> entries_;
};

// reference: a frame is distorted when adding its score to a clean reference
//   set of neighbouring scores grows that set's deviation by at least beta^2.
// literal: |sigma_i - sigma_{i-1}| / max(|B_i - B_{i-1}|, epsilon) >= beta^2
//   with sigma taken over each frame's own window.
enum class Criterion { reference, literal };
enum class WindowMode { centered, causal };

std::optional<Criterion> parse_criterion(std::string_view tag);
std::string_view to_string(Criterion criterion);

struct DetectionConfig
{
  double beta = 1.5;
  int window = 7;
  double epsilon = 1e-6;
  Criterion criterion = Criterion::reference;
  WindowMode mode = WindowMode::centered;

  /// Throws std::invalid_argument unless beta > 0, window odd and >= 3, epsilon > 0.
  void validate() const;
  int half_window() const noexcept { return (window - 1) / 2; }
};

struct ScoredFrame
{
  double score = 0.0;
  double sigma = 0.0;
};

double literal_ratio(const ScoredFrame &curr, const ScoredFrame &prev, double epsilon);

/// Two-frame deviation test on precomputed window deviations.
Verdict is_distorted(const ScoredFrame &curr, const ScoredFrame &prev, const DetectionConfig &cfg);

/// Relative growth of the deviation of `reference` once `score` joins it.
double deviation_growth(double score, std::span<const double> reference, double epsilon);

/// Streaming detector. push() returns the records that became final, which
/// in centered mode trail the input by half a window; finish() flushes the
/// tail. Record order always follows input order.
class SequenceDetector
{
public:
  explicit SequenceDetector(DetectionConfig cfg);

  std::vector<FrameRecord> push(std::int64_t frame_index, const BlockinessScore &score);
  std::vector<FrameRecord> finish();
  void reset();

  int latency() const noexcept;
  const DetectionConfig &config() const noexcept { return cfg_; }

private:
  FrameRecord decide(std::size_t i, bool at_end);
  WindowStats span_stats(std::size_t first, std::size_t last) const;

  DetectionConfig cfg_;
  std::vector<std::int64_t> indices_;
  std::vector<double> scores_;
  std::vector<int> offsets_;
  std::vector<bool> flagged_;
  std::size_t emitted_ = 0;
};

std::vector<FrameRecord> detect_scores(
  std::span<const BlockinessScore> scores, const DetectionConfig &cfg, std::int64_t first_index = 0);

/// Scores every frame (in parallel when jobs != 1) and runs the detector.
/// Throws std::invalid_argument on empty input.
DetectionReport detect_sequence(
  std::span<const LumaFrame> frames,
  const DetectionConfig &cfg = {},
  const BlockinessConfig &blockiness = {},
  int jobs = 1);

/// Per-frame scores without temporal analysis, computed frame-parallel.
std::vector<BlockinessScore> score_frames(std::span<const LumaFrame> frames, const BlockinessConfig &cfg, int jobs);

void echo_config(DetectionReport &report, const BlockinessConfig &cfg);
void echo_config(DetectionReport &report, const DetectionConfig &cfg);

std::set<std::int64_t> distorted_frames(const DetectionReport &report);

struct PrMetrics
{
  std::int64_t p = 0;
  std::int64_t p_m = 0;
  std::int64_t p_f = 0;
  double precision = 1.0;
  double recall = 1.0;
  double efficiency = 1.0;
};

/// Ratios with an empty denominator are 1.0 (nothing claimed, nothing missed).
PrMetrics evaluate_detection(const std::set<std::int64_t> &detected, const std::set<std::int64_t> &truth);

EvaluationRecord to_record(const PrMetrics &metrics);

/// Accepts newline-separated indices (blank lines and '#' comments ignored),
/// a JSON array, or a JSON object with a "distorted" array. Throws FormatError.
std::set<std::int64_t> parse_ground_truth(std::string_view text);
std::set<std::int64_t> load_ground_truth(const std::filesystem::path &path);

}  // namespace blockscope

#endif  // BLOCKSCOPE_TEMPORAL_HPP_
