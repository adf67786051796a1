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

#include "blockscope/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "blockscope/errors.hpp"
#include "blockscope/parallel.hpp"

namespace blockscope
{

WindowStats window_stats(std::span<const double> scores)
{
  if (scores.empty()) {
    throw std::invalid_argument("window statistics need at least one score");
  }
  WindowStats out;
  for (double s : scores) {
    out.sum += s;
  }
  out.mean = out.sum / static_cast<double>(scores.size());
  double squares = 0.0;
  for (double s : scores) {
    squares += (s - out.mean) * (s - out.mean);
  }
  out.sigma = std::sqrt(squares);
  return out;
}

ScoreWindow::ScoreWindow(std::size_t capacity) : capacity_(capacity)
{
  if (capacity == 0) {
    throw std::invalid_argument("window capacity must be positive");
  }
}

void ScoreWindow::push(std::int64_t frame_index, double score)
{
  if (!entries_.empty() && frame_index != entries_.back().first + 1) {
    throw std::invalid_argument("window entries must have consecutive frame indices");
  }
  if (full()) {
    entries_.pop_front();
  }
  entries_.emplace_back(frame_index, score);
}

WindowStats ScoreWindow::stats() const
{
  std::vector<double> values;
  values.reserve(entries_.size());
  for (const auto &e : entries_) {
    values.push_back(e.second);
  }
  return window_stats(values);
}

std::optional<Criterion> parse_criterion(std::string_view tag)
{
  if (tag == "reference") {
    return Criterion::reference;
  }
  if (tag == "literal") {
    return Criterion::literal;
  }
  return std::nullopt;
}

std::string_view to_string(Criterion criterion)
{
  return criterion == Criterion::reference ? "reference" : "literal";
}

void DetectionConfig::validate() const
{
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be positive");
  }
  if (window < 3 || window % 2 == 0) {
    throw std::invalid_argument("window must be odd and at least 3");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
}

double literal_ratio(const ScoredFrame &curr, const ScoredFrame &prev, double epsilon)
{
  return std::abs(curr.sigma - prev.sigma) / std::max(std::abs(curr.score - prev.score), epsilon);
}

Verdict is_distorted(const ScoredFrame &curr, const ScoredFrame &prev, const DetectionConfig &cfg)
{
  return literal_ratio(curr, prev, cfg.epsilon) >= cfg.beta * cfg.beta ? Verdict::distorted : Verdict::ok;
}

double deviation_growth(double score, std::span<const double> reference, double epsilon)
{
  if (reference.empty()) {
    throw std::invalid_argument("deviation growth needs a non-empty reference");
  }
  std::vector<double> joined(reference.begin(), reference.end());
  joined.push_back(score);
  const double before = window_stats(reference).sigma;
  const double after = window_stats(joined).sigma;
  return (after - before) / std::max(before, epsilon);
}

SequenceDetector::SequenceDetector(DetectionConfig cfg) : cfg_(cfg) { cfg_.validate(); }

int SequenceDetector::latency() const noexcept { return cfg_.mode == WindowMode::centered ? cfg_.half_window() : 0; }

void SequenceDetector::reset()
{
  indices_.clear();
  scores_.clear();
  offsets_.clear();
  flagged_.clear();
  emitted_ = 0;
}

std::vector<FrameRecord> SequenceDetector::push(std::int64_t frame_index, const BlockinessScore &score)
{
  if (!indices_.empty() && frame_index <= indices_.back()) {
    throw std::invalid_argument("frame indices must increase");
  }
  indices_.push_back(frame_index);
  scores_.push_back(score.value);
  offsets_.push_back(score.boundary_offset);
  flagged_.push_back(false);
  std::vector<FrameRecord> out;
  const auto lag = static_cast<std::size_t>(latency());
  while (emitted_ + lag < scores_.size()) {
    out.push_back(decide(emitted_++, false));
  }
  return out;
}

std::vector<FrameRecord> SequenceDetector::finish()
{
  std::vector<FrameRecord> out;
  while (emitted_ < scores_.size()) {
    out.push_back(decide(emitted_++, true));
  }
  return out;
}

WindowStats SequenceDetector::span_stats(std::size_t first, std::size_t last) const
{
  return window_stats(std::span<const double>(scores_).subspan(first, last - first + 1));
}

FrameRecord SequenceDetector::decide(std::size_t i, bool at_end)
{
  const auto n = static_cast<std::size_t>(cfg_.window);
  const auto h = static_cast<std::size_t>(cfg_.half_window());
  const std::size_t count = scores_.size();
  const bool centered = cfg_.mode == WindowMode::centered;
  const double threshold = cfg_.beta * cfg_.beta;

  // Window covering frame j, clipped to what exists.
  auto window_of = [&](std::size_t j) {
    const std::size_t first = centered ? (j >= h ? j - h : 0) : (j + 1 >= n ? j + 1 - n : 0);
    const std::size_t last = centered ? std::min(j + h, count - 1) : j;
    return std::pair{first, last};
  };

  FrameRecord rec;
  rec.frame_index = indices_[i];
  rec.score = scores_[i];
  rec.boundary_offset = offsets_[i];
  const auto [first, last] = window_of(i);
  const auto stats = span_stats(first, last);
  rec.mean = stats.mean;
  rec.stddev = stats.sigma;

  const bool tail = centered && at_end && i + h >= count;
  if (cfg_.criterion == Criterion::literal) {
    const bool short_head = centered ? i <= h : i < n;
    if (short_head || tail) {
      rec.verdict = Verdict::insufficient_window;
      return rec;
    }
    const auto [pf, pl] = window_of(i - 1);
    const ScoredFrame curr{scores_[i], stats.sigma};
    const ScoredFrame prev{scores_[i - 1], span_stats(pf, pl).sigma};
    rec.ratio = literal_ratio(curr, prev, cfg_.epsilon);
    rec.verdict = *rec.ratio >= threshold ? Verdict::distorted : Verdict::ok;
    flagged_[i] = rec.verdict == Verdict::distorted;
    return rec;
  }

  if (i + 1 < n || tail) {
    rec.verdict = Verdict::insufficient_window;
    return rec;
  }
  // Most recent n-1 unflagged scores from the preceding 2(n-1) frames.
  std::vector<double> reference;
  const std::size_t lookback = 2 * (n - 1);
  for (std::size_t j = i; j-- > (i >= lookback ? i - lookback : 0) && reference.size() < n - 1;) {
    if (!flagged_[j]) {
      reference.push_back(scores_[j]);
    }
  }
  if (reference.size() < n - 1) {
    // Too much recent damage to trust a baseline; accept and rebuild.
    rec.verdict = Verdict::ok;
    return rec;
  }
  std::reverse(reference.begin(), reference.end());
  if (centered) {
    const std::vector<double> trailing = reference;
    for (std::size_t j = i + 1; j <= i + h; ++j) {
      if (deviation_growth(scores_[j], trailing, cfg_.epsilon) < threshold) {
        reference.push_back(scores_[j]);
      }
    }
  }
  rec.ratio = deviation_growth(scores_[i], reference, cfg_.epsilon);
  rec.verdict = *rec.ratio >= threshold ? Verdict::distorted : Verdict::ok;
  flagged_[i] = rec.verdict == Verdict::distorted;
  return rec;
}

std::vector<FrameRecord> detect_scores(
  std::span<const BlockinessScore> scores, const DetectionConfig &cfg, std::int64_t first_index)
{
  SequenceDetector detector(cfg);
  std::vector<FrameRecord> out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    auto ready = detector.push(first_index + static_cast<std::int64_t>(i), scores[i]);
    out.insert(out.end(), ready.begin(), ready.end());
  }
  auto rest = detector.finish();
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::vector<BlockinessScore> score_frames(std::span<const LumaFrame> frames, const BlockinessConfig &cfg, int jobs)
{
  cfg.validate();
  std::vector<BlockinessScore> scores(frames.size());
  parallel_for(frames.size(), jobs, [&](std::size_t i) { scores[i] = measure_frame(frames[i], cfg); });
  return scores;
}

DetectionReport detect_sequence(
  std::span<const LumaFrame> frames, const DetectionConfig &cfg, const BlockinessConfig &blockiness, int jobs)
{
  if (frames.empty()) {
    throw std::invalid_argument("detect_sequence needs at least one frame");
  }
  cfg.validate();
  const auto scores = score_frames(frames, blockiness, jobs);
  SequenceDetector detector(cfg);
  DetectionReport report;
  echo_config(report, blockiness);
  echo_config(report, cfg);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    auto ready = detector.push(frames[i].frame_index(), scores[i]);
    report.frames.insert(report.frames.end(), ready.begin(), ready.end());
  }
  auto rest = detector.finish();
  report.frames.insert(report.frames.end(), rest.begin(), rest.end());
  return report;
}

void echo_config(DetectionReport &report, const BlockinessConfig &cfg)
{
  report.set_config("delta", std::int64_t{cfg.delta});
  report.set_config("scale", cfg.scale);
  report.set_config("clip_margin", std::int64_t{cfg.clip_margin});
  report.set_config("offset_grid", cfg.offset_grid);
  report.set_config("row_buckets", cfg.row_buckets);
}

void echo_config(DetectionReport &report, const DetectionConfig &cfg)
{
  report.set_config("beta", cfg.beta);
  report.set_config("window", std::int64_t{cfg.window});
  report.set_config("epsilon", cfg.epsilon);
  report.set_config("criterion", std::string(to_string(cfg.criterion)));
  report.set_config("causal", cfg.mode == WindowMode::causal);
}

std::set<std::int64_t> distorted_frames(const DetectionReport &report)
{
  std::set<std::int64_t> out;
  for (const auto &f : report.frames) {
    if (f.verdict == Verdict::distorted) {
      out.insert(f.frame_index);
    }
  }
  return out;
}

PrMetrics evaluate_detection(const std::set<std::int64_t> &detected, const std::set<std::int64_t> &truth)
{
  PrMetrics m;
  for (auto d : detected) {
    (truth.count(d) ? m.p : m.p_f) += 1;
  }
  for (auto t : truth) {
    if (!detected.count(t)) {
      ++m.p_m;
    }
  }
  m.precision = m.p + m.p_f == 0 ? 1.0 : static_cast<double>(m.p) / static_cast<double>(m.p + m.p_f);
  m.recall = m.p + m.p_m == 0 ? 1.0 : static_cast<double>(m.p) / static_cast<double>(m.p + m.p_m);
  m.efficiency = (m.precision + m.recall) / 2.0;
  return m;
}

EvaluationRecord to_record(const PrMetrics &metrics)
{
  return {metrics.p, metrics.p_f, metrics.p_m, metrics.precision, metrics.recall, metrics.efficiency};
}

std::set<std::int64_t> parse_ground_truth(std::string_view text)
{
  const auto start = text.find_first_not_of(" \t\r\n");
  std::set<std::int64_t> out;
  if (start != std::string_view::npos && (text[start] == '{' || text[start] == '[')) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
      throw FormatError(std::string("ground truth is not valid JSON: ") + e.what());
    }
    const nlohmann::json *list = &doc;
    if (doc.is_object()) {
      const auto it = doc.find("distorted");
      if (it == doc.end()) {
        throw FormatError("ground truth object lacks a \"distorted\" array");
      }
      list = &*it;
    }
    if (!list->is_array()) {
      throw FormatError("ground truth \"distorted\" is not an array");
    }
    for (const auto &v : *list) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw FormatError("ground truth entries must be non-negative integers");
      }
      out.insert(v.get<std::int64_t>());
    }
    return out;
  }
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) {
      continue;
    }
    std::size_t used = 0;
    std::int64_t value = -1;
    try {
      value = std::stoll(token, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    std::string extra;
    if (used != token.size() || value < 0 || (fields >> extra)) {
      throw FormatError("bad ground-truth entry on line " + std::to_string(line_no));
    }
    out.insert(value);
  }
  return out;
}

std::set<std::int64_t> load_ground_truth(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open ground truth '" + path.string() + "'");
  }
  const std::string body{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_ground_truth(body);
}

}  // namespace blockscope
