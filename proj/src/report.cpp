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

#include "blockscope/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "blockscope/errors.hpp"

namespace blockscope
{
namespace
{

using ordered_json = nlohmann::ordered_json;

std::string json_string(std::string_view text) { return ordered_json(std::string(text)).dump(); }

template <typename T>
std::string optional_number(const std::optional<T> &value)
{
  if (!value) {
    return "null";
  }
  if constexpr (std::is_floating_point_v<T>) {
    return format_fixed(*value);
  } else {
    return std::to_string(*value);
  }
}

std::string render_value(const ConfigValue &value)
{
  return std::visit(
    [](const auto &v) -> std::string {
      using T = std::decay_t<decltype(v)>;
      if constexpr (std::is_same_v<T, bool>) {
        return v ? "true" : "false";
      } else if constexpr (std::is_same_v<T, std::int64_t>) {
        return std::to_string(v);
      } else if constexpr (std::is_same_v<T, double>) {
        return format_fixed(v);
      } else {
        return json_string(v);
      }
    },
    value);
}

std::string render_frame(const FrameRecord &f)
{
  std::ostringstream os;
  os << "{\"frame_index\": " << f.frame_index << ", \"score\": " << format_fixed(f.score)
     << ", \"boundary_offset\": " << f.boundary_offset << ", \"mean\": " << format_fixed(f.mean)
     << ", \"stddev\": " << format_fixed(f.stddev) << ", \"ratio\": " << optional_number(f.ratio)
     << ", \"verdict\": " << json_string(to_string(f.verdict)) << "}";
  return os.str();
}

std::string render_block(const BlockSummary &b)
{
  std::ostringstream os;
  os << "{\"frame_index\": " << b.frame_index << ", \"x\": " << b.x << ", \"y\": " << b.y
     << ", \"width\": " << b.width << ", \"height\": " << b.height << ", \"class\": " << json_string(to_string(b.label))
     << ", \"dominant_directions\": " << b.dominant_directions << ", \"high_bin\": " << optional_number(b.high_bin)
     << ", \"orientation_degrees\": " << optional_number(b.orientation_degrees)
     << ", \"pattern_width\": " << optional_number(b.pattern_width)
     << ", \"pattern_height\": " << optional_number(b.pattern_height) << "}";
  return os.str();
}

void render_config(std::ostringstream &os, const std::vector<ConfigEntry> &config)
{
  os << "{\n  \"config\": {";
  for (std::size_t i = 0; i < config.size(); ++i) {
    os << (i == 0 ? "\n" : ",\n") << "    " << json_string(config[i].first) << ": " << render_value(config[i].second);
  }
  os << (config.empty() ? "}" : "\n  }");
}

template <typename T, typename Render>
void render_array(std::ostringstream &os, const std::vector<T> &items, Render render)
{
  if (items.empty()) {
    os << "[]";
    return;
  }
  os << "[\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    os << "    " << render(items[i]) << (i + 1 < items.size() ? ",\n" : "\n");
  }
  os << "  ]";
}

[[noreturn]] void malformed(const std::string &what) { throw FormatError("malformed report: " + what); }

const ordered_json &member(const ordered_json &obj, const char *key)
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    malformed(std::string("missing key '") + key + "'");
  }
  return *it;
}

template <typename T>
T integer(const ordered_json &obj, const char *key)
{
  const auto &v = member(obj, key);
  if (!v.is_number_integer()) {
    malformed(std::string("'") + key + "' is not an integer");
  }
  return v.get<T>();
}

double real(const ordered_json &obj, const char *key)
{
  const auto &v = member(obj, key);
  if (!v.is_number()) {
    malformed(std::string("'") + key + "' is not a number");
  }
  return v.get<double>();
}

std::optional<double> optional_real(const ordered_json &obj, const char *key)
{
  if (member(obj, key).is_null()) {
    return std::nullopt;
  }
  return real(obj, key);
}

std::optional<int> optional_integer(const ordered_json &obj, const char *key)
{
  if (member(obj, key).is_null()) {
    return std::nullopt;
  }
  return integer<int>(obj, key);
}

std::string text(const ordered_json &obj, const char *key)
{
  const auto &v = member(obj, key);
  if (!v.is_string()) {
    malformed(std::string("'") + key + "' is not a string");
  }
  return v.get<std::string>();
}

}  // namespace

std::string_view to_string(Verdict verdict)
{
  switch (verdict) {
    case Verdict::ok:
      return "ok";
    case Verdict::distorted:
      return "distorted";
    case Verdict::insufficient_window:
      return "insufficient-window";
  }
  return "unknown";
}

std::string_view to_string(BlockClass label)
{
  switch (label) {
    case BlockClass::uniform:
      return "uniform";
    case BlockClass::edge:
      return "edge";
    case BlockClass::texture:
      return "texture";
  }
  return "unknown";
}

std::optional<Verdict> parse_verdict(std::string_view text)
{
  for (auto v : {Verdict::ok, Verdict::distorted, Verdict::insufficient_window}) {
    if (to_string(v) == text) {
      return v;
    }
  }
  return std::nullopt;
}

std::optional<BlockClass> parse_block_class(std::string_view text)
{
  for (auto c : {BlockClass::uniform, BlockClass::edge, BlockClass::texture}) {
    if (to_string(c) == text) {
      return c;
    }
  }
  return std::nullopt;
}

void DetectionReport::set_config(std::string key, ConfigValue value)
{
  const auto it = std::find_if(config.begin(), config.end(), [&](const auto &e) { return e.first == key; });
  if (it != config.end()) {
    it->second = std::move(value);
  } else {
    config.emplace_back(std::move(key), std::move(value));
  }
}

void DetectionReport::validate() const
{
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].frame_index <= frames[i - 1].frame_index) {
      throw std::invalid_argument("report frames must be strictly increasing by frame_index");
    }
  }
}

std::optional<ReportFormat> parse_report_format(std::string_view tag)
{
  if (tag == "json") {
    return ReportFormat::json;
  }
  if (tag == "csv") {
    return ReportFormat::csv;
  }
  return std::nullopt;
}

std::string format_fixed(double value)
{
  if (!std::isfinite(value)) {
    throw std::invalid_argument("non-finite value in report");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string out(buf);
  if (out == "-0.000000") {
    out = "0.000000";
  }
  return out;
}

std::string to_json(const DetectionReport &report)
{
  report.validate();
  std::ostringstream os;
  render_config(os, report.config);
  os << ",\n  \"frames\": ";
  render_array(os, report.frames, render_frame);
  if (report.blocks) {
    os << ",\n  \"blocks\": ";
    render_array(os, *report.blocks, render_block);
  }
  if (report.evaluation) {
    const auto &e = *report.evaluation;
    os << ",\n  \"evaluation\": {\"p\": " << e.p << ", \"p_f\": " << e.p_f << ", \"p_m\": " << e.p_m
       << ", \"precision\": " << format_fixed(e.precision) << ", \"recall\": " << format_fixed(e.recall)
       << ", \"efficiency\": " << format_fixed(e.efficiency) << "}";
  }
  os << "\n}\n";
  return os.str();
}

std::string to_csv(const DetectionReport &report)
{
  report.validate();
  std::ostringstream os;
  os << "frame_index,score,boundary_offset,mean,stddev,ratio,verdict\n";
  for (const auto &f : report.frames) {
    os << f.frame_index << ',' << format_fixed(f.score) << ',' << f.boundary_offset << ',' << format_fixed(f.mean)
       << ',' << format_fixed(f.stddev) << ',' << (f.ratio ? format_fixed(*f.ratio) : "") << ','
       << to_string(f.verdict) << '\n';
  }
  return os.str();
}

std::string serialize(const DetectionReport &report, ReportFormat format)
{
  return format == ReportFormat::json ? to_json(report) : to_csv(report);
}

std::string scores_to_csv(const std::vector<ScoreRow> &rows)
{
  std::ostringstream os;
  os << "frame_index,score,boundary_offset\n";
  for (const auto &r : rows) {
    os << r.frame_index << ',' << format_fixed(r.score) << ',' << r.boundary_offset << '\n';
  }
  return os.str();
}

std::string scores_to_json(const std::vector<ConfigEntry> &config, const std::vector<ScoreRow> &rows)
{
  std::ostringstream os;
  render_config(os, config);
  os << ",\n  \"frames\": ";
  render_array(os, rows, [](const ScoreRow &r) {
    return "{\"frame_index\": " + std::to_string(r.frame_index) + ", \"score\": " + format_fixed(r.score) +
           ", \"boundary_offset\": " + std::to_string(r.boundary_offset) + "}";
  });
  os << "\n}\n";
  return os.str();
}

std::string blocks_to_csv(const std::vector<BlockSummary> &blocks)
{
  auto cell = [](const auto &v) -> std::string {
    if (!v) {
      return "";
    }
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(*v)>>) {
      return format_fixed(*v);
    } else {
      return std::to_string(*v);
    }
  };
  std::ostringstream os;
  os << "frame_index,x,y,width,height,class,dominant_directions,high_bin,orientation_degrees,pattern_width,"
        "pattern_height\n";
  for (const auto &b : blocks) {
    os << b.frame_index << ',' << b.x << ',' << b.y << ',' << b.width << ',' << b.height << ',' << to_string(b.label)
       << ',' << b.dominant_directions << ',' << cell(b.high_bin) << ',' << cell(b.orientation_degrees) << ','
       << cell(b.pattern_width) << ',' << cell(b.pattern_height) << '\n';
  }
  return os.str();
}

DetectionReport parse_report_json(std::string_view document)
{
  ordered_json root;
  try {
    root = ordered_json::parse(document);
  } catch (const nlohmann::json::parse_error &e) {
    throw FormatError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    malformed("top level is not an object");
  }
  DetectionReport report;
  const auto &config = member(root, "config");
  if (!config.is_object()) {
    malformed("'config' is not an object");
  }
  for (const auto &[key, value] : config.items()) {
    if (value.is_boolean()) {
      report.config.emplace_back(key, value.get<bool>());
    } else if (value.is_number_integer()) {
      report.config.emplace_back(key, value.get<std::int64_t>());
    } else if (value.is_number_float()) {
      report.config.emplace_back(key, value.get<double>());
    } else if (value.is_string()) {
      report.config.emplace_back(key, value.get<std::string>());
    } else {
      malformed("config value '" + key + "' has an unsupported type");
    }
  }
  const auto &frames = member(root, "frames");
  if (!frames.is_array()) {
    malformed("'frames' is not an array");
  }
  for (const auto &f : frames) {
    FrameRecord rec;
    rec.frame_index = integer<std::int64_t>(f, "frame_index");
    rec.score = real(f, "score");
    rec.boundary_offset = integer<int>(f, "boundary_offset");
    rec.mean = real(f, "mean");
    rec.stddev = real(f, "stddev");
    rec.ratio = optional_real(f, "ratio");
    const auto verdict = parse_verdict(text(f, "verdict"));
    if (!verdict) {
      malformed("unknown verdict");
    }
    rec.verdict = *verdict;
    report.frames.push_back(rec);
  }
  if (const auto it = root.find("blocks"); it != root.end()) {
    if (!it->is_array()) {
      malformed("'blocks' is not an array");
    }
    report.blocks.emplace();
    for (const auto &b : *it) {
      BlockSummary s;
      s.frame_index = integer<std::int64_t>(b, "frame_index");
      s.x = integer<int>(b, "x");
      s.y = integer<int>(b, "y");
      s.width = integer<int>(b, "width");
      s.height = integer<int>(b, "height");
      const auto label = parse_block_class(text(b, "class"));
      if (!label) {
        malformed("unknown block class");
      }
      s.label = *label;
      s.dominant_directions = integer<int>(b, "dominant_directions");
      s.high_bin = optional_integer(b, "high_bin");
      s.orientation_degrees = optional_real(b, "orientation_degrees");
      s.pattern_width = optional_integer(b, "pattern_width");
      s.pattern_height = optional_integer(b, "pattern_height");
      report.blocks->push_back(s);
    }
  }
  if (const auto it = root.find("evaluation"); it != root.end()) {
    EvaluationRecord e;
    e.p = integer<std::int64_t>(*it, "p");
    e.p_f = integer<std::int64_t>(*it, "p_f");
    e.p_m = integer<std::int64_t>(*it, "p_m");
    e.precision = real(*it, "precision");
    e.recall = real(*it, "recall");
    e.efficiency = real(*it, "efficiency");
    report.evaluation = e;
  }
  try {
    report.validate();
  } catch (const std::invalid_argument &e) {
    malformed(e.what());
  }
  return report;
}

void write_report(const DetectionReport &report, ReportFormat format, const std::filesystem::path &path)
{
  const std::string body = serialize(report, format);
  if (path == "-") {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << body;
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

}  // namespace blockscope
