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

#include "blockscope/cli.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>

#include "blockscope/blockiness.hpp"
#include "blockscope/errors.hpp"
#include "blockscope/frame_io.hpp"
#include "blockscope/parallel.hpp"
#include "blockscope/report.hpp"
#include "blockscope/seba.hpp"
#include "blockscope/synth.hpp"
#include "blockscope/temporal.hpp"

namespace blockscope
{
namespace
{

// Usage errors found after parsing (bad enumerations, ranges).
struct UsageError : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

struct Options
{
  std::string input;
  std::string format = "y4m";
  std::optional<int> width;
  std::optional<int> height;
  std::string layout = "420";

  BlockinessConfig blockiness;
  DetectionConfig detection;
  std::string criterion = "reference";
  bool causal = false;
  SebaConfig seba;
  std::string histogram_csv;

  std::string out = "-";
  std::string report_format;
  std::string ground_truth;
  std::string report_in;
  int jobs = 0;

  std::uint64_t seed = 1;
  std::int64_t frames = 180;
  std::string distorted = "91,92,93";
  std::string kind = "block-grid";
  int period = 8;
  int phase = 0;
  double orientation = 0.0;
  double amplitude = 16.0;
};

void add_input(CLI::App &cmd, Options &o)
{
  cmd.add_option("--input", o.input, "Input file, or directory of .pgm frames")->required();
  cmd.add_option("--format", o.format, "y4m | raw-yuv | image-sequence")->capture_default_str();
  cmd.add_option("--width", o.width, "Frame width (required for raw-yuv)");
  cmd.add_option("--height", o.height, "Frame height (required for raw-yuv)");
  cmd.add_option("--pixel-layout", o.layout, "Raw planar layout: 420 | 422 | 444 | y-only")->capture_default_str();
  cmd.add_option("--jobs", o.jobs, "Worker threads, 0 for all cores")->capture_default_str();
}

void add_output(CLI::App &cmd, Options &o, const char *default_format)
{
  // Options are shared between subcommands, so the default is applied after parsing.
  cmd.add_option("--out", o.out, "Output path, - for stdout")->capture_default_str();
  cmd.add_option("--report-format", o.report_format, "json | csv")->default_str(default_format);
}

void add_blockiness(CLI::App &cmd, Options &o)
{
  cmd.add_option("--delta", o.blockiness.delta, "Block size in pixels")->capture_default_str();
  cmd.add_option("--scale", o.blockiness.scale, "Score scale factor")->capture_default_str();
  cmd.add_option("--clip-margin", o.blockiness.clip_margin, "Pixels ignored on each side")->capture_default_str();
  cmd.add_flag("--offset-grid", o.blockiness.offset_grid, "Score against the half-block offset grid");
  cmd.add_flag("--row-buckets", o.blockiness.row_buckets, "Bucket rows instead of columns");
}

void add_detection(CLI::App &cmd, Options &o)
{
  cmd.add_option("--beta", o.detection.beta, "Criterion parameter")->capture_default_str();
  cmd.add_option("--window", o.detection.window, "Odd window length in frames")->capture_default_str();
  cmd.add_option("--criterion", o.criterion, "reference | literal")->capture_default_str();
  cmd.add_flag("--causal", o.causal, "Trailing window, no look-ahead");
  cmd.add_option("--ground-truth", o.ground_truth, "Distorted-frame list or JSON sidecar to score against");
}

void add_seba(CLI::App &cmd, Options &o)
{
  cmd.add_option("--th-fix", o.seba.classify.th_fix, "Dominance margin below the strongest direction")
    ->capture_default_str();
  cmd.add_option("--texture-count", o.seba.classify.texture_count, "Dominant directions that make a texture")
    ->capture_default_str();
  cmd.add_option("--block-size", o.seba.block_size, "Analysis block size, 0 for whole frames")->capture_default_str();
  cmd.add_option("--max-shift", o.seba.max_shift, "Largest shift searched for the pattern period")
    ->capture_default_str();
  cmd.add_option("--match-floor", o.seba.match_floor, "Sobel magnitude below which pixels are ignored in the period search")
    ->capture_default_str();
  cmd.add_option("--peak-tolerance", o.seba.peak_tolerance, "Fraction of a full match that counts as a period peak")
    ->capture_default_str();
  cmd.add_option("--histogram-csv", o.histogram_csv, "Also dump per-block direction histograms here");
}

template <typename T, typename Parse>
T parse_enum(const std::string &text, Parse parse, const char *flag)
{
  const auto v = parse(text);
  if (!v) {
    throw UsageError(std::string("invalid value '") + text + "' for " + flag);
  }
  return *v;
}

SourceSpec source_of(const Options &o)
{
  SourceSpec spec;
  spec.path = o.input;
  spec.format = parse_enum<SourceFormat>(o.format, parse_source_format, "--format");
  spec.width = o.width;
  spec.height = o.height;
  spec.layout = parse_enum<PixelLayout>(o.layout, parse_pixel_layout, "--pixel-layout");
  return spec;
}

ReportFormat report_format_of(const Options &o)
{
  return parse_enum<ReportFormat>(o.report_format, parse_report_format, "--report-format");
}

void echo_input(DetectionReport &report, const char *command, const Options &o)
{
  report.set_config("command", std::string(command));
  report.set_config("input", o.input);
  report.set_config("format", o.format);
  if (o.width) {
    report.set_config("width", std::int64_t{*o.width});
  }
  if (o.height) {
    report.set_config("height", std::int64_t{*o.height});
  }
  report.set_config("pixel_layout", o.layout);
}

void echo_seba(DetectionReport &report, const SebaConfig &cfg)
{
  report.set_config("th_fix", cfg.classify.th_fix);
  report.set_config("texture_count", std::int64_t{cfg.classify.texture_count});
  report.set_config("ems_floor", cfg.classify.ems_floor);
  report.set_config("block_size", std::int64_t{cfg.block_size});
  report.set_config("max_shift", std::int64_t{cfg.max_shift});
  report.set_config("match_floor", cfg.match_floor);
  report.set_config("peak_tolerance", cfg.peak_tolerance);
}

void emit(const std::string &path, const std::string &body, std::ostream &out)
{
  if (path == "-") {
    out << body << std::flush;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  file << body;
  if (!file) {
    throw IoError("write to '" + path + "' failed");
  }
}

// Reads frames in batches and hands each batch over for parallel scoring.
template <typename Fn>
void for_each_batch(const SourceSpec &spec, int jobs, Fn &&fn)
{
  FrameReader reader(spec);
  const std::size_t batch = static_cast<std::size_t>(resolve_jobs(jobs)) * 4;
  std::vector<LumaFrame> frames;
  bool any = false;
  while (true) {
    auto frame = reader.next();
    if (frame) {
      frames.push_back(std::move(*frame));
      any = true;
    }
    if (!frames.empty() && (!frame || frames.size() == batch)) {
      fn(std::span<const LumaFrame>(frames));
      frames.clear();
    }
    if (!frame) {
      break;
    }
  }
  if (!any) {
    throw FormatError("input contains no frames");
  }
}

int run_measure(const Options &o, std::ostream &out)
{
  o.blockiness.validate();
  const auto format = report_format_of(o);
  std::vector<ScoreRow> rows;
  for_each_batch(source_of(o), o.jobs, [&](std::span<const LumaFrame> frames) {
    const auto scores = score_frames(frames, o.blockiness, o.jobs);
    for (std::size_t i = 0; i < frames.size(); ++i) {
      rows.push_back({frames[i].frame_index(), scores[i].value, scores[i].boundary_offset});
    }
  });
  if (format == ReportFormat::csv) {
    emit(o.out, scores_to_csv(rows), out);
  } else {
    DetectionReport header;
    echo_input(header, "measure", o);
    echo_config(header, o.blockiness);
    emit(o.out, scores_to_json(header.config, rows), out);
  }
  return kExitOk;
}

DetectionConfig detection_of(const Options &o)
{
  DetectionConfig cfg = o.detection;
  cfg.criterion = parse_enum<Criterion>(o.criterion, parse_criterion, "--criterion");
  cfg.mode = o.causal ? WindowMode::causal : WindowMode::centered;
  cfg.validate();
  return cfg;
}

DetectionReport detect_stream(const Options &o, const char *command)
{
  o.blockiness.validate();
  const auto cfg = detection_of(o);
  DetectionReport report;
  echo_input(report, command, o);
  echo_config(report, o.blockiness);
  echo_config(report, cfg);
  SequenceDetector detector(cfg);
  for_each_batch(source_of(o), o.jobs, [&](std::span<const LumaFrame> frames) {
    const auto scores = score_frames(frames, o.blockiness, o.jobs);
    for (std::size_t i = 0; i < frames.size(); ++i) {
      auto ready = detector.push(frames[i].frame_index(), scores[i]);
      report.frames.insert(report.frames.end(), ready.begin(), ready.end());
    }
  });
  auto rest = detector.finish();
  report.frames.insert(report.frames.end(), rest.begin(), rest.end());
  return report;
}

void attach_evaluation(DetectionReport &report, const std::string &truth_path)
{
  report.set_config("ground_truth", truth_path);
  report.evaluation = to_record(evaluate_detection(distorted_frames(report), load_ground_truth(truth_path)));
}

int run_detect(const Options &o, std::ostream &out)
{
  const auto format = report_format_of(o);
  auto report = detect_stream(o, "detect");
  if (!o.ground_truth.empty()) {
    attach_evaluation(report, o.ground_truth);
  }
  emit(o.out, serialize(report, format), out);
  return kExitOk;
}

int run_evaluate(const Options &o, std::ostream &out)
{
  const auto format = report_format_of(o);
  DetectionReport report;
  if (!o.report_in.empty()) {
    std::ifstream in(o.report_in, std::ios::binary);
    if (!in) {
      throw IoError("cannot open report '" + o.report_in + "'");
    }
    std::ostringstream body;
    body << in.rdbuf();
    report = parse_report_json(body.str());
  } else if (!o.input.empty()) {
    report = detect_stream(o, "evaluate");
  } else {
    throw UsageError("evaluate needs --input or --report");
  }
  attach_evaluation(report, o.ground_truth);
  if (format == ReportFormat::csv) {
    const auto &e = *report.evaluation;
    emit(o.out,
         "p,p_f,p_m,precision,recall,efficiency\n" + std::to_string(e.p) + ',' + std::to_string(e.p_f) + ',' +
           std::to_string(e.p_m) + ',' + format_fixed(e.precision) + ',' + format_fixed(e.recall) + ',' +
           format_fixed(e.efficiency) + '\n',
         out);
  } else {
    emit(o.out, to_json(report), out);
  }
  return kExitOk;
}

int run_seba(const Options &o, std::ostream &out)
{
  o.seba.validate();
  const auto format = report_format_of(o);
  DetectionReport report;
  echo_input(report, "seba", o);
  echo_seba(report, o.seba);
  report.blocks.emplace();
  std::vector<RegionAnalysis> all;
  for_each_batch(source_of(o), o.jobs, [&](std::span<const LumaFrame> frames) {
    std::vector<std::vector<RegionAnalysis>> results(frames.size());
    parallel_for(frames.size(), o.jobs, [&](std::size_t i) { results[i] = analyze_frame(frames[i], o.seba); });
    for (auto &r : results) {
      for (auto &block : r) {
        report.blocks->push_back(block.summary);
        if (!o.histogram_csv.empty()) {
          all.push_back(std::move(block));
        }
      }
    }
  });
  if (!o.histogram_csv.empty()) {
    std::ostringstream csv;
    write_histogram_csv(csv, all);
    emit(o.histogram_csv, csv.str(), out);
  }
  emit(o.out, format == ReportFormat::csv ? blocks_to_csv(*report.blocks) : to_json(report), out);
  return kExitOk;
}

std::set<std::int64_t> parse_index_list(const std::string &text)
{
  std::set<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      continue;
    }
    std::size_t used = 0;
    std::int64_t v = -1;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != item.size() || v < 0) {
      throw UsageError("bad frame index '" + item + "' in --distorted");
    }
    out.insert(v);
  }
  return out;
}

int run_synth(const Options &o, std::ostream &out)
{
  if (o.out == "-") {
    throw UsageError("synth needs --out");
  }
  PatternSpec spec;
  spec.kind = parse_enum<PatternKind>(o.kind, parse_pattern_kind, "--kind");
  spec.period = o.period;
  spec.phase = o.phase;
  spec.orientation = o.orientation;
  spec.amplitude = o.amplitude;
  spec.width = o.width.value_or(64);
  spec.height = o.height.value_or(64);
  spec.validate();
  const auto distorted = parse_index_list(o.distorted);
  const auto format = parse_enum<SourceFormat>(o.format, parse_source_format, "--format");
  const auto layout = parse_enum<PixelLayout>(o.layout, parse_pixel_layout, "--pixel-layout");
  if (o.frames < 1) {
    throw UsageError("--frames must be positive");
  }
  const auto seq = make_test_sequence(o.frames, distorted, spec, o.seed);
  switch (format) {
    case SourceFormat::y4m:
      write_y4m(o.out, seq.frames);
      break;
    case SourceFormat::raw_yuv:
      write_raw_frames(o.out, seq.frames, layout);
      break;
    case SourceFormat::image_sequence: {
      std::error_code ec;
      std::filesystem::create_directories(o.out, ec);
      if (ec) {
        throw IoError("cannot create '" + o.out + "': " + ec.message());
      }
      for (const auto &f : seq.frames) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06lld.pgm", static_cast<long long>(f.frame_index()));
        write_pgm(std::filesystem::path(o.out) / name, f);
      }
      break;
    }
  }
  const std::string sidecar = o.ground_truth.empty() ? o.out + ".truth.json" : o.ground_truth;
  write_ground_truth_sidecar(sidecar, o.frames, seq.truth, spec, o.seed);
  out << "wrote " << seq.frames.size() << " frames to " << o.out << " and ground truth to " << sidecar << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream &out, std::ostream &err)
{
  Options o;
  CLI::App app{"Blockiness, temporal distortion and error-block analysis for decoded video", "blockscope"};
  app.require_subcommand(1);

  auto *measure = app.add_subcommand("measure", "Per-frame blockiness scores");
  add_input(*measure, o);
  add_output(*measure, o, "csv");
  add_blockiness(*measure, o);

  auto *detect = app.add_subcommand("detect", "Flag distorted frames from temporal score statistics");
  add_input(*detect, o);
  add_output(*detect, o, "json");
  add_blockiness(*detect, o);
  add_detection(*detect, o);

  auto *seba = app.add_subcommand("seba", "Classify blocks and measure pattern orientation and period");
  add_input(*seba, o);
  add_output(*seba, o, "json");
  add_seba(*seba, o);

  auto *synth = app.add_subcommand("synth", "Write a synthetic corpus and its ground truth");
  synth->add_option("--out", o.out, "Output file (directory for image-sequence)")->required();
  synth->add_option("--format", o.format, "y4m | raw-yuv | image-sequence")->capture_default_str();
  synth->add_option("--pixel-layout", o.layout, "Raw planar layout")->capture_default_str();
  synth->add_option("--width", o.width, "Frame width [64]");
  synth->add_option("--height", o.height, "Frame height [64]");
  synth->add_option("--frames", o.frames, "Sequence length")->capture_default_str();
  synth->add_option("--distorted", o.distorted, "Comma-separated distorted frame indices")->capture_default_str();
  synth->add_option("--kind", o.kind, "block-grid | stripes | checkerboard | burst-noise")->capture_default_str();
  synth->add_option("--period", o.period, "Pattern period in pixels")->capture_default_str();
  synth->add_option("--phase", o.phase, "Pattern phase in pixels")->capture_default_str();
  synth->add_option("--orientation", o.orientation, "Stripe direction in degrees")->capture_default_str();
  synth->add_option("--amplitude", o.amplitude, "Pattern amplitude")->capture_default_str();
  synth->add_option("--seed", o.seed, "Noise seed")->capture_default_str();
  synth->add_option("--ground-truth", o.ground_truth, "Sidecar path [<out>.truth.json]");

  auto *evaluate = app.add_subcommand("evaluate", "Precision, recall and efficiency against ground truth");
  evaluate->add_option("--input", o.input, "Video to run detection on");
  evaluate->add_option("--report", o.report_in, "Existing JSON detection report instead of --input");
  evaluate->add_option("--format", o.format, "y4m | raw-yuv | image-sequence")->capture_default_str();
  evaluate->add_option("--width", o.width, "Frame width");
  evaluate->add_option("--height", o.height, "Frame height");
  evaluate->add_option("--pixel-layout", o.layout, "Raw planar layout")->capture_default_str();
  evaluate->add_option("--jobs", o.jobs, "Worker threads, 0 for all cores")->capture_default_str();
  add_output(*evaluate, o, "json");
  add_blockiness(*evaluate, o);
  add_detection(*evaluate, o);
  evaluate->get_option("--ground-truth")->required();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    if (args.empty()) {
      err << app.help();
    } else {
      err << "error: " << e.what() << "\n";
    }
    return kExitUsage;
  }
  if (o.report_format.empty()) {
    o.report_format = *measure ? "csv" : "json";
  }

  try {
    if (*measure) {
      return run_measure(o, out);
    }
    if (*detect) {
      return run_detect(o, out);
    }
    if (*seba) {
      return run_seba(o, out);
    }
    if (*synth) {
      return run_synth(o, out);
    }
    return run_evaluate(o, out);
  } catch (const IoError &e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError &e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace blockscope
