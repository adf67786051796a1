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

#include "blockscope/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "blockscope/errors.hpp"

namespace blockscope
{
namespace
{

// Generator output mapped to [lo, hi] by modulo. The tiny bias is accepted
// so that the stream is identical on every standard library.
class Noise
{
public:
  explicit Noise(std::initializer_list<std::uint32_t> key)
  {
    std::seed_seq seq(key);
    engine_.seed(seq);
  }

  int uniform(int lo, int hi)
  {
    const auto span = static_cast<std::uint32_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }

private:
  std::mt19937 engine_;
};

std::uint32_t low32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t high32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

std::uint8_t clamp_sample(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

std::optional<PatternKind> parse_pattern_kind(std::string_view tag)
{
  for (auto k : {PatternKind::block_grid, PatternKind::stripes, PatternKind::checkerboard, PatternKind::burst_noise}) {
    if (to_string(k) == tag) {
      return k;
    }
  }
  return std::nullopt;
}

std::string_view to_string(PatternKind kind)
{
  switch (kind) {
    case PatternKind::block_grid:
      return "block-grid";
    case PatternKind::stripes:
      return "stripes";
    case PatternKind::checkerboard:
      return "checkerboard";
    case PatternKind::burst_noise:
      return "burst-noise";
  }
  return "unknown";
}

void PatternSpec::validate() const
{
  if (period < 2 || (period_y && *period_y < 2)) {
    throw std::invalid_argument("pattern period must be at least 2");
  }
  if (!(amplitude > 0.0 && amplitude <= 255.0)) {
    throw std::invalid_argument("pattern amplitude must lie in (0, 255]");
  }
  if (!(orientation >= 0.0 && orientation <= 90.0)) {
    throw std::invalid_argument("pattern orientation must lie in [0, 90]");
  }
  if (width < kMinFrameSide || height < kMinFrameSide) {
    throw std::invalid_argument("pattern geometry must be at least 3x3");
  }
}

LumaFrame inject_block_pattern(const LumaFrame &base, const PatternSpec &spec, std::uint64_t seed)
{
  spec.validate();
  if (base.width() != spec.width || base.height() != spec.height) {
    throw std::invalid_argument("pattern geometry does not match the base frame");
  }
  const int w = spec.width;
  const int h = spec.height;
  const double a = spec.amplitude;
  const int p = spec.period;
  std::vector<double> offset(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0);
  auto at = [&](int x, int y) -> double & {
    return offset[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)];
  };

  switch (spec.kind) {
    case PatternKind::block_grid:
      for (int x = 0; x < w; ++x) {
        const int rel = x - spec.phase;
        const int block = floor_div(rel, p);
        const double v = rel - block * p == 0 ? a / 2.0 : (block % 2 == 0 ? 0.0 : a);
        for (int y = 0; y < h; ++y) {
          at(x, y) = v;
        }
      }
      break;
    case PatternKind::stripes: {
      const double t = spec.orientation * std::numbers::pi / 180.0;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double d = x * std::sin(t) + y * std::cos(t);
          at(x, y) = std::round(a * (0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * (d - spec.phase) / p)));
        }
      }
      break;
    }
    case PatternKind::checkerboard: {
      const int py = spec.period_y.value_or(p);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const int cx = floor_div(2 * (x - spec.phase), p);
          const int cy = floor_div(2 * (y - spec.phase), py);
          at(x, y) = ((cx + cy) % 2 + 2) % 2 == 1 ? a : 0.0;
        }
      }
      break;
    }
    case PatternKind::burst_noise: {
      Noise noise{low32(seed), high32(seed), 0x6275u};
      const int amp = static_cast<int>(std::lround(a));
      // Block indices start at the same value on both axes.
      const int first = floor_div(-spec.phase, p);
      const int cols = floor_div(w - 1 - spec.phase, p) - first + 1;
      const int rows = floor_div(h - 1 - spec.phase, p) - first + 1;
      std::vector<double> levels(static_cast<std::size_t>(cols * rows));
      for (auto &level : levels) {
        level = noise.uniform(-amp, amp);
      }
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const int bx = floor_div(x - spec.phase, p) - first;
          const int by = floor_div(y - spec.phase, p) - first;
          at(x, y) = levels[static_cast<std::size_t>(by * cols + bx)];
        }
      }
      break;
    }
  }

  std::vector<std::uint8_t> samples(offset.size());
  const auto src = base.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = clamp_sample(src[i] + offset[i]);
  }
  return LumaFrame(w, h, std::move(samples), base.frame_index());
}

LumaFrame make_scene(int width, int height)
{
  std::vector<std::uint8_t> samples(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 80.0 + 48.0 * x / width + 24.0 * y / height;
      if (x >= width / 4 && x < 3 * width / 4 && y >= height / 3 && y < 2 * height / 3) {
        v += 40.0;
      }
      samples[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] =
        clamp_sample(v);
    }
  }
  return LumaFrame(width, height, std::move(samples));
}

LumaFrame make_clean_frame(int width, int height, std::uint64_t seed, std::int64_t frame_index, int noise_amplitude)
{
  const auto scene = make_scene(width, height);
  Noise noise{low32(seed), high32(seed), low32(static_cast<std::uint64_t>(frame_index))};
  std::vector<std::uint8_t> samples(scene.samples().begin(), scene.samples().end());
  if (noise_amplitude > 0) {
    for (auto &s : samples) {
      s = clamp_sample(s + noise.uniform(-noise_amplitude, noise_amplitude));
    }
  }
  return LumaFrame(width, height, std::move(samples), frame_index);
}

TestSequence make_test_sequence(
  std::int64_t length, const std::set<std::int64_t> &distorted, const PatternSpec &spec, std::uint64_t seed)
{
  spec.validate();
  if (length < 0) {
    throw std::invalid_argument("sequence length must be non-negative");
  }
  for (auto d : distorted) {
    if (d < 0 || d >= length) {
      throw std::invalid_argument("distorted frame " + std::to_string(d) + " outside the sequence");
    }
  }
  TestSequence out;
  out.truth = distorted;
  out.frames.reserve(static_cast<std::size_t>(length));
  for (std::int64_t i = 0; i < length; ++i) {
    auto frame = make_clean_frame(spec.width, spec.height, seed, i);
    if (distorted.count(i)) {
      frame = inject_block_pattern(frame, spec, seed ^ (static_cast<std::uint64_t>(i) << 20));
    }
    out.frames.push_back(std::move(frame));
  }
  return out;
}

void write_ground_truth_sidecar(
  const std::filesystem::path &path,
  std::int64_t length,
  const std::set<std::int64_t> &truth,
  const PatternSpec &spec,
  std::uint64_t seed)
{
  nlohmann::ordered_json doc;
  doc["length"] = length;
  doc["distorted"] = std::vector<std::int64_t>(truth.begin(), truth.end());
  doc["seed"] = seed;
  doc["kind"] = std::string(to_string(spec.kind));
  doc["period"] = spec.period;
  doc["phase"] = spec.phase;
  doc["amplitude"] = spec.amplitude;
  doc["width"] = spec.width;
  doc["height"] = spec.height;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

}  // namespace blockscope
