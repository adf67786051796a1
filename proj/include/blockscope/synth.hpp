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

#ifndef BLOCKSCOPE_SYNTH_HPP_
#define BLOCKSCOPE_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "blockscope/frame.hpp"

namespace blockscope
{

enum class PatternKind { block_grid, stripes, checkerboard, burst_noise };

std::optional<PatternKind> parse_pattern_kind(std::string_view tag);
std::string_view to_string(PatternKind kind);

struct PatternSpec
{
  PatternKind kind = PatternKind::block_grid;
  int period = 8;
  // Checkerboard only; defaults to period.
  std::optional<int> period_y;
  int phase = 0;
  // Visual line direction, counter-clockwise from horizontal. Stripes only.
  double orientation = 0.0;
  double amplitude = 16.0;
  int width = 64;
  int height = 64;

  /// Throws std::invalid_argument unless period >= 2, amplitude in (0, 255],
  /// orientation in [0, 90] and the geometry is at least 3x3.
  void validate() const;
};

/// Overlays the pattern on a frame of the spec's geometry, clamping to
/// [0, 255]. The seed only matters for burst-noise.
///
///   block-grid    alternate blocks of `period` columns are raised by the
///                 amplitude, with the column at each boundary set halfway
///   stripes       round(A * (0.5 + 0.5 * sin(2 pi (d - phase) / period)))
///                 where d = x sin(theta) + y cos(theta)
///   checkerboard  squares of half a period raised by the amplitude
///   burst-noise   one uniform offset in [-A, A] per period x period block
LumaFrame inject_block_pattern(const LumaFrame &base, const PatternSpec &spec, std::uint64_t seed = 0);

/// Noise-free scene used under every synthetic sequence: a gentle ramp with
/// a brighter rectangle in the middle.
LumaFrame make_scene(int width, int height);

/// Scene plus uniform integer noise in [-amplitude, amplitude].
LumaFrame make_clean_frame(int width, int height, std::uint64_t seed, std::int64_t frame_index, int noise_amplitude = 2);

struct TestSequence
{
  std::vector<LumaFrame> frames;
  std::set<std::int64_t> truth;
};

/// Clean frames with the pattern injected at the listed indices. Throws
/// std::invalid_argument if an index falls outside [0, length).
TestSequence make_test_sequence(
  std::int64_t length, const std::set<std::int64_t> &distorted, const PatternSpec &spec, std::uint64_t seed);

/// JSON sidecar: {"length": n, "distorted": [...], ...generation parameters}.
void write_ground_truth_sidecar(
  const std::filesystem::path &path,
  std::int64_t length,
  const std::set<std::int64_t> &truth,
  const PatternSpec &spec,
  std::uint64_t seed);

}  // namespace blockscope

#endif  // BLOCKSCOPE_SYNTH_HPP_
