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

#ifndef BLOCKSCOPE_SEBA_HPP_
#define BLOCKSCOPE_SEBA_HPP_

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "blockscope/frame.hpp"
#include "blockscope/gradient.hpp"
#include "blockscope/report.hpp"

namespace blockscope
{

inline constexpr int kQuadrantBins = 15;
inline constexpr int kMaxSumBin = 2 * (kDirectionBins - 1);

struct Region
{
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool operator==(const Region &) const = default;
};

/// Whole-field region.
Region full_region(int width, int height);

/// Throws std::out_of_range when the region is empty or leaves the field.
void check_region(const Region &region, int width, int height);

struct EmsTable
{
  std::array<std::int64_t, kDirectionBins> x{};
  std::array<std::int64_t, kDirectionBins> y{};
  std::array<double, kDirectionBins> magnitude{};
};

EmsTable accumulate_ems(const SobelField &field, const Region &region);

struct GdvTable
{
  // Refined direction per bin in [0, 360); nullopt where the bin is empty.
  std::array<std::optional<double>, kDirectionBins> degrees{};
  std::bitset<kDirectionBins> dominant;
};

struct DirectionHistogram
{
  std::array<std::int64_t, kDirectionBins> bins{};
  std::int64_t total = 0;

  bool operator==(const DirectionHistogram &) const = default;
};

/// Counts every defined pixel direction in the region.
DirectionHistogram accumulate_histogram(const SobelField &field, const Region &region);

using BinMask = std::bitset<kDirectionBins>;

/// Counts only pixels whose bin is in `keep`. Pixels are first screened
/// through a pseudo-angle lookup table, so the arctangent runs only for
/// candidates. Kept bins match the full histogram exactly.
DirectionHistogram accumulate_histogram(const SobelField &field, const Region &region, const BinMask &keep);

struct ClassifyConfig
{
  double th_fix = 0.2;
  int texture_count = 4;
  double ems_floor = 1.0;

  /// Throws std::invalid_argument unless th_fix in [0, 1), texture_count >= 2, ems_floor >= 0.
  void validate() const;
};

struct Classification
{
  BlockClass label = BlockClass::uniform;
  int dominant_count = 0;
  double threshold = 0.0;
  GdvTable gdv;
};

/// Dominant bins have EMS at least (1 - th_fix) of the strongest bin, at
/// least the absolute floor, and a non-empty histogram count.
Classification classify_block(const EmsTable &ems, const DirectionHistogram &hist, const ClassifyConfig &cfg = {});

struct PatternOrientation
{
  // 0..15; 15 is the horizontal reading of shift 0.
  int high_bin = 0;
  double offset_degrees = 90.0;
  std::array<int, 4> significant_bins{};
};

/// Builds the orientation record for a high bin.
PatternOrientation orientation_from_bin(int high_bin);

/// The fixed 12-bin set without orientation, else ±1 bins around the four
/// significant bins of the orientation.
BinMask significant_bins(const std::optional<PatternOrientation> &orientation = std::nullopt);

DirectionHistogram reduce_bins(const DirectionHistogram &hist, const std::optional<PatternOrientation> &orientation);

using CircularMask = std::array<double, kQuadrantBins>;

/// Indicator on the first entry: sums the four quadrant-aligned bins per shift.
CircularMask default_mask();

/// Per-shift scores for s in 0..14.
std::array<double, kQuadrantBins> rotation_scores(const DirectionHistogram &hist, const CircularMask &mask);

/// Best circular shift of the histogram. nullopt for an empty histogram.
std::optional<PatternOrientation> rotation_offset(const DirectionHistogram &hist, const CircularMask &mask = default_mask());

struct Plane
{
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const
  {
    return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
  double &at(int x, int y)
  {
    return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
  static Plane filled(int width, int height, double value);
  bool operator==(const Plane &) const = default;
};

Plane extract_plane(const LumaFrame &frame, const Region &region);

struct NeighborBlocks
{
  std::optional<Plane> left;
  std::optional<Plane> up;
  std::optional<Plane> right;
  std::optional<Plane> down;
  std::optional<Plane> up_left;
  std::optional<Plane> up_right;
  std::optional<Plane> down_left;
  std::optional<Plane> down_right;
};

/// Same-sized neighbours of a block that lie fully inside the frame.
NeighborBlocks neighbors_of(const LumaFrame &frame, const Region &block);

/// Fill estimate for a missing uniform block of the given size from its
/// neighbours. Top rows come from the upper neighbour and bottom rows from
/// the lower one, left columns from the left neighbour and right columns
/// from the right one, and the two imitations are averaged. Odd sizes give
/// the extra row or column to the first half. A lone vertical or
/// horizontal neighbour is copied whole; missing lateral neighbours fall
/// back to the mean of their diagonal neighbours. Throws
/// std::invalid_argument if nothing usable remains or sizes disagree.
Plane estimate_uniform_block(const NeighborBlocks &neighbors, int width, int height);

/// Quantized directions, -1 where undefined.
struct DirectionGrid
{
  int width = 0;
  int height = 0;
  std::vector<std::int8_t> bins;

  int at(int x, int y) const
  {
    return bins[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
};

/// Direction grid of a region. With exclude_border, pixels on the frame's
/// outermost ring (whose gradients come from replicated samples) are undefined,
/// as are pixels whose Sobel magnitude is below min_magnitude.
DirectionGrid direction_grid(
  const SobelField &field, const Region &region, bool exclude_border = true, double min_magnitude = 0.0);

struct MatchResult
{
  std::int64_t score = 0;
  // Defined pixels of the unshifted grid inside the overlap.
  std::int64_t reference = 0;
  std::array<std::int64_t, kMaxSumBin + 1> sum_histogram{};
};

/// Compares grid(x, y) with grid(x - dx, y - dy) over their overlap. Throws
/// std::invalid_argument when the overlap is empty.
MatchResult matching_score(const DirectionGrid &grid, int dx, int dy);

struct PatternGeometry
{
  std::optional<int> period_width;
  std::optional<int> period_height;
  // Matching score normalized by the overlap reference, shifts 1..max_shift.
  std::vector<double> width_curve;
  std::vector<double> height_curve;
};

inline constexpr double kPeakTolerance = 0.9;

/// First shift where the normalized score curve, having dipped below the
/// tolerance, returns to a local maximum at or above it.
std::optional<int> find_period(std::span<const double> curve, double tolerance = kPeakTolerance);

/// Throws std::invalid_argument when max_shift is not below both grid extents
/// or is less than 1, or the tolerance is outside (0, 1].
PatternGeometry pattern_dimensions(const DirectionGrid &grid, int max_shift, double tolerance = kPeakTolerance);

struct SebaConfig
{
  ClassifyConfig classify;
  CircularMask mask = default_mask();
  // 0 analyzes the whole frame as one region.
  int block_size = 0;
  int max_shift = 64;
  // Gradients weaker than this carry no direction in the period search, so
  // sensor noise and smooth shading do not swamp the pattern edges.
  double match_floor = 32.0;
  // Noise pushes axis-aligned edges across bin boundaries; lower this for noisy content.
  double peak_tolerance = kPeakTolerance;

  void validate() const;
};

struct RegionAnalysis
{
  BlockSummary summary;
  DirectionHistogram histogram;
};

RegionAnalysis analyze_region(const SobelField &field, const Region &region, std::int64_t frame_index, const SebaConfig &cfg);

/// Tiles the frame in row-major block order; partial edge blocks are skipped.
std::vector<RegionAnalysis> analyze_frame(const LumaFrame &frame, const SebaConfig &cfg);

/// One row per block: frame_index,x,y,bin_0..bin_59.
void write_histogram_csv(std::ostream &out, std::span<const RegionAnalysis> blocks);

}  // namespace blockscope

#endif  // BLOCKSCOPE_SEBA_HPP_
