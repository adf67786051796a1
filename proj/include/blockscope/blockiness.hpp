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

#ifndef BLOCKSCOPE_BLOCKINESS_HPP_
#define BLOCKSCOPE_BLOCKINESS_HPP_

#include <vector>

#include "blockscope/frame.hpp"
#include "blockscope/gradient.hpp"

namespace blockscope
{

struct BucketVector
{
  int delta = 0;
  std::vector<double> theta;

  double total() const;
  double mean_theta() const { return total() / static_cast<double>(delta); }
};

enum class BucketAxis { columns, rows };

/// Sums gradient magnitudes into delta buckets keyed by absolute column
/// (or row) index mod delta. clip_margin pixels are dropped on every side,
/// then the bucketed extent is truncated to a whole number of blocks.
/// Throws std::invalid_argument when delta < 2 or the clipped extent is
/// narrower than one block.
BucketVector accumulate_buckets(
  const GradientField &field, int delta, int clip_margin = 0, BucketAxis axis = BucketAxis::columns);

struct BlockinessScore
{
  double value = 0.0;
  int boundary_offset = 0;

  bool operator==(const BlockinessScore &) const = default;
};

/// (max - mean) * scale, boundary at the first maximal bucket.
BlockinessScore blockiness_measure(const BucketVector &buckets, double scale = 1.0);

/// Contrast between the boundary bucket and the bucket half a block away.
/// Clamped at zero so the score stays non-negative.
BlockinessScore offset_corrected_measure(const BucketVector &buckets, double scale = 1.0);

struct BlockinessConfig
{
  int delta = 8;
  double scale = 1.0;
  int clip_margin = 0;
  bool offset_grid = false;
  bool row_buckets = false;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

BlockinessScore measure_frame(const LumaFrame &frame, const BlockinessConfig &cfg = {});

}  // namespace blockscope

#endif  // BLOCKSCOPE_BLOCKINESS_HPP_
