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

#include "blockscope/blockiness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace blockscope
{
namespace
{

int argmax_lowest(const std::vector<double> &values)
{
  // std::max_element returns the first of equal maxima.
  return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

void check_scale(double scale)
{
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("scale must be positive and finite");
  }
}

}  // namespace

double BucketVector::total() const { return std::accumulate(theta.begin(), theta.end(), 0.0); }

BucketVector accumulate_buckets(const GradientField &field, int delta, int clip_margin, BucketAxis axis)
{
  if (delta < 2) {
    throw std::invalid_argument("delta must be at least 2");
  }
  if (clip_margin < 0) {
    throw std::invalid_argument("clip margin must be non-negative");
  }
  const bool columns = axis == BucketAxis::columns;
  const int along = columns ? field.width : field.height;
  const int across = columns ? field.height : field.width;
  const int span = along - 2 * clip_margin;
  if (span < delta || across - 2 * clip_margin < 1) {
    throw std::invalid_argument(
      "delta " + std::to_string(delta) + " exceeds the clipped extent " + std::to_string(std::max(span, 0)));
  }
  const int begin = clip_margin;
  const int end = clip_margin + (span / delta) * delta;

  const int x0 = columns ? begin : clip_margin;
  const int x1 = columns ? end : field.width - clip_margin;
  const int y0 = columns ? clip_margin : begin;
  const int y1 = columns ? field.height - clip_margin : end;
  std::vector<std::int64_t> sums(static_cast<std::size_t>(delta), 0);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      sums[static_cast<std::size_t>((columns ? x : y) % delta)] += field.magnitude_at(x, y);
    }
  }
  BucketVector out;
  out.delta = delta;
  out.theta.assign(sums.begin(), sums.end());
  return out;
}

BlockinessScore blockiness_measure(const BucketVector &buckets, double scale)
{
  check_scale(scale);
  if (buckets.theta.empty()) {
    throw std::invalid_argument("empty bucket vector");
  }
  const int k = argmax_lowest(buckets.theta);
  const double gap = buckets.theta[static_cast<std::size_t>(k)] - buckets.mean_theta();
  return {std::max(gap, 0.0) * scale, k};
}

BlockinessScore offset_corrected_measure(const BucketVector &buckets, double scale)
{
  check_scale(scale);
  if (buckets.theta.empty()) {
    throw std::invalid_argument("empty bucket vector");
  }
  const int k = argmax_lowest(buckets.theta);
  const int opposite = (k + buckets.delta / 2) % buckets.delta;
  const double gap = buckets.theta[static_cast<std::size_t>(k)] - buckets.theta[static_cast<std::size_t>(opposite)];
  return {std::max(gap, 0.0) * scale, k};
}

void BlockinessConfig::validate() const
{
  if (delta < 2) {
    throw std::invalid_argument("delta must be at least 2");
  }
  check_scale(scale);
  if (clip_margin < 0) {
    throw std::invalid_argument("clip margin must be non-negative");
  }
}

BlockinessScore measure_frame(const LumaFrame &frame, const BlockinessConfig &cfg)
{
  cfg.validate();
  const auto field = kirsch_gradient(frame);
  const auto buckets =
    accumulate_buckets(field, cfg.delta, cfg.clip_margin, cfg.row_buckets ? BucketAxis::rows : BucketAxis::columns);
  return cfg.offset_grid ? offset_corrected_measure(buckets, cfg.scale) : blockiness_measure(buckets, cfg.scale);
}

}  // namespace blockscope
