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

#ifndef BLOCKSCOPE_GRADIENT_HPP_
#define BLOCKSCOPE_GRADIENT_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "blockscope/frame.hpp"

namespace blockscope
{

inline constexpr int kKirschDirections = 8;
inline constexpr int kDirectionBins = 60;
inline constexpr double kBinWidthDegrees = 6.0;

using KirschMask = std::array<std::array<int, 3>, 3>;

/// The eight compass masks, index 0 holding mask k = 1 (north).
const std::array<KirschMask, kKirschDirections> &kirsch_masks();

struct GradientField
{
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> magnitude;
  // Winning mask k in 1..8; lowest k on ties.
  std::vector<std::uint8_t> direction;

  std::int32_t magnitude_at(int x, int y) const
  {
    return magnitude[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
  int direction_at(int x, int y) const
  {
    return direction[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
};

/// 8-direction compass gradient with edge-replicated borders.
GradientField kirsch_gradient(const LumaFrame &frame);

struct SobelField
{
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> sx;
  std::vector<std::int32_t> sy;

  std::size_t index(int x, int y) const
  {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  }
  double magnitude(int x, int y) const;
  /// Degrees in [0, 360); nullopt where both components are zero.
  std::optional<double> phase(int x, int y) const;
};

/// Sobel components with y pointing down the frame, edge-replicated borders.
SobelField sobel_gradient(const LumaFrame &frame);

class DirectionBin
{
public:
  /// Throws std::out_of_range outside [0, 59].
  explicit DirectionBin(int index);
  int index() const noexcept { return index_; }
  auto operator<=>(const DirectionBin &) const = default;

private:
  int index_;
};

/// Phase in degrees to one of 60 six-degree bins. Throws std::domain_error
/// for non-finite or out-of-range phases.
DirectionBin quantize_direction(double phase_degrees);

/// Undefined phase (zero gradient) maps to no bin.
std::optional<DirectionBin> quantize_direction(std::optional<double> phase_degrees);

/// Phase of a gradient vector in [0, 360), nullopt for the zero vector.
std::optional<double> gradient_phase(std::int32_t sx, std::int32_t sy);

/// Bin of a gradient vector, -1 for the zero vector.
int direction_bin(std::int32_t sx, std::int32_t sy);

}  // namespace blockscope

#endif  // BLOCKSCOPE_GRADIENT_HPP_
