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

#ifndef BLOCKSCOPE_FRAME_HPP_
#define BLOCKSCOPE_FRAME_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace blockscope
{

/// Smallest frame side that still has an interior for a 3x3 kernel.
inline constexpr int kMinFrameSide = 3;

/// One frame of 8-bit luminance, row-major. Immutable once built.
class LumaFrame
{
public:
  /// Throws std::invalid_argument if the geometry is below 3x3 or the
  /// sample count does not equal width * height.
  LumaFrame(int width, int height, std::vector<std::uint8_t> samples, std::int64_t frame_index = 0);

  static LumaFrame filled(int width, int height, std::uint8_t value, std::int64_t frame_index = 0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::int64_t frame_index() const noexcept { return frame_index_; }

  std::uint8_t at(int x, int y) const noexcept
  {
    return samples_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)];
  }

  std::span<const std::uint8_t> samples() const noexcept { return samples_; }
  std::span<const std::uint8_t> row(int y) const noexcept
  {
    return std::span<const std::uint8_t>(samples_).subspan(
      static_cast<std::size_t>(y) * static_cast<std::size_t>(width_), static_cast<std::size_t>(width_));
  }

  LumaFrame with_index(std::int64_t frame_index) const;

  friend bool operator==(const LumaFrame &, const LumaFrame &) = default;

private:
  int width_;
  int height_;
  std::int64_t frame_index_;
  std::vector<std::uint8_t> samples_;
};

}  // namespace blockscope

#endif  // BLOCKSCOPE_FRAME_HPP_
