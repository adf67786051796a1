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

#include "blockscope/frame.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace blockscope
{

LumaFrame::LumaFrame(int width, int height, std::vector<std::uint8_t> samples, std::int64_t frame_index)
: width_(width), height_(height), frame_index_(frame_index), samples_(std::move(samples))
{
  if (width_ < kMinFrameSide || height_ < kMinFrameSide) {
    throw std::invalid_argument(
      "frame geometry " + std::to_string(width_) + "x" + std::to_string(height_) + " is below 3x3");
  }
  if (samples_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw std::invalid_argument(
      "frame holds " + std::to_string(samples_.size()) + " samples, expected " +
      std::to_string(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)));
  }
}

LumaFrame LumaFrame::filled(int width, int height, std::uint8_t value, std::int64_t frame_index)
{
  if (width < 0 || height < 0) {
    throw std::invalid_argument("negative frame geometry");
  }
  return LumaFrame(
    width, height,
    std::vector<std::uint8_t>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), value),
    frame_index);
}

LumaFrame LumaFrame::with_index(std::int64_t frame_index) const
{
  LumaFrame copy = *this;
  copy.frame_index_ = frame_index;
  return copy;
}

}  // namespace blockscope
