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

#ifndef BLOCKSCOPE_FRAME_IO_HPP_
#define BLOCKSCOPE_FRAME_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "blockscope/frame.hpp"

namespace blockscope
{

enum class SourceFormat { y4m, raw_yuv, image_sequence };

// Planar layouts understood for headerless input. Only the Y plane is kept.
enum class PixelLayout { yuv420, yuv422, yuv444, y_only };

std::optional<SourceFormat> parse_source_format(std::string_view tag);
std::optional<PixelLayout> parse_pixel_layout(std::string_view tag);
std::string_view to_string(SourceFormat format);
std::string_view to_string(PixelLayout layout);

/// Bytes per frame for a planar layout (luma plus both chroma planes).
std::size_t frame_stride(int width, int height, PixelLayout layout);

/// Where frames come from. For raw-yuv the geometry is mandatory; for the
/// self-describing formats an explicit geometry is optional and, when
/// given, must agree with the file.
struct SourceSpec
{
  std::filesystem::path path;
  SourceFormat format = SourceFormat::y4m;
  std::optional<int> width;
  std::optional<int> height;
  PixelLayout layout = PixelLayout::yuv420;

  /// Throws FormatError when the geometry fields are inconsistent with the format.
  void validate() const;
};

/// Sequential frame producer. Frames come out in presentation order with
/// frame_index counting from 0.
class FrameReader
{
public:
  explicit FrameReader(const SourceSpec &spec);
  ~FrameReader();
  FrameReader(FrameReader &&) noexcept;
  FrameReader &operator=(FrameReader &&) noexcept;

  /// Next frame, or nullopt at end of stream.
  std::optional<LumaFrame> next();

  int width() const noexcept;
  int height() const noexcept;

  /// Frame count known up front (raw and image sequences); nullopt for y4m.
  std::optional<std::int64_t> frame_count() const noexcept;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<LumaFrame> load_frame_sequence(const SourceSpec &spec);

/// Writers used by the synthesizer and tests. Chroma planes, when the layout
/// has them, are filled with the neutral value 128.
void write_raw_frames(
  const std::filesystem::path &path, std::span<const LumaFrame> frames, PixelLayout layout);
void write_y4m(const std::filesystem::path &path, std::span<const LumaFrame> frames);
void write_pgm(const std::filesystem::path &path, const LumaFrame &frame);

}  // namespace blockscope

#endif  // BLOCKSCOPE_FRAME_IO_HPP_
