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

#include "blockscope/frame_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "blockscope/errors.hpp"

namespace blockscope
{
namespace
{

std::size_t chroma_plane_size(int width, int height, PixelLayout layout)
{
  const auto w = static_cast<std::size_t>(width);
  const auto h = static_cast<std::size_t>(height);
  switch (layout) {
    case PixelLayout::yuv420:
      return ((w + 1) / 2) * ((h + 1) / 2);
    case PixelLayout::yuv422:
      return ((w + 1) / 2) * h;
    case PixelLayout::yuv444:
      return w * h;
    case PixelLayout::y_only:
      return 0;
  }
  return 0;
}

std::optional<int> parse_int(std::string_view text)
{
  int value = 0;
  const auto *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    return std::nullopt;
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path &path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

void check_declared_geometry(const SourceSpec &spec, int width, int height, std::string_view what)
{
  if ((spec.width && *spec.width != width) || (spec.height && *spec.height != height)) {
    throw FormatError(
      "declared geometry conflicts with " + std::string(what) + " (" + std::to_string(width) + "x" +
      std::to_string(height) + ")");
  }
}

// Reads one whitespace/comment separated token from a PNM header.
std::string pnm_token(std::istream &in)
{
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') {
        c = in.get();
      }
    } else if (std::isspace(c)) {
      if (!token.empty()) {
        break;
      }
    } else {
      token.push_back(static_cast<char>(c));
    }
    c = in.get();
  }
  return token;
}

LumaFrame read_pgm(const std::filesystem::path &path, std::int64_t index)
{
  auto in = open_input(path);
  const std::string magic = pnm_token(in);
  if (magic != "P5" && magic != "P2") {
    throw FormatError("'" + path.string() + "' is not a grayscale PGM (P2/P5)");
  }
  const auto width = parse_int(pnm_token(in));
  const auto height = parse_int(pnm_token(in));
  const auto maxval = parse_int(pnm_token(in));
  if (!width || !height || !maxval || *width <= 0 || *height <= 0) {
    throw FormatError("bad PGM header in '" + path.string() + "'");
  }
  if (*maxval < 1 || *maxval > 255) {
    throw FormatError("PGM '" + path.string() + "' is not 8-bit");
  }
  std::vector<std::uint8_t> samples(static_cast<std::size_t>(*width) * static_cast<std::size_t>(*height));
  if (magic == "P5") {
    in.read(reinterpret_cast<char *>(samples.data()), static_cast<std::streamsize>(samples.size()));
    if (in.gcount() != static_cast<std::streamsize>(samples.size())) {
      throw FormatError("PGM '" + path.string() + "' is truncated");
    }
  } else {
    for (auto &s : samples) {
      const auto v = parse_int(pnm_token(in));
      if (!v || *v < 0 || *v > *maxval) {
        throw FormatError("bad sample in PGM '" + path.string() + "'");
      }
      s = static_cast<std::uint8_t>(*v);
    }
  }
  return LumaFrame(*width, *height, std::move(samples), index);
}

}  // namespace

std::optional<SourceFormat> parse_source_format(std::string_view tag)
{
  if (tag == "y4m") {
    return SourceFormat::y4m;
  }
  if (tag == "raw-yuv" || tag == "raw") {
    return SourceFormat::raw_yuv;
  }
  if (tag == "image-sequence" || tag == "pgm") {
    return SourceFormat::image_sequence;
  }
  return std::nullopt;
}

std::optional<PixelLayout> parse_pixel_layout(std::string_view tag)
{
  if (tag == "420" || tag == "yuv420") {
    return PixelLayout::yuv420;
  }
  if (tag == "422" || tag == "yuv422") {
    return PixelLayout::yuv422;
  }
  if (tag == "444" || tag == "yuv444") {
    return PixelLayout::yuv444;
  }
  if (tag == "y-only" || tag == "y" || tag == "gray") {
    return PixelLayout::y_only;
  }
  return std::nullopt;
}

std::string_view to_string(SourceFormat format)
{
  switch (format) {
    case SourceFormat::y4m:
      return "y4m";
    case SourceFormat::raw_yuv:
      return "raw-yuv";
    case SourceFormat::image_sequence:
      return "image-sequence";
  }
  return "unknown";
}

std::string_view to_string(PixelLayout layout)
{
  switch (layout) {
    case PixelLayout::yuv420:
      return "420";
    case PixelLayout::yuv422:
      return "422";
    case PixelLayout::yuv444:
      return "444";
    case PixelLayout::y_only:
      return "y-only";
  }
  return "unknown";
}

std::size_t frame_stride(int width, int height, PixelLayout layout)
{
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) +
         2 * chroma_plane_size(width, height, layout);
}

void SourceSpec::validate() const
{
  if (format == SourceFormat::raw_yuv) {
    if (!width || !height) {
      throw FormatError("raw-yuv input needs an explicit width and height");
    }
  }
  if ((width && *width < kMinFrameSide) || (height && *height < kMinFrameSide)) {
    throw FormatError("frame geometry must be at least 3x3");
  }
}

struct FrameReader::Impl
{
  SourceSpec spec;
  std::ifstream in;
  int width = 0;
  int height = 0;
  PixelLayout layout = PixelLayout::y_only;
  std::optional<std::int64_t> count;
  std::int64_t next_index = 0;
  std::vector<std::filesystem::path> images;

  void open_raw()
  {
    width = *spec.width;
    height = *spec.height;
    layout = spec.layout;
    std::error_code ec;
    const auto size = std::filesystem::file_size(spec.path, ec);
    if (ec) {
      throw IoError("cannot stat '" + spec.path.string() + "': " + ec.message());
    }
    const auto stride = frame_stride(width, height, layout);
    if (size % stride != 0) {
      throw FormatError(
        "raw file size " + std::to_string(size) + " is not a multiple of the frame stride " +
        std::to_string(stride));
    }
    count = static_cast<std::int64_t>(size / stride);
    in = open_input(spec.path);
  }

  void open_y4m()
  {
    in = open_input(spec.path);
    std::string header;
    if (!std::getline(in, header)) {
      throw FormatError("empty y4m file '" + spec.path.string() + "'");
    }
    std::istringstream tokens(header);
    std::string token;
    tokens >> token;
    if (token != "YUV4MPEG2") {
      throw FormatError("'" + spec.path.string() + "' lacks the YUV4MPEG2 signature");
    }
    std::optional<int> w;
    std::optional<int> h;
    layout = PixelLayout::yuv420;
    while (tokens >> token) {
      const std::string_view value = std::string_view(token).substr(1);
      switch (token.front()) {
        case 'W':
          w = parse_int(value);
          break;
        case 'H':
          h = parse_int(value);
          break;
        case 'C':
          if (value == "420" || value == "420jpeg" || value == "420paldv" || value == "420mpeg2") {
            layout = PixelLayout::yuv420;
          } else if (value == "422") {
            layout = PixelLayout::yuv422;
          } else if (value == "444") {
            layout = PixelLayout::yuv444;
          } else if (value == "mono") {
            layout = PixelLayout::y_only;
          } else {
            throw FormatError("unsupported y4m colorspace 'C" + std::string(value) + "'");
          }
          break;
        default:
          break;
      }
    }
    if (!w || !h || *w < kMinFrameSide || *h < kMinFrameSide) {
      throw FormatError("y4m header is missing a usable W/H");
    }
    width = *w;
    height = *h;
    check_declared_geometry(spec, width, height, "the y4m header");
  }

  void open_images()
  {
    if (!std::filesystem::is_directory(spec.path)) {
      throw IoError("image sequence path '" + spec.path.string() + "' is not a directory");
    }
    for (const auto &entry : std::filesystem::directory_iterator(spec.path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
        images.push_back(entry.path());
      }
    }
    std::sort(images.begin(), images.end());
    if (images.empty()) {
      throw FormatError("no .pgm files in '" + spec.path.string() + "'");
    }
    count = static_cast<std::int64_t>(images.size());
  }

  std::optional<LumaFrame> next_plane()
  {
    const auto luma = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> samples(luma);
    in.read(reinterpret_cast<char *>(samples.data()), static_cast<std::streamsize>(luma));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0 && in.eof()) {
      return std::nullopt;
    }
    if (got != luma) {
      throw FormatError("truncated frame " + std::to_string(next_index));
    }
    const auto chroma = 2 * chroma_plane_size(width, height, layout);
    in.ignore(static_cast<std::streamsize>(chroma));
    if (static_cast<std::size_t>(in.gcount()) != chroma) {
      throw FormatError("truncated chroma in frame " + std::to_string(next_index));
    }
    return LumaFrame(width, height, std::move(samples), next_index++);
  }

  std::optional<LumaFrame> next_y4m()
  {
    std::string marker;
    if (!std::getline(in, marker)) {
      return std::nullopt;
    }
    if (!marker.starts_with("FRAME")) {
      throw FormatError("expected FRAME marker before frame " + std::to_string(next_index));
    }
    auto frame = next_plane();
    if (!frame) {
      throw FormatError("FRAME marker without payload at frame " + std::to_string(next_index));
    }
    return frame;
  }

  std::optional<LumaFrame> next_image()
  {
    if (next_index >= static_cast<std::int64_t>(images.size())) {
      return std::nullopt;
    }
    auto frame = read_pgm(images[static_cast<std::size_t>(next_index)], next_index);
    if (next_index == 0) {
      width = frame.width();
      height = frame.height();
      check_declared_geometry(spec, width, height, "the first image");
    } else if (frame.width() != width || frame.height() != height) {
      throw FormatError("image '" + images[static_cast<std::size_t>(next_index)].string() +
                        "' changes the sequence geometry");
    }
    ++next_index;
    return frame;
  }
};

FrameReader::FrameReader(const SourceSpec &spec) : impl_(std::make_unique<Impl>())
{
  spec.validate();
  impl_->spec = spec;
  switch (spec.format) {
    case SourceFormat::raw_yuv:
      impl_->open_raw();
      break;
    case SourceFormat::y4m:
      impl_->open_y4m();
      break;
    case SourceFormat::image_sequence:
      impl_->open_images();
      break;
  }
}

FrameReader::~FrameReader() = default;
FrameReader::FrameReader(FrameReader &&) noexcept = default;
FrameReader &FrameReader::operator=(FrameReader &&) noexcept = default;

std::optional<LumaFrame> FrameReader::next()
{
  switch (impl_->spec.format) {
    case SourceFormat::raw_yuv:
      return impl_->next_plane();
    case SourceFormat::y4m:
      return impl_->next_y4m();
    case SourceFormat::image_sequence:
      return impl_->next_image();
  }
  return std::nullopt;
}

int FrameReader::width() const noexcept { return impl_->width; }
int FrameReader::height() const noexcept { return impl_->height; }
std::optional<std::int64_t> FrameReader::frame_count() const noexcept { return impl_->count; }

std::vector<LumaFrame> load_frame_sequence(const SourceSpec &spec)
{
  FrameReader reader(spec);
  std::vector<LumaFrame> frames;
  if (const auto count = reader.frame_count()) {
    frames.reserve(static_cast<std::size_t>(*count));
  }
  while (auto frame = reader.next()) {
    frames.push_back(std::move(*frame));
  }
  return frames;
}

void write_raw_frames(const std::filesystem::path &path, std::span<const LumaFrame> frames, PixelLayout layout)
{
  auto out = open_output(path);
  for (const auto &frame : frames) {
    const auto luma = frame.samples();
    out.write(reinterpret_cast<const char *>(luma.data()), static_cast<std::streamsize>(luma.size()));
    const std::vector<char> chroma(2 * chroma_plane_size(frame.width(), frame.height(), layout), char(128));
    out.write(chroma.data(), static_cast<std::streamsize>(chroma.size()));
  }
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

void write_y4m(const std::filesystem::path &path, std::span<const LumaFrame> frames)
{
  if (frames.empty()) {
    throw FormatError("refusing to write a y4m stream with no frames");
  }
  auto out = open_output(path);
  const int w = frames.front().width();
  const int h = frames.front().height();
  out << "YUV4MPEG2 W" << w << " H" << h << " F30:1 Ip A1:1 C420jpeg\n";
  const std::vector<char> chroma(2 * chroma_plane_size(w, h, PixelLayout::yuv420), char(128));
  for (const auto &frame : frames) {
    if (frame.width() != w || frame.height() != h) {
      throw FormatError("y4m frames must share one geometry");
    }
    out << "FRAME\n";
    const auto luma = frame.samples();
    out.write(reinterpret_cast<const char *>(luma.data()), static_cast<std::streamsize>(luma.size()));
    out.write(chroma.data(), static_cast<std::streamsize>(chroma.size()));
  }
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

void write_pgm(const std::filesystem::path &path, const LumaFrame &frame)
{
  auto out = open_output(path);
  out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  const auto luma = frame.samples();
  out.write(reinterpret_cast<const char *>(luma.data()), static_cast<std::streamsize>(luma.size()));
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

}  // namespace blockscope
