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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "blockscope/errors.hpp"
#include "blockscope/frame_io.hpp"
#include "oracles.hpp"
#include "scratch.hpp"

using namespace blockscope;

namespace
{

void write_bytes(const std::filesystem::path &p, const std::string &bytes)
{
  std::ofstream(p, std::ios::binary) << bytes;
}

std::string byte_run(std::size_t n, std::mt19937 &rng)
{
  std::string s(n, '\0');
  for (auto &c : s) {
    c = static_cast<char>(rng() & 0xff);
  }
  return s;
}

}  // namespace

TEST_CASE("LumaFrame rejects bad geometry")
{
  CHECK_THROWS_AS(LumaFrame(2, 5, std::vector<std::uint8_t>(10)), std::invalid_argument);
  CHECK_THROWS_AS(LumaFrame(4, 4, std::vector<std::uint8_t>(15)), std::invalid_argument);
  const auto f = LumaFrame::filled(3, 3, 7, 4);
  CHECK(f.at(2, 2) == 7);
  CHECK(f.frame_index() == 4);
}

TEST_CASE("raw y-only: 4 frames of 16x16 from 1024 bytes")
{
  Scratch dir;
  std::mt19937 rng(1);
  const auto bytes = byte_run(1024, rng);
  write_bytes(dir / "a.yuv", bytes);
  const auto frames = load_frame_sequence({dir / "a.yuv", SourceFormat::raw_yuv, 16, 16, PixelLayout::y_only});
  REQUIRE(frames.size() == 4);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CHECK(frames[i].frame_index() == static_cast<std::int64_t>(i));
    CHECK(frames[i].width() == 16);
    CHECK(frames[i].at(5, 3) == static_cast<std::uint8_t>(bytes[i * 256 + 3 * 16 + 5]));
  }
}

TEST_CASE("raw size that is not a multiple of the frame stride is a geometry error")
{
  Scratch dir;
  write_bytes(dir / "a.yuv", std::string(1000, 'x'));
  CHECK_THROWS_AS(load_frame_sequence({dir / "a.yuv", SourceFormat::raw_yuv, 16, 16, PixelLayout::y_only}), FormatError);
}

TEST_CASE("raw frame count follows the layout stride")
{
  Scratch dir;
  struct Case
  {
    PixelLayout layout;
    std::size_t stride;
  };
  for (auto c : {Case{PixelLayout::yuv420, 16 * 8 + 2 * 8 * 4}, Case{PixelLayout::yuv422, 16 * 8 * 2},
                 Case{PixelLayout::yuv444, 16 * 8 * 3}, Case{PixelLayout::y_only, 16 * 8}}) {
    CHECK(frame_stride(16, 8, c.layout) == c.stride);
    write_bytes(dir / "r.yuv", std::string(c.stride * 3, 'a'));
    FrameReader reader({dir / "r.yuv", SourceFormat::raw_yuv, 16, 8, c.layout});
    CHECK(reader.frame_count() == 3);
    CHECK(load_frame_sequence({dir / "r.yuv", SourceFormat::raw_yuv, 16, 8, c.layout}).size() == 3);
  }
  // Odd sizes round chroma up.
  CHECK(frame_stride(5, 3, PixelLayout::yuv420) == 15 + 2 * 3 * 2);
}

TEST_CASE("raw input needs geometry")
{
  CHECK_THROWS_AS(SourceSpec({"x.yuv", SourceFormat::raw_yuv, std::nullopt, 16}).validate(), FormatError);
  CHECK_THROWS_AS(SourceSpec({"x.yuv", SourceFormat::raw_yuv, 2, 16}).validate(), FormatError);
}

TEST_CASE("y4m W64 H48 with two frames decodes luma and drops chroma")
{
  Scratch dir;
  std::mt19937 rng(7);
  std::string file = "YUV4MPEG2 W64 H48 F25:1 Ip A0:0 C420jpeg XYSCSS=420JPEG\n";
  std::vector<std::string> lumas;
  for (int f = 0; f < 2; ++f) {
    lumas.push_back(byte_run(64 * 48, rng));
    file += "FRAME\n" + lumas.back() + byte_run(2 * 32 * 24, rng);
  }
  write_bytes(dir / "v.y4m", file);
  const auto frames = load_frame_sequence({dir / "v.y4m"});
  REQUIRE(frames.size() == 2);
  for (int f = 0; f < 2; ++f) {
    CHECK(frames[f].width() == 64);
    CHECK(frames[f].height() == 48);
    // Oracle: luma bytes sit right after each FRAME marker.
    const std::string got(frames[f].samples().begin(), frames[f].samples().end());
    CHECK(got == lumas[static_cast<std::size_t>(f)]);
  }
}

TEST_CASE("y4m frame parameters and other layouts")
{
  Scratch dir;
  std::string file = "YUV4MPEG2 W4 H3 C444\nFRAME Ixyz\n" + std::string(12, '\x05') + std::string(24, '\x80');
  write_bytes(dir / "v.y4m", file);
  auto frames = load_frame_sequence({dir / "v.y4m"});
  REQUIRE(frames.size() == 1);
  CHECK(frames[0].at(3, 2) == 5);

  write_bytes(dir / "m.y4m", "YUV4MPEG2 W3 H3 Cmono\nFRAME\n" + std::string(9, 'a') + "FRAME\n" + std::string(9, 'b'));
  frames = load_frame_sequence({dir / "m.y4m"});
  REQUIRE(frames.size() == 2);
  CHECK(frames[1].at(0, 0) == 'b');

  // No C tag means 4:2:0.
  write_bytes(dir / "d.y4m", "YUV4MPEG2 W4 H4\nFRAME\n" + std::string(16 + 8, 'c'));
  CHECK(load_frame_sequence({dir / "d.y4m"}).size() == 1);
}

TEST_CASE("y4m errors")
{
  Scratch dir;
  write_bytes(dir / "t.y4m", "YUV4MPEG2 W4 H4 C420jpeg\nFRAME\n" + std::string(10, 'a'));
  CHECK_THROWS_AS(load_frame_sequence({dir / "t.y4m"}), FormatError);

  write_bytes(dir / "s.y4m", "YUV4MPEG1 W4 H4\n");
  CHECK_THROWS_AS(load_frame_sequence({dir / "s.y4m"}), FormatError);

  write_bytes(dir / "c.y4m", "YUV4MPEG2 W4 H4 C420p10\nFRAME\n");
  CHECK_THROWS_AS(load_frame_sequence({dir / "c.y4m"}), FormatError);

  write_bytes(dir / "m.y4m", "YUV4MPEG2 W4 H4\nFRAME\n" + std::string(24, 'a') + "FRAMX\n");
  CHECK_THROWS_AS(load_frame_sequence({dir / "m.y4m"}), FormatError);

  write_bytes(dir / "g.y4m", "YUV4MPEG2 W4 H4\nFRAME\n" + std::string(24, 'a'));
  CHECK_THROWS_AS(load_frame_sequence({dir / "g.y4m", SourceFormat::y4m, 8, std::nullopt}), FormatError);
  CHECK(load_frame_sequence({dir / "g.y4m", SourceFormat::y4m, 4, 4}).size() == 1);

  CHECK_THROWS_AS(load_frame_sequence({dir / "missing.y4m"}), IoError);
}

TEST_CASE("gray-encoded colour frame keeps its luma")
{
  Scratch dir;
  std::mt19937 rng(3);
  const auto frame = oracle::random_frame(10, 6, rng);
  const std::vector<LumaFrame> one{frame};
  write_y4m(dir / "g.y4m", one);
  const auto back = load_frame_sequence({dir / "g.y4m"});
  REQUIRE(back.size() == 1);
  CHECK(back[0] == frame);

  for (auto layout : {PixelLayout::yuv420, PixelLayout::yuv422, PixelLayout::yuv444, PixelLayout::y_only}) {
    write_raw_frames(dir / "g.yuv", one, layout);
    const auto raw = load_frame_sequence({dir / "g.yuv", SourceFormat::raw_yuv, 10, 6, layout});
    REQUIRE(raw.size() == 1);
    CHECK(raw[0] == frame);
  }
}

TEST_CASE("pgm image sequence in lexicographic order")
{
  Scratch dir;
  std::filesystem::create_directories(dir / "seq");
  write_pgm(dir / "seq" / "b.pgm", LumaFrame::filled(4, 3, 20));
  write_pgm(dir / "seq" / "a.pgm", LumaFrame::filled(4, 3, 10));
  write_bytes(dir / "seq" / "c.pgm", "P2\n# comment\n4 3\n255\n1 2 3 4\n5 6 7 8\n9 10 11 12\n");
  write_bytes(dir / "seq" / "notes.txt", "ignored");
  const auto frames = load_frame_sequence({dir / "seq", SourceFormat::image_sequence});
  REQUIRE(frames.size() == 3);
  CHECK(frames[0].at(0, 0) == 10);
  CHECK(frames[1].at(0, 0) == 20);
  CHECK(frames[2].at(3, 2) == 12);
  CHECK(frames[2].frame_index() == 2);

  write_pgm(dir / "seq" / "d.pgm", LumaFrame::filled(5, 3, 0));
  CHECK_THROWS_AS(load_frame_sequence({dir / "seq", SourceFormat::image_sequence}), FormatError);
  CHECK_THROWS_AS(load_frame_sequence({dir / "seq", SourceFormat::image_sequence, 9, 9}), FormatError);
  CHECK_THROWS_AS(load_frame_sequence({dir / "nothing", SourceFormat::image_sequence}), IoError);
}

TEST_CASE("streaming reader yields frames one at a time")
{
  Scratch dir;
  std::vector<LumaFrame> frames;
  for (int i = 0; i < 5; ++i) {
    frames.push_back(LumaFrame::filled(3, 3, static_cast<std::uint8_t>(i * 10), i));
  }
  write_y4m(dir / "s.y4m", frames);
  FrameReader reader({dir / "s.y4m"});
  CHECK(reader.width() == 3);
  CHECK_FALSE(reader.frame_count().has_value());
  int n = 0;
  while (auto f = reader.next()) {
    CHECK(*f == frames[static_cast<std::size_t>(n)]);
    ++n;
  }
  CHECK(n == 5);
  CHECK_FALSE(reader.next().has_value());
}

TEST_CASE("format tags")
{
  CHECK(parse_source_format("raw-yuv") == SourceFormat::raw_yuv);
  CHECK(parse_source_format("image-sequence") == SourceFormat::image_sequence);
  CHECK_FALSE(parse_source_format("mp4").has_value());
  CHECK(parse_pixel_layout("y-only") == PixelLayout::y_only);
  CHECK_FALSE(parse_pixel_layout("411").has_value());
}
