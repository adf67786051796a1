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

#include "blockscope/seba.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace blockscope
{
namespace
{

// Screening works on a pseudo-angle that is monotone in the true phase but
// needs one division instead of an arctangent: quadrant q plus |y| / (|x| + |y|),
// mirrored in odd quadrants, giving a value in [0, 4).
constexpr int kScreenCells = 1024;

// Branch-free so the per-row screening pass vectorizes. Axis directions land on
// the same value from either neighbouring quadrant; the zero vector maps to 0.
inline float pseudo_angle(std::int32_t x, std::int32_t y)
{
  static constexpr float kOffset[4] = {0.0f, 2.0f, 4.0f, 2.0f};
  static constexpr float kSign[4] = {1.0f, -1.0f, -1.0f, 1.0f};
  const auto ax = static_cast<float>(x < 0 ? -x : x);
  const auto ay = static_cast<float>(y < 0 ? -y : y);
  const float t = ay / std::max(ax + ay, 1.0f);
  const int k = (y < 0 ? 2 : 0) | (x < 0 ? 1 : 0);
  return kOffset[k] + kSign[k] * t;
}

// True phase in degrees at a pseudo-angle.
double degrees_at(double d)
{
  const double q = std::floor(d);
  const double t = d - q;
  return 90.0 * q + std::atan2(t, 1.0 - t) * (180.0 / std::numbers::pi);
}

// Cells whose phase span touches a kept bin, dilated by one cell so rounding
// in the per-pixel division can never drop a kept pixel.
std::array<std::uint8_t, kScreenCells> screen_table(const BinMask &keep)
{
  std::array<bool, kScreenCells> raw{};
  for (int c = 0; c < kScreenCells; ++c) {
    const double lo = degrees_at(4.0 * c / kScreenCells) - 1e-6;
    const double hi = degrees_at(4.0 * (c + 1) / kScreenCells) + 1e-6;
    const int first = static_cast<int>(std::floor(lo / kBinWidthDegrees));
    const int last = static_cast<int>(std::floor(hi / kBinWidthDegrees));
    for (int b = first; b <= last && !raw[static_cast<std::size_t>(c)]; ++b) {
      raw[static_cast<std::size_t>(c)] = keep[static_cast<std::size_t>(((b % kDirectionBins) + kDirectionBins) % kDirectionBins)];
    }
  }
  std::array<std::uint8_t, kScreenCells> out{};
  for (int c = 0; c < kScreenCells; ++c) {
    out[static_cast<std::size_t>(c)] = raw[static_cast<std::size_t>((c + kScreenCells - 1) % kScreenCells)] ||
                                       raw[static_cast<std::size_t>(c)] ||
                                       raw[static_cast<std::size_t>((c + 1) % kScreenCells)];
  }
  return out;
}

Plane average(const Plane &a, const Plane &b)
{
  Plane out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = (a.values[i] + b.values[i]) / 2.0;
  }
  return out;
}

std::optional<Plane> either(const std::optional<Plane> &a, const std::optional<Plane> &b)
{
  if (a && b) {
    return average(*a, *b);
  }
  return a ? a : b;
}

}  // namespace

Region full_region(int width, int height) { return {0, 0, width, height}; }

void check_region(const Region &region, int width, int height)
{
  if (region.width <= 0 || region.height <= 0 || region.x < 0 || region.y < 0 || region.x + region.width > width ||
      region.y + region.height > height) {
    throw std::out_of_range("region lies outside the field");
  }
}

EmsTable accumulate_ems(const SobelField &field, const Region &region)
{
  check_region(region, field.width, field.height);
  EmsTable ems;
  for (int y = region.y; y < region.y + region.height; ++y) {
    for (int x = region.x; x < region.x + region.width; ++x) {
      const auto i = field.index(x, y);
      const int bin = direction_bin(field.sx[i], field.sy[i]);
      if (bin < 0) {
        continue;
      }
      ems.x[static_cast<std::size_t>(bin)] += field.sx[i];
      ems.y[static_cast<std::size_t>(bin)] += field.sy[i];
    }
  }
  for (std::size_t k = 0; k < ems.magnitude.size(); ++k) {
    ems.magnitude[k] = std::hypot(static_cast<double>(ems.x[k]), static_cast<double>(ems.y[k]));
  }
  return ems;
}

DirectionHistogram accumulate_histogram(const SobelField &field, const Region &region)
{
  check_region(region, field.width, field.height);
  DirectionHistogram hist;
  for (int y = region.y; y < region.y + region.height; ++y) {
    for (int x = region.x; x < region.x + region.width; ++x) {
      const auto i = field.index(x, y);
      const int bin = direction_bin(field.sx[i], field.sy[i]);
      if (bin >= 0) {
        ++hist.bins[static_cast<std::size_t>(bin)];
        ++hist.total;
      }
    }
  }
  return hist;
}

DirectionHistogram accumulate_histogram(const SobelField &field, const Region &region, const BinMask &keep)
{
  check_region(region, field.width, field.height);
  DirectionHistogram hist;
  if (keep.none()) {
    return hist;
  }
  const auto screen = screen_table(keep);
  constexpr float kCellsPerUnit = kScreenCells / 4.0f;
  std::vector<std::uint8_t> candidate(static_cast<std::size_t>(region.width));
  for (int y = region.y; y < region.y + region.height; ++y) {
    const auto row = field.index(region.x, y);
    const std::int32_t *sx = field.sx.data() + row;
    const std::int32_t *sy = field.sy.data() + row;
    for (int x = 0; x < region.width; ++x) {
      const int cell = std::min(kScreenCells - 1, static_cast<int>(pseudo_angle(sx[x], sy[x]) * kCellsPerUnit));
      candidate[static_cast<std::size_t>(x)] = screen[static_cast<std::size_t>(cell)];
    }
    for (int x = 0; x < region.width; ++x) {
      if (!candidate[static_cast<std::size_t>(x)]) {
        continue;
      }
      const int bin = direction_bin(sx[x], sy[x]);
      if (bin >= 0 && keep[static_cast<std::size_t>(bin)]) {
        ++hist.bins[static_cast<std::size_t>(bin)];
        ++hist.total;
      }
    }
  }
  return hist;
}

void ClassifyConfig::validate() const
{
  if (!(th_fix >= 0.0 && th_fix < 1.0)) {
    throw std::invalid_argument("th_fix must lie in [0, 1)");
  }
  if (texture_count < 2) {
    throw std::invalid_argument("texture_count must be at least 2");
  }
  if (!(ems_floor >= 0.0)) {
    throw std::invalid_argument("ems floor must be non-negative");
  }
}

Classification classify_block(const EmsTable &ems, const DirectionHistogram &hist, const ClassifyConfig &cfg)
{
  cfg.validate();
  Classification out;
  const double strongest = *std::max_element(ems.magnitude.begin(), ems.magnitude.end());
  out.threshold = strongest * (1.0 - cfg.th_fix);
  for (std::size_t k = 0; k < ems.magnitude.size(); ++k) {
    if (ems.x[k] != 0 || ems.y[k] != 0) {
      double deg = std::atan2(static_cast<double>(ems.y[k]), static_cast<double>(ems.x[k])) * (180.0 / std::numbers::pi);
      deg = deg < 0.0 ? deg + 360.0 : deg;
      out.gdv.degrees[k] = deg >= 360.0 ? deg - 360.0 : deg;
    }
    const double m = ems.magnitude[k];
    if (m >= out.threshold && m >= cfg.ems_floor && m > 0.0 && hist.bins[k] > 0) {
      out.gdv.dominant.set(k);
    }
  }
  out.dominant_count = static_cast<int>(out.gdv.dominant.count());
  if (out.dominant_count == 0) {
    out.label = BlockClass::uniform;
  } else if (out.dominant_count < cfg.texture_count) {
    out.label = BlockClass::edge;
  } else {
    out.label = BlockClass::texture;
  }
  return out;
}

PatternOrientation orientation_from_bin(int high_bin)
{
  if (high_bin < 0 || high_bin > kQuadrantBins) {
    throw std::out_of_range("high bin must lie in [0, 15]");
  }
  PatternOrientation o;
  o.high_bin = high_bin;
  o.offset_degrees = 90.0 - kBinWidthDegrees * high_bin;
  for (int q = 0; q < 4; ++q) {
    o.significant_bins[static_cast<std::size_t>(q)] = (high_bin + kQuadrantBins * q) % kDirectionBins;
  }
  std::sort(o.significant_bins.begin(), o.significant_bins.end());
  return o;
}

BinMask significant_bins(const std::optional<PatternOrientation> &orientation)
{
  BinMask keep;
  const std::array<int, 4> centres =
    orientation ? orientation->significant_bins : std::array<int, 4>{0, 15, 30, 45};
  for (int c : centres) {
    for (int d = -1; d <= 1; ++d) {
      keep.set(static_cast<std::size_t>((c + d + kDirectionBins) % kDirectionBins));
    }
  }
  return keep;
}

DirectionHistogram reduce_bins(const DirectionHistogram &hist, const std::optional<PatternOrientation> &orientation)
{
  const auto keep = significant_bins(orientation);
  DirectionHistogram out;
  for (std::size_t k = 0; k < hist.bins.size(); ++k) {
    if (keep[k]) {
      out.bins[k] = hist.bins[k];
      out.total += hist.bins[k];
    }
  }
  return out;
}

CircularMask default_mask()
{
  CircularMask m{};
  m[0] = 1.0;
  return m;
}

std::array<double, kQuadrantBins> rotation_scores(const DirectionHistogram &hist, const CircularMask &mask)
{
  std::array<double, kQuadrantBins> scores{};
  for (int s = 0; s < kQuadrantBins; ++s) {
    double acc = 0.0;
    for (int j = 0; j < kQuadrantBins; ++j) {
      for (int q = 0; q < 4; ++q) {
        acc += mask[static_cast<std::size_t>(j)] *
               static_cast<double>(hist.bins[static_cast<std::size_t>((s + j + kQuadrantBins * q) % kDirectionBins)]);
      }
    }
    scores[static_cast<std::size_t>(s)] = acc;
  }
  return scores;
}

std::optional<PatternOrientation> rotation_offset(const DirectionHistogram &hist, const CircularMask &mask)
{
  if (std::all_of(hist.bins.begin(), hist.bins.end(), [](auto c) { return c == 0; })) {
    return std::nullopt;
  }
  const auto scores = rotation_scores(hist, mask);
  int best = 0;
  for (int s = 1; s < kQuadrantBins; ++s) {
    if (scores[static_cast<std::size_t>(s)] > scores[static_cast<std::size_t>(best)]) {
      best = s;
    }
  }
  if (best == 0) {
    // Shift 0 covers both axis-aligned readings; pick the stronger pair.
    double vertical = 0.0;
    double horizontal = 0.0;
    for (int j = 0; j < kQuadrantBins; ++j) {
      const double w = mask[static_cast<std::size_t>(j)];
      vertical += w * static_cast<double>(hist.bins[static_cast<std::size_t>(j)] + hist.bins[static_cast<std::size_t>(30 + j)]);
      horizontal += w * static_cast<double>(hist.bins[static_cast<std::size_t>(15 + j)] + hist.bins[static_cast<std::size_t>((45 + j) % kDirectionBins)]);
    }
    if (horizontal > vertical) {
      best = kQuadrantBins;
    }
  }
  return orientation_from_bin(best);
}

Plane Plane::filled(int width, int height, double value)
{
  return {width, height, std::vector<double>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), value)};
}

Plane extract_plane(const LumaFrame &frame, const Region &region)
{
  check_region(region, frame.width(), frame.height());
  Plane out = Plane::filled(region.width, region.height, 0.0);
  for (int y = 0; y < region.height; ++y) {
    for (int x = 0; x < region.width; ++x) {
      out.at(x, y) = frame.at(region.x + x, region.y + y);
    }
  }
  return out;
}

NeighborBlocks neighbors_of(const LumaFrame &frame, const Region &block)
{
  check_region(block, frame.width(), frame.height());
  auto grab = [&](int dx, int dy) -> std::optional<Plane> {
    const Region r{block.x + dx * block.width, block.y + dy * block.height, block.width, block.height};
    if (r.x < 0 || r.y < 0 || r.x + r.width > frame.width() || r.y + r.height > frame.height()) {
      return std::nullopt;
    }
    return extract_plane(frame, r);
  };
  NeighborBlocks nb;
  nb.left = grab(-1, 0);
  nb.up = grab(0, -1);
  nb.right = grab(1, 0);
  nb.down = grab(0, 1);
  nb.up_left = grab(-1, -1);
  nb.up_right = grab(1, -1);
  nb.down_left = grab(-1, 1);
  nb.down_right = grab(1, 1);
  return nb;
}

Plane estimate_uniform_block(const NeighborBlocks &nb, int width, int height)
{
  if (width < 1 || height < 1) {
    throw std::invalid_argument("block size must be positive");
  }
  for (const auto *p : {&nb.left, &nb.up, &nb.right, &nb.down, &nb.up_left, &nb.up_right, &nb.down_left, &nb.down_right}) {
    if (*p && ((*p)->width != width || (*p)->height != height)) {
      throw std::invalid_argument("neighbour block size differs from the estimated block");
    }
  }
  const auto a = nb.left ? nb.left : either(nb.up_left, nb.down_left);
  const auto c = nb.right ? nb.right : either(nb.up_right, nb.down_right);
  const int top_rows = (height + 1) / 2;
  const int left_cols = (width + 1) / 2;

  std::optional<Plane> vertical;
  if (nb.up && nb.down) {
    vertical = Plane::filled(width, height, 0.0);
    for (int y = 0; y < height; ++y) {
      const Plane &src = y < top_rows ? *nb.up : *nb.down;
      for (int x = 0; x < width; ++x) {
        vertical->at(x, y) = src.at(x, y);
      }
    }
  } else {
    vertical = nb.up ? nb.up : nb.down;
  }

  std::optional<Plane> horizontal;
  if (a && c) {
    horizontal = Plane::filled(width, height, 0.0);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        horizontal->at(x, y) = (x < left_cols ? *a : *c).at(x, y);
      }
    }
  } else {
    horizontal = a ? a : c;
  }

  if (!vertical && !horizontal) {
    throw std::invalid_argument("no neighbour blocks available for estimation");
  }
  return *either(vertical, horizontal);
}

DirectionGrid direction_grid(const SobelField &field, const Region &region, bool exclude_border, double min_magnitude)
{
  if (!(min_magnitude >= 0.0)) {
    throw std::invalid_argument("min_magnitude must be non-negative");
  }
  const double floor_sq = min_magnitude * min_magnitude;
  check_region(region, field.width, field.height);
  DirectionGrid grid;
  grid.width = region.width;
  grid.height = region.height;
  grid.bins.resize(static_cast<std::size_t>(region.width) * static_cast<std::size_t>(region.height));
  for (int y = 0; y < region.height; ++y) {
    for (int x = 0; x < region.width; ++x) {
      const int fx = region.x + x;
      const int fy = region.y + y;
      const bool border = fx == 0 || fy == 0 || fx == field.width - 1 || fy == field.height - 1;
      const auto i = field.index(fx, fy);
      const double sx = field.sx[i];
      const double sy = field.sy[i];
      const bool weak = floor_sq > 0.0 && sx * sx + sy * sy < floor_sq;
      const int bin = (exclude_border && border) || weak ? -1 : direction_bin(field.sx[i], field.sy[i]);
      grid.bins[static_cast<std::size_t>(y) * static_cast<std::size_t>(region.width) + static_cast<std::size_t>(x)] =
        static_cast<std::int8_t>(bin);
    }
  }
  return grid;
}

MatchResult matching_score(const DirectionGrid &grid, int dx, int dy)
{
  const int x0 = std::max(0, dx);
  const int x1 = std::min(grid.width, grid.width + dx);
  const int y0 = std::max(0, dy);
  const int y1 = std::min(grid.height, grid.height + dy);
  if (x0 >= x1 || y0 >= y1) {
    throw std::invalid_argument("shift leaves no overlap");
  }
  MatchResult out;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const int a = grid.at(x, y);
      if (a < 0) {
        continue;
      }
      ++out.reference;
      const int b = grid.at(x - dx, y - dy);
      if (b < 0) {
        continue;
      }
      ++out.sum_histogram[static_cast<std::size_t>(a + b)];
      if (a == b) {
        ++out.score;
      }
    }
  }
  return out;
}

std::optional<int> find_period(std::span<const double> curve, double tolerance)
{
  // curve[s - 1] holds shift s.
  double low = 1.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double v = curve[i];
    const bool rising = i == 0 || v >= curve[i - 1];
    const bool peak = i + 1 == curve.size() || v >= curve[i + 1];
    if (low < tolerance && v >= tolerance && rising && peak) {
      return static_cast<int>(i) + 1;
    }
    low = std::min(low, v);
  }
  return std::nullopt;
}

PatternGeometry pattern_dimensions(const DirectionGrid &grid, int max_shift, double tolerance)
{
  if (max_shift < 1 || max_shift >= grid.width || max_shift >= grid.height) {
    throw std::invalid_argument("max_shift must lie in [1, min(width, height))");
  }
  if (!(tolerance > 0.0 && tolerance <= 1.0)) {
    throw std::invalid_argument("peak tolerance must lie in (0, 1]");
  }
  PatternGeometry out;
  auto normalized = [](const MatchResult &m) {
    return m.reference == 0 ? 0.0 : static_cast<double>(m.score) / static_cast<double>(m.reference);
  };
  for (int s = 1; s <= max_shift; ++s) {
    out.width_curve.push_back(normalized(matching_score(grid, s, 0)));
    out.height_curve.push_back(normalized(matching_score(grid, 0, s)));
  }
  out.period_width = find_period(out.width_curve, tolerance);
  out.period_height = find_period(out.height_curve, tolerance);
  return out;
}

void SebaConfig::validate() const
{
  classify.validate();
  if (block_size < 0 || block_size == 1) {
    throw std::invalid_argument("block size must be 0 (whole frame) or at least 2");
  }
  if (max_shift < 0) {
    throw std::invalid_argument("max_shift must be non-negative");
  }
  if (!(match_floor >= 0.0)) {
    throw std::invalid_argument("match_floor must be non-negative");
  }
  if (!(peak_tolerance > 0.0 && peak_tolerance <= 1.0)) {
    throw std::invalid_argument("peak_tolerance must lie in (0, 1]");
  }
}

RegionAnalysis analyze_region(const SobelField &field, const Region &region, std::int64_t frame_index, const SebaConfig &cfg)
{
  cfg.validate();
  RegionAnalysis out;
  out.histogram = accumulate_histogram(field, region);
  const auto ems = accumulate_ems(field, region);
  const auto cls = classify_block(ems, out.histogram, cfg.classify);
  auto &s = out.summary;
  s.frame_index = frame_index;
  s.x = region.x;
  s.y = region.y;
  s.width = region.width;
  s.height = region.height;
  s.label = cls.label;
  s.dominant_directions = cls.dominant_count;
  if (cls.label == BlockClass::uniform) {
    return out;
  }
  if (const auto o = rotation_offset(out.histogram, cfg.mask)) {
    s.high_bin = o->high_bin;
    s.orientation_degrees = o->offset_degrees;
  }
  const int shift = std::min({cfg.max_shift, region.width - 1, region.height - 1});
  if (shift >= 1) {
    const auto geometry = pattern_dimensions(direction_grid(field, region, true, cfg.match_floor), shift, cfg.peak_tolerance);
    s.pattern_width = geometry.period_width;
    s.pattern_height = geometry.period_height;
  }
  return out;
}

std::vector<RegionAnalysis> analyze_frame(const LumaFrame &frame, const SebaConfig &cfg)
{
  cfg.validate();
  const auto field = sobel_gradient(frame);
  std::vector<RegionAnalysis> out;
  if (cfg.block_size == 0) {
    out.push_back(analyze_region(field, full_region(frame.width(), frame.height()), frame.frame_index(), cfg));
    return out;
  }
  if (cfg.block_size > frame.width() || cfg.block_size > frame.height()) {
    throw std::invalid_argument("block size exceeds the frame");
  }
  for (int y = 0; y + cfg.block_size <= frame.height(); y += cfg.block_size) {
    for (int x = 0; x + cfg.block_size <= frame.width(); x += cfg.block_size) {
      out.push_back(analyze_region(field, {x, y, cfg.block_size, cfg.block_size}, frame.frame_index(), cfg));
    }
  }
  return out;
}

void write_histogram_csv(std::ostream &out, std::span<const RegionAnalysis> blocks)
{
  out << "frame_index,x,y";
  for (int k = 0; k < kDirectionBins; ++k) {
    out << ",bin_" << k;
  }
  out << '\n';
  for (const auto &b : blocks) {
    out << b.summary.frame_index << ',' << b.summary.x << ',' << b.summary.y;
    for (auto c : b.histogram.bins) {
      out << ',' << c;
    }
    out << '\n';
  }
}

}  // namespace blockscope
