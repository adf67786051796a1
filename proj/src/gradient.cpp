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

#include "blockscope/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace blockscope
{
namespace
{

// Ring around the centre, clockwise from top-left.
constexpr std::array<std::array<int, 2>, 8> kRing = {{{-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}}};

// Row pointers for y-1, y, y+1 with replicated edges.
struct Neighborhood
{
  const std::uint8_t *up;
  const std::uint8_t *mid;
  const std::uint8_t *down;
};

Neighborhood rows_around(const LumaFrame &frame, int y)
{
  const int h = frame.height();
  return {frame.row(std::max(y - 1, 0)).data(), frame.row(y).data(), frame.row(std::min(y + 1, h - 1)).data()};
}

}  // namespace

const std::array<KirschMask, kKirschDirections> &kirsch_masks()
{
  static const auto masks = [] {
    std::array<KirschMask, kKirschDirections> out{};
    for (int k = 0; k < kKirschDirections; ++k) {
      KirschMask m{};
      for (int r = 0; r < 8; ++r) {
        const bool strong = r == k || r == (k + 1) % 8 || r == (k + 2) % 8;
        m[static_cast<std::size_t>(kRing[r][1] + 1)][static_cast<std::size_t>(kRing[r][0] + 1)] = strong ? 5 : -3;
      }
      out[static_cast<std::size_t>(k)] = m;
    }
    return out;
  }();
  return masks;
}

GradientField kirsch_gradient(const LumaFrame &frame)
{
  const int w = frame.width();
  const int h = frame.height();
  GradientField field;
  field.width = w;
  field.height = h;
  field.magnitude.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  field.direction.resize(field.magnitude.size());

  std::array<std::int32_t, 8> ring{};
  for (int y = 0; y < h; ++y) {
    const auto [up, mid, down] = rows_around(frame, y);
    for (int x = 0; x < w; ++x) {
      const int xl = std::max(x - 1, 0);
      const int xr = std::min(x + 1, w - 1);
      ring = {up[xl], up[x], up[xr], mid[xr], down[xr], down[x], down[xl], mid[xl]};
      std::int32_t total = 0;
      for (auto v : ring) {
        total += v;
      }
      // 5·(three) − 3·(other five) == 8·(three) − 3·(ring)
      std::int32_t best = -1;
      int best_k = 1;
      std::int32_t three = ring[7] + ring[0] + ring[1];
      for (int k = 0; k < 8; ++k) {
        three += ring[static_cast<std::size_t>((k + 2) % 8)] - ring[static_cast<std::size_t>((k + 7) % 8)];
        const std::int32_t g = std::abs(8 * three - 3 * total);
        if (g > best) {
          best = g;
          best_k = k + 1;
        }
      }
      const auto i = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
      field.magnitude[i] = best;
      field.direction[i] = static_cast<std::uint8_t>(best_k);
    }
  }
  return field;
}

double SobelField::magnitude(int x, int y) const
{
  const auto i = index(x, y);
  return std::hypot(static_cast<double>(sx[i]), static_cast<double>(sy[i]));
}

std::optional<double> SobelField::phase(int x, int y) const
{
  const auto i = index(x, y);
  return gradient_phase(sx[i], sy[i]);
}

SobelField sobel_gradient(const LumaFrame &frame)
{
  const int w = frame.width();
  const int h = frame.height();
  SobelField field;
  field.width = w;
  field.height = h;
  field.sx.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  field.sy.resize(field.sx.size());
  for (int y = 0; y < h; ++y) {
    const auto [up, mid, down] = rows_around(frame, y);
    for (int x = 0; x < w; ++x) {
      const int xl = std::max(x - 1, 0);
      const int xr = std::min(x + 1, w - 1);
      const auto i = field.index(x, y);
      field.sx[i] = (up[xr] + 2 * mid[xr] + down[xr]) - (up[xl] + 2 * mid[xl] + down[xl]);
      field.sy[i] = (down[xl] + 2 * down[x] + down[xr]) - (up[xl] + 2 * up[x] + up[xr]);
    }
  }
  return field;
}

DirectionBin::DirectionBin(int index) : index_(index)
{
  if (index < 0 || index >= kDirectionBins) {
    throw std::out_of_range("direction bin " + std::to_string(index) + " outside [0, 59]");
  }
}

DirectionBin quantize_direction(double phase_degrees)
{
  if (!std::isfinite(phase_degrees) || phase_degrees < 0.0 || phase_degrees >= 360.0) {
    throw std::domain_error("phase must lie in [0, 360)");
  }
  const int bin = static_cast<int>(std::floor(phase_degrees / kBinWidthDegrees));
  return DirectionBin(std::min(bin, kDirectionBins - 1));
}

std::optional<DirectionBin> quantize_direction(std::optional<double> phase_degrees)
{
  if (!phase_degrees) {
    return std::nullopt;
  }
  return quantize_direction(*phase_degrees);
}

std::optional<double> gradient_phase(std::int32_t sx, std::int32_t sy)
{
  if (sx == 0 && sy == 0) {
    return std::nullopt;
  }
  double deg = std::atan2(static_cast<double>(sy), static_cast<double>(sx)) * (180.0 / std::numbers::pi);
  if (deg < 0.0) {
    deg += 360.0;
  }
  if (deg >= 360.0) {
    deg -= 360.0;
  }
  return deg;
}

int direction_bin(std::int32_t sx, std::int32_t sy)
{
  const auto phase = gradient_phase(sx, sy);
  return phase ? quantize_direction(*phase).index() : -1;
}

}  // namespace blockscope
