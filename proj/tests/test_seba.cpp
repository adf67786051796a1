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

#include <algorithm>
#include <cmath>
#include <random>

#include "blockscope/seba.hpp"
#include "blockscope/synth.hpp"
#include "oracles.hpp"

using namespace blockscope;

namespace
{

struct NaiveEms
{
  std::array<double, 60> x{}, y{}, m{};
  std::array<long long, 60> count{};
};

NaiveEms naive_ems(const LumaFrame &f, const Region &r)
{
  NaiveEms e;
  for (int y = r.y; y < r.y + r.height; ++y) {
    for (int x = r.x; x < r.x + r.width; ++x) {
      const auto gx = oracle::correlate(f, oracle::kSobelX, x, y);
      const auto gy = oracle::correlate(f, oracle::kSobelY, x, y);
      const int b = oracle::bin_of(gx, gy);
      if (b >= 0) {
        e.x[b] += static_cast<double>(gx);
        e.y[b] += static_cast<double>(gy);
        ++e.count[b];
      }
    }
  }
  for (int k = 0; k < 60; ++k) {
    e.m[k] = std::sqrt(e.x[k] * e.x[k] + e.y[k] * e.y[k]);
  }
  return e;
}

int naive_dominant(const NaiveEms &e, double th_fix, double floor)
{
  const double top = *std::max_element(e.m.begin(), e.m.end());
  int n = 0;
  for (int k = 0; k < 60; ++k) {
    n += e.m[k] > 0 && e.m[k] >= top * (1 - th_fix) && e.m[k] >= floor && e.count[k] > 0;
  }
  return n;
}

DirectionHistogram histogram_with(std::initializer_list<std::pair<int, int>> bins)
{
  DirectionHistogram h;
  for (auto [b, c] : bins) {
    h.bins[static_cast<std::size_t>(b)] = c;
    h.total += c;
  }
  return h;
}

LumaFrame pattern(PatternKind kind, int w, int h, int period, double orientation = 0.0, std::optional<int> period_y = {})
{
  PatternSpec spec;
  spec.kind = kind;
  spec.width = w;
  spec.height = h;
  spec.period = period;
  spec.period_y = period_y;
  spec.orientation = orientation;
  spec.amplitude = kind == PatternKind::stripes ? 200 : 100;
  return inject_block_pattern(LumaFrame::filled(w, h, 20), spec);
}

}  // namespace

TEST_CASE("EMS of constant and ramp regions")
{
  const auto flat = sobel_gradient(LumaFrame::filled(8, 8, 90));
  const auto e = accumulate_ems(flat, full_region(8, 8));
  for (auto m : e.magnitude) {
    CHECK(m == 0.0);
  }

  const auto ramp = oracle::make_frame(12, 8, [](int x, int) { return 5 * x; });
  const auto s = sobel_gradient(ramp);
  const Region inner{1, 0, 10, 8};
  const auto r = accumulate_ems(s, inner);
  long long abs_sx = 0;
  for (int y = 0; y < 8; ++y) {
    for (int x = 1; x < 11; ++x) {
      abs_sx += std::abs(s.sx[s.index(x, y)]);
    }
  }
  CHECK(r.magnitude[0] == static_cast<double>(abs_sx));
  for (std::size_t k = 1; k < 60; ++k) {
    CHECK(r.magnitude[k] == 0.0);
  }
  CHECK_THROWS_AS(accumulate_ems(s, Region{5, 0, 10, 8}), std::out_of_range);
  CHECK_THROWS_AS(accumulate_ems(s, Region{0, 0, 0, 8}), std::out_of_range);
}

TEST_CASE("EMS matches a per-pixel oracle on random regions")
{
  std::mt19937 rng(17);
  const auto f = oracle::random_frame(24, 20, rng);
  const auto s = sobel_gradient(f);
  const Region r{3, 2, 15, 11};
  const auto e = accumulate_ems(s, r);
  const auto want = naive_ems(f, r);
  for (std::size_t k = 0; k < 60; ++k) {
    CHECK(static_cast<double>(e.x[k]) == want.x[k]);
    CHECK(static_cast<double>(e.y[k]) == want.y[k]);
    CHECK(e.magnitude[k] == doctest::Approx(want.m[k]).epsilon(1e-12));
    const double ex = static_cast<double>(e.x[k]);
    const double ey = static_cast<double>(e.y[k]);
    CHECK(e.magnitude[k] * e.magnitude[k] == doctest::Approx(ex * ex + ey * ey).epsilon(1e-12));
  }
  const auto h = accumulate_histogram(s, r);
  long long sum = 0;
  for (std::size_t k = 0; k < 60; ++k) {
    CHECK(h.bins[k] == want.count[k]);
    sum += h.bins[k];
  }
  CHECK(sum == h.total);
}

TEST_CASE("block classification")
{
  const EmsTable zero{};
  CHECK(classify_block(zero, DirectionHistogram{}).label == BlockClass::uniform);

  const auto edge = oracle::make_frame(16, 16, [](int x, int) { return x < 8 ? 30 : 160; });
  const auto se = sobel_gradient(edge);
  const auto ce = classify_block(accumulate_ems(se, full_region(16, 16)), accumulate_histogram(se, full_region(16, 16)));
  CHECK(ce.label == BlockClass::edge);
  CHECK(ce.dominant_count == naive_dominant(naive_ems(edge, full_region(16, 16)), 0.2, 1.0));

  const auto checker = pattern(PatternKind::checkerboard, 32, 32, 8);
  const auto sc = sobel_gradient(checker);
  const auto cc = classify_block(accumulate_ems(sc, full_region(32, 32)), accumulate_histogram(sc, full_region(32, 32)));
  const int oracle_count = naive_dominant(naive_ems(checker, full_region(32, 32)), 0.2, 1.0);
  CHECK(oracle_count >= ClassifyConfig{}.texture_count);
  CHECK(cc.dominant_count == oracle_count);
  CHECK(cc.label == BlockClass::texture);

  // Dominance and labels ignore intensity offsets.
  const auto lifted = oracle::make_frame(32, 32, [&](int x, int y) { return checker.at(x, y) + 50; });
  const auto sl = sobel_gradient(lifted);
  CHECK(classify_block(accumulate_ems(sl, full_region(32, 32)), accumulate_histogram(sl, full_region(32, 32))).label ==
        BlockClass::texture);

  ClassifyConfig bad;
  bad.th_fix = 1.0;
  CHECK_THROWS_AS(classify_block(zero, DirectionHistogram{}, bad), std::invalid_argument);
}

TEST_CASE("noise below the EMS floor stays uniform")
{
  EmsTable e;
  e.x[3] = 0;
  e.y[3] = 0;
  e.magnitude[3] = 0.5;
  auto h = histogram_with({{3, 1}});
  CHECK(classify_block(e, h).label == BlockClass::uniform);
}

TEST_CASE("GDV follows the accumulated components")
{
  EmsTable e;
  e.x[7] = 10;
  e.y[7] = 10;
  e.magnitude[7] = std::hypot(10.0, 10.0);
  e.x[40] = -3;
  e.y[40] = -4;
  e.magnitude[40] = 5.0;
  const auto c = classify_block(e, histogram_with({{7, 2}, {40, 1}}));
  CHECK(*c.gdv.degrees[7] == doctest::Approx(45.0));
  CHECK(*c.gdv.degrees[40] == doctest::Approx(233.130102354).epsilon(1e-9));
  CHECK_FALSE(c.gdv.degrees[0].has_value());
  CHECK(c.gdv.dominant[7]);
  CHECK_FALSE(c.gdv.dominant[40]);
  CHECK(c.label == BlockClass::edge);
}

TEST_CASE("bin reduction")
{
  const auto only30 = histogram_with({{30, 12}});
  CHECK(reduce_bins(only30, std::nullopt) == only30);
  const auto only7 = histogram_with({{7, 12}});
  CHECK(reduce_bins(only7, std::nullopt).total == 0);

  const auto keep = significant_bins();
  std::vector<int> kept;
  for (int k = 0; k < 60; ++k) {
    if (keep[static_cast<std::size_t>(k)]) {
      kept.push_back(k);
    }
  }
  CHECK(kept == std::vector<int>{0, 1, 14, 15, 16, 29, 30, 31, 44, 45, 46, 59});

  const auto rotated = significant_bins(orientation_from_bin(8));
  kept.clear();
  for (int k = 0; k < 60; ++k) {
    if (rotated[static_cast<std::size_t>(k)]) {
      kept.push_back(k);
    }
  }
  CHECK(kept == std::vector<int>{7, 8, 9, 22, 23, 24, 37, 38, 39, 52, 53, 54});

  std::mt19937 rng(3);
  DirectionHistogram random;
  for (auto &b : random.bins) {
    b = rng() % 100;
    random.total += b;
  }
  for (int s = 0; s <= 15; ++s) {
    const auto r = reduce_bins(random, orientation_from_bin(s));
    for (std::size_t k = 0; k < 60; ++k) {
      CHECK(r.bins[k] <= random.bins[k]);
      CHECK((r.bins[k] == random.bins[k] || r.bins[k] == 0));
    }
  }
}

TEST_CASE("screened histogram equals the full histogram on kept bins")
{
  std::mt19937 rng(23);
  const auto f = oracle::random_frame(64, 48, rng);
  const auto s = sobel_gradient(f);
  const auto full = accumulate_histogram(s, full_region(64, 48));
  std::vector<BinMask> masks{significant_bins(), BinMask{}, BinMask{}.set(), BinMask{}.set(59).set(0)};
  for (int b = 0; b <= 15; ++b) {
    masks.push_back(significant_bins(orientation_from_bin(b)));
  }
  BinMask half;
  for (int k = 10; k < 45; ++k) {
    half.set(static_cast<std::size_t>(k));
  }
  masks.push_back(half);
  BinMask scattered;
  for (int k = 0; k < 60; k += 7) {
    scattered.set(static_cast<std::size_t>(k));
  }
  masks.push_back(scattered);
  for (const auto &m : masks) {
    const auto r = accumulate_histogram(s, {5, 3, 50, 40}, m);
    const auto whole = accumulate_histogram(s, {5, 3, 50, 40});
    std::int64_t total = 0;
    for (std::size_t k = 0; k < 60; ++k) {
      CHECK(r.bins[k] == (m[k] ? whole.bins[k] : 0));
      total += r.bins[k];
    }
    CHECK(r.total == total);
  }
  CHECK(accumulate_histogram(s, full_region(64, 48), BinMask{}.set()) == full);

  // Exact bin boundaries: multiples of 6 degrees hit by integer gradients.
  const auto edges = oracle::make_frame(40, 40, [](int x, int y) { return (x * 7 + y * 4) % 256; });
  const auto se = sobel_gradient(edges);
  const auto we = accumulate_histogram(se, full_region(40, 40));
  const auto re = accumulate_histogram(se, full_region(40, 40), significant_bins());
  for (std::size_t k = 0; k < 60; ++k) {
    CHECK(re.bins[k] == (significant_bins()[k] ? we.bins[k] : 0));
  }
}

TEST_CASE("rotation offset")
{
  const auto horizontal = histogram_with({{15, 100}, {45, 100}, {0, 20}, {30, 20}});
  auto o = rotation_offset(horizontal);
  REQUIRE(o.has_value());
  CHECK(o->high_bin == 15);
  CHECK(o->offset_degrees == 0.0);

  const auto vertical = histogram_with({{0, 100}, {30, 100}, {15, 5}});
  o = rotation_offset(vertical);
  CHECK(o->high_bin == 0);
  CHECK(o->offset_degrees == 90.0);

  const auto sixty = histogram_with({{5, 50}, {20, 10}, {35, 50}, {50, 10}, {9, 3}});
  o = rotation_offset(sixty);
  CHECK(o->high_bin == 5);
  CHECK(o->offset_degrees == 60.0);
  CHECK(o->significant_bins == std::array<int, 4>{5, 20, 35, 50});

  const auto fortyfive = histogram_with({{8, 40}, {23, 40}, {38, 40}, {53, 40}, {7, 30}});
  o = rotation_offset(fortyfive);
  CHECK(o->high_bin == 8);
  CHECK(o->offset_degrees == 42.0);

  CHECK_FALSE(rotation_offset(DirectionHistogram{}).has_value());

  // Ties go to the lowest shift.
  CHECK(rotation_offset(histogram_with({{3, 5}, {9, 5}}))->high_bin == 3);

  // Positive scaling never moves the argmax.
  std::mt19937 rng(29);
  for (int t = 0; t < 20; ++t) {
    DirectionHistogram h, scaled;
    for (std::size_t k = 0; k < 60; ++k) {
      h.bins[k] = rng() % 50;
      scaled.bins[k] = 7 * h.bins[k];
    }
    CHECK(rotation_offset(h)->high_bin == rotation_offset(scaled)->high_bin);
  }

  // A spread mask weighs neighbouring bins.
  CircularMask mask{};
  mask[0] = 1.0;
  mask[1] = 0.5;
  const auto scores = rotation_scores(histogram_with({{4, 10}, {5, 10}}), mask);
  CHECK(scores[4] == 15.0);
  CHECK(scores[3] == 5.0);
  CHECK(scores[5] == 10.0);
  CHECK_THROWS_AS(orientation_from_bin(16), std::out_of_range);
}

TEST_CASE("rendered stripes report their orientation")
{
  struct Row
  {
    double angle;
    int bin;
  };
  // Angles whose printed bins the renderer reproduces.
  for (auto row : {Row{0, 15}, Row{30, 10}, Row{75, 2}, Row{90, 0}}) {
    const auto f = pattern(PatternKind::stripes, 128, 128, 16, row.angle);
    const auto s = sobel_gradient(f);
    const auto o = rotation_offset(accumulate_histogram(s, full_region(128, 128)));
    REQUIRE(o.has_value());
    CHECK(o->high_bin == row.bin);
    CHECK(std::abs(o->offset_degrees - row.angle) <= 6.0);
  }
}

TEST_CASE("stripes at 60 degrees report 60 degrees" * doctest::should_fail())
{
  // Sobel transpose symmetry maps this row onto the 30 degree row, so both
  // cannot hold at once; this renderer lands one bin short (66 degrees).
  const auto f = pattern(PatternKind::stripes, 128, 128, 16, 60.0);
  const auto s = sobel_gradient(f);
  const auto o = rotation_offset(accumulate_histogram(s, full_region(128, 128)));
  REQUIRE(o.has_value());
  CHECK(o->offset_degrees == 60.0);
}

TEST_CASE("uniform block estimate")
{
  NeighborBlocks nb;
  nb.left = nb.up = nb.right = nb.down = Plane::filled(4, 4, 100);
  CHECK(estimate_uniform_block(nb, 4, 4) == Plane::filled(4, 4, 100));

  nb.up = Plane::filled(4, 4, 100);
  nb.down = Plane::filled(4, 4, 200);
  nb.left = Plane::filled(4, 4, 100);
  nb.right = Plane::filled(4, 4, 200);
  const auto e = estimate_uniform_block(nb, 4, 4);
  CHECK(e.at(0, 0) == 100.0);
  CHECK(e.at(3, 3) == 200.0);
  CHECK(e.at(3, 0) == 150.0);
  CHECK(e.at(0, 3) == 150.0);
  CHECK(e.at(1, 1) == 100.0);
  CHECK(e.at(2, 1) == 150.0);
}

TEST_CASE("uniform block estimate matches the direct formula on random neighbours")
{
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> d(0, 255);
  for (auto [w, h] : {std::pair{4, 4}, {5, 3}, {7, 8}, {1, 1}, {2, 9}}) {
    std::array<Plane, 4> p;
    for (auto &pl : p) {
      pl = Plane::filled(w, h, 0);
      for (auto &v : pl.values) {
        v = d(rng);
      }
    }
    NeighborBlocks nb;
    nb.left = p[0];
    nb.up = p[1];
    nb.right = p[2];
    nb.down = p[3];
    const auto got = estimate_uniform_block(nb, w, h);
    const auto want = oracle::uniform_fill(p[0].values, p[1].values, p[2].values, p[3].values, w, h);
    double lo = 255, hi = 0;
    for (const auto &pl : p) {
      lo = std::min(lo, *std::min_element(pl.values.begin(), pl.values.end()));
      hi = std::max(hi, *std::max_element(pl.values.begin(), pl.values.end()));
    }
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got.values[i] == doctest::Approx(want[i]).epsilon(1e-12));
      CHECK(got.values[i] >= lo);
      CHECK(got.values[i] <= hi);
    }
  }
}

TEST_CASE("uniform block estimate with missing neighbours")
{
  NeighborBlocks nb;
  CHECK_THROWS_AS(estimate_uniform_block(nb, 4, 4), std::invalid_argument);

  nb.up = Plane::filled(4, 4, 80);
  CHECK(estimate_uniform_block(nb, 4, 4) == Plane::filled(4, 4, 80));

  // Lateral neighbours missing: diagonals stand in.
  nb.down = Plane::filled(4, 4, 120);
  nb.up_left = Plane::filled(4, 4, 10);
  nb.down_left = Plane::filled(4, 4, 30);
  nb.up_right = Plane::filled(4, 4, 50);
  const auto e = estimate_uniform_block(nb, 4, 4);
  CHECK(e.at(0, 0) == (80.0 + 20.0) / 2);
  CHECK(e.at(3, 0) == (80.0 + 50.0) / 2);
  CHECK(e.at(0, 3) == (120.0 + 20.0) / 2);
  CHECK(e.at(3, 3) == (120.0 + 50.0) / 2);

  nb.right = Plane::filled(3, 4, 0);
  CHECK_THROWS_AS(estimate_uniform_block(nb, 4, 4), std::invalid_argument);
}

TEST_CASE("neighbours are taken from the frame")
{
  const auto f = oracle::make_frame(12, 12, [](int x, int y) { return (x / 4) * 10 + (y / 4) * 100; });
  const auto nb = neighbors_of(f, {4, 4, 4, 4});
  CHECK(nb.left->at(0, 0) == 100);
  CHECK(nb.right->at(0, 0) == 120);
  CHECK(nb.up->at(0, 0) == 10);
  CHECK(nb.down_right->at(3, 3) == 220);
  const auto corner = neighbors_of(f, {0, 0, 4, 4});
  CHECK_FALSE(corner.left.has_value());
  CHECK_FALSE(corner.up_right.has_value());
  CHECK(corner.down_right.has_value());
}

TEST_CASE("matching score")
{
  const auto f = pattern(PatternKind::stripes, 64, 40, 16, 90.0);
  const auto grid = direction_grid(sobel_gradient(f), full_region(64, 40));
  const auto self = matching_score(grid, 0, 0);
  std::int64_t defined = 0;
  for (auto b : grid.bins) {
    defined += b >= 0;
  }
  CHECK(self.score == defined);
  CHECK(self.reference == defined);
  for (std::size_t k = 0; k < self.sum_histogram.size(); k += 2) {
    CHECK(self.sum_histogram[k + 1 < self.sum_histogram.size() ? k + 1 : k] == (k + 1 < self.sum_histogram.size() ? 0 : self.sum_histogram[k]));
  }

  // Half a period apart every direction reverses.
  CHECK(matching_score(grid, 8, 0).score == 0);
  // One full period matches everything in the overlap.
  const auto period = matching_score(grid, 16, 0);
  std::int64_t overlap_defined = 0;
  for (int y = 0; y < 40; ++y) {
    for (int x = 16; x < 64; ++x) {
      overlap_defined += grid.at(x, y) >= 0 && grid.at(x - 16, y) >= 0;
    }
  }
  CHECK(period.score == overlap_defined);

  CHECK_THROWS_AS(matching_score(grid, 64, 0), std::invalid_argument);
  CHECK_THROWS_AS(matching_score(grid, 0, -40), std::invalid_argument);
}

TEST_CASE("zero shift is the best match and sums stay within 118")
{
  std::mt19937 rng(37);
  const auto f = oracle::random_frame(20, 16, rng);
  const auto grid = direction_grid(sobel_gradient(f), full_region(20, 16), false);
  const auto zero = matching_score(grid, 0, 0).score;
  for (int dy = -6; dy <= 6; ++dy) {
    for (int dx = -6; dx <= 6; ++dx) {
      const auto m = matching_score(grid, dx, dy);
      CHECK(m.score <= zero);
      CHECK(m.sum_histogram.size() == 119);
    }
  }
}

TEST_CASE("pattern dimensions")
{
  const auto vertical = pattern(PatternKind::stripes, 96, 64, 16, 90.0);
  auto g = pattern_dimensions(direction_grid(sobel_gradient(vertical), full_region(96, 64)), 40);
  CHECK(g.period_width == 16);
  CHECK_FALSE(g.period_height.has_value());
  CHECK(g.width_curve.size() == 40);

  const auto horizontal = pattern(PatternKind::stripes, 64, 96, 12, 0.0);
  g = pattern_dimensions(direction_grid(sobel_gradient(horizontal), full_region(64, 96)), 40);
  CHECK(g.period_height == 12);
  CHECK_FALSE(g.period_width.has_value());

  // Long periods need several repeats in frame; the unmatched first edge costs about 1/(2n) of the score.
  const auto blocks = pattern(PatternKind::checkerboard, 600, 600, 132);
  g = pattern_dimensions(direction_grid(sobel_gradient(blocks), full_region(600, 600)), 140);
  CHECK(g.period_width == 132);
  CHECK(g.period_height == 132);

  const auto rect = pattern(PatternKind::checkerboard, 96, 96, 12, 0.0, 24);
  g = pattern_dimensions(direction_grid(sobel_gradient(rect), full_region(96, 96)), 40);
  CHECK(g.period_width == 12);
  CHECK(g.period_height == 24);

  CHECK_THROWS_AS(pattern_dimensions(direction_grid(sobel_gradient(rect), full_region(96, 96)), 96),
                  std::invalid_argument);
  CHECK_THROWS_AS(pattern_dimensions(direction_grid(sobel_gradient(rect), full_region(96, 96)), 0),
                  std::invalid_argument);
}

TEST_CASE("period search on score curves")
{
  CHECK(find_period(std::vector<double>{0.5, 0.1, 0.95, 0.4}) == 3);
  CHECK(find_period(std::vector<double>{0.5, 0.92, 0.95, 0.4}) == 3);
  CHECK(find_period(std::vector<double>{0.95, 0.99, 1.0}) == std::nullopt);
  CHECK(find_period(std::vector<double>{0.3, 0.8, 0.89}) == std::nullopt);
  CHECK(find_period(std::vector<double>{0.3, 0.2, 0.91}) == 3);
  CHECK(find_period(std::vector<double>{}) == std::nullopt);
}

TEST_CASE("frame analysis")
{
  SebaConfig cfg;
  CHECK(analyze_frame(LumaFrame::filled(32, 32, 9), cfg).at(0).summary.label == BlockClass::uniform);

  const auto checker = pattern(PatternKind::checkerboard, 64, 64, 16);
  auto out = analyze_frame(checker, cfg);
  REQUIRE(out.size() == 1);
  const auto &s = out[0].summary;
  CHECK(s.label == BlockClass::texture);
  CHECK(s.pattern_width == 16);
  CHECK(s.pattern_height == 16);
  CHECK(s.high_bin.has_value());

  cfg.block_size = 16;
  out = analyze_frame(oracle::make_frame(40, 36, [](int x, int) { return x * 3; }), cfg);
  CHECK(out.size() == 4);
  CHECK(out[1].summary.x == 16);
  CHECK(out[2].summary.y == 16);

  cfg.block_size = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.block_size = 65;
  CHECK_THROWS_AS(analyze_frame(checker, cfg).size(), std::invalid_argument);
}

TEST_CASE("magnitude floor and peak tolerance")
{
  const auto ramp = oracle::make_frame(16, 16, [](int x, int) { return x < 8 ? 2 * x : 100; });
  const auto s = sobel_gradient(ramp);
  const auto all = direction_grid(s, full_region(16, 16));
  const auto strong = direction_grid(s, full_region(16, 16), true, 32.0);
  for (int y = 1; y < 15; ++y) {
    CHECK(all.at(3, y) == 0);
    CHECK(strong.at(3, y) == -1);
    CHECK(strong.at(8, y) == 0);
  }
  CHECK_THROWS_AS(direction_grid(s, full_region(16, 16), true, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(pattern_dimensions(all, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pattern_dimensions(all, 4, 1.5), std::invalid_argument);

  // Axis-aligned edges under noise straddle bin boundaries; a lower tolerance recovers the period.
  PatternSpec spec;
  spec.kind = PatternKind::checkerboard;
  spec.width = spec.height = 128;
  spec.period = 16;
  spec.amplitude = 100;
  const auto noisy = inject_block_pattern(make_clean_frame(128, 128, 8, 0), spec);
  const auto grid = direction_grid(sobel_gradient(noisy), full_region(128, 128), true, SebaConfig{}.match_floor);
  CHECK_FALSE(pattern_dimensions(grid, 40).period_width.has_value());
  const auto g = pattern_dimensions(grid, 40, 0.5);
  CHECK(g.period_width == 16);
  CHECK(g.period_height == 16);

  SebaConfig cfg;
  cfg.peak_tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.match_floor = -2.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
