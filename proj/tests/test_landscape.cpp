#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "brute_force.hpp"
#include "reserve/errors.hpp"
#include "reserve/landscape.hpp"

using namespace reserve;

namespace {

Habitat diagonal_3x3() {
  Habitat h{3, std::vector<double>(9, 0.0)};
  h.suitability[0] = h.suitability[4] = h.suitability[8] = 0.9;
  return h;
}

Habitat random_habitat(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Habitat h{n, std::vector<double>(static_cast<std::size_t>(n) * n)};
  for (auto& s : h.suitability) s = u(rng);
  return h;
}

Selection random_selection(std::size_t size, std::mt19937_64& rng) {
  Selection s{std::vector<std::uint8_t>(size)};
  for (auto& b : s.bits) b = rng() & 1U;
  return s;
}

}  // namespace

TEST(GenerateLandscape, RejectsTinyDimension) {
  EXPECT_THROW(generate_landscape(1, 0), InvalidDimensionError);
  EXPECT_THROW(generate_landscape(0, 0), InvalidDimensionError);
  EXPECT_NO_THROW(generate_landscape(2, 0));
}

TEST(GenerateLandscape, DeterministicInSeed) {
  EXPECT_EQ(generate_landscape(2, 7), generate_landscape(2, 7));
  EXPECT_NE(generate_landscape(10, 7).suitability, generate_landscape(10, 8).suitability);
}

TEST(GenerateLandscape, ValuesWithinRanges) {
  const auto land = generate_landscape(20, 3);
  EXPECT_NO_THROW(land.validate());
  for (double s : land.suitability) {
    EXPECT_GE(s, 0.0);
    EXPECT_LT(s, 1.0);
  }
  for (double c : land.cost) {
    EXPECT_GE(c, 1.0);
    EXPECT_LT(c, 10.0);
  }
}

TEST(GenerateLandscape, MeansInsideLawOfLargeNumbersBand) {
  // Band check mirrored by an independent standard-library sampler: both
  // uniform models land inside [0.4,0.6] and [4.5,6.5] for 100 draws with
  // overwhelming probability.
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 2024ULL}) {
    const auto land = generate_landscape(10, seed);
    const double mean_s = std::accumulate(land.suitability.begin(), land.suitability.end(), 0.0) / 100.0;
    const double mean_c = land.total_cost() / 100.0;
    EXPECT_GE(mean_s, 0.4);
    EXPECT_LE(mean_s, 0.6);
    EXPECT_GE(mean_c, 4.5);
    EXPECT_LE(mean_c, 6.5);

    std::mt19937_64 ref(seed);
    std::uniform_real_distribution<double> us(0.0, 1.0);
    std::uniform_real_distribution<double> uc(1.0, 10.0);
    double ref_s = 0.0;
    double ref_c = 0.0;
    for (int i = 0; i < 100; ++i) {
      ref_s += us(ref);
      ref_c += uc(ref);
    }
    EXPECT_NEAR(mean_s, ref_s / 100.0, 0.1);
    EXPECT_NEAR(mean_c, ref_c / 100.0, 1.0);
  }
}

TEST(GenerateLandscape, SubstreamsAreIndependent) {
  // Costs must not share draws with suitability.
  const auto land = generate_landscape(10, 5);
  for (std::size_t p = 0; p < land.parcels(); ++p) {
    EXPECT_NE(land.cost[p], 1.0 + 9.0 * land.suitability[p]);
  }
}

TEST(Mask, IdentityAndAnnihilation) {
  const auto land = generate_landscape(5, 11);
  EXPECT_EQ(mask(land, Selection::all_ones(25)).suitability, land.suitability);
  const auto zero = mask(land, Selection::all_zeros(25));
  for (double s : zero.suitability) EXPECT_EQ(s, 0.0);
}

TEST(Mask, PerCellDefinition) {
  Landscape land = generate_landscape(2, 1);
  land.suitability = {0.8, 0.8, 0.1, 0.2};
  const auto z = mask(land, Selection{{0, 1, 1, 0}});
  EXPECT_EQ(z.suitability[0], 0.0);
  EXPECT_EQ(z.suitability[1], 0.8);
  EXPECT_EQ(z.suitability[2], 0.1);
  EXPECT_EQ(z.suitability[3], 0.0);
}

TEST(Mask, LengthMismatchIsDimensionError) {
  const auto land = generate_landscape(3, 1);
  EXPECT_THROW(mask(land, Selection::all_ones(8)), DimensionError);
  EXPECT_THROW(selection_cost(land, Selection::all_ones(10)), DimensionError);
}

TEST(Mask, IdempotentUnderRepeatedApplication) {
  std::mt19937_64 rng(9);
  const auto land = generate_landscape(6, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_selection(36, rng);
    const Habitat once = mask(land, x);
    Landscape masked_land = land;
    masked_land.suitability = once.suitability;
    EXPECT_EQ(mask(masked_land, x), once);
  }
}

TEST(ExtractPatches, EmptyHabitatHasNoPatches) {
  const Habitat zero{4, std::vector<double>(16, 0.0)};
  EXPECT_TRUE(extract_patches(zero).empty());
}

TEST(ExtractPatches, DiagonalIsThreeSingletonsUnderFourAdjacency) {
  const auto patches = extract_patches(diagonal_3x3(), 0.5, Adjacency::kFour);
  ASSERT_EQ(patches.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(patches.patches[static_cast<std::size_t>(i)].id, i + 1);
    ASSERT_EQ(patches.patches[static_cast<std::size_t>(i)].cells.size(), 1u);
    EXPECT_EQ(patches.patches[static_cast<std::size_t>(i)].cells[0], (Cell{i, i}));
    EXPECT_DOUBLE_EQ(patches.patches[static_cast<std::size_t>(i)].ths, 0.9);
  }
}

TEST(ExtractPatches, DiagonalIsOnePatchUnderEightAdjacency) {
  const auto patches = extract_patches(diagonal_3x3(), 0.5, Adjacency::kEight);
  ASSERT_EQ(patches.size(), 1u);
  EXPECT_NEAR(patches.patches[0].ths, 2.7, 1e-12);
  EXPECT_DOUBLE_EQ(patches.patches[0].centroid_row, 1.0);
  EXPECT_DOUBLE_EQ(patches.patches[0].centroid_col, 1.0);
}

TEST(ExtractPatches, ThresholdIsStrict) {
  Habitat h{2, {0.5, 0.5000001, 0.5, 0.5}};
  const auto patches = extract_patches(h, 0.5);
  ASSERT_EQ(patches.size(), 1u);
  EXPECT_EQ(patches.patches[0].cells[0], (Cell{0, 1}));
}

TEST(ExtractPatches, RejectsThresholdOutsideOpenUnitInterval) {
  const Habitat h{2, std::vector<double>(4, 0.9)};
  EXPECT_THROW(extract_patches(h, 0.0), InvalidArgumentError);
  EXPECT_THROW(extract_patches(h, 1.0), InvalidArgumentError);
}

TEST(ExtractPatches, IdsFollowRowMajorFirstCell) {
  // Patch A starts at (0,2); patch B at (1,0) but is U-shaped around A.
  Habitat h{4, {0, 0, 0.9, 0,  //
                0.9, 0, 0, 0,  //
                0.9, 0, 0, 0.9, //
                0.9, 0.9, 0.9, 0.9}};
  const auto patches = extract_patches(h);
  ASSERT_EQ(patches.size(), 2u);
  EXPECT_EQ(patches.patches[0].cells.front(), (Cell{0, 2}));
  EXPECT_EQ(patches.patches[1].cells.front(), (Cell{1, 0}));
  EXPECT_EQ(patches.patches[1].cells.size(), 7u);
}

TEST(ExtractPatches, PartitionMatchesRelaxationOracle) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 10);
    const bool eight = trial % 2 == 1;
    const auto h = random_habitat(n, rng);
    const auto patches = extract_patches(h, 0.5, eight ? Adjacency::kEight : Adjacency::kFour);
    const auto ref = reference::relaxation_components(h.suitability, n, 0.5, eight);
    ASSERT_EQ(patches.size(), ref.size());
    // Row-major first-cell ids correspond to the ascending smallest member.
    auto it = ref.begin();
    for (const auto& patch : patches.patches) {
      std::set<int> cells;
      for (const auto& c : patch.cells) cells.insert(c.row * n + c.col);
      EXPECT_EQ(cells, it->second.cells);
      EXPECT_NEAR(patch.ths, it->second.ths, 1e-9);
      ++it;
    }
  }
}

TEST(ExtractPatches, RestrictionOnlyShrinksPatches) {
  std::mt19937_64 rng(77);
  const auto land = generate_landscape(8, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_selection(64, rng);
    Selection sub = x;
    for (auto& b : sub.bits) b = b && (rng() & 1U);
    const auto outer = extract_patches(mask(land, x)).label_raster();
    const auto inner = extract_patches(mask(land, sub));
    for (const auto& patch : inner.patches) {
      const int host = outer[static_cast<std::size_t>(patch.cells[0].row * 8 + patch.cells[0].col)];
      ASSERT_GT(host, 0);
      for (const auto& c : patch.cells) EXPECT_EQ(outer[static_cast<std::size_t>(c.row * 8 + c.col)], host);
    }
  }
}

TEST(SelectionCost, SumsSelectedCosts) {
  const auto land = generate_landscape(4, 8);
  EXPECT_EQ(selection_cost(land, Selection::all_zeros(16)), 0.0);
  EXPECT_DOUBLE_EQ(selection_cost(land, Selection::all_ones(16)), land.total_cost());
  for (std::size_t p = 0; p < 16; ++p) {
    Selection one = Selection::all_zeros(16);
    one.bits[p] = 1;
    EXPECT_EQ(selection_cost(land, one), land.cost[p]);
  }
}

TEST(SelectionCost, AdditiveOverUnionAndIntersection) {
  std::mt19937_64 rng(5);
  const auto land = generate_landscape(6, 9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_selection(36, rng);
    const auto b = random_selection(36, rng);
    Selection u = a;
    Selection i = a;
    for (std::size_t p = 0; p < 36; ++p) {
      u.bits[p] = a.bits[p] | b.bits[p];
      i.bits[p] = a.bits[p] & b.bits[p];
    }
    EXPECT_NEAR(selection_cost(land, u) + selection_cost(land, i), selection_cost(land, a) + selection_cost(land, b),
                1e-9);
  }
}

TEST(LandscapeFile, RoundTripIsExact) {
  const auto land = generate_landscape(7, 99);
  std::stringstream buf;
  save_landscape(land, buf);
  const std::string text = buf.str();
  EXPECT_EQ(text.rfind("n 7\nseed 99\n", 0), 0u);
  const auto loaded = load_landscape(buf);
  EXPECT_EQ(loaded, land);
  std::stringstream again;
  save_landscape(loaded, again);
  EXPECT_EQ(again.str(), text);
}

TEST(LandscapeFile, SkipsHeaderCommentAndReportsBadRows) {
  std::stringstream ok("# tool header\nn 2\nseed 3\n0.5 0.25\n1 0\n\n2 3\n4 5\n");
  const auto land = load_landscape(ok);
  EXPECT_EQ(land.n, 2);
  EXPECT_EQ(land.cost[3], 5.0);

  std::stringstream short_row("n 2\nseed 3\n0.5\n1 0\n\n2 3\n4 5\n");
  EXPECT_THROW(load_landscape(short_row), ConfigError);
  std::stringstream bad_cost("n 2\nseed 3\n0.5 0.5\n1 0\n\n2 3\n4 0\n");
  EXPECT_THROW(load_landscape(bad_cost), InvalidArgumentError);
}

TEST(SelectionFile, RoundTripAndValidation) {
  const Selection s{{1, 0, 0, 1, 1, 1, 0, 0, 1}};
  std::stringstream buf;
  save_selection(s, 3, buf);
  EXPECT_EQ(buf.str(), "1 0 0\n1 1 1\n0 0 1\n");
  EXPECT_EQ(load_selection(buf, 3), s);
  std::stringstream bad("1 0 2\n1 1 1\n0 0 1\n");
  EXPECT_THROW(load_selection(bad, 3), ConfigError);
}
