#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace backbone;
using testing_util::from_colors;
using testing_util::make_instance;

namespace {

// lambda*|S| + sum of nearest distances, S ranging over all subsets of
// `choices` of size 1..k.
Rational best_subset(const std::vector<Rational>& ys, const std::vector<Rational>& choices, int k, const Rational& lambda) {
  std::optional<Rational> best;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int from) {
    if (!pick.empty()) {
      Rational cost = lambda * Rational(static_cast<std::int64_t>(pick.size()));
      for (const auto& y : ys) {
        Rational d = abs_diff(y, choices[static_cast<std::size_t>(pick[0])]);
        for (int s : pick) d = std::min(d, abs_diff(y, choices[static_cast<std::size_t>(s)]));
        cost += d;
      }
      if (!best || cost < *best) best = cost;
    }
    if (static_cast<int>(pick.size()) == k) return;
    for (int s = from; s < static_cast<int>(choices.size()); ++s) {
      pick.push_back(s);
      rec(s + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return *best;
}

std::vector<std::int64_t> random_ys(std::mt19937_64& rng, int n) {
  std::set<std::int64_t, std::greater<>> ys;
  while (static_cast<int>(ys.size()) < n) ys.insert(static_cast<std::int64_t>(rng() % 60));
  return {ys.begin(), ys.end()};
}

Cost length_or_inf(const Instance& inst, Extent e) {
  try {
    return e == Extent::Infinite ? Cost(min_length_infinite(inst).objective.length) : Cost(min_length_finite(inst).objective.length);
  } catch (const InfeasibleError&) {
    return Cost::infinity();
  }
}

}  // namespace

TEST(SingleColor, OneMedian) {
  auto r = min_length_single_color({10, 2, 0}, 1, Rational(0));
  EXPECT_EQ(r.cost, Rational(10));
  EXPECT_EQ(r.positions, (std::vector<std::int64_t>{2}));
}

TEST(SingleColor, TwoMedians) {
  EXPECT_EQ(min_length_single_color({10, 2, 0}, 2, Rational(0)).cost, Rational(2));
}

TEST(SingleColor, ExpensiveLabels) {
  auto r = min_length_single_color({10, 2, 0}, 3, Rational(100));
  EXPECT_EQ(r.cost, Rational(110));
  EXPECT_EQ(r.positions, (std::vector<std::int64_t>{2}));
}

TEST(SingleColor, RejectsZeroBudget) { EXPECT_THROW(min_length_single_color({3, 1}, 0, Rational(0)), ValidationError); }

TEST(SingleColor, MatchesSubsetEnumeration) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8), k = 1 + static_cast<int>(rng() % 3);
    const Rational lambda(static_cast<std::int64_t>(rng() % 3 == 0 ? 0 : rng() % 20));
    auto ys = random_ys(rng, n);
    std::vector<Rational> ry(ys.begin(), ys.end());
    auto r = min_length_single_color(ys, k, lambda);
    EXPECT_EQ(r.cost, best_subset(ry, ry, k, lambda)) << "trial " << trial;
    EXPECT_LE(static_cast<int>(r.positions.size()), k);
  }
}

TEST(SingleColor, FineGridNeverBeatsPoints) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5), k = 1 + static_cast<int>(rng() % 2);
    auto ys = random_ys(rng, n);
    std::vector<Rational> ry(ys.begin(), ys.end()), grid;
    const std::int64_t lo = ys.back(), hi = ys.front(), m = 10 * n;
    for (std::int64_t t = 0; t < m; ++t) grid.push_back(Rational(lo) + Rational(hi - lo) * Rational(t, m - 1));
    EXPECT_GE(best_subset(ry, grid, k, Rational(0)), min_length_single_color(ys, k, Rational(0)).cost);
  }
}

TEST(Candidates, SinglePoint) {
  Instance inst = make_instance({{3, 4, 0}}, 1);
  auto c = build_candidates(inst);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_FALSE(c[0].usable());
  EXPECT_EQ(c[1].color, 0);
  EXPECT_FALSE(c[2].usable());
}

TEST(Candidates, FivePointColoring) {
  // red, red, blue, green, blue from top to bottom
  Instance inst = from_colors({0, 0, 1, 2, 1}, 3);
  auto c = build_candidates(inst);
  ASSERT_EQ(c.size(), 15u);
  EXPECT_EQ(c[0].color, 1);      // just above p1: first differing color below is blue
  EXPECT_FALSE(c[2].usable());   // just below p1
  EXPECT_FALSE(c[5].usable());   // just below p2
  EXPECT_FALSE(c[12].usable());  // just above p5
  for (int p = 0; p < 5; ++p) EXPECT_EQ(c[static_cast<std::size_t>(3 * p + 1)].color, inst.color_of(p));
  EXPECT_EQ(c[8].color, 0);      // just below blue p3: red above
  EXPECT_EQ(c[9].color, 1);      // just above green p4: blue below
}

TEST(Link, EmptyRange) {
  Instance inst = make_instance({{1, 8, 0}, {2, 1, 1}}, 2);
  auto c = build_candidates(inst);
  EXPECT_EQ(link_cost(inst, c, 1, 4).value(), Rational(0));
}

TEST(Link, DifferentColorsGoToTheirOwnLine) {
  Instance inst = make_instance({{1, 8, 0}, {2, 5, 0}, {3, 1, 1}}, 2);
  auto c = build_candidates(inst);
  EXPECT_EQ(link_cost(inst, c, 1, 7).value(), Rational(3));
}

TEST(Link, ThirdColorBlocks) {
  Instance inst = make_instance({{1, 8, 0}, {2, 5, 2}, {3, 1, 1}}, 3);
  auto c = build_candidates(inst);
  EXPECT_FALSE(link_cost(inst, c, 1, 7).finite());
}

TEST(Link, SameColorsUseNearerLine) {
  Instance inst = make_instance({{1, 10, 0}, {2, 8, 0}, {3, 3, 0}, {4, 0, 0}}, 1);
  auto c = build_candidates(inst);
  EXPECT_EQ(link_cost(inst, c, 1, 10).value(), Rational(2 + 3));
}

TEST(LengthInfinite, OneColorReducesToMedians) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    Instance inst = generate(1 + static_cast<int>(rng() % 9), 1, 100 + static_cast<std::uint64_t>(trial), 50, 50);
    const int k = 1 + static_cast<int>(rng() % 3);
    inst.budget = PerColorBudget{{k}};
    std::vector<std::int64_t> ys;
    for (const auto& p : inst.points) ys.push_back(p.y);
    EXPECT_EQ(min_length_infinite(inst).objective.length, min_length_single_color(ys, k, Rational(0)).cost);
  }
}

TEST(LengthInfinite, AlternatingTwoColors) {
  Instance inst = from_colors({0, 1, 0, 1}, 2);
  inst.budget = PerColorBudget{{1, 1}};
  Labeling lab = min_length_infinite(inst);
  EXPECT_EQ(lab.objective.length, oracle::oracle_min_length(inst, Extent::Infinite));
  EXPECT_TRUE(verify(inst, lab, Mode::LengthInfinite).all_ok);
}

TEST(LengthInfinite, UnboundedIsFree) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = generate(15, 4, seed, 80, 80);
    EXPECT_EQ(min_length_infinite(inst).objective.length, Rational(0));
  }
}

TEST(LengthInfinite, WidthChargesEachLabel) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Instance zero = testing_util::random_instance(seed, 7, 2, 40);
    zero.budget = TotalBudget{3};
    Instance width = zero;
    width.lambda_mode = LambdaMode::Width;
    Cost cz = length_or_inf(zero, Extent::Infinite), cw = length_or_inf(width, Extent::Infinite);
    ASSERT_EQ(cz.finite(), cw.finite());
    if (!cz.finite()) continue;
    Labeling lab = min_length_infinite(zero);
    EXPECT_EQ(total_length(zero, lab, LambdaMode::Width),
              total_length(zero, lab, LambdaMode::Zero) + Rational(zero.width * lab.objective.labels));
    EXPECT_GE(cw.value(), cz.value() + Rational(zero.width * zero.distinct_colors_present()));
  }
}

TEST(Length, MatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    std::mt19937_64 rng(seed);
    Instance inst = testing_util::random_instance(seed + 300, 7, 2, 40);
    const int c = inst.color_count();
    if (rng() % 2) {
      inst.budget = TotalBudget{1 + static_cast<int>(rng() % 3)};
    } else {
      PerColorBudget per;
      for (int i = 0; i < c; ++i) per.k.push_back(1 + static_cast<int>(rng() % 2));
      inst.budget = per;
    }
    inst.lambda_mode = rng() % 2 ? LambdaMode::Width : LambdaMode::Zero;
    for (Extent e : {Extent::Infinite, Extent::Finite}) {
      Cost want = Cost::infinity();
      try {
        want = oracle::oracle_min_length(inst, e);
      } catch (const InfeasibleError&) {
      }
      EXPECT_EQ(length_or_inf(inst, e), want) << "seed " << seed << " extent " << static_cast<int>(e);
    }
  }
}

TEST(Length, OutputsVerify) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Instance inst = testing_util::random_instance(seed + 700, 9, 3, 60);
    inst.budget = TotalBudget{inst.color_count() + 1};
    for (Extent e : {Extent::Infinite, Extent::Finite}) {
      try {
        Labeling lab = e == Extent::Infinite ? min_length_infinite(inst) : min_length_finite(inst);
        EXPECT_TRUE(verify(inst, lab, e == Extent::Infinite ? Mode::LengthInfinite : Mode::LengthFinite).all_ok) << "seed " << seed;
      } catch (const InfeasibleError&) {
        EXPECT_EQ(e, Extent::Infinite);
      }
    }
  }
}

TEST(Length, BudgetMonotone) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Instance inst = testing_util::random_instance(seed + 900, 8, 3, 50);
    for (Extent e : {Extent::Infinite, Extent::Finite}) {
      Cost prev = Cost::infinity();
      for (int k = 1; k <= 5; ++k) {
        inst.budget = TotalBudget{k};
        Cost cur = length_or_inf(inst, e);
        EXPECT_FALSE(prev < cur) << "seed " << seed << " k " << k;
        prev = cur;
      }
    }
  }
}

TEST(Length, PerColorBudgetMonotone) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Instance inst = testing_util::random_instance(seed + 950, 7, 2, 50);
    PerColorBudget base{std::vector<int>(static_cast<std::size_t>(inst.color_count()), 1)};
    inst.budget = base;
    Cost before = length_or_inf(inst, Extent::Infinite);
    base.k[0] = 2;
    inst.budget = base;
    EXPECT_FALSE(before < length_or_inf(inst, Extent::Infinite)) << "seed " << seed;
  }
}

TEST(LengthFinite, NoWorseThanInfinite) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Instance inst = testing_util::random_instance(seed + 400, 8, 3, 50);
    inst.budget = TotalBudget{3};
    EXPECT_FALSE(length_or_inf(inst, Extent::Infinite) < length_or_inf(inst, Extent::Finite)) << "seed " << seed;
  }
}

TEST(LengthFinite, SinglePointUsesThroughPosition) {
  Instance inst = make_instance({{4, 7, 0}}, 1);
  inst.budget = TotalBudget{1};
  Labeling lab = min_length_finite(inst);
  ASSERT_EQ(lab.backbones.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<OnPoint>(lab.backbones[0].position));
  EXPECT_EQ(lab.objective.length, Rational(0));
}

TEST(LengthFinite, PositionsAreSymbolicWithoutDelta) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = testing_util::random_instance(seed + 1200, 8, 3, 50);
    inst.budget = TotalBudget{2};
    try {
      for (const auto& b : min_length_finite(inst).backbones)
        EXPECT_TRUE(std::holds_alternative<OnPoint>(b.position) || std::holds_alternative<NearPoint>(b.position));
    } catch (const InfeasibleError&) {
    }
  }
}

TEST(LengthFinite, DeltaSample) {
  Instance inst = parse_instance(R"({"width": 24, "height": 24, "colors": ["red", "blue"],
    "points": [{"x": 7, "y": 22, "color": "blue"}, {"x": 19, "y": 17, "color": "red"}, {"x": 2, "y": 13, "color": "red"},
               {"x": 14, "y": 9, "color": "blue"}, {"x": 22, "y": 3, "color": "red"}],
    "budget": {"total": 3}, "lambda_mode": "width", "delta": "1/2"})");
  Labeling lab = min_length_finite(inst);
  auto r = verify(inst, lab, Mode::LengthFinite);
  EXPECT_TRUE(r.all_ok);
  EXPECT_TRUE(r.distance_ok);
  EXPECT_EQ(lab.objective.length, oracle::oracle_min_length(inst, Extent::Finite));
}

TEST(LengthFinite, DeltaMatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::mt19937_64 rng(seed);
    Instance inst = testing_util::random_instance(seed + 1500, 5, 2, 20);
    inst.budget = TotalBudget{1 + static_cast<int>(rng() % 3)};
    inst.delta = Rational(1 + static_cast<std::int64_t>(rng() % 4), 1 + static_cast<std::int64_t>(rng() % 3));
    Cost want = Cost::infinity();
    try {
      want = oracle::oracle_min_length(inst, Extent::Finite);
    } catch (const InfeasibleError&) {
    }
    EXPECT_EQ(length_or_inf(inst, Extent::Finite), want) << "seed " << seed;
  }
}

TEST(LengthFinite, HugeDeltaIsInfeasible) {
  Instance inst = from_colors({0, 1, 0}, 2);
  inst.budget = TotalBudget{2};
  inst.delta = Rational(1000);
  EXPECT_THROW(min_length_finite(inst), InfeasibleError);
}

TEST(LengthInfinite, TightBudgetIsInfeasible) {
  Instance inst = from_colors({0, 1, 2, 0}, 3);
  inst.budget = TotalBudget{2};
  EXPECT_THROW(min_length_infinite(inst), InfeasibleError);
  EXPECT_THROW(min_length_finite(inst), InfeasibleError);
}
