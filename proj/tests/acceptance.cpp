// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// All comparisons of optimal values are exact (integers or rationals); the
// only tolerances are the wall-clock limits below.

#include "backbone/backbone.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace backbone;

namespace {

constexpr double kLabelSuiteSeconds = 60.0;
constexpr double kLabelsInfiniteScaleSeconds = 2.0;
constexpr double kLabelsFiniteScaleSeconds = 30.0;
constexpr double kCrossingsScaleSeconds = 5.0;

constexpr int kScaleLabelsN = 100000;
constexpr int kScaleFiniteN = 60;
constexpr int kScaleFiniteColors = 4;
constexpr int kScaleCrossingsN = 100000;
constexpr int kScaleCrossingsColors = 50;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
  std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << ". " << title << ": " << o.detail << std::endl;
  if (!o.pass) ++failures;
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

// n in [1, max_n], colors in [1, max_colors] (at most n), distinct seeds per criterion.
Instance random_instance(std::uint64_t seed, int max_n, int max_colors, std::int64_t side = 60) {
  std::mt19937_64 rng(seed);
  const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_n));
  const int c = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_colors));
  return generate(n, std::min(n, c), seed * 7919 + 13, side, side);
}

Cost length_or_inf(const std::function<Labeling()>& solve) {
  try {
    return Cost(solve().objective.length);
  } catch (const InfeasibleError&) {
    return Cost::infinity();
  }
}

Cost oracle_length_or_inf(const Instance& inst, Extent e) {
  try {
    return Cost(oracle::oracle_min_length(inst, e));
  } catch (const InfeasibleError&) {
    return Cost::infinity();
  }
}

std::string cost_str(const Cost& c) { return c.finite() ? to_string(c.value()) : "inf"; }

Outcome criterion_label_oracle() {
  const auto t0 = Clock::now();
  int mismatches = 0, invalid = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Instance inst = random_instance(10000 + seed, 8, 3);
    for (Extent e : {Extent::Infinite, Extent::Finite}) {
      Labeling lab = e == Extent::Infinite ? min_labels_infinite(inst) : min_labels_finite(inst);
      const int want = oracle::oracle_min_labels(inst, e);
      if (lab.objective.labels != want) {
        ++mismatches;
        if (first.empty()) first = " (seed " + std::to_string(seed) + ")";
      }
      if (!verify(inst, lab, e == Extent::Infinite ? Mode::LabelsInfinite : Mode::LabelsFinite).all_ok) ++invalid;
    }
  }
  const double s = seconds_since(t0);
  return {mismatches == 0 && invalid == 0 && s < kLabelSuiteSeconds,
          "200 instances x 2 extents, " + std::to_string(mismatches) + " mismatches, " + std::to_string(invalid) +
              " invalid outputs" + first + ", " + fmt_seconds(s) + " (limit " + fmt_seconds(kLabelSuiteSeconds) + ")"};
}

Outcome criterion_clustering() {
  int mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Instance inst = random_instance(20000 + seed, 40, 4, 200);
    if (min_labels_infinite(inst).objective.labels != min_labels_infinite(cluster(inst).clustered).objective.labels) ++mismatches;
  }
  return {mismatches == 0, "200 instances, " + std::to_string(mismatches) + " count differences"};
}

Outcome criterion_lemma1() {
  int violations = 0, audited = 0;
  auto audit = [&](const Instance& inst, const Labeling& lab) {
    ++audited;
    if (!is_crossing_free(inst, lab)) return;
    violations += static_cast<int>(lemma1_violations(inst, lab).size());
  };
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Instance inst = random_instance(30000 + seed, 6, 3);
    audit(inst, min_labels_infinite(inst));
    audit(inst, min_labels_infinite_dense(inst));
    Instance budgeted = inst;
    budgeted.budget = TotalBudget{3};
    try {
      audit(budgeted, min_length_infinite(budgeted));
    } catch (const InfeasibleError&) {
    }
    Instance unbounded = inst;
    audit(unbounded, min_length_infinite(unbounded));
    oracle::oracle_min_labels(inst, Extent::Infinite, oracle::Pruning::Paranoid, [&](const Labeling& lab) { audit(inst, lab); });
  }
  return {violations == 0, std::to_string(audited) + " crossing-free infinite-backbone labelings audited on 50 instances, " +
                               std::to_string(violations) + " violations"};
}

Outcome criterion_length_oracle() {
  int mismatches = 0, invalid = 0, feasible = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(40000 + seed);
    Instance inst = random_instance(40000 + seed, 7, 2, 40);
    if (rng() % 2) {
      inst.budget = TotalBudget{1 + static_cast<int>(rng() % 3)};
    } else {
      PerColorBudget per;
      for (int c = 0; c < inst.color_count(); ++c) per.k.push_back(1 + static_cast<int>(rng() % 3));
      inst.budget = per;
    }
    inst.lambda_mode = seed % 2 ? LambdaMode::Width : LambdaMode::Zero;
    for (Extent e : {Extent::Infinite, Extent::Finite}) {
      Labeling lab;
      Cost got = length_or_inf([&] {
        lab = e == Extent::Infinite ? min_length_infinite(inst) : min_length_finite(inst);
        return lab;
      });
      Cost want = oracle_length_or_inf(inst, e);
      if (!(got == want)) {
        ++mismatches;
        if (first.empty()) first = " (seed " + std::to_string(seed) + ": " + cost_str(got) + " vs " + cost_str(want) + ")";
      }
      if (got.finite()) {
        ++feasible;
        if (!verify(inst, lab, e == Extent::Infinite ? Mode::LengthInfinite : Mode::LengthFinite).all_ok) ++invalid;
      }
    }
  }
  return {mismatches == 0 && invalid == 0, "100 instances x 2 extents (" + std::to_string(feasible) + " feasible), " +
                                               std::to_string(mismatches) + " mismatches, " + std::to_string(invalid) +
                                               " invalid outputs" + first};
}

Rational best_subset(const std::vector<Rational>& ys, const std::vector<Rational>& choices, int k) {
  std::optional<Rational> best;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (!pick.empty()) {
      Rational cost(0);
      for (const auto& y : ys) {
        Rational d = abs_diff(y, choices[pick[0]]);
        for (auto s : pick) d = std::min(d, abs_diff(y, choices[s]));
        cost += d;
      }
      if (!best || cost < *best) best = cost;
    }
    if (static_cast<int>(pick.size()) == k) return;
    for (std::size_t s = from; s < choices.size(); ++s) {
      pick.push_back(s);
      rec(s + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return *best;
}

Outcome criterion_single_color() {
  std::mt19937_64 rng(50000);
  auto draw = [&](int n) {
    std::set<std::int64_t, std::greater<>> ys;
    while (static_cast<int>(ys.size()) < n) ys.insert(static_cast<std::int64_t>(rng() % 80));
    return std::vector<std::int64_t>(ys.begin(), ys.end());
  };
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8), k = 1 + static_cast<int>(rng() % 3);
    auto ys = draw(n);
    std::vector<Rational> ry(ys.begin(), ys.end());
    if (min_length_single_color(ys, k, Rational(0)).cost != best_subset(ry, ry, k)) ++mismatches;
  }
  int grid_wins = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4), k = 1 + static_cast<int>(rng() % 2);
    auto ys = draw(n);
    std::vector<Rational> ry(ys.begin(), ys.end()), grid;
    const std::int64_t lo = ys.back(), hi = ys.front(), m = 10 * n;
    for (std::int64_t t = 0; t < m; ++t) grid.push_back(Rational(lo) + Rational(hi - lo) * Rational(t, m - 1));
    if (best_subset(ry, grid, k) < min_length_single_color(ys, k, Rational(0)).cost) ++grid_wins;
  }
  return {mismatches == 0 && grid_wins == 0, "100 subset comparisons, " + std::to_string(mismatches) + " mismatches; 50 grid checks, " +
                                                 std::to_string(grid_wins) + " grid improvements"};
}

Outcome criterion_crossings_fixed() {
  int mismatches = 0, recount = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Instance inst = random_instance(60000 + seed, 8, 3);
    for (Extent e : {Extent::Infinite, Extent::Finite}) {
      Labeling lab = min_crossings_fixed_order(inst, e);
      auto v = e == Extent::Infinite ? oracle::CrossingVariant::FixedInfinite : oracle::CrossingVariant::FixedFinite;
      if (lab.objective.crossings != oracle::oracle_min_crossings(inst, v)) ++mismatches;
      if (lab.objective.crossings != count_crossings(inst, lab) || !verify(inst, lab, Mode::CrossingsFixed).all_ok) ++recount;
    }
  }
  return {mismatches == 0 && recount == 0, "200 instances x 2 extents, " + std::to_string(mismatches) + " mismatches, " +
                                               std::to_string(recount) + " recount/verify failures"};
}

Outcome criterion_matching() {
  int mismatches = 0, dominance = 0, exact_checked = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(70000 + seed);
    const int k = 1 + static_cast<int>(rng() % 6);
    Instance inst = generate(k + static_cast<int>(rng() % 10), k, 70000 + seed, 100, 100);
    std::set<std::int64_t> taken;
    for (const auto& p : inst.points) taken.insert(p.y);
    std::vector<std::int64_t> slots;
    while (static_cast<int>(slots.size()) < k) {
      auto s = static_cast<std::int64_t>(rng() % 101);
      if (taken.insert(s).second) slots.push_back(s);
    }
    inst.label_slots = slots;
    validate(inst);
    Labeling lab = min_crossings_flexible_infinite(inst);
    if (lab.objective.crossings != oracle::oracle_min_crossings(inst, oracle::CrossingVariant::FlexibleSlots) ||
        lab.objective.crossings != count_crossings(inst, lab) || !verify(inst, lab, Mode::CrossingsFlexible).all_ok)
      ++mismatches;

    Instance plain = inst;
    plain.label_slots.reset();
    Labeling exact = min_crossings_flexible_finite_exact(plain);
    ++exact_checked;
    if (exact.objective.crossings > min_crossings_fixed_order(plain, Extent::Finite).objective.crossings ||
        !verify(plain, exact, Mode::CrossingsExact).all_ok)
      ++dominance;
  }
  return {mismatches == 0 && dominance == 0, "100 slot instances (|C| <= 6), " + std::to_string(mismatches) +
                                                 " matching mismatches; " + std::to_string(exact_checked) +
                                                 " exact-vs-fixed comparisons, " + std::to_string(dominance) + " violations"};
}

Outcome criterion_structural() {
  int label_violations = 0, monotone_violations = 0, tested = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Instance inst = random_instance(80000 + seed, 16, 4, 100);
    ++tested;
    if (min_labels_finite(inst).objective.labels > min_labels_infinite(inst).objective.labels) ++label_violations;
  }
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Instance inst = random_instance(85000 + seed, 9, 3, 60);
    inst.lambda_mode = seed % 2 ? LambdaMode::Width : LambdaMode::Zero;
    for (Extent e : {Extent::Infinite, Extent::Finite}) {
      auto solve = [&](const Instance& i) {
        return length_or_inf([&] { return e == Extent::Infinite ? min_length_infinite(i) : min_length_finite(i); });
      };
      Cost prev = Cost::infinity();
      for (int k = 1; k <= 5; ++k) {
        inst.budget = TotalBudget{k};
        Cost cur = solve(inst);
        if (prev < cur) ++monotone_violations;
        prev = cur;
      }
      PerColorBudget per{std::vector<int>(static_cast<std::size_t>(inst.color_count()), 1)};
      for (int c = 0; c < inst.color_count(); ++c) {
        inst.budget = per;
        Cost before = solve(inst);
        per.k[static_cast<std::size_t>(c)] += 1;
        inst.budget = per;
        if (before < solve(inst)) ++monotone_violations;
      }
    }
  }
  return {label_violations == 0 && monotone_violations == 0,
          std::to_string(tested) + " finite-vs-infinite label comparisons, " + std::to_string(label_violations) +
              " violations; 60 budget sweeps x 2 extents, " + std::to_string(monotone_violations) + " increases"};
}

Outcome criterion_scale() {
  Instance big = generate(kScaleLabelsN, 5, 1, 4 * kScaleLabelsN, 4 * kScaleLabelsN);
  auto t0 = Clock::now();
  Labeling a = min_labels_infinite(big);
  const double s1 = seconds_since(t0);

  Instance mid = generate(kScaleFiniteN, kScaleFiniteColors, 2, 1000, 1000);
  t0 = Clock::now();
  Labeling b = min_labels_finite(mid);
  const double s2 = seconds_since(t0);

  Instance wide = generate(kScaleCrossingsN, kScaleCrossingsColors, 3, 4 * kScaleCrossingsN, 4 * kScaleCrossingsN);
  t0 = Clock::now();
  Labeling c = min_crossings_fixed_order(wide, Extent::Infinite);
  const double s3 = seconds_since(t0);

  const bool valid = verify(big, a, Mode::LabelsInfinite).all_ok && verify(mid, b, Mode::LabelsFinite).all_ok &&
                     verify(wide, c, Mode::CrossingsFixed).all_ok;
  return {valid && s1 < kLabelsInfiniteScaleSeconds && s2 < kLabelsFiniteScaleSeconds && s3 < kCrossingsScaleSeconds,
          "labels-infinite n=" + std::to_string(kScaleLabelsN) + " " + fmt_seconds(s1) + " (limit " + fmt_seconds(kLabelsInfiniteScaleSeconds) +
              "), labels-finite n=" + std::to_string(kScaleFiniteN) + " |C|=" + std::to_string(kScaleFiniteColors) + " " + fmt_seconds(s2) +
              " (limit " + fmt_seconds(kLabelsFiniteScaleSeconds) + "), crossings-fixed n=" + std::to_string(kScaleCrossingsN) +
              " |C|=" + std::to_string(kScaleCrossingsColors) + " " + fmt_seconds(s3) + " (limit " + fmt_seconds(kCrossingsScaleSeconds) +
              ")" + (valid ? "" : ", invalid output")};
}

Outcome criterion_determinism() {
  struct Case {
    Mode mode;
    std::function<Labeling(const Instance&)> solve;
    Instance inst;
  };
  Instance base = generate(14, 3, 90001, 80, 80);
  Instance budgeted = generate(7, 2, 90002, 40, 40);
  budgeted.budget = TotalBudget{3};
  budgeted.lambda_mode = LambdaMode::Width;
  Instance spaced = budgeted;
  spaced.delta = Rational(1, 2);
  Instance slotted = base;
  slotted.label_slots = std::vector<std::int64_t>{};
  {
    std::set<std::int64_t> taken;
    for (const auto& p : base.points) taken.insert(p.y);
    for (std::int64_t s = 1; static_cast<int>(slotted.label_slots->size()) < base.color_count(); s += 7)
      if (!taken.count(s)) slotted.label_slots->push_back(s);
    validate(slotted);
  }
  std::vector<Case> cases{
      {Mode::LabelsInfinite, [](const Instance& i) { return min_labels_infinite(i); }, base},
      {Mode::LabelsFinite, [](const Instance& i) { return min_labels_finite(i); }, base},
      {Mode::LengthInfinite, [](const Instance& i) { return min_length_infinite(i); }, budgeted},
      {Mode::LengthFinite, [](const Instance& i) { return min_length_finite(i); }, budgeted},
      {Mode::LengthFinite, [](const Instance& i) { return min_length_finite(i); }, spaced},
      {Mode::CrossingsFixed, [](const Instance& i) { return min_crossings_fixed_order(i, Extent::Infinite); }, base},
      {Mode::CrossingsFixed, [](const Instance& i) { return min_crossings_fixed_order(i, Extent::Finite); }, base},
      {Mode::CrossingsFlexible, [](const Instance& i) { return min_crossings_flexible_infinite(i); }, slotted},
      {Mode::CrossingsExact, [](const Instance& i) { return min_crossings_flexible_finite_exact(i, 8, 2); }, base},
  };
  int differing = 0, skipped = 0;
  std::string which;
  for (const auto& c : cases) {
    // each run starts from a fresh parse of the serialized instance
    auto run = [&] {
      Instance inst = parse_instance(serialize_instance(c.inst));
      Labeling lab = c.solve(inst);
      return serialize_labeling(inst, lab) + render_svg(inst, lab);
    };
    try {
      if (run() != run()) {
        ++differing;
        which += " " + std::string(mode_name(c.mode));
      }
    } catch (const InfeasibleError&) {
      ++skipped;
    }
  }
  return {differing == 0 && skipped == 0, std::to_string(cases.size()) + " mode runs repeated, " + std::to_string(differing) +
                                              " differ" + which + ", " + std::to_string(skipped) + " infeasible"};
}

}  // namespace

int main() {
  report(1, "label-min oracle equivalence", criterion_label_oracle());
  report(2, "clustering preserves the label count", criterion_clustering());
  report(3, "at most two admissible backbones between consecutive points", criterion_lemma1());
  report(4, "length oracle equivalence", criterion_length_oracle());
  report(5, "single-color K-median", criterion_single_color());
  report(6, "fixed-order crossing DP", criterion_crossings_fixed());
  report(7, "slot matching and exact order search", criterion_matching());
  report(8, "structural inequalities", criterion_structural());
  report(9, "scale smoke test", criterion_scale());
  report(10, "determinism", criterion_determinism());
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
