#pragma once

#include "backbone/geometry.hpp"
#include "backbone/hungarian.hpp"

#include <algorithm>
#include <numeric>
#include <thread>
#include <vector>

namespace backbone {

// cross[i][g]: crossings caused on backbone i by the other colors' segments
// when backbone i sits in gap g and the label order follows the color index.
struct CrossTable {
  std::vector<std::vector<std::int64_t>> cross;
  Extent variant = Extent::Infinite;
};

// slot_cost[k][s]: crossings of color k's segments when its backbone takes
// slot s (slots indexed as listed in the instance).
using CostMatrix = std::vector<std::vector<std::int64_t>>;

namespace detail {

inline void require_all_colors_present(const Instance& inst) {
  auto counts = inst.points_per_color();
  for (int c = 0; c < inst.color_count(); ++c)
    if (counts[static_cast<std::size_t>(c)] == 0)
      throw ValidationError("empty_color", "every color needs at least one point for crossing minimization",
                            inst.colors[static_cast<std::size_t>(c)]);
}

inline std::vector<std::int64_t> leftmost_x(const Instance& inst) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(inst.color_count()), std::numeric_limits<std::int64_t>::max());
  for (const auto& p : inst.points) out[static_cast<std::size_t>(p.color)] = std::min(out[static_cast<std::size_t>(p.color)], p.x);
  return out;
}

}  // namespace detail

inline CrossTable build_cross_table(const Instance& inst, Extent variant) {
  const int n = inst.n(), k = inst.color_count();
  const auto left = detail::leftmost_x(inst);
  CrossTable t;
  t.variant = variant;
  t.cross.assign(static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(n) + 1, 0));
  for (int i = 0; i < k; ++i) {
    auto& row = t.cross[static_cast<std::size_t>(i)];
    auto reaches = [&](int p) { return variant == Extent::Infinite || covers(left[static_cast<std::size_t>(i)], inst.x(p)); };
    for (int p = 0; p < n; ++p)
      if (inst.color_of(p) < i && reaches(p)) ++row[0];
    for (int g = 1; g <= n; ++g) {
      const int p = g - 1;
      const ColorId j = inst.color_of(p);
      row[static_cast<std::size_t>(g)] = row[static_cast<std::size_t>(g) - 1];
      if (!reaches(p)) continue;
      if (j > i) ++row[static_cast<std::size_t>(g)];
      else if (j < i) --row[static_cast<std::size_t>(g)];
    }
  }
  return t;
}

// One backbone per color, backbones ordered top to bottom by color index,
// every point attached to its color's backbone; minimum crossings.
inline Labeling min_crossings_fixed_order(const Instance& inst, Extent variant) {
  detail::require_all_colors_present(inst);
  const int n = inst.n(), k = inst.color_count();
  Labeling lab;
  if (k == 0) return lab;
  const auto table = build_cross_table(inst, variant);
  const auto gaps = static_cast<std::size_t>(n) + 1;

  // best[i][g] = min over g' <= g of T[i][g']; arg keeps the smallest argmin.
  std::vector<std::vector<std::int64_t>> best(static_cast<std::size_t>(k), std::vector<std::int64_t>(gaps));
  std::vector<std::vector<int>> arg(static_cast<std::size_t>(k), std::vector<int>(gaps));
  for (int i = 0; i < k; ++i) {
    for (std::size_t g = 0; g < gaps; ++g) {
      std::int64_t prev = i == 0 ? 0 : best[static_cast<std::size_t>(i) - 1][g];
      std::int64_t here = prev + table.cross[static_cast<std::size_t>(i)][g];
      if (g == 0 || here < best[static_cast<std::size_t>(i)][g - 1]) {
        best[static_cast<std::size_t>(i)][g] = here;
        arg[static_cast<std::size_t>(i)][g] = static_cast<int>(g);
      } else {
        best[static_cast<std::size_t>(i)][g] = best[static_cast<std::size_t>(i)][g - 1];
        arg[static_cast<std::size_t>(i)][g] = arg[static_cast<std::size_t>(i)][g - 1];
      }
    }
  }

  std::vector<int> gap_of(static_cast<std::size_t>(k));
  int limit = n;
  for (int i = k - 1; i >= 0; --i) {
    gap_of[static_cast<std::size_t>(i)] = arg[static_cast<std::size_t>(i)][static_cast<std::size_t>(limit)];
    limit = gap_of[static_cast<std::size_t>(i)];
  }

  std::vector<int> rank_in_gap(gaps, 0);
  for (int i = 0; i < k; ++i) {
    int g = gap_of[static_cast<std::size_t>(i)];
    lab.backbones.push_back({i, GapPos{g, rank_in_gap[static_cast<std::size_t>(g)]++}, variant, {}});
  }
  for (int p = 0; p < n; ++p) lab.backbones[static_cast<std::size_t>(inst.color_of(p))].attached.push_back(p);
  lab.objective = evaluate(inst, lab, inst.lambda_mode);
  return lab;
}

inline CostMatrix slot_cost_matrix(const Instance& inst) {
  if (!inst.label_slots) throw ValidationError("invalid_slots", "instance has no label slots");
  const auto& slots = *inst.label_slots;
  const int k = inst.color_count();
  if (static_cast<int>(slots.size()) != k) throw ValidationError("invalid_slots", "label_slots must have one entry per color");
  const int s = static_cast<int>(slots.size());

  // rank[j]: number of slots above slot j.
  std::vector<int> order(static_cast<std::size_t>(s));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return slots[static_cast<std::size_t>(a)] > slots[static_cast<std::size_t>(b)]; });
  std::vector<int> rank(static_cast<std::size_t>(s));
  for (int r = 0; r < s; ++r) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;
  std::vector<std::int64_t> descending(static_cast<std::size_t>(s));
  for (int r = 0; r < s; ++r) descending[static_cast<std::size_t>(r)] = slots[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];

  // hist[c][a]: points of color c with exactly a slots above them.
  std::vector<std::vector<std::int64_t>> hist(static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(s) + 1, 0));
  for (const auto& p : inst.points) {
    auto above = std::upper_bound(descending.begin(), descending.end(), p.y, std::greater<>()) - descending.begin();
    ++hist[static_cast<std::size_t>(p.color)][static_cast<std::size_t>(above)];
  }

  CostMatrix cr(static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(s), 0));
  for (int c = 0; c < k; ++c)
    for (int j = 0; j < s; ++j) {
      const int r = rank[static_cast<std::size_t>(j)];
      std::int64_t sum = 0;
      for (int a = 0; a <= s; ++a) {
        const std::int64_t between = a > r ? a - r - 1 : r - a;
        sum += hist[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)] * between;
      }
      cr[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] = sum;
    }
  return cr;
}

// Infinite backbones on the fixed label slots; the color-to-slot bijection
// minimizes the total crossings.
inline Labeling min_crossings_flexible_infinite(const Instance& inst) {
  detail::require_all_colors_present(inst);
  const auto cr = slot_cost_matrix(inst);
  const auto match = hungarian(cr);
  Labeling lab;
  for (int c = 0; c < inst.color_count(); ++c) {
    const auto slot = (*inst.label_slots)[static_cast<std::size_t>(match.column_of_row[static_cast<std::size_t>(c)])];
    lab.backbones.push_back({c, ExactY{Rational(slot)}, Extent::Infinite, {}});
  }
  for (int p = 0; p < inst.n(); ++p) lab.backbones[static_cast<std::size_t>(inst.color_of(p))].attached.push_back(p);
  lab.objective = evaluate(inst, lab, inst.lambda_mode);
  return lab;
}

namespace detail {

// Fixed-order finite solution when the label order is `order` (top first).
inline Labeling fixed_order_labeling(const Instance& inst, const std::vector<ColorId>& order) {
  Instance permuted = inst;
  std::vector<ColorId> new_index(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) new_index[static_cast<std::size_t>(order[r])] = static_cast<ColorId>(r);
  for (auto& p : permuted.points) p.color = new_index[static_cast<std::size_t>(p.color)];
  for (std::size_t r = 0; r < order.size(); ++r) permuted.colors[r] = inst.colors[static_cast<std::size_t>(order[r])];
  Labeling lab = min_crossings_fixed_order(permuted, Extent::Finite);
  for (auto& b : lab.backbones) b.color = order[static_cast<std::size_t>(b.color)];
  return lab;
}

}  // namespace detail

// Finite backbones, one per color, any label order: tries every order and
// keeps the cheapest (lexicographically smallest order on ties).
inline Labeling min_crossings_flexible_finite_exact(const Instance& inst, int max_colors = 8, int threads = 1) {
  detail::require_all_colors_present(inst);
  const int k = inst.color_count();
  if (k > max_colors)
    throw GuardError("too many colors for the exhaustive order search", std::to_string(k) + " > " + std::to_string(max_colors));
  if (k == 0) return {};

  struct Best {
    std::int64_t cost = std::numeric_limits<std::int64_t>::max();
    std::vector<ColorId> order;
    bool better_than(const Best& o) const { return cost < o.cost || (cost == o.cost && order < o.order); }
  };
  // Worker w handles the orders whose top color is congruent to w.
  auto work = [&](int w, int stride) {
    Best best;
    for (int first = w; first < k; first += stride) {
      std::vector<ColorId> order{first};
      for (int c = 0; c < k; ++c)
        if (c != first) order.push_back(c);
      do {
        Best cand{detail::fixed_order_labeling(inst, order).objective.crossings, order};
        if (cand.better_than(best)) best = cand;
      } while (std::next_permutation(order.begin() + 1, order.end()));
    }
    return best;
  };

  const int t = std::max(1, std::min(threads, k));
  std::vector<Best> partial(static_cast<std::size_t>(t));
  if (t == 1) {
    partial[0] = work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < t; ++w) pool.emplace_back([&, w] { partial[static_cast<std::size_t>(w)] = work(w, t); });
    for (auto& th : pool) th.join();
  }
  Best best;
  for (const auto& b : partial)
    if (!b.order.empty() && b.better_than(best)) best = b;

  return detail::fixed_order_labeling(inst, best.order);
}

}  // namespace backbone
