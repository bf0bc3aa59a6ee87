#pragma once

#include "backbone/geometry.hpp"
#include "backbone/verify.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

// Exhaustive reference solvers. They enumerate explicit configurations and
// share nothing with the dynamic programs except the crossing counter.
namespace backbone::oracle {

enum class Pruning { Pruned, Paranoid };

using Visitor = std::function<void(const Labeling&)>;

namespace detail {

inline std::vector<ColorId> present_colors(const Instance& inst) {
  std::vector<ColorId> out;
  auto counts = inst.points_per_color();
  for (int c = 0; c < inst.color_count(); ++c)
    if (counts[static_cast<std::size_t>(c)] > 0) out.push_back(c);
  return out;
}

inline std::vector<int> by_x(const Instance& inst) {
  std::vector<int> order(static_cast<std::size_t>(inst.n()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return inst.x(a) < inst.x(b); });
  return order;
}

// Colors worth trying for a backbone in gap g when pruning is on.
inline std::vector<ColorId> pruned_colors(const Instance& inst, int g) {
  const int n = inst.n();
  std::set<ColorId> s;
  auto first_diff = [&](int from, int step) {
    for (int q = from + step; q >= 0 && q < n; q += step)
      if (inst.color_of(q) != inst.color_of(from)) return inst.color_of(q);
    return ColorId{-1};
  };
  if (g == 0) {
    s = {inst.color_of(0)};
    if (auto c = first_diff(0, 1); c >= 0) s.insert(c);
  } else if (g == n) {
    s = {inst.color_of(n - 1)};
    if (auto c = first_diff(n - 1, -1); c >= 0) s.insert(c);
  } else {
    s = lemma1_admissible(inst, g - 1);
  }
  return {s.begin(), s.end()};
}

struct Slot {
  int gap;
  ColorId color;
};

// Calls f for every sequence of k backbones in gaps (non-decreasing, equal
// gaps stacked top to bottom in sequence order) with a color each. f returns
// false to stop. Returns false if stopped.
inline bool for_each_gap_config(const Instance& inst, int k, Pruning pruning, const std::function<bool(const std::vector<Slot>&)>& f) {
  const int n = inst.n();
  const auto all = present_colors(inst);
  std::vector<std::vector<ColorId>> colors(static_cast<std::size_t>(n) + 1);
  for (int g = 0; g <= n; ++g) colors[static_cast<std::size_t>(g)] = pruning == Pruning::Pruned ? pruned_colors(inst, g) : all;
  const int per_gap = pruning == Pruning::Pruned ? 2 : k;

  std::vector<Slot> seq;
  std::function<bool(int, int)> rec = [&](int from_gap, int in_gap) {
    if (static_cast<int>(seq.size()) == k) return f(seq);
    for (int g = from_gap; g <= n; ++g) {
      const int used = g == from_gap ? in_gap : 0;
      if (used >= per_gap) continue;
      for (ColorId c : colors[static_cast<std::size_t>(g)]) {
        seq.push_back({g, c});
        bool go = rec(g, used + 1);
        seq.pop_back();
        if (!go) return false;
      }
    }
    return true;
  };
  return rec(0, 0);
}

inline Labeling gap_labeling(const std::vector<Slot>& seq, Extent extent) {
  Labeling lab;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    int rank = 0;
    for (std::size_t j = i; j > 0 && seq[j - 1].gap == seq[i].gap; --j) ++rank;
    lab.backbones.push_back({seq[i].color, GapPos{seq[i].gap, rank}, extent, {}});
  }
  return lab;
}

// Infinite backbones: a point can only reach the nearest backbone above or
// below it. Prefers the one above.
inline bool assign_infinite(const Instance& inst, Labeling& lab) {
  std::vector<VerticalKey> keys;
  for (const auto& b : lab.backbones) keys.push_back(position_key(inst, b.position));
  for (int p = 0; p < inst.n(); ++p) {
    const VerticalKey pk = point_key(inst, p);
    int above = -1, below = -1;
    for (int b = 0; b < static_cast<int>(keys.size()); ++b) {
      if (pk < keys[static_cast<std::size_t>(b)]) {
        if (above < 0 || keys[static_cast<std::size_t>(b)] < keys[static_cast<std::size_t>(above)]) above = b;
      } else if (keys[static_cast<std::size_t>(b)] < pk) {
        if (below < 0 || keys[static_cast<std::size_t>(below)] < keys[static_cast<std::size_t>(b)]) below = b;
      }
    }
    if (above >= 0 && lab.backbones[static_cast<std::size_t>(above)].color == inst.color_of(p)) {
      lab.backbones[static_cast<std::size_t>(above)].attached.push_back(p);
    } else if (below >= 0 && lab.backbones[static_cast<std::size_t>(below)].color == inst.color_of(p)) {
      lab.backbones[static_cast<std::size_t>(below)].attached.push_back(p);
    } else {
      return false;
    }
  }
  return true;
}

// Finite backbones: backtracking over points left to right. A backbone's
// reach is fixed by the first point assigned to it, so each crossing test is
// final when made.
inline bool assign_finite(const Instance& inst, Labeling& lab) {
  const auto order = by_x(inst);
  const int nb = static_cast<int>(lab.backbones.size());
  std::vector<VerticalKey> keys;
  for (const auto& b : lab.backbones) keys.push_back(position_key(inst, b.position));
  std::vector<std::int64_t> reach(static_cast<std::size_t>(nb), std::numeric_limits<std::int64_t>::max());
  std::vector<int> owner(static_cast<std::size_t>(inst.n()), -1);

  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == order.size()) return true;
    const int p = order[i];
    const VerticalKey pk = point_key(inst, p);
    for (int b = 0; b < nb; ++b) {
      if (lab.backbones[static_cast<std::size_t>(b)].color != inst.color_of(p)) continue;
      const VerticalKey& bk = keys[static_cast<std::size_t>(b)];
      bool blocked = false;
      for (int o = 0; o < nb && !blocked; ++o) {
        if (o == b || !covers(reach[static_cast<std::size_t>(o)], inst.x(p))) continue;
        const VerticalKey& ok = keys[static_cast<std::size_t>(o)];
        blocked = (pk < ok && ok < bk) || (bk < ok && ok < pk);
      }
      if (blocked) continue;
      const auto saved = reach[static_cast<std::size_t>(b)];
      reach[static_cast<std::size_t>(b)] = std::min(saved, inst.x(p));
      owner[static_cast<std::size_t>(p)] = b;
      if (rec(i + 1)) return true;
      reach[static_cast<std::size_t>(b)] = saved;
    }
    return false;
  };
  if (!rec(0)) return false;
  for (int p = 0; p < inst.n(); ++p) lab.backbones[static_cast<std::size_t>(owner[static_cast<std::size_t>(p)])].attached.push_back(p);
  return true;
}

inline void guard(bool ok, const std::string& what) {
  if (!ok) throw GuardError("instance too large for the exhaustive oracle", what);
}

}  // namespace detail

// Minimum number of labels of a crossing-free labeling, by iterative
// deepening on the label count. Pruning (at most two backbones per gap,
// locally admissible colors) only applies to infinite backbones. When a
// visitor is given, every crossing-free labeling of optimal size is passed
// to it.
inline int oracle_min_labels(const Instance& inst, Extent extent, Pruning pruning = Pruning::Pruned, const Visitor& visit = nullptr) {
  detail::guard(inst.n() <= 10, "n > 10");
  if (inst.n() == 0) return 0;
  if (extent == Extent::Finite) pruning = Pruning::Paranoid;
  const int lower = inst.distinct_colors_present();
  for (int k = lower; k <= inst.n(); ++k) {
    bool found = false;
    detail::for_each_gap_config(inst, k, pruning, [&](const std::vector<detail::Slot>& seq) {
      Labeling lab = detail::gap_labeling(seq, extent);
      bool ok = extent == Extent::Infinite ? detail::assign_infinite(inst, lab) : detail::assign_finite(inst, lab);
      if (!ok || count_crossings(inst, lab) != 0) return true;
      found = true;
      if (!visit) return false;
      lab.objective = evaluate(inst, lab, inst.lambda_mode);
      visit(lab);
      return true;
    });
    if (found) return k;
  }
  throw std::logic_error("one label per point is always feasible");
}

namespace detail {

// Vertical positions for length search: near-above, through and near-below
// each point, or with a minimum distance the through positions plus exact
// positions spaced by multiples of delta from each gap wall.
struct Spot {
  BackbonePosition position;
  Rational y;
  int point = -1;      // through-point spot
  bool stack = false;  // may hold several backbones
};

inline std::vector<Spot> length_spots(const Instance& inst, Extent extent) {
  const int n = inst.n();
  std::vector<Spot> out;
  if (!inst.delta || extent == Extent::Infinite) {
    for (int p = 0; p < n; ++p) {
      Rational y(inst.y(p));
      const bool stack = extent == Extent::Finite;
      out.push_back({NearPoint{p, Side::Above, 0}, y, -1, stack});
      out.push_back({OnPoint{p}, y, p, false});
      out.push_back({NearPoint{p, Side::Below, 0}, y, -1, stack});
    }
    return out;
  }
  const Rational d = *inst.delta;
  std::set<Rational> exact;
  for (int g = 0; g <= n; ++g) {
    const Rational top = g == 0 ? Rational(inst.height) : Rational(inst.y(g - 1));
    const Rational bottom = g == n ? Rational(0) : Rational(inst.y(g));
    for (int m = 1; m <= n; ++m) {
      const Rational a = g > 0 ? top - d * Rational(m) : Rational(-1);
      if (g > 0 && a >= bottom && (g == n || a - bottom >= d)) exact.insert(a);
      const Rational b = g < n ? bottom + d * Rational(m) : Rational(-1);
      if (g < n && b <= top && (g == 0 || top - b >= d)) exact.insert(b);
    }
  }
  for (int p = 0; p < n; ++p) out.push_back({OnPoint{p}, Rational(inst.y(p)), p, false});
  for (const auto& y : exact) out.push_back({ExactY{y}, y, -1, false});
  std::stable_sort(out.begin(), out.end(), [](const Spot& a, const Spot& b) { return a.y > b.y; });
  return out;
}

inline int max_labels(const Instance& inst) {
  if (const auto* t = std::get_if<TotalBudget>(&inst.budget)) return std::min(t->k, inst.n());
  if (const auto* per = std::get_if<PerColorBudget>(&inst.budget)) {
    auto counts = inst.points_per_color();
    int s = 0;
    for (std::size_t c = 0; c < per->k.size(); ++c) s += std::min(per->k[c], counts[c]);
    return s;
  }
  return inst.n();
}

inline bool within_budget(const Instance& inst, const std::vector<int>& per_color, int total) {
  if (const auto* t = std::get_if<TotalBudget>(&inst.budget)) return total <= t->k;
  if (const auto* per = std::get_if<PerColorBudget>(&inst.budget))
    for (std::size_t c = 0; c < per_color.size(); ++c)
      if (per_color[c] > per->k[c]) return false;
  return true;
}

// Cheapest crossing-free attachment for finite backbones at fixed spots,
// with branch and bound. Returns infinity if there is none.
inline Cost finite_assignment_cost(const Instance& inst, const std::vector<VerticalKey>& keys, const std::vector<Rational>& ys,
                                   const std::vector<ColorId>& colors, const std::vector<int>& through, const Cost& bound) {
  const auto order = by_x(inst);
  const int nb = static_cast<int>(keys.size());
  const bool width = inst.lambda_mode == LambdaMode::Width;
  std::vector<std::int64_t> reach(static_cast<std::size_t>(nb), std::numeric_limits<std::int64_t>::max());
  Cost best = bound;

  std::function<void(std::size_t, Rational)> rec = [&](std::size_t i, Rational acc) {
    if (!(Cost(acc) < best)) return;
    if (i == order.size()) {
      best = acc;
      return;
    }
    const int p = order[i];
    const VerticalKey pk = point_key(inst, p);
    // A through-point backbone that already covers p must take it.
    int forced = -1;
    for (int b = 0; b < nb; ++b)
      if (through[static_cast<std::size_t>(b)] == p && covers(reach[static_cast<std::size_t>(b)], inst.x(p))) forced = b;
    for (int b = 0; b < nb; ++b) {
      if (forced >= 0 && b != forced) continue;
      if (colors[static_cast<std::size_t>(b)] != inst.color_of(p)) continue;
      const VerticalKey& bk = keys[static_cast<std::size_t>(b)];
      bool blocked = false;
      for (int o = 0; o < nb && !blocked; ++o) {
        if (o == b || !covers(reach[static_cast<std::size_t>(o)], inst.x(p))) continue;
        const VerticalKey& ok = keys[static_cast<std::size_t>(o)];
        blocked = (pk < ok && ok < bk) || (bk < ok && ok < pk);
      }
      if (blocked) continue;
      Rational step = abs_diff(Rational(inst.y(p)), ys[static_cast<std::size_t>(b)]);
      const auto saved = reach[static_cast<std::size_t>(b)];
      if (saved == std::numeric_limits<std::int64_t>::max() && width) step += Rational(inst.width - inst.x(p));
      reach[static_cast<std::size_t>(b)] = std::min(saved, inst.x(p));
      rec(i + 1, acc + step);
      reach[static_cast<std::size_t>(b)] = saved;
    }
  };
  rec(0, Rational(0));
  if (best == bound) return Cost::infinity();
  return best;
}

}  // namespace detail

// Minimum total length over the symbolic spot set, trying every spot
// sequence within the budget and every crossing-free attachment.
inline Rational oracle_min_length(const Instance& inst, Extent extent) {
  detail::guard(inst.n() <= 7, "n > 7");
  const int kmax = detail::max_labels(inst);
  detail::guard(kmax <= 6, "label budget above 6");
  if (inst.n() == 0) return Rational(0);

  const auto spots = detail::length_spots(inst, extent);
  const auto colors = detail::present_colors(inst);
  const int ns = static_cast<int>(spots.size());
  const Rational lambda = inst.lambda();
  Cost best;

  std::vector<int> chosen;
  std::vector<ColorId> chosen_color;
  std::vector<int> per_color(static_cast<std::size_t>(inst.color_count()), 0);

  auto evaluate_config = [&] {
    const std::size_t nb = chosen.size();
    if (nb == 0) return;
    std::vector<VerticalKey> keys(nb);
    std::vector<Rational> ys(nb);
    std::vector<int> through(nb, -1);
    for (std::size_t b = 0; b < nb; ++b) {
      const detail::Spot& s = spots[static_cast<std::size_t>(chosen[b])];
      ys[b] = s.y;
      through[b] = s.point;
      keys[b] = position_key(inst, s.position);
      // Stacked backbones at one near spot: later ones sit further out.
      if (const auto* near = std::get_if<NearPoint>(&s.position)) {
        int depth = 0;
        for (std::size_t a = 0; a < b; ++a) depth += chosen[a] == chosen[b];
        int stack = depth;
        for (std::size_t a = b + 1; a < nb; ++a) stack += chosen[a] == chosen[b];
        const int rank = near->side == Side::Above ? stack - depth : depth;
        keys[b] = position_key(inst, NearPoint{near->point, near->side, rank});
      }
    }
    if (extent == Extent::Infinite) {
      Rational sum = lambda * Rational(static_cast<std::int64_t>(nb));
      for (int p = 0; p < inst.n(); ++p) {
        const VerticalKey pk = point_key(inst, p);
        std::optional<Rational> d;
        int above = -1, below = -1;
        for (int b = 0; b < static_cast<int>(nb); ++b) {
          const auto& k = keys[static_cast<std::size_t>(b)];
          if (k == pk) above = below = b;
        }
        if (above < 0)
          for (int b = 0; b < static_cast<int>(nb); ++b) {
            const auto& k = keys[static_cast<std::size_t>(b)];
            if (pk < k && (above < 0 || k < keys[static_cast<std::size_t>(above)])) above = b;
            if (k < pk && (below < 0 || keys[static_cast<std::size_t>(below)] < k)) below = b;
          }
        for (int b : {above, below})
          if (b >= 0 && chosen_color[static_cast<std::size_t>(b)] == inst.color_of(p)) {
            Rational v = abs_diff(Rational(inst.y(p)), ys[static_cast<std::size_t>(b)]);
            if (!d || v < *d) d = v;
          }
        if (!d) return;
        sum += *d;
      }
      if (Cost(sum) < best) best = sum;
    } else {
      // Minimum distance between chosen exact spots.
      if (inst.delta)
        for (std::size_t a = 0; a < nb; ++a)
          for (std::size_t b = a + 1; b < nb; ++b)
            if (abs_diff(ys[a], ys[b]) < *inst.delta) return;
      Cost v = detail::finite_assignment_cost(inst, keys, ys, chosen_color, through, best);
      if (v < best) best = v;
    }
  };

  std::function<void(int)> rec = [&](int from) {
    evaluate_config();
    if (static_cast<int>(chosen.size()) == kmax) return;
    for (int s = from; s < ns; ++s) {
      const detail::Spot& spot = spots[static_cast<std::size_t>(s)];
      if (!chosen.empty() && chosen.back() == s && !spot.stack) continue;
      const std::vector<ColorId> options = spot.point >= 0 ? std::vector<ColorId>{inst.color_of(spot.point)} : colors;
      for (ColorId c : options) {
        chosen.push_back(s);
        chosen_color.push_back(c);
        ++per_color[static_cast<std::size_t>(c)];
        if (detail::within_budget(inst, per_color, static_cast<int>(chosen.size()))) rec(s);
        --per_color[static_cast<std::size_t>(c)];
        chosen.pop_back();
        chosen_color.pop_back();
      }
    }
  };
  rec(0);
  if (!best.finite()) throw InfeasibleError("no crossing-free labeling fits the label budget");
  return best.value();
}

enum class CrossingVariant { FixedInfinite, FixedFinite, FlexibleSlots, FlexibleFinite };

namespace detail {

inline std::int64_t best_tuple(const Instance& inst, const std::vector<ColorId>& order, Extent extent) {
  const int k = static_cast<int>(order.size()), n = inst.n();
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<int> gaps(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int i, int from) {
    if (i == k) {
      Labeling lab;
      std::vector<int> backbone_of(static_cast<std::size_t>(inst.color_count()), -1);
      for (int r = 0; r < k; ++r) {
        int rank = 0;
        for (int s = r - 1; s >= 0 && gaps[static_cast<std::size_t>(s)] == gaps[static_cast<std::size_t>(r)]; --s) ++rank;
        backbone_of[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;
        lab.backbones.push_back({order[static_cast<std::size_t>(r)], GapPos{gaps[static_cast<std::size_t>(r)], rank}, extent, {}});
      }
      for (int p = 0; p < n; ++p) lab.backbones[static_cast<std::size_t>(backbone_of[static_cast<std::size_t>(inst.color_of(p))])].attached.push_back(p);
      best = std::min(best, count_crossings(inst, lab));
      return;
    }
    for (int g = from; g <= n; ++g) {
      gaps[static_cast<std::size_t>(i)] = g;
      rec(i + 1, g);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace detail

// Minimum crossings with one backbone per color: gap tuples for a fixed
// order, every permutation onto the slots, or every order times every tuple.
inline std::int64_t oracle_min_crossings(const Instance& inst, CrossingVariant variant) {
  const int k = inst.color_count();
  if (variant == CrossingVariant::FlexibleSlots) {
    detail::guard(k <= 8, "more than 8 colors");
    if (!inst.label_slots || static_cast<int>(inst.label_slots->size()) != k) throw ValidationError("invalid_slots", "instance needs one label slot per color");
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    do {
      Labeling lab;
      for (int c = 0; c < k; ++c)
        lab.backbones.push_back({c, ExactY{Rational((*inst.label_slots)[static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])])}, Extent::Infinite, {}});
      for (int p = 0; p < inst.n(); ++p) lab.backbones[static_cast<std::size_t>(inst.color_of(p))].attached.push_back(p);
      best = std::min(best, count_crossings(inst, lab));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  detail::guard(inst.n() <= 8, "n > 8");
  detail::guard(k <= 4, "more than 4 colors");
  std::vector<ColorId> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  if (variant == CrossingVariant::FixedInfinite) return detail::best_tuple(inst, order, Extent::Infinite);
  if (variant == CrossingVariant::FixedFinite) return detail::best_tuple(inst, order, Extent::Finite);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  do {
    best = std::min(best, detail::best_tuple(inst, order, Extent::Finite));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace backbone::oracle
