#pragma once

#include "backbone/types.hpp"

#include <algorithm>
#include <compare>
#include <limits>
#include <numeric>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace backbone {

// Total vertical order over points and symbolic backbone positions. Larger
// keys are higher. Points and through-point positions have tier 0; near
// positions sit at tier +-1 on the point's y; gap slots sit at tier +2 on the
// y of the point just below the gap (tier -2 below the last point).
struct VerticalKey {
  Rational y;
  int tier = 0;
  std::int64_t sub = 0;

  friend bool operator==(const VerticalKey&, const VerticalKey&) = default;
  friend bool operator<(const VerticalKey& a, const VerticalKey& b) {
    if (a.y != b.y) return a.y < b.y;
    if (a.tier != b.tier) return a.tier < b.tier;
    return a.sub < b.sub;
  }
};

inline VerticalKey point_key(const Instance& inst, int i) { return {Rational(inst.y(i)), 0, 0}; }

inline void check_position(const Instance& inst, const BackbonePosition& pos) {
  auto bad = [](const std::string& what) { throw ValidationError("invalid_position", what); };
  if (const auto* g = std::get_if<GapPos>(&pos)) {
    if (g->gap < 0 || g->gap > inst.n() || g->rank < 0) bad("gap position out of range");
  } else if (const auto* on = std::get_if<OnPoint>(&pos)) {
    if (on->point < 0 || on->point >= inst.n()) bad("on-point position out of range");
  } else if (const auto* near = std::get_if<NearPoint>(&pos)) {
    if (near->point < 0 || near->point >= inst.n() || near->rank < 0) bad("near-point position out of range");
  }
}

inline VerticalKey position_key(const Instance& inst, const BackbonePosition& pos) {
  check_position(inst, pos);
  if (const auto* g = std::get_if<GapPos>(&pos)) {
    if (inst.n() == 0) return {Rational(0), 0, -g->rank};
    if (g->gap < inst.n()) return {Rational(inst.y(g->gap)), 2, -g->rank};
    return {Rational(inst.y(inst.n() - 1)), -2, -g->rank};
  }
  if (const auto* on = std::get_if<OnPoint>(&pos)) return {Rational(inst.y(on->point)), 0, 0};
  if (const auto* near = std::get_if<NearPoint>(&pos)) {
    if (near->side == Side::Above) return {Rational(inst.y(near->point)), 1, near->rank};
    return {Rational(inst.y(near->point)), -1, -near->rank};
  }
  return {std::get<ExactY>(pos).y, 0, 0};
}

// Leftmost x covered by a backbone. Infinite backbones cover everything; a
// finite one covers [min attached x, width].
inline std::int64_t reach(const Instance& inst, const Backbone& b) {
  if (b.extent == Extent::Infinite) return std::numeric_limits<std::int64_t>::min();
  std::int64_t m = std::numeric_limits<std::int64_t>::max();
  for (int p : b.attached) m = std::min(m, inst.x(p));
  return m;
}

// Strict coverage: a finite backbone ending exactly at x does not cover x.
inline bool covers(std::int64_t reach_x, std::int64_t x) { return reach_x < x; }

namespace detail {

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  std::int64_t prefix(std::size_t i) const {  // sum over [0, i)
    std::int64_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::int64_t> tree_;
};

inline void check_attachment_indices(const Instance& inst, const Labeling& lab) {
  for (const auto& b : lab.backbones)
    for (int p : b.attached)
      if (p < 0 || p >= inst.n()) throw ValidationError("invalid_attachment", "attached point index out of range", std::to_string(p));
}

}  // namespace detail

// Number of (vertical segment, foreign backbone) crossings. A segment from p
// to its backbone b crosses b' iff b' lies strictly between p and b and b'
// covers x(p). Throws OverlapError for coincident backbones or a backbone
// running through a point it does not serve.
inline std::int64_t count_crossings(const Instance& inst, const Labeling& lab) {
  detail::check_attachment_indices(inst, lab);
  const std::size_t nb = lab.backbones.size();

  std::vector<VerticalKey> keys(nb);
  std::vector<std::int64_t> reaches(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    keys[b] = position_key(inst, lab.backbones[b].position);
    reaches[b] = reach(inst, lab.backbones[b]);
  }

  std::vector<std::size_t> order(nb);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  for (std::size_t i = 1; i < nb; ++i)
    if (keys[order[i]] == keys[order[i - 1]])
      throw OverlapError("two backbones occupy the same position",
                         "backbones " + std::to_string(order[i - 1]) + " and " + std::to_string(order[i]));

  std::unordered_map<std::int64_t, int> point_at_y;
  for (int i = 0; i < inst.n(); ++i) point_at_y.emplace(inst.y(i), i);
  for (std::size_t b = 0; b < nb; ++b) {
    if (keys[b].tier != 0 || keys[b].y.denominator() != 1) continue;
    auto it = point_at_y.find(keys[b].y.numerator());
    if (it == point_at_y.end()) continue;
    const auto& att = lab.backbones[b].attached;
    bool own = std::find(att.begin(), att.end(), it->second) != att.end();
    if (!own && covers(reaches[b], inst.x(it->second)))
      throw OverlapError("backbone runs through a point it does not serve",
                         "backbone " + std::to_string(b) + ", point " + std::to_string(it->second));
  }

  std::vector<VerticalKey> sorted_keys(nb);
  std::vector<std::size_t> slot_of(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    sorted_keys[i] = keys[order[i]];
    slot_of[order[i]] = i;
  }

  struct Query {
    std::int64_t x;
    std::size_t lo, hi;  // slot range [lo, hi)
  };
  std::vector<Query> queries;
  for (std::size_t b = 0; b < nb; ++b) {
    for (int p : lab.backbones[b].attached) {
      VerticalKey pk = point_key(inst, p);
      const VerticalKey& lo_key = pk < keys[b] ? pk : keys[b];
      const VerticalKey& hi_key = pk < keys[b] ? keys[b] : pk;
      auto lo = static_cast<std::size_t>(std::upper_bound(sorted_keys.begin(), sorted_keys.end(), lo_key) - sorted_keys.begin());
      auto hi = static_cast<std::size_t>(std::lower_bound(sorted_keys.begin(), sorted_keys.end(), hi_key) - sorted_keys.begin());
      if (lo < hi) queries.push_back({inst.x(p), lo, hi});
    }
  }
  std::sort(queries.begin(), queries.end(), [](const Query& a, const Query& b) { return a.x < b.x; });

  std::vector<std::size_t> by_reach(nb);
  std::iota(by_reach.begin(), by_reach.end(), 0);
  std::sort(by_reach.begin(), by_reach.end(), [&](std::size_t a, std::size_t b) { return reaches[a] < reaches[b]; });

  detail::Fenwick active(nb);
  std::size_t next = 0;
  std::int64_t total = 0;
  for (const auto& q : queries) {
    while (next < nb && covers(reaches[by_reach[next]], q.x)) active.add(slot_of[by_reach[next++]]);
    total += active.prefix(q.hi) - active.prefix(q.lo);
  }
  return total;
}

inline bool is_crossing_free(const Instance& inst, const Labeling& lab) { return count_crossings(inst, lab) == 0; }

// Interior bounds (upper, lower) of gap g used when a gap slot needs a
// concrete y. The outer gaps extend to the rectangle border, or one unit past
// the extreme point when it sits on the border.
inline std::pair<Rational, Rational> gap_bounds(const Instance& inst, int g) {
  const int n = inst.n();
  if (n == 0) return {Rational(inst.height), Rational(0)};
  if (g == 0) {
    auto top = inst.y(0);
    return {Rational(inst.height > top ? inst.height : top + 1), Rational(top)};
  }
  if (g == n) {
    auto bottom = inst.y(n - 1);
    return {Rational(bottom), Rational(bottom > 0 ? 0 : bottom - 1)};
  }
  return {Rational(inst.y(g - 1)), Rational(inst.y(g))};
}

// Concrete y for every backbone. Gap slots are spread evenly inside their
// gap; near positions are offset by `near_offset * (rank + 1)` (zero for
// length computations, a small epsilon for drawing).
inline std::vector<Rational> materialize_y(const Instance& inst, const Labeling& lab, const Rational& near_offset = Rational(0)) {
  std::unordered_map<int, int> per_gap;
  for (const auto& b : lab.backbones)
    if (const auto* g = std::get_if<GapPos>(&b.position)) per_gap[g->gap] = std::max(per_gap[g->gap], g->rank + 1);

  std::vector<Rational> ys;
  ys.reserve(lab.backbones.size());
  for (const auto& b : lab.backbones) {
    check_position(inst, b.position);
    if (const auto* g = std::get_if<GapPos>(&b.position)) {
      auto [upper, lower] = gap_bounds(inst, g->gap);
      ys.push_back(upper - (upper - lower) * Rational(g->rank + 1, per_gap[g->gap] + 1));
    } else if (const auto* on = std::get_if<OnPoint>(&b.position)) {
      ys.emplace_back(inst.y(on->point));
    } else if (const auto* near = std::get_if<NearPoint>(&b.position)) {
      Rational off = near_offset * Rational(near->rank + 1);
      ys.push_back(Rational(inst.y(near->point)) + (near->side == Side::Above ? off : -off));
    } else {
      ys.push_back(std::get<ExactY>(b.position).y);
    }
  }
  return ys;
}

// Vertical segment lengths plus, in width mode, the horizontal extent of each
// backbone (the full width when infinite).
inline Rational total_length(const Instance& inst, const Labeling& lab, LambdaMode mode) {
  detail::check_attachment_indices(inst, lab);
  auto ys = materialize_y(inst, lab);
  Rational sum(0);
  for (std::size_t b = 0; b < lab.backbones.size(); ++b) {
    const auto& bb = lab.backbones[b];
    for (int p : bb.attached) sum += abs_diff(Rational(inst.y(p)), ys[b]);
    if (mode == LambdaMode::Width) {
      if (bb.extent == Extent::Infinite) {
        sum += Rational(inst.width);
      } else if (!bb.attached.empty()) {
        sum += Rational(inst.width - reach(inst, bb));
      }
    }
  }
  return sum;
}

// Recomputes all three objective fields from scratch.
inline Objective evaluate(const Instance& inst, const Labeling& lab, LambdaMode mode) {
  Objective o;
  o.labels = static_cast<int>(lab.backbones.size());
  o.length = total_length(inst, lab, mode);
  o.crossings = count_crossings(inst, lab);
  return o;
}

}  // namespace backbone
