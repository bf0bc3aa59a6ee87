#pragma once

#include "backbone/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <unordered_map>
#include <vector>

namespace backbone {

inline constexpr ColorId kNoColor = -1;

// Frontier of the top-to-bottom sweep over a clustered instance after point
// i has been handled. `bak` is the color of the lowest backbone placed so
// far, `cur` says it runs through point i, and `free` is the color of the
// points below it still waiting for the next backbone further down.
struct InfiniteState {
  int i = 0;
  bool cur = false;
  ColorId bak = kNoColor;
  ColorId free = kNoColor;

  friend bool operator==(const InfiniteState&, const InfiniteState&) = default;
};

namespace detail {

// Backbone colors tried inside gap g of a clustered instance: the colors of
// the two points on each side (no other color can separate them).
struct LocalColors {
  const Instance& inst;
  void operator()(int gap, std::vector<ColorId>& out) const {
    out.clear();
    for (int p = gap - 2; p <= gap + 1; ++p) {
      if (p < 0 || p >= inst.n()) continue;
      ColorId c = inst.color_of(p);
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  }
};

// Reference policy: every color everywhere.
struct AllColors {
  const Instance& inst;
  void operator()(int, std::vector<ColorId>& out) const {
    out.clear();
    for (ColorId c = 0; c < inst.color_count(); ++c) out.push_back(c);
  }
};

struct NlEntry {
  bool cur;
  ColorId bak, free;
  int cost;
  int parent;                 // index in the previous layer
  std::array<ColorId, 2> gap; // backbones placed in the gap above, top first
  bool on_point;              // backbone placed through the point
};

struct NlStep {
  std::array<ColorId, 2> gap{kNoColor, kNoColor};
  bool on_point = false;
};

// Minimum number of infinite backbones for an instance without two
// consecutive equal colors. Returns the gap/on-point decisions per layer
// (layer i = gap i then point i; layer n = gap n only).
template <typename Policy>
std::vector<NlStep> nl_solve(const Instance& inst, Policy policy, int* out_cost) {
  const int n = inst.n();
  std::vector<std::vector<NlEntry>> layers(static_cast<std::size_t>(n) + 2);
  layers[0].push_back({false, kNoColor, kNoColor, 0, -1, {kNoColor, kNoColor}, false});
  std::vector<ColorId> colors;

  auto relax = [](std::vector<NlEntry>& layer, const NlEntry& e) {
    for (auto& x : layer)
      if (x.cur == e.cur && x.bak == e.bak && x.free == e.free) {
        if (e.cost < x.cost) x = e;
        return;
      }
    layer.push_back(e);
  };

  for (int i = 0; i <= n; ++i) {
    policy(i, colors);
    auto& next = layers[static_cast<std::size_t>(i) + 1];
    const auto& prev = layers[static_cast<std::size_t>(i)];
    for (int s = 0; s < static_cast<int>(prev.size()); ++s) {
      const NlEntry& st = prev[static_cast<std::size_t>(s)];

      // Gap options: nothing, one backbone, or two backbones where the upper
      // one must collect the waiting points.
      struct GapChoice {
        ColorId bak, free;
        int added;
        std::array<ColorId, 2> gap;
        bool cur;
      };
      std::vector<GapChoice> choices;
      choices.push_back({st.bak, st.free, 0, {kNoColor, kNoColor}, st.cur});
      if (st.free == kNoColor) {
        for (ColorId x : colors) choices.push_back({x, kNoColor, 1, {x, kNoColor}, false});
      } else if (std::find(colors.begin(), colors.end(), st.free) != colors.end()) {
        choices.push_back({st.free, kNoColor, 1, {st.free, kNoColor}, false});
        for (ColorId y : colors) choices.push_back({y, kNoColor, 2, {st.free, y}, false});
      }

      for (const auto& ch : choices) {
        if (i == n) {
          if (ch.free == kNoColor) relax(next, {ch.cur, ch.bak, ch.free, st.cost + ch.added, s, ch.gap, false});
          continue;
        }
        const ColorId d = inst.color_of(i);
        // Point served by the backbone above, or left waiting.
        if (ch.bak == d) {
          relax(next, {false, ch.bak, ch.free, st.cost + ch.added, s, ch.gap, false});
        } else if (ch.free == kNoColor || ch.free == d) {
          relax(next, {false, ch.bak, d, st.cost + ch.added, s, ch.gap, false});
        }
        // Backbone through the point.
        if (ch.free == kNoColor || ch.free == d)
          relax(next, {true, d, kNoColor, st.cost + ch.added + 1, s, ch.gap, true});
      }
    }
  }

  const auto& last = layers[static_cast<std::size_t>(n) + 1];
  int best = -1;
  for (int s = 0; s < static_cast<int>(last.size()); ++s)
    if (best < 0 || last[static_cast<std::size_t>(s)].cost < last[static_cast<std::size_t>(best)].cost) best = s;
  *out_cost = last[static_cast<std::size_t>(best)].cost;

  std::vector<NlStep> steps(static_cast<std::size_t>(n) + 1);
  for (int layer = n + 1, s = best; layer > 0; --layer) {
    const auto& e = layers[static_cast<std::size_t>(layer)][static_cast<std::size_t>(s)];
    steps[static_cast<std::size_t>(layer) - 1] = {e.gap, e.on_point};
    s = e.parent;
  }
  return steps;
}

// Attaches every point to a same-colored backbone it can reach without a
// crossing: the one through it, else the nearest above, else the nearest
// below. Assumes infinite backbones.
inline void attach_nearest(const Instance& inst, Labeling& lab) {
  std::vector<std::pair<VerticalKey, int>> keyed;
  for (int b = 0; b < static_cast<int>(lab.backbones.size()); ++b)
    keyed.emplace_back(position_key(inst, lab.backbones[static_cast<std::size_t>(b)].position), b);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (int p = 0; p < inst.n(); ++p) {
    VerticalKey pk = point_key(inst, p);
    auto it = std::lower_bound(keyed.begin(), keyed.end(), pk, [](const auto& e, const VerticalKey& k) { return e.first < k; });
    int chosen = -1;
    if (it != keyed.end() && it->first == pk) {
      chosen = it->second;
    } else {
      if (it != keyed.end() && lab.backbones[static_cast<std::size_t>(it->second)].color == inst.color_of(p)) chosen = it->second;
      if (chosen < 0 && it != keyed.begin()) {
        auto below = std::prev(it);
        if (lab.backbones[static_cast<std::size_t>(below->second)].color == inst.color_of(p)) chosen = below->second;
      }
    }
    if (chosen >= 0) lab.backbones[static_cast<std::size_t>(chosen)].attached.push_back(p);
  }
}

template <typename Policy>
Labeling min_labels_infinite_with(const Instance& inst, bool dense) {
  Clustering cl = cluster(inst);
  const Instance& ci = cl.clustered;
  int cost = 0;
  std::vector<NlStep> steps = dense ? nl_solve(ci, AllColors{ci}, &cost) : nl_solve(ci, LocalColors{ci}, &cost);

  const int nc = ci.n();
  Labeling lab;
  std::vector<int> owner_of_run(static_cast<std::size_t>(nc), -1);
  for (int layer = 0; layer <= nc; ++layer) {
    const auto& st = steps[static_cast<std::size_t>(layer)];
    int gap = layer == 0 ? 0 : cl.run_bottom[static_cast<std::size_t>(layer) - 1] + 1;
    int rank = 0;
    for (ColorId c : st.gap)
      if (c != kNoColor) lab.backbones.push_back({c, GapPos{gap, rank++}, Extent::Infinite, {}});
    if (st.on_point) lab.backbones.push_back({ci.color_of(layer), OnPoint{cl.run_top[static_cast<std::size_t>(layer)]}, Extent::Infinite, {}});
  }

  // Solve the attachment on the representatives, then hand every run member
  // to its representative's backbone. No backbone lies inside a run's strip.
  Labeling rep = lab;
  for (auto& b : rep.backbones) {
    if (auto* on = std::get_if<OnPoint>(&b.position)) {
      int k = static_cast<int>(std::find(cl.run_top.begin(), cl.run_top.end(), on->point) - cl.run_top.begin());
      b.position = OnPoint{k};
    } else if (auto* g = std::get_if<GapPos>(&b.position)) {
      int k = g->gap == 0 ? 0 : static_cast<int>(std::find(cl.run_bottom.begin(), cl.run_bottom.end(), g->gap - 1) - cl.run_bottom.begin()) + 1;
      b.position = GapPos{k, g->rank};
    }
  }
  attach_nearest(ci, rep);
  for (std::size_t b = 0; b < rep.backbones.size(); ++b)
    for (int k : rep.backbones[b].attached) owner_of_run[static_cast<std::size_t>(k)] = static_cast<int>(b);
  for (int p = 0; p < inst.n(); ++p) {
    int owner = owner_of_run[static_cast<std::size_t>(cl.representative[static_cast<std::size_t>(p)])];
    lab.backbones[static_cast<std::size_t>(owner)].attached.push_back(p);
  }
  lab.objective = evaluate(inst, lab, inst.lambda_mode);
  (void)cost;
  return lab;
}

}  // namespace detail

// Crossing-free labeling with the minimum number of infinite backbones.
inline Labeling min_labels_infinite(const Instance& inst) {
  return detail::min_labels_infinite_with<detail::LocalColors>(inst, false);
}

// Same optimum via the dense all-colors state space; kept as a reference.
inline Labeling min_labels_infinite_dense(const Instance& inst) {
  return detail::min_labels_infinite_with<detail::AllColors>(inst, true);
}

// Table cell for the finite-backbone recursion: backbones of color c in gap
// g and c2 in gap g2 bound a region whose leftmost unhandled point is l.
struct FiniteCell {
  int g = 0;
  ColorId c = kNoColor;
  int g2 = 0;
  ColorId c2 = kNoColor;
  int l = -1;
};

namespace detail {

class FiniteLabelDp {
 public:
  explicit FiniteLabelDp(const Instance& inst) : inst_(inst), n_(inst.n()), colors_(inst.color_count() + 1) {
    const auto n1 = static_cast<std::size_t>(n_ + 1);
    leftp_.assign(n1 * n1 * n1, n_);
    // leftp(g, g2, l): leftmost point p with g <= p < g2 and x(p) > x(l);
    // l == n means no threshold.
    for (int g = 0; g <= n_; ++g)
      for (int l = 0; l <= n_; ++l) {
        int best = n_;
        for (int g2 = g; g2 <= n_; ++g2) {
          if (g2 > g) {
            int p = g2 - 1;
            if ((l == n_ || inst_.x(p) > inst_.x(l)) && (best == n_ || inst_.x(p) < inst_.x(best))) best = p;
          }
          leftp_[index3(g, g2, l)] = best;
        }
      }
    std::size_t cells = n1 * static_cast<std::size_t>(colors_) * n1 * static_cast<std::size_t>(colors_) * n1;
    if (cells <= kFlatLimit) flat_.assign(cells, -1);
  }

  int leftp(int g, int g2, int l) const { return leftp_[index3(g, g2, l)]; }

  ColorId dummy() const { return colors_ - 1; }

  int solve(int g, ColorId c, int g2, ColorId c2, int l) {
    if (l == n_) return 0;
    std::size_t key = index5(g, c, g2, c2, l);
    if (!flat_.empty()) {
      if (flat_[key] >= 0) return flat_[key];
    } else if (auto it = sparse_.find(key); it != sparse_.end()) {
      return it->second;
    }
    int value = compute(g, c, g2, c2, l);
    if (!flat_.empty()) flat_[key] = value;
    else sparse_.emplace(key, value);
    return value;
  }

  // Emits backbones into a vertical linked order; see build().
  struct Node {
    int gap;
    ColorId color;
    std::vector<int> attached;
  };

  std::vector<Node> nodes;
  std::vector<int> next, prev;  // linked order; node 0 = top sentinel, node 1 = bottom sentinel

  void build_root() {
    nodes = {{0, dummy(), {}}, {n_, dummy(), {}}};
    next = {1, -1};
    prev = {-1, 0};
    int leftmost = n_;
    for (int p = 0; p < n_; ++p)
      if (leftmost == n_ || inst_.x(p) < inst_.x(leftmost)) leftmost = p;
    build(0, dummy(), n_, dummy(), leftmost, 0, 1);
  }

 private:
  static constexpr std::size_t kFlatLimit = 40'000'000;

  std::size_t index3(int g, int g2, int l) const {
    const auto n1 = static_cast<std::size_t>(n_ + 1);
    return (static_cast<std::size_t>(g) * n1 + static_cast<std::size_t>(g2)) * n1 + static_cast<std::size_t>(l);
  }
  std::size_t index5(int g, ColorId c, int g2, ColorId c2, int l) const {
    const auto n1 = static_cast<std::size_t>(n_ + 1);
    const auto k = static_cast<std::size_t>(colors_);
    return (((static_cast<std::size_t>(g) * k + static_cast<std::size_t>(c)) * n1 + static_cast<std::size_t>(g2)) * k +
            static_cast<std::size_t>(c2)) * n1 + static_cast<std::size_t>(l);
  }

  int compute(int g, ColorId c, int g2, ColorId c2, int l) {
    while (l != n_) {
      ColorId d = inst_.color_of(l);
      if (d != c && d != c2) break;
      l = leftp(g, g2, l);
    }
    if (l == n_) return 0;
    ColorId d = inst_.color_of(l);
    int best = std::numeric_limits<int>::max();
    for (int gt = g; gt <= g2; ++gt) {
      int v = solve(g, c, gt, d, leftp(g, gt, l)) + solve(gt, d, g2, c2, leftp(gt, g2, l));
      best = std::min(best, v);
    }
    return best + 1;
  }

  Rational gap_mid(int g) const {
    auto [upper, lower] = gap_bounds(inst_, g);
    return (upper + lower) / Rational(2);
  }

  void insert_after(int at, int node) {
    int after = next[static_cast<std::size_t>(at)];
    next.push_back(after);
    prev.push_back(at);
    next[static_cast<std::size_t>(at)] = node;
    prev[static_cast<std::size_t>(after)] = node;
  }

  void build(int g, ColorId c, int g2, ColorId c2, int l, int top, int bottom) {
    while (l != n_) {
      ColorId d = inst_.color_of(l);
      if (d != c && d != c2) break;
      int target = d == c ? top : bottom;
      if (d == c && d == c2) {
        Rational y(inst_.y(l));
        target = (y - gap_mid(g2)) < (gap_mid(g) - y) ? bottom : top;
      }
      nodes[static_cast<std::size_t>(target)].attached.push_back(l);
      l = leftp(g, g2, l);
    }
    if (l == n_) return;
    ColorId d = inst_.color_of(l);
    int want = solve(g, c, g2, c2, l) - 1;
    for (int gt = g; gt <= g2; ++gt) {
      int a = leftp(g, gt, l), b = leftp(gt, g2, l);
      if (solve(g, c, gt, d, a) + solve(gt, d, g2, c2, b) != want) continue;
      int node = static_cast<int>(nodes.size());
      nodes.push_back({gt, d, {l}});
      insert_after(top, node);
      build(g, c, gt, d, a, top, node);
      build(gt, d, g2, c2, b, node, bottom);
      return;
    }
  }

  const Instance& inst_;
  int n_;
  int colors_;  // real colors plus the dummy
  std::vector<int> leftp_;
  std::vector<int> flat_;
  std::unordered_map<std::size_t, int> sparse_;
};

}  // namespace detail

// Crossing-free labeling with the minimum number of finite backbones.
inline Labeling min_labels_finite(const Instance& inst) {
  Labeling lab;
  if (inst.n() == 0) return lab;
  detail::FiniteLabelDp dp(inst);
  dp.build_root();
  std::vector<int> rank_in_gap(static_cast<std::size_t>(inst.n()) + 1, 0);
  for (int node = dp.next[0]; node != 1; node = dp.next[static_cast<std::size_t>(node)]) {
    auto& nd = dp.nodes[static_cast<std::size_t>(node)];
    std::sort(nd.attached.begin(), nd.attached.end());
    lab.backbones.push_back({nd.color, GapPos{nd.gap, rank_in_gap[static_cast<std::size_t>(nd.gap)]++}, Extent::Finite, nd.attached});
  }
  lab.objective = evaluate(inst, lab, inst.lambda_mode);
  return lab;
}

}  // namespace backbone
