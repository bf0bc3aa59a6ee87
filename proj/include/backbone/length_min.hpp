#pragma once

#include "backbone/geometry.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <vector>

namespace backbone {

inline constexpr ColorId kUnusable = -1;

// One of the 3n symbolic lines used for infinite backbones. Lines come in
// triples per point, top to bottom: just above, through, just below.
struct CandidateLine {
  int index = 0;
  BackbonePosition position;
  ColorId color = kUnusable;

  bool usable() const { return color != kUnusable; }
  int point() const { return index / 3; }
};

// Number of points that lie above candidate t or on it.
inline int covered_points(int t) { return t / 3 + (t % 3 >= 1 ? 1 : 0); }

inline std::vector<CandidateLine> build_candidates(const Instance& inst) {
  const int n = inst.n();
  std::vector<CandidateLine> out;
  out.reserve(static_cast<std::size_t>(3 * n));
  for (int p = 0; p < n; ++p) {
    const ColorId own = inst.color_of(p);
    ColorId below = kUnusable, above = kUnusable;
    for (int q = p + 1; q < n; ++q)
      if (inst.color_of(q) != own) {
        below = inst.color_of(q);
        break;
      }
    for (int q = p - 1; q >= 0; --q)
      if (inst.color_of(q) != own) {
        above = inst.color_of(q);
        break;
      }
    out.push_back({3 * p, NearPoint{p, Side::Above, 0}, below});
    out.push_back({3 * p + 1, OnPoint{p}, own});
    out.push_back({3 * p + 2, NearPoint{p, Side::Below, 0}, above});
  }
  return out;
}

struct SingleColorResult {
  std::vector<std::int64_t> positions;  // chosen y-values, top to bottom
  Rational cost;
};

// lambda*|S| + sum of distances to the nearest element of S, with S drawn
// from the point y-values and |S| <= k. `ys` must be strictly decreasing.
inline SingleColorResult min_length_single_color(const std::vector<std::int64_t>& ys, int k, const Rational& lambda) {
  if (k < 1) throw ValidationError("invalid_budget", "label budget must be at least 1");
  const int n = static_cast<int>(ys.size());
  if (n == 0) return {{}, Rational(0)};
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + ys[static_cast<std::size_t>(i)];
  // Cost of serving ys[a..b] from their median.
  auto segment = [&](int a, int b) {
    int m = (a + b) / 2;
    std::int64_t ym = ys[static_cast<std::size_t>(m)];
    std::int64_t up = (prefix[static_cast<std::size_t>(m)] - prefix[static_cast<std::size_t>(a)]) - ym * (m - a);
    std::int64_t down = ym * (b - m) - (prefix[static_cast<std::size_t>(b) + 1] - prefix[static_cast<std::size_t>(m) + 1]);
    return up + down;
  };

  const int kmax = std::min(k, n);
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  // best[j][b]: j segments covering ys[0..b-1]
  std::vector<std::vector<std::int64_t>> best(static_cast<std::size_t>(kmax) + 1, std::vector<std::int64_t>(static_cast<std::size_t>(n) + 1, inf));
  std::vector<std::vector<int>> cut(best.size(), std::vector<int>(static_cast<std::size_t>(n) + 1, -1));
  best[0][0] = 0;
  for (int j = 1; j <= kmax; ++j)
    for (int b = j; b <= n; ++b)
      for (int a = j - 1; a < b; ++a) {
        std::int64_t prev = best[static_cast<std::size_t>(j) - 1][static_cast<std::size_t>(a)];
        if (prev == inf) continue;
        std::int64_t v = prev + segment(a, b - 1);
        if (v < best[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)]) {
          best[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)] = v;
          cut[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)] = a;
        }
      }

  int used = 1;
  Rational cost = lambda + Rational(best[1][static_cast<std::size_t>(n)]);
  for (int j = 2; j <= kmax; ++j) {
    Rational v = lambda * Rational(j) + Rational(best[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)]);
    if (v < cost) {
      cost = v;
      used = j;
    }
  }
  SingleColorResult out{{}, cost};
  for (int j = used, b = n; j > 0; --j) {
    int a = cut[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)];
    out.positions.push_back(ys[static_cast<std::size_t>((a + b - 1) / 2)]);
    b = a;
  }
  std::reverse(out.positions.begin(), out.positions.end());
  return out;
}

// Vertical length needed to connect the points strictly between candidates j
// and i (j < i) to one of the two lines; infinite when a third color sits in
// between. Direct evaluation, O(n).
inline Cost link_cost(const Instance& inst, const std::vector<CandidateLine>& cands, int j, int i) {
  const auto& cj = cands[static_cast<std::size_t>(j)];
  const auto& ci = cands[static_cast<std::size_t>(i)];
  if (j >= i || !cj.usable() || !ci.usable()) return Cost::infinity();
  const std::int64_t yj = inst.y(cj.point()), yi = inst.y(ci.point());
  Rational sum(0);
  for (int x = covered_points(j); x < covered_points(i); ++x) {
    const ColorId c = inst.color_of(x);
    const std::int64_t y = inst.y(x);
    if (c != cj.color && c != ci.color) return Cost::infinity();
    if (cj.color == ci.color) sum += Rational(std::min(yj - y, y - yi));
    else if (c == cj.color) sum += Rational(yj - y);
    else sum += Rational(y - yi);
  }
  return sum;
}

// Remaining-label bookkeeping: a mixed-radix index over per-color
// allowances, a single counter for a global bound, or nothing at all.
class BudgetSpace {
 public:
  static BudgetSpace unbounded() { return BudgetSpace(); }

  static BudgetSpace total(int k, int colors) {
    BudgetSpace s;
    s.caps_ = {k};
    s.dim_of_.assign(static_cast<std::size_t>(colors), 0);
    s.finish();
    return s;
  }

  static BudgetSpace per_color(std::vector<int> caps) {
    BudgetSpace s;
    s.caps_ = std::move(caps);
    s.dim_of_.resize(s.caps_.size());
    for (std::size_t c = 0; c < s.caps_.size(); ++c) s.dim_of_[c] = static_cast<int>(c);
    s.finish();
    return s;
  }

  // Budget of the instance with allowances clamped to what can ever be used:
  // every non-empty backbone serves at least one point of its color.
  static BudgetSpace from_instance(const Instance& inst) {
    if (const auto* t = std::get_if<TotalBudget>(&inst.budget)) return total(std::min(t->k, inst.n()), inst.color_count());
    if (const auto* per = std::get_if<PerColorBudget>(&inst.budget)) {
      auto counts = inst.points_per_color();
      std::vector<int> caps(per->k.size());
      for (std::size_t c = 0; c < caps.size(); ++c) caps[c] = std::min(per->k[c], counts[c]);
      return per_color(caps);
    }
    return unbounded();
  }

  bool bounded() const { return !caps_.empty(); }
  int size() const { return size_; }
  int full() const { return size_ - 1; }

  // Index after spending one label of color c, or -1 if none is left.
  int take(int idx, ColorId c) const {
    if (!bounded()) return idx;
    const int d = dim_of_[static_cast<std::size_t>(c)];
    const int stride = strides_[static_cast<std::size_t>(d)];
    if ((idx / stride) % (caps_[static_cast<std::size_t>(d)] + 1) == 0) return -1;
    return idx - stride;
  }

  // Calls f(a, b) for every split of idx into two allowances.
  void for_each_split(int idx, const std::function<void(int, int)>& f) const {
    if (!bounded()) {
      f(idx, idx);
      return;
    }
    std::vector<int> digit(caps_.size()), limit(caps_.size());
    for (std::size_t d = 0; d < caps_.size(); ++d) limit[d] = (idx / strides_[d]) % (caps_[d] + 1);
    while (true) {
      int a = 0;
      for (std::size_t d = 0; d < caps_.size(); ++d) a += digit[d] * strides_[d];
      f(a, idx - a);
      std::size_t d = 0;
      while (d < caps_.size() && digit[d] == limit[d]) digit[d++] = 0;
      if (d == caps_.size()) return;
      ++digit[d];
    }
  }

 private:
  void finish() {
    strides_.resize(caps_.size());
    size_ = 1;
    for (std::size_t d = 0; d < caps_.size(); ++d) {
      strides_[d] = size_;
      size_ *= caps_[d] + 1;
    }
  }

  std::vector<int> caps_;
  std::vector<int> dim_of_;
  std::vector<int> strides_;
  int size_ = 1;
};

namespace detail {

struct LinkRow {
  std::vector<Cost> from;  // from[j]: previous backbone on candidate j
  Cost top;                // no backbone above candidate t
};

// link(j, t) for every j < t in one upward sweep: per-color counts and
// y-sums of the points in between, plus a monotone split pointer for the
// same-color case.
inline LinkRow link_row(const Instance& inst, const std::vector<CandidateLine>& cands, const std::vector<std::int64_t>& prefix, int t) {
  LinkRow row;
  row.from.assign(static_cast<std::size_t>(t), Cost::infinity());
  const ColorId ct = cands[static_cast<std::size_t>(t)].color;
  const std::int64_t yt = inst.y(cands[static_cast<std::size_t>(t)].point());
  const int hi = covered_points(t);
  int lo = hi, split = hi;

  struct Tally {
    ColorId color;
    std::int64_t count, sum;
  };
  std::vector<Tally> tally;
  auto add = [&](int x) {
    for (auto& e : tally)
      if (e.color == inst.color_of(x)) {
        ++e.count;
        e.sum += inst.y(x);
        return true;
      }
    if (tally.size() == 2) return false;
    tally.push_back({inst.color_of(x), 1, inst.y(x)});
    return true;
  };
  auto stats = [&](ColorId c) {
    for (const auto& e : tally)
      if (e.color == c) return std::pair{e.count, e.sum};
    return std::pair<std::int64_t, std::int64_t>{0, 0};
  };
  auto only = [&](ColorId a, ColorId b) {
    return std::all_of(tally.begin(), tally.end(), [&](const Tally& e) { return e.color == a || e.color == b; });
  };

  for (int j = t - 1; j >= -1; --j) {
    const int target = j < 0 ? 0 : covered_points(j);
    while (lo > target)
      if (!add(--lo)) return row;  // three colors in between: nothing above works
    auto [nt, st] = stats(ct);
    const std::int64_t down_to_t = st - nt * yt;
    if (j < 0) {
      if (only(ct, ct)) row.top = Rational(down_to_t);
      break;
    }
    const auto& cj = cands[static_cast<std::size_t>(j)];
    if (!cj.usable() || !only(cj.color, ct)) continue;
    const std::int64_t yj = inst.y(cj.point());
    if (cj.color != ct) {
      auto [nj, sj] = stats(cj.color);
      row.from[static_cast<std::size_t>(j)] = Rational(nj * yj - sj + down_to_t);
      continue;
    }
    while (split > lo && 2 * inst.y(split - 1) < yj + yt) --split;
    const std::int64_t up = (split - lo) * yj - (prefix[static_cast<std::size_t>(split)] - prefix[static_cast<std::size_t>(lo)]);
    const std::int64_t down = (prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(split)]) - (hi - split) * yt;
    row.from[static_cast<std::size_t>(j)] = Rational(up + down);
  }
  return row;
}

inline Labeling drop_empty(Labeling lab) {
  lab.backbones.erase(std::remove_if(lab.backbones.begin(), lab.backbones.end(), [](const Backbone& b) { return b.attached.empty(); }),
                      lab.backbones.end());
  return lab;
}

}  // namespace detail

// Crossing-free labeling with infinite backbones of minimum total length
// within the instance's label budget.
inline Labeling min_length_infinite(const Instance& inst) {
  const int n = inst.n();
  if (n == 0) return {};
  const auto cands = build_candidates(inst);
  const int m = static_cast<int>(cands.size());
  const BudgetSpace space = BudgetSpace::from_instance(inst);
  const int nb = space.size();
  const Rational lambda = inst.lambda();

  std::vector<std::int64_t> prefix(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + inst.y(i);

  auto at = [nb](int t, int b) { return static_cast<std::size_t>(t) * static_cast<std::size_t>(nb) + static_cast<std::size_t>(b); };
  std::vector<Cost> best(static_cast<std::size_t>(m) * static_cast<std::size_t>(nb));
  std::vector<int> parent(best.size(), -2);

  for (int t = 0; t < m; ++t) {
    const auto& ct = cands[static_cast<std::size_t>(t)];
    if (!ct.usable()) continue;
    const auto row = detail::link_row(inst, cands, prefix, t);
    for (int b = 0; b < nb; ++b) {
      const int rest = space.take(b, ct.color);
      if (rest < 0) continue;
      Cost v = row.top;
      int arg = -1;
      for (int j = 0; j < t; ++j) {
        Cost w = best[at(j, rest)] + row.from[static_cast<std::size_t>(j)];
        if (w < v) {
          v = w;
          arg = j;
        }
      }
      if (!v.finite()) continue;
      best[at(t, b)] = v + Cost(lambda);
      parent[at(t, b)] = arg;
    }
  }

  Cost answer;
  int last = -1;
  for (int t = 0; t < m; ++t) {
    const auto& ct = cands[static_cast<std::size_t>(t)];
    if (!ct.usable() || !best[at(t, space.full())].finite()) continue;
    std::int64_t tail = 0;
    bool ok = true;
    for (int x = covered_points(t); x < n && ok; ++x) {
      ok = inst.color_of(x) == ct.color;
      tail += inst.y(ct.point()) - inst.y(x);
    }
    if (!ok) continue;
    Cost v = best[at(t, space.full())] + Cost(tail);
    if (v < answer) {
      answer = v;
      last = t;
    }
  }
  if (!answer.finite()) throw InfeasibleError("no crossing-free labeling fits the label budget");

  std::vector<int> chain;
  for (int t = last, b = space.full(); t >= 0;) {
    chain.push_back(t);
    int j = parent[at(t, b)];
    b = space.take(b, cands[static_cast<std::size_t>(t)].color);
    t = j;
  }
  std::reverse(chain.begin(), chain.end());

  Labeling lab;
  for (int t : chain) lab.backbones.push_back({cands[static_cast<std::size_t>(t)].color, cands[static_cast<std::size_t>(t)].position, Extent::Infinite, {}});
  auto attach = [&](std::size_t b, int x) { lab.backbones[b].attached.push_back(x); };
  for (int x = 0; x < covered_points(chain.front()); ++x) attach(0, x);
  for (std::size_t k = 1; k < chain.size(); ++k) {
    const auto& cj = cands[static_cast<std::size_t>(chain[k - 1])];
    const auto& ct = cands[static_cast<std::size_t>(chain[k])];
    const std::int64_t yj = inst.y(cj.point()), yt = inst.y(ct.point());
    for (int x = covered_points(chain[k - 1]); x < covered_points(chain[k]); ++x) {
      bool down;
      if (std::holds_alternative<OnPoint>(ct.position) && ct.point() == x) down = true;
      else if (cj.color != ct.color) down = inst.color_of(x) == ct.color;
      else down = 2 * inst.y(x) < yj + yt;
      attach(down ? k : k - 1, x);
    }
  }
  for (int x = covered_points(chain.back()); x < n; ++x) attach(chain.size() - 1, x);

  lab = detail::drop_empty(std::move(lab));
  lab.objective = evaluate(inst, lab, inst.lambda_mode);
  return lab;
}

namespace detail {

// Vertical slot where a finite backbone may sit. Without a minimum distance
// the slots are the points themselves and the two positions infinitely close
// above and below each point; those two can hold any number of stacked
// backbones. With a minimum distance the near slots are replaced by a grid
// of exact positions inside every gap.
struct Level {
  enum Kind { Top, Above, On, Below, Exact, Bottom } kind;
  int point = -1;
  Rational y;
};

inline std::vector<Level> build_levels(const Instance& inst) {
  const int n = inst.n();
  std::vector<Level> levels{{Level::Top, -1, Rational(0)}};
  if (!inst.delta) {
    for (int p = 0; p < n; ++p) {
      Rational y(inst.y(p));
      levels.push_back({Level::Above, p, y});
      levels.push_back({Level::On, p, y});
      levels.push_back({Level::Below, p, y});
    }
  } else {
    const Rational d = *inst.delta;
    std::vector<Level> inner;
    for (int p = 0; p < n; ++p) inner.push_back({Level::On, p, Rational(inst.y(p))});
    for (int g = 0; g <= n && n > 0; ++g) {
      // Walls of the gap; the rectangle border stands in for a missing point.
      const bool has_up = g > 0, has_down = g < n;
      const Rational up = has_up ? Rational(inst.y(g - 1)) : Rational(inst.height);
      const Rational down = has_down ? Rational(inst.y(g)) : Rational(0);
      const Rational lo = has_down ? down + d : down, hi = has_up ? up - d : up;
      for (int k = 1; k <= n; ++k) {
        if (has_up && up - d * Rational(k) >= lo) inner.push_back({Level::Exact, -1, up - d * Rational(k)});
        if (has_down && down + d * Rational(k) <= hi) inner.push_back({Level::Exact, -1, down + d * Rational(k)});
      }
    }
    std::sort(inner.begin(), inner.end(), [](const Level& a, const Level& b) { return a.y > b.y; });
    inner.erase(std::unique(inner.begin(), inner.end(), [](const Level& a, const Level& b) { return a.y == b.y; }), inner.end());
    levels.insert(levels.end(), inner.begin(), inner.end());
  }
  levels.push_back({Level::Bottom, -1, Rational(0)});
  return levels;
}

class FiniteLengthDp {
 public:
  explicit FiniteLengthDp(const Instance& inst)
      : inst_(inst), n_(inst.n()), levels_(build_levels(inst)), space_(BudgetSpace::from_instance(inst)), dummy_(inst.color_count()) {
    const int m = static_cast<int>(levels_.size());
    level_of_point_.assign(static_cast<std::size_t>(n_), -1);
    for (int q = 0; q < m; ++q)
      if (levels_[static_cast<std::size_t>(q)].kind == Level::On) level_of_point_[static_cast<std::size_t>(levels_[static_cast<std::size_t>(q)].point)] = q;
    // points_before_[q]: points whose level is < q
    points_before_.assign(static_cast<std::size_t>(m) + 1, 0);
    for (int q = 0, p = 0; q <= m; ++q) {
      while (p < n_ && level_of_point_[static_cast<std::size_t>(p)] < q) ++p;
      points_before_[static_cast<std::size_t>(q)] = p;
    }
  }

  int top() const { return 0; }
  int bottom() const { return static_cast<int>(levels_.size()) - 1; }
  ColorId dummy() const { return dummy_; }
  const BudgetSpace& space() const { return space_; }
  const std::vector<Level>& levels() const { return levels_; }

  int leftmost() const { return leftp(top(), bottom(), n_); }

  // Leftmost point strictly between levels a and b and right of point l
  // (l == n: no threshold); n if there is none.
  int leftp(int a, int b, int l) const {
    int best = n_;
    for (int p = points_before_[static_cast<std::size_t>(a) + 1]; p < points_before_[static_cast<std::size_t>(b)]; ++p) {
      if (l != n_ && inst_.x(p) <= inst_.x(l)) continue;
      if (best == n_ || inst_.x(p) < inst_.x(best)) best = p;
    }
    return best;
  }

  Cost solve(int a, ColorId c, int b, ColorId c2, int l, int budget) {
    if (l == n_) return Rational(0);
    Key key{a, b, c, c2, l, budget};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Cost v = compute(a, c, b, c2, l, budget, nullptr);
    memo_.emplace(key, v);
    return v;
  }

  // Replays the optimal decisions and records them. `top`/`bottom` are node
  // ids of the bounding backbones.
  struct Decision {
    enum Kind { ConnectUp, ConnectDown, Place } kind;
    int level = 0, r1 = 0, r2 = 0;
  };

  struct Node {
    int level;
    ColorId color;
    std::vector<int> attached;
  };
  std::vector<Node> nodes;
  std::vector<int> next;

  void build_root() {
    nodes = {{top(), dummy_, {}}, {bottom(), dummy_, {}}};
    next = {1, -1};
    build(top(), dummy_, bottom(), dummy_, leftmost(), space_.full(), 0, 1);
  }

 private:
  struct Key {
    int a, b, c, c2, l, budget;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = static_cast<std::size_t>(k.a);
      for (int v : {k.b, k.c, k.c2, k.l, k.budget}) h = h * 1000003u ^ static_cast<std::size_t>(v);
      return h;
    }
  };

  Rational dist(int l, int level) const { return abs_diff(Rational(inst_.y(l)), levels_[static_cast<std::size_t>(level)].y); }

  bool placeable(int a, int b, int q, int l, ColorId d) const {
    const Level& lv = levels_[static_cast<std::size_t>(q)];
    if (lv.kind == Level::Top || lv.kind == Level::Bottom) return false;
    if (q == a || q == b) {
      if (lv.kind != Level::Above && lv.kind != Level::Below) return false;
    }
    if (lv.kind == Level::On) {
      const int p = lv.point;
      if (inst_.color_of(p) != d || inst_.x(p) < inst_.x(l)) return false;
    }
    if (inst_.delta) {
      for (int bound : {a, b}) {
        const Level& bl = levels_[static_cast<std::size_t>(bound)];
        if (bl.kind == Level::Top || bl.kind == Level::Bottom) continue;
        if (abs_diff(bl.y, lv.y) < *inst_.delta) return false;
      }
    }
    return true;
  }

  Cost compute(int a, ColorId c, int b, ColorId c2, int l, int budget, Decision* chosen) {
    const ColorId d = inst_.color_of(l);
    Cost best;
    auto consider = [&](const Cost& v, Decision dec) {
      if (v < best) {
        best = v;
        if (chosen) *chosen = dec;
      }
    };
    if (c == d) consider(Cost(dist(l, a)) + solve(a, c, b, c2, leftp(a, b, l), budget), {Decision::ConnectUp});
    if (c2 == d) consider(Cost(dist(l, b)) + solve(a, c, b, c2, leftp(a, b, l), budget), {Decision::ConnectDown});

    const int rest = space_.take(budget, d);
    if (rest < 0) return best;
    const Rational horizontal = inst_.lambda_mode == LambdaMode::Width ? Rational(inst_.width - inst_.x(l)) : Rational(0);
    auto place = [&](int q) {
      if (!placeable(a, b, q, l, d)) return;
      const Cost here = Cost(dist(l, q) + horizontal);
      if (!(here < best)) return;
      const int la = leftp(a, q, l), lb = leftp(q, b, l);
      space_.for_each_split(rest, [&](int r1, int r2) {
        Cost upper = solve(a, c, q, d, la, r1);
        if (!upper.finite()) return;
        consider(here + upper + solve(q, d, b, c2, lb, r2), {Decision::Place, q, r1, r2});
      });
    };
    // the line through l goes first so that it wins ties
    const int through = level_of_point_[static_cast<std::size_t>(l)];
    if (a <= through && through <= b) place(through);
    for (int q = a; q <= b; ++q)
      if (q != through) place(q);
    return best;
  }

  void build(int a, ColorId c, int b, ColorId c2, int l, int budget, int top_node, int bottom_node) {
    while (l != n_) {
      Decision dec{};
      compute(a, c, b, c2, l, budget, &dec);
      if (dec.kind == Decision::ConnectUp || dec.kind == Decision::ConnectDown) {
        nodes[static_cast<std::size_t>(dec.kind == Decision::ConnectUp ? top_node : bottom_node)].attached.push_back(l);
        l = leftp(a, b, l);
        continue;
      }
      const ColorId d = inst_.color_of(l);
      const int node = static_cast<int>(nodes.size());
      nodes.push_back({dec.level, d, {l}});
      const Level& lv = levels_[static_cast<std::size_t>(dec.level)];
      if (lv.kind == Level::On && lv.point != l) nodes.back().attached.push_back(lv.point);
      next.push_back(next[static_cast<std::size_t>(top_node)]);
      next[static_cast<std::size_t>(top_node)] = node;
      const int la = leftp(a, dec.level, l), lb = leftp(dec.level, b, l);
      build(a, c, dec.level, d, la, dec.r1, top_node, node);
      build(dec.level, d, b, c2, lb, dec.r2, node, bottom_node);
      return;
    }
  }

  const Instance& inst_;
  int n_;
  std::vector<Level> levels_;
  BudgetSpace space_;
  ColorId dummy_;
  std::vector<int> level_of_point_;
  std::vector<int> points_before_;
  std::unordered_map<Key, Cost, KeyHash> memo_;
};

}  // namespace detail

// Crossing-free labeling with finite backbones of minimum total length
// within the instance's label budget, honoring the minimum distance when the
// instance sets one.
inline Labeling min_length_finite(const Instance& inst) {
  if (inst.n() == 0) return {};
  detail::FiniteLengthDp dp(inst);
  Cost value = dp.solve(dp.top(), dp.dummy(), dp.bottom(), dp.dummy(), dp.leftmost(), dp.space().full());
  if (!value.finite())
    throw InfeasibleError(inst.delta ? "no crossing-free labeling fits the budget and minimum distance"
                                     : "no crossing-free labeling fits the label budget");
  dp.build_root();

  // Walk the vertical order; stacked near slots get ranks counted outward
  // from their point.
  std::vector<int> order;
  for (int node = dp.next[0]; node != 1; node = dp.next[static_cast<std::size_t>(node)]) order.push_back(node);
  Labeling lab;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    const int level = dp.nodes[static_cast<std::size_t>(order[i])].level;
    while (j < order.size() && dp.nodes[static_cast<std::size_t>(order[j])].level == level) ++j;
    const auto& lv = dp.levels()[static_cast<std::size_t>(level)];
    for (std::size_t k = i; k < j; ++k) {
      auto& nd = dp.nodes[static_cast<std::size_t>(order[k])];
      BackbonePosition pos;
      switch (lv.kind) {
        case detail::Level::Above: pos = NearPoint{lv.point, Side::Above, static_cast<int>(j - 1 - k)}; break;
        case detail::Level::Below: pos = NearPoint{lv.point, Side::Below, static_cast<int>(k - i)}; break;
        case detail::Level::On: pos = OnPoint{lv.point}; break;
        default: pos = ExactY{lv.y}; break;
      }
      std::sort(nd.attached.begin(), nd.attached.end());
      lab.backbones.push_back({nd.color, pos, Extent::Finite, nd.attached});
    }
    i = j;
  }
  lab.objective = evaluate(inst, lab, inst.lambda_mode);
  return lab;
}

}  // namespace backbone
