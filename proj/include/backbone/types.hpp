#pragma once

#include "backbone/error.hpp"
#include "backbone/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace backbone {

// Index into Instance::colors.
using ColorId = int;

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;
  ColorId color = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Unbounded {
  friend bool operator==(const Unbounded&, const Unbounded&) = default;
};
struct TotalBudget {
  int k = 0;
  friend bool operator==(const TotalBudget&, const TotalBudget&) = default;
};
struct PerColorBudget {
  std::vector<int> k;
  friend bool operator==(const PerColorBudget&, const PerColorBudget&) = default;
};
using Budget = std::variant<Unbounded, TotalBudget, PerColorBudget>;

enum class LambdaMode { Zero, Width };

// Colored points inside the rectangle [0,width] x [0,height]. After
// validate() the points are sorted by strictly decreasing y, so point 0 is
// the topmost one. Labels sit on the right boundary x = width.
struct Instance {
  std::int64_t width = 1;
  std::int64_t height = 1;
  std::vector<std::string> colors;
  std::vector<Point> points;
  Budget budget = Unbounded{};
  LambdaMode lambda_mode = LambdaMode::Zero;
  std::optional<Rational> delta;
  std::optional<std::vector<std::int64_t>> label_slots;

  int n() const { return static_cast<int>(points.size()); }
  int color_count() const { return static_cast<int>(colors.size()); }
  ColorId color_of(int i) const { return points[static_cast<std::size_t>(i)].color; }
  std::int64_t y(int i) const { return points[static_cast<std::size_t>(i)].y; }
  std::int64_t x(int i) const { return points[static_cast<std::size_t>(i)].x; }

  // Cost charged per backbone for its horizontal part.
  Rational lambda() const { return lambda_mode == LambdaMode::Width ? Rational(width) : Rational(0); }

  std::vector<int> points_per_color() const {
    std::vector<int> count(colors.size(), 0);
    for (const auto& p : points) ++count[static_cast<std::size_t>(p.color)];
    return count;
  }

  int distinct_colors_present() const {
    auto count = points_per_color();
    return static_cast<int>(std::count_if(count.begin(), count.end(), [](int c) { return c > 0; }));
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Gap g lies above point g (0-based); gap 0 is above all points and gap n
// below all of them.
struct GapPos {
  int gap = 0;
  int rank = 0;  // top-to-bottom order among backbones in the same gap
  friend bool operator==(const GapPos&, const GapPos&) = default;
};

struct OnPoint {
  int point = 0;
  friend bool operator==(const OnPoint&, const OnPoint&) = default;
};

enum class Side { Above, Below };

// Infinitely close to a point and sharing its y-coordinate. Several
// backbones may be stacked at the same side; rank 0 is the one nearest to
// the point and higher ranks move outward.
struct NearPoint {
  int point = 0;
  Side side = Side::Above;
  int rank = 0;
  friend bool operator==(const NearPoint&, const NearPoint&) = default;
};

struct ExactY {
  Rational y;
  friend bool operator==(const ExactY&, const ExactY&) = default;
};

using BackbonePosition = std::variant<GapPos, OnPoint, NearPoint, ExactY>;

enum class Extent { Infinite, Finite };

struct Backbone {
  ColorId color = 0;
  BackbonePosition position;
  Extent extent = Extent::Infinite;
  std::vector<int> attached;  // indices into Instance::points

  friend bool operator==(const Backbone&, const Backbone&) = default;
};

struct Objective {
  int labels = 0;
  Rational length{0};
  std::int64_t crossings = 0;

  friend bool operator==(const Objective&, const Objective&) = default;
};

struct Labeling {
  std::vector<Backbone> backbones;
  Objective objective;

  friend bool operator==(const Labeling&, const Labeling&) = default;
};

// Sorts the points by decreasing y and checks every instance invariant.
inline void validate(Instance& inst) {
  if (inst.width <= 0 || inst.height <= 0)
    throw ValidationError("invalid_rectangle", "width and height must be positive");

  std::set<std::string> names;
  for (const auto& c : inst.colors) {
    if (!names.insert(c).second) throw ValidationError("duplicate_color", "duplicate color name", c);
  }

  for (std::size_t i = 0; i < inst.points.size(); ++i) {
    const auto& p = inst.points[i];
    std::string where = "point " + std::to_string(i);
    if (p.color < 0 || p.color >= inst.color_count())
      throw ValidationError("color_out_of_range", "point color out of range", where);
    if (p.x < 0 || p.x > inst.width || p.y < 0 || p.y > inst.height)
      throw ValidationError("point_outside", "point lies outside the rectangle", where);
  }

  std::stable_sort(inst.points.begin(), inst.points.end(),
                   [](const Point& a, const Point& b) { return a.y > b.y; });

  std::unordered_map<std::int64_t, std::size_t> seen_x;
  for (std::size_t i = 0; i < inst.points.size(); ++i) {
    if (i > 0 && inst.points[i].y == inst.points[i - 1].y)
      throw ValidationError("duplicate_y", "two points share a y-coordinate",
                            "points (" + std::to_string(inst.points[i - 1].x) + "," + std::to_string(inst.points[i].y) +
                                ") and (" + std::to_string(inst.points[i].x) + "," + std::to_string(inst.points[i].y) + ")");
    auto [it, fresh] = seen_x.emplace(inst.points[i].x, i);
    if (!fresh)
      throw ValidationError("duplicate_x", "two points share an x-coordinate",
                            "points (" + std::to_string(inst.points[it->second].x) + "," +
                                std::to_string(inst.points[it->second].y) + ") and (" +
                                std::to_string(inst.points[i].x) + "," + std::to_string(inst.points[i].y) + ")");
  }

  if (const auto* total = std::get_if<TotalBudget>(&inst.budget)) {
    if (total->k < 1) throw ValidationError("invalid_budget", "total budget must be at least 1");
  } else if (const auto* per = std::get_if<PerColorBudget>(&inst.budget)) {
    if (static_cast<int>(per->k.size()) != inst.color_count())
      throw ValidationError("invalid_budget", "per-color budget must list every color");
    for (std::size_t c = 0; c < per->k.size(); ++c)
      if (per->k[c] < 1) throw ValidationError("invalid_budget", "per-color budget entries must be at least 1", inst.colors[c]);
  }

  if (inst.delta && *inst.delta <= 0) throw ValidationError("invalid_delta", "delta must be positive");

  if (inst.label_slots) {
    const auto& slots = *inst.label_slots;
    if (static_cast<int>(slots.size()) != inst.color_count())
      throw ValidationError("invalid_slots", "label_slots must have one entry per color");
    std::set<std::int64_t> ys;
    for (const auto& p : inst.points) ys.insert(p.y);
    std::set<std::int64_t> distinct;
    for (auto s : slots) {
      if (!distinct.insert(s).second) throw ValidationError("invalid_slots", "label slots must be distinct", std::to_string(s));
      if (ys.count(s)) throw ValidationError("invalid_slots", "label slot coincides with a point", std::to_string(s));
      if (s < 0 || s > inst.height) throw ValidationError("invalid_slots", "label slot outside the rectangle", std::to_string(s));
    }
  }
}

// Deterministic general-position repair: y <- y*(n+1) + index (input order),
// likewise for x. Slots get offset n so they stay clear of every point.
inline void perturb(Instance& inst) {
  const std::int64_t f = static_cast<std::int64_t>(inst.points.size()) + 1;
  for (std::size_t i = 0; i < inst.points.size(); ++i) {
    inst.points[i].x = inst.points[i].x * f + static_cast<std::int64_t>(i);
    inst.points[i].y = inst.points[i].y * f + static_cast<std::int64_t>(i);
  }
  inst.width = inst.width * f + (f - 1);
  inst.height = inst.height * f + (f - 1);
  if (inst.label_slots)
    for (auto& s : *inst.label_slots) s = s * f + (f - 1);
  if (inst.delta) *inst.delta *= Rational(f);
}

// Collapse every maximal run of vertically consecutive same-colored points
// onto its topmost point. `representative[i]` is the index, in the clustered
// instance, of the run containing original point i.
struct Clustering {
  Instance clustered;
  std::vector<int> representative;
  std::vector<int> run_top;     // clustered index -> original index of topmost point
  std::vector<int> run_bottom;  // clustered index -> original index of bottommost point
};

inline Clustering cluster(const Instance& inst) {
  Clustering out;
  out.clustered = inst;
  out.clustered.points.clear();
  out.representative.resize(inst.points.size());
  for (int i = 0; i < inst.n(); ++i) {
    if (i == 0 || inst.color_of(i) != inst.color_of(i - 1)) {
      out.clustered.points.push_back(inst.points[static_cast<std::size_t>(i)]);
      out.run_top.push_back(i);
      out.run_bottom.push_back(i);
    } else {
      out.run_bottom.back() = i;
    }
    out.representative[static_cast<std::size_t>(i)] = out.clustered.n() - 1;
  }
  return out;
}

}  // namespace backbone
