#pragma once

#include "backbone/backbone.hpp"

#include <initializer_list>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace testing_util {

using namespace backbone;

// Points given as (x, y, color index); colors are named c0, c1, ...
inline Instance make_instance(std::initializer_list<std::tuple<std::int64_t, std::int64_t, int>> pts, int colors,
                              std::int64_t width = 100, std::int64_t height = 100) {
  Instance inst;
  inst.width = width;
  inst.height = height;
  for (int c = 0; c < colors; ++c) inst.colors.push_back("c" + std::to_string(c));
  for (const auto& [x, y, c] : pts) inst.points.push_back({x, y, c});
  validate(inst);
  return inst;
}

// Same, from colors listed top to bottom; x and y are spread out.
inline Instance from_colors(const std::vector<int>& top_to_bottom, int colors) {
  Instance inst;
  const auto n = static_cast<std::int64_t>(top_to_bottom.size());
  inst.width = 10 * n + 10;
  inst.height = 10 * n + 10;
  for (int c = 0; c < colors; ++c) inst.colors.push_back("c" + std::to_string(c));
  for (std::int64_t i = 0; i < n; ++i)
    inst.points.push_back({(7 * i + 3) % (10 * n) + 1, 10 * (n - i), top_to_bottom[static_cast<std::size_t>(i)]});
  validate(inst);
  return inst;
}

inline Instance random_instance(std::uint64_t seed, int max_n, int max_colors, std::int64_t side = 60) {
  std::mt19937_64 rng(seed);
  const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_n));
  const int c = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_colors));
  return generate(n, std::min(n, c), seed * 31 + 7, side, side);
}

inline bool verified(const Instance& inst, const Labeling& lab, Mode mode) { return verify(inst, lab, mode).all_ok; }

}  // namespace testing_util
