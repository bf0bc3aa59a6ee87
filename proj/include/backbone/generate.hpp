#pragma once

#include "backbone/types.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

namespace backbone {

namespace detail {

// k distinct values from [0, hi], Floyd's sampling, in draw order.
inline std::vector<std::int64_t> distinct_sample(std::mt19937_64& rng, int k, std::int64_t hi) {
  std::unordered_set<std::int64_t> seen;
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(k));
  for (std::int64_t j = hi + 1 - k; j <= hi; ++j) {
    std::int64_t t = std::uniform_int_distribution<std::int64_t>(0, j)(rng);
    if (!seen.insert(t).second) t = j, seen.insert(j);
    out.push_back(t);
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace detail

// Random instance in general position; colors are dealt round-robin and then
// shuffled, so every color appears when n >= colors.
inline Instance generate(int n, int colors, std::uint64_t seed, std::int64_t width, std::int64_t height) {
  if (n < 1) throw ValidationError("invalid_generator", "n must be at least 1");
  if (colors < 1) throw ValidationError("invalid_generator", "colors must be at least 1");
  if (width < 1 || height < 1) throw ValidationError("invalid_rectangle", "width and height must be positive");
  if (n > width + 1 || n > height + 1)
    throw ValidationError("capacity_exceeded", "not enough distinct coordinates for n points",
                          "n=" + std::to_string(n) + " width=" + std::to_string(width) + " height=" + std::to_string(height));

  std::mt19937_64 rng(seed);
  Instance inst;
  inst.width = width;
  inst.height = height;
  for (int c = 0; c < colors; ++c) inst.colors.push_back("c" + std::to_string(c));
  const auto xs = detail::distinct_sample(rng, n, width);
  const auto ys = detail::distinct_sample(rng, n, height);
  std::vector<ColorId> dealt(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dealt[static_cast<std::size_t>(i)] = i % colors;
  std::shuffle(dealt.begin(), dealt.end(), rng);
  for (int i = 0; i < n; ++i)
    inst.points.push_back({xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(i)], dealt[static_cast<std::size_t>(i)]});
  validate(inst);
  return inst;
}

}  // namespace backbone
