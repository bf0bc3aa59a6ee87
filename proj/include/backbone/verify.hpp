#pragma once

#include "backbone/geometry.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace backbone {

enum class Mode {
  Any,
  LabelsInfinite,
  LabelsFinite,
  LengthInfinite,
  LengthFinite,
  CrossingsFixed,
  CrossingsFlexible,
  CrossingsExact,
};

inline std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Any: return "any";
    case Mode::LabelsInfinite: return "labels-infinite";
    case Mode::LabelsFinite: return "labels-finite";
    case Mode::LengthInfinite: return "length-infinite";
    case Mode::LengthFinite: return "length-finite";
    case Mode::CrossingsFixed: return "crossings-fixed";
    case Mode::CrossingsFlexible: return "crossings-flexible";
    case Mode::CrossingsExact: return "crossings-exact";
  }
  return "any";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : {Mode::Any, Mode::LabelsInfinite, Mode::LabelsFinite, Mode::LengthInfinite, Mode::LengthFinite,
                 Mode::CrossingsFixed, Mode::CrossingsFlexible, Mode::CrossingsExact})
    if (mode_name(m) == s) return m;
  return std::nullopt;
}

inline bool requires_crossing_free(Mode m) {
  return m == Mode::LabelsInfinite || m == Mode::LabelsFinite || m == Mode::LengthInfinite || m == Mode::LengthFinite;
}

// Colors a backbone strictly between points i and i+1 may have in a
// crossing-free infinite-backbone labeling: the two points' colors and the
// nearest differing colors above i and below i+1.
inline std::set<ColorId> lemma1_admissible(const Instance& inst, int i) {
  std::set<ColorId> ok{inst.color_of(i), inst.color_of(i + 1)};
  for (int j = i - 1; j >= 0; --j)
    if (inst.color_of(j) != inst.color_of(i)) {
      ok.insert(inst.color_of(j));
      break;
    }
  for (int j = i + 2; j < inst.n(); ++j)
    if (inst.color_of(j) != inst.color_of(i + 1)) {
      ok.insert(inst.color_of(j));
      break;
    }
  return ok;
}

// Checks that at most two backbones separate any two vertically consecutive
// points and that each separating backbone has an admissible color. Only
// meaningful for crossing-free labelings with infinite backbones.
inline std::vector<std::string> lemma1_violations(const Instance& inst, const Labeling& lab) {
  std::vector<std::string> out;
  std::vector<VerticalKey> keys;
  for (const auto& b : lab.backbones) keys.push_back(position_key(inst, b.position));
  for (int i = 0; i + 1 < inst.n(); ++i) {
    VerticalKey hi = point_key(inst, i), lo = point_key(inst, i + 1);
    auto admissible = lemma1_admissible(inst, i);
    int count = 0;
    for (std::size_t b = 0; b < keys.size(); ++b) {
      if (!(lo < keys[b] && keys[b] < hi)) continue;
      ++count;
      if (!admissible.count(lab.backbones[b].color))
        out.push_back("backbone " + std::to_string(b) + " between points " + std::to_string(i) + " and " +
                      std::to_string(i + 1) + " has an inadmissible color");
    }
    if (count > 2)
      out.push_back(std::to_string(count) + " backbones between points " + std::to_string(i) + " and " + std::to_string(i + 1));
  }
  return out;
}

struct VerifyReport {
  bool all_ok = true;
  bool partition_ok = true;
  bool color_ok = true;
  bool nonempty_ok = true;
  bool position_ok = true;
  bool overlap_ok = true;
  bool crossing_free_ok = true;
  bool extent_ok = true;
  bool budget_ok = true;
  bool order_ok = true;
  bool distance_ok = true;
  bool objective_ok = true;
  bool lemma1_ok = true;
  std::int64_t crossings = 0;
  Objective recomputed;
  std::vector<std::string> failures;
};

// Structured legality report; never throws on a bad labeling.
inline VerifyReport verify(const Instance& inst, const Labeling& lab, Mode mode) {
  VerifyReport r;
  auto fail = [&](bool& flag, std::string msg) {
    flag = false;
    r.failures.push_back(std::move(msg));
  };

  std::vector<int> times(static_cast<std::size_t>(inst.n()), 0);
  bool indices_ok = true;
  for (std::size_t b = 0; b < lab.backbones.size(); ++b) {
    const auto& bb = lab.backbones[b];
    if (bb.color < 0 || bb.color >= inst.color_count()) fail(r.color_ok, "backbone " + std::to_string(b) + " has an unknown color");
    if (bb.attached.empty()) fail(r.nonempty_ok, "backbone " + std::to_string(b) + " serves no point");
    for (int p : bb.attached) {
      if (p < 0 || p >= inst.n()) {
        indices_ok = false;
        fail(r.partition_ok, "backbone " + std::to_string(b) + " references missing point " + std::to_string(p));
        continue;
      }
      ++times[static_cast<std::size_t>(p)];
      if (inst.color_of(p) != bb.color)
        fail(r.color_ok, "point " + std::to_string(p) + " attached to backbone " + std::to_string(b) + " of another color");
    }
    try {
      check_position(inst, bb.position);
    } catch (const Error& e) {
      fail(r.position_ok, "backbone " + std::to_string(b) + ": " + e.what());
    }
  }
  for (int p = 0; p < inst.n(); ++p) {
    if (times[static_cast<std::size_t>(p)] != 1)
      fail(r.partition_ok, "point " + std::to_string(p) + " attached " + std::to_string(times[static_cast<std::size_t>(p)]) + " times");
  }

  bool geometry_ok = indices_ok && r.position_ok && r.color_ok;
  if (geometry_ok) {
    try {
      r.crossings = count_crossings(inst, lab);
    } catch (const OverlapError& e) {
      fail(r.overlap_ok, std::string("overlap: ") + e.what() + " (" + e.context() + ")");
    }
  }
  if (requires_crossing_free(mode) && r.overlap_ok && r.crossings != 0)
    fail(r.crossing_free_ok, std::to_string(r.crossings) + " crossings in a crossing-free mode");

  std::optional<Extent> want;
  if (mode == Mode::LabelsInfinite || mode == Mode::LengthInfinite || mode == Mode::CrossingsFlexible) want = Extent::Infinite;
  if (mode == Mode::LabelsFinite || mode == Mode::LengthFinite || mode == Mode::CrossingsExact) want = Extent::Finite;
  if (mode == Mode::CrossingsFixed && !lab.backbones.empty()) want = lab.backbones.front().extent;
  if (want)
    for (std::size_t b = 0; b < lab.backbones.size(); ++b)
      if (lab.backbones[b].extent != *want) fail(r.extent_ok, "backbone " + std::to_string(b) + " has the wrong extent");

  std::vector<int> per_color(static_cast<std::size_t>(std::max(0, inst.color_count())), 0);
  for (const auto& b : lab.backbones)
    if (b.color >= 0 && b.color < inst.color_count()) ++per_color[static_cast<std::size_t>(b.color)];
  if (mode == Mode::LengthInfinite || mode == Mode::LengthFinite) {
    if (const auto* t = std::get_if<TotalBudget>(&inst.budget)) {
      if (static_cast<int>(lab.backbones.size()) > t->k) fail(r.budget_ok, "more labels than the total budget allows");
    } else if (const auto* per = std::get_if<PerColorBudget>(&inst.budget)) {
      for (int c = 0; c < inst.color_count(); ++c)
        if (per_color[static_cast<std::size_t>(c)] > per->k[static_cast<std::size_t>(c)])
          fail(r.budget_ok, "color " + inst.colors[static_cast<std::size_t>(c)] + " exceeds its budget");
    }
  }
  if (mode == Mode::CrossingsFixed || mode == Mode::CrossingsFlexible || mode == Mode::CrossingsExact) {
    auto present = inst.points_per_color();
    for (int c = 0; c < inst.color_count(); ++c) {
      int want_count = present[static_cast<std::size_t>(c)] > 0 ? 1 : 0;
      if (per_color[static_cast<std::size_t>(c)] != want_count)
        fail(r.budget_ok, "color " + inst.colors[static_cast<std::size_t>(c)] + " must have exactly one label");
    }
  }

  if (geometry_ok && mode == Mode::CrossingsFixed) {
    for (std::size_t a = 0; a < lab.backbones.size(); ++a)
      for (std::size_t b = 0; b < lab.backbones.size(); ++b)
        if (lab.backbones[a].color < lab.backbones[b].color &&
            !(position_key(inst, lab.backbones[b].position) < position_key(inst, lab.backbones[a].position)))
          fail(r.order_ok, "label order violates the color order");
  }
  if (mode == Mode::CrossingsFlexible) {
    if (!inst.label_slots) {
      fail(r.order_ok, "instance has no label slots");
    } else {
      std::set<std::int64_t> used;
      for (const auto& b : lab.backbones) {
        const auto* e = std::get_if<ExactY>(&b.position);
        bool at_slot = e && e->y.denominator() == 1 &&
                       std::find(inst.label_slots->begin(), inst.label_slots->end(), e->y.numerator()) != inst.label_slots->end();
        if (!at_slot || !used.insert(e->y.numerator()).second) fail(r.order_ok, "backbone not placed on a distinct label slot");
      }
    }
  }

  if (geometry_ok && mode == Mode::LengthFinite && inst.delta) {
    auto ys = materialize_y(inst, lab);
    for (std::size_t a = 0; a < ys.size(); ++a)
      for (std::size_t b = a + 1; b < ys.size(); ++b)
        if (abs_diff(ys[a], ys[b]) < *inst.delta) fail(r.distance_ok, "backbones closer than delta");
    for (std::size_t b = 0; b < ys.size(); ++b) {
      if (!std::holds_alternative<ExactY>(lab.backbones[b].position)) continue;
      for (int p = 0; p < inst.n(); ++p)
        if (abs_diff(ys[b], Rational(inst.y(p))) < *inst.delta) fail(r.distance_ok, "backbone closer than delta to a point");
    }
  }

  if (geometry_ok && r.overlap_ok) {
    r.recomputed = {static_cast<int>(lab.backbones.size()), total_length(inst, lab, inst.lambda_mode), r.crossings};
    if (!(r.recomputed == lab.objective)) fail(r.objective_ok, "stored objective does not match recomputation");

    bool all_infinite = std::all_of(lab.backbones.begin(), lab.backbones.end(),
                                    [](const Backbone& b) { return b.extent == Extent::Infinite; });
    if (all_infinite && r.crossings == 0 && r.nonempty_ok)
      for (auto& v : lemma1_violations(inst, lab)) fail(r.lemma1_ok, "lemma: " + v);
  } else {
    r.objective_ok = false;
  }

  r.all_ok = r.failures.empty();
  return r;
}

}  // namespace backbone
