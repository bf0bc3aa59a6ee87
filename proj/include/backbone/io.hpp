#pragma once

#include "backbone/types.hpp"

#include <json.hpp>

#include <istream>
#include <sstream>
#include <string>

namespace backbone {

namespace detail {

using ojson = nlohmann::ordered_json;

[[noreturn]] inline void schema_error(const std::string& code, const std::string& message, const std::string& context = {}) {
  throw ValidationError(code, message, context);
}

inline ojson parse_json_text(const std::string& text) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    schema_error("syntax_error", e.what(), "byte " + std::to_string(e.byte));
  }
}

inline std::int64_t get_int(const ojson& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key) || !obj.at(key).is_number_integer()) schema_error("schema_error", std::string("expected integer '") + key + "'", ctx);
  return obj.at(key).get<std::int64_t>();
}

inline Rational get_rational(const ojson& v, const std::string& ctx) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (!v.is_string()) schema_error("schema_error", "expected rational string \"p/q\"", ctx);
  auto r = parse_rational(v.get<std::string>());
  if (!r) schema_error("malformed_rational", "malformed rational", ctx + ": " + v.get<std::string>());
  return *r;
}

inline ColorId color_index(const Instance& inst, const std::string& name, const std::string& ctx) {
  for (int c = 0; c < inst.color_count(); ++c)
    if (inst.colors[static_cast<std::size_t>(c)] == name) return c;
  schema_error("color_out_of_range", "unknown color '" + name + "'", ctx);
}

inline Instance instance_from_json(const ojson& doc) {
  if (!doc.is_object()) schema_error("schema_error", "instance must be a JSON object");
  Instance inst;
  inst.width = get_int(doc, "width", "instance");
  inst.height = get_int(doc, "height", "instance");

  if (!doc.contains("colors") || !doc.at("colors").is_array()) schema_error("schema_error", "expected array 'colors'");
  for (const auto& c : doc.at("colors")) {
    if (!c.is_string()) schema_error("schema_error", "color names must be strings");
    inst.colors.push_back(c.get<std::string>());
  }

  if (!doc.contains("points") || !doc.at("points").is_array()) schema_error("schema_error", "expected array 'points'");
  std::size_t idx = 0;
  for (const auto& p : doc.at("points")) {
    std::string ctx = "points[" + std::to_string(idx++) + "]";
    if (!p.is_object()) schema_error("schema_error", "point must be an object", ctx);
    Point pt;
    pt.x = get_int(p, "x", ctx);
    pt.y = get_int(p, "y", ctx);
    if (!p.contains("color") || !p.at("color").is_string()) schema_error("schema_error", "expected string 'color'", ctx);
    pt.color = color_index(inst, p.at("color").get<std::string>(), ctx);
    inst.points.push_back(pt);
  }

  if (doc.contains("budget") && !doc.at("budget").is_null()) {
    const auto& b = doc.at("budget");
    if (b.is_object() && b.contains("total") && b.size() == 1) {
      if (!b.at("total").is_number_integer()) schema_error("invalid_budget", "total budget must be an integer");
      inst.budget = TotalBudget{b.at("total").get<int>()};
    } else if (b.is_object() && b.contains("per_color") && b.size() == 1 && b.at("per_color").is_object()) {
      PerColorBudget per;
      per.k.assign(inst.colors.size(), 0);
      for (const auto& [name, v] : b.at("per_color").items()) {
        if (!v.is_number_integer()) schema_error("invalid_budget", "per-color budget entries must be integers", name);
        per.k[static_cast<std::size_t>(color_index(inst, name, "budget.per_color"))] = v.get<int>();
      }
      if (b.at("per_color").size() != inst.colors.size())
        schema_error("invalid_budget", "per-color budget must list every color");
      inst.budget = per;
    } else {
      schema_error("invalid_budget", "budget must be null, {\"total\":K} or {\"per_color\":{...}}");
    }
  }

  if (doc.contains("lambda_mode") && !doc.at("lambda_mode").is_null()) {
    const auto& m = doc.at("lambda_mode");
    if (m == "zero") inst.lambda_mode = LambdaMode::Zero;
    else if (m == "width") inst.lambda_mode = LambdaMode::Width;
    else schema_error("schema_error", "lambda_mode must be \"zero\" or \"width\"");
  }

  if (doc.contains("delta") && !doc.at("delta").is_null()) inst.delta = get_rational(doc.at("delta"), "delta");

  if (doc.contains("label_slots") && !doc.at("label_slots").is_null()) {
    if (!doc.at("label_slots").is_array()) schema_error("invalid_slots", "label_slots must be an array");
    std::vector<std::int64_t> slots;
    for (const auto& s : doc.at("label_slots")) {
      if (!s.is_number_integer()) schema_error("invalid_slots", "label slots must be integers");
      slots.push_back(s.get<std::int64_t>());
    }
    inst.label_slots = slots;
  }
  return inst;
}

}  // namespace detail

// Parses without validating; `perturb` may be applied before validate().
inline Instance parse_instance_unchecked(const std::string& text) {
  return detail::instance_from_json(detail::parse_json_text(text));
}

inline Instance parse_instance(const std::string& text) {
  Instance inst = parse_instance_unchecked(text);
  validate(inst);
  return inst;
}

inline Instance parse_instance(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

inline nlohmann::ordered_json instance_to_json(const Instance& inst) {
  detail::ojson doc;
  doc["width"] = inst.width;
  doc["height"] = inst.height;
  doc["colors"] = inst.colors;
  doc["points"] = detail::ojson::array();
  for (const auto& p : inst.points)
    doc["points"].push_back({{"x", p.x}, {"y", p.y}, {"color", inst.colors[static_cast<std::size_t>(p.color)]}});
  if (const auto* t = std::get_if<TotalBudget>(&inst.budget)) {
    doc["budget"] = {{"total", t->k}};
  } else if (const auto* per = std::get_if<PerColorBudget>(&inst.budget)) {
    detail::ojson m = detail::ojson::object();
    for (std::size_t c = 0; c < per->k.size(); ++c) m[inst.colors[c]] = per->k[c];
    doc["budget"] = {{"per_color", m}};
  } else {
    doc["budget"] = nullptr;
  }
  doc["lambda_mode"] = inst.lambda_mode == LambdaMode::Width ? "width" : "zero";
  doc["delta"] = inst.delta ? detail::ojson(to_string(*inst.delta)) : detail::ojson(nullptr);
  doc["label_slots"] = inst.label_slots ? detail::ojson(*inst.label_slots) : detail::ojson(nullptr);
  return doc;
}

inline std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

inline nlohmann::ordered_json position_to_json(const BackbonePosition& pos) {
  detail::ojson j;
  if (const auto* g = std::get_if<GapPos>(&pos)) {
    j = {{"kind", "gap"}, {"gap", g->gap}, {"rank", g->rank}};
  } else if (const auto* on = std::get_if<OnPoint>(&pos)) {
    j = {{"kind", "on_point"}, {"point", on->point}};
  } else if (const auto* near = std::get_if<NearPoint>(&pos)) {
    j = {{"kind", "near_point"}, {"point", near->point}, {"side", near->side == Side::Above ? "above" : "below"}, {"rank", near->rank}};
  } else {
    j = {{"kind", "exact_y"}, {"y", to_string(std::get<ExactY>(pos).y)}};
  }
  return j;
}

inline nlohmann::ordered_json labeling_to_json(const Instance& inst, const Labeling& lab) {
  detail::ojson doc;
  doc["backbones"] = detail::ojson::array();
  for (const auto& b : lab.backbones) {
    doc["backbones"].push_back({{"color", inst.colors[static_cast<std::size_t>(b.color)]},
                                {"position", position_to_json(b.position)},
                                {"extent", b.extent == Extent::Infinite ? "infinite" : "finite"},
                                {"attached", b.attached}});
  }
  doc["objective"] = {{"labels", lab.objective.labels},
                      {"length", to_string(lab.objective.length)},
                      {"crossings", lab.objective.crossings}};
  return doc;
}

inline std::string serialize_labeling(const Instance& inst, const Labeling& lab) { return labeling_to_json(inst, lab).dump(2) + "\n"; }

inline BackbonePosition position_from_json(const detail::ojson& j, const std::string& ctx) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) detail::schema_error("schema_error", "position needs a 'kind'", ctx);
  auto kind = j.at("kind").get<std::string>();
  auto geti = [&](const char* key) { return static_cast<int>(detail::get_int(j, key, ctx)); };
  if (kind == "gap") return GapPos{geti("gap"), j.contains("rank") ? geti("rank") : 0};
  if (kind == "on_point") return OnPoint{geti("point")};
  if (kind == "near_point") {
    if (!j.contains("side") || !j.at("side").is_string()) detail::schema_error("schema_error", "near_point needs 'side'", ctx);
    auto side = j.at("side").get<std::string>();
    if (side != "above" && side != "below") detail::schema_error("schema_error", "side must be above or below", ctx);
    return NearPoint{geti("point"), side == "above" ? Side::Above : Side::Below, j.contains("rank") ? geti("rank") : 0};
  }
  if (kind == "exact_y") {
    if (!j.contains("y")) detail::schema_error("schema_error", "exact_y needs 'y'", ctx);
    return ExactY{detail::get_rational(j.at("y"), ctx)};
  }
  detail::schema_error("schema_error", "unknown position kind '" + kind + "'", ctx);
}

inline Labeling parse_labeling(const Instance& inst, const std::string& text) {
  auto doc = detail::parse_json_text(text);
  if (!doc.is_object() || !doc.contains("backbones") || !doc.at("backbones").is_array())
    detail::schema_error("schema_error", "labeling needs a 'backbones' array");
  Labeling lab;
  std::size_t idx = 0;
  for (const auto& jb : doc.at("backbones")) {
    std::string ctx = "backbones[" + std::to_string(idx++) + "]";
    if (!jb.is_object()) detail::schema_error("schema_error", "backbone must be an object", ctx);
    Backbone b;
    if (!jb.contains("color") || !jb.at("color").is_string()) detail::schema_error("schema_error", "backbone needs 'color'", ctx);
    b.color = detail::color_index(inst, jb.at("color").get<std::string>(), ctx);
    if (!jb.contains("position")) detail::schema_error("schema_error", "backbone needs 'position'", ctx);
    b.position = position_from_json(jb.at("position"), ctx);
    auto extent = jb.value("extent", std::string("infinite"));
    if (extent != "infinite" && extent != "finite") detail::schema_error("schema_error", "extent must be infinite or finite", ctx);
    b.extent = extent == "infinite" ? Extent::Infinite : Extent::Finite;
    if (jb.contains("attached")) {
      if (!jb.at("attached").is_array()) detail::schema_error("schema_error", "'attached' must be an array", ctx);
      for (const auto& a : jb.at("attached")) {
        if (!a.is_number_integer()) detail::schema_error("schema_error", "attached entries must be integers", ctx);
        b.attached.push_back(a.get<int>());
      }
    }
    lab.backbones.push_back(std::move(b));
  }
  if (doc.contains("objective") && doc.at("objective").is_object()) {
    const auto& o = doc.at("objective");
    lab.objective.labels = static_cast<int>(o.value("labels", 0));
    if (o.contains("length")) lab.objective.length = detail::get_rational(o.at("length"), "objective.length");
    lab.objective.crossings = o.value("crossings", std::int64_t{0});
  }
  return lab;
}

}  // namespace backbone
