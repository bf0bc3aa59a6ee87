#pragma once

#include "backbone/geometry.hpp"
#include "backbone/verify.hpp"

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace backbone {

struct RenderStyle {
  double point_radius = 0.8;   // in units of 1/100 of the larger rectangle side
  double leader_width = 0.25;
  double backbone_width = 0.4;
  double frame_width = 0.2;
  double stub_length = 4.0;    // label stub right of the boundary
  double margin = 6.0;
  std::optional<Rational> epsilon;  // offset for near positions; default: smallest gap / (4n)
  std::vector<std::string> palette{"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

inline Rational default_epsilon(const Instance& inst) {
  const int n = inst.n();
  if (n < 2) return Rational(1, 4);
  std::int64_t gap = inst.y(0) - inst.y(1);
  for (int i = 1; i + 1 < n; ++i) gap = std::min(gap, inst.y(i) - inst.y(i + 1));
  return Rational(gap, 4 * n);
}

}  // namespace detail

// SVG 1.1 drawing: frame, backbones with label stubs on the right boundary,
// vertical leaders and the points. Screen y grows downward.
inline std::string render_svg(const Instance& inst, const Labeling& lab, const RenderStyle& style = {}) {
  const auto report = verify(inst, lab, Mode::Any);
  if (!report.partition_ok || !report.color_ok || !report.position_ok || !report.overlap_ok)
    throw ValidationError("invalid_labeling", "cannot draw an illegal labeling", report.failures.empty() ? "" : report.failures.front());

  const double unit = static_cast<double>(std::max(inst.width, inst.height)) / 100.0;
  const double margin = style.margin * unit, stub = style.stub_length * unit;
  const double w = static_cast<double>(inst.width), h = static_cast<double>(inst.height);
  auto sx = [&](double x) { return detail::num(margin + x); };
  auto sy = [&](double y) { return detail::num(margin + h - y); };
  auto color = [&](ColorId c) { return style.palette[static_cast<std::size_t>(c) % style.palette.size()]; };

  const auto ys = materialize_y(inst, lab, style.epsilon.value_or(detail::default_epsilon(inst)));

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 " << detail::num(w + 2 * margin + stub) << ' '
      << detail::num(h + 2 * margin) << "\">\n";
  out << "  <rect x=\"" << sx(0) << "\" y=\"" << sy(h) << "\" width=\"" << detail::num(w) << "\" height=\"" << detail::num(h)
      << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"" << detail::num(style.frame_width * unit) << "\"/>\n";

  for (std::size_t b = 0; b < lab.backbones.size(); ++b) {
    const auto& bb = lab.backbones[b];
    const double y = to_double(ys[b]);
    const double x0 = bb.extent == Extent::Infinite ? 0.0 : static_cast<double>(reach(inst, bb));
    out << "  <line x1=\"" << sx(x0) << "\" y1=\"" << sy(y) << "\" x2=\"" << sx(w) << "\" y2=\"" << sy(y) << "\" stroke=\""
        << color(bb.color) << "\" stroke-width=\"" << detail::num(style.backbone_width * unit) << "\"/>\n";
    out << "  <rect x=\"" << sx(w) << "\" y=\"" << detail::num(margin + h - y - unit) << "\" width=\"" << detail::num(stub)
        << "\" height=\"" << detail::num(2 * unit) << "\" fill=\"" << color(bb.color) << "\"/>\n";
    for (int p : bb.attached) {
      const double py = static_cast<double>(inst.y(p));
      if (Rational(inst.y(p)) == ys[b]) continue;
      const double px = static_cast<double>(inst.x(p));
      out << "  <line x1=\"" << sx(px) << "\" y1=\"" << sy(py) << "\" x2=\"" << sx(px) << "\" y2=\"" << sy(y) << "\" stroke=\""
          << color(bb.color) << "\" stroke-width=\"" << detail::num(style.leader_width * unit) << "\"/>\n";
    }
  }
  for (int p = 0; p < inst.n(); ++p)
    out << "  <circle cx=\"" << sx(static_cast<double>(inst.x(p))) << "\" cy=\"" << sy(static_cast<double>(inst.y(p))) << "\" r=\""
        << detail::num(style.point_radius * unit) << "\" fill=\"" << color(inst.color_of(p)) << "\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace backbone
