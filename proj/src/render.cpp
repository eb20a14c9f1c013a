#include "pushsort/render.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <string>

#include "pushsort/errors.hpp"

namespace pushsort {

namespace {

constexpr double kScale = 400.0;  // pixels per meter
constexpr double kPad = 20.0;     // pixels around the content

const char* kPalette[] = {"#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2",
                          "#b279a2", "#eeca3b", "#9d755d", "#bab0ac", "#2f4b7c"};

struct Canvas {
  double min_x = 0.0, max_y = 0.0;
  std::string out;

  double px(double x) const { return kPad + (x - min_x) * kScale; }
  double py(double y) const { return kPad + (max_y - y) * kScale; }

  void add(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    va_list args;
    va_start(args, fmt);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    out += buf;
  }

  std::string points(const ConvexPolygon& poly) const {
    std::string s;
    char buf[64];
    for (Vec2 v : poly.vertices()) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", s.empty() ? "" : " ", px(v.x), py(v.y));
      s += buf;
    }
    return s;
  }

  void arrow(Vec2 a, Vec2 b, const char* color) {
    const Vec2 d = b - a;
    const double len = d.norm();
    if (len < 1e-9) return;
    const Vec2 u = d * (1.0 / len), n = u.perp();
    const Vec2 h1 = b - u * 0.02 + n * 0.012, h2 = b - u * 0.02 - n * 0.012;
    add("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
        "stroke-width=\"2\"/>\n",
        px(a.x), py(a.y), px(b.x), py(b.y), color);
    add("<polygon points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f\" fill=\"%s\"/>\n", px(b.x), py(b.y),
        px(h1.x), py(h1.y), px(h2.x), py(h2.y), color);
  }
};

}  // namespace

std::string render_svg(const SceneState& state, const std::optional<Action>& overlay) {
  double min_x = 0.0, min_y = 0.0, max_x = 1.0, max_y = 1.0;
  bool first = true;
  auto grow = [&](Vec2 v) {
    if (first) {
      min_x = max_x = v.x;
      min_y = max_y = v.y;
      first = false;
      return;
    }
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  };
  for (const TargetRegion& t : state.regions)
    for (Vec2 v : t.polygon.vertices()) grow(v);
  for (const ObjectState& o : state.objects)
    for (Vec2 v : o.shape.vertices()) grow(v);
  grow(state.gripper_pos);

  Canvas c;
  c.min_x = min_x;
  c.max_y = max_y;
  const double w = (max_x - min_x) * kScale + 2 * kPad;
  const double h = (max_y - min_y) * kScale + 2 * kPad;
  c.add("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
        "viewBox=\"0 0 %.0f %.0f\">\n",
        w, h, w, h);
  c.add("<rect width=\"%.0f\" height=\"%.0f\" fill=\"#ffffff\"/>\n", w, h);

  for (size_t j = 0; j < state.regions.size(); ++j) {
    const TargetRegion& t = state.regions[j];
    c.add("<polygon points=\"%s\" fill=\"#f2f2f2\" stroke=\"#555555\" stroke-width=\"1.5\" "
          "stroke-dasharray=\"6 3\"/>\n",
          c.points(t.polygon).c_str());
    const Vec2 ctr = t.polygon.centroid();
    c.add("<text x=\"%.2f\" y=\"%.2f\" font-size=\"14\" fill=\"#555555\" "
          "text-anchor=\"middle\">t%zu</text>\n",
          c.px(ctr.x), c.py(ctr.y), j);
  }

  for (const ObjectState& o : state.objects) {
    const char* color = kPalette[static_cast<size_t>(o.label) % (sizeof kPalette / sizeof *kPalette)];
    c.add("<polygon points=\"%s\" fill=\"%s\" fill-opacity=\"0.9\" stroke=\"#222222\" "
          "stroke-width=\"0.8\"/>\n",
          c.points(o.shape).c_str(), color);
  }

  const Vec2 g = state.gripper_pos;
  c.add("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"5\" fill=\"none\" stroke=\"#111111\" "
        "stroke-width=\"1.5\"/>\n",
        c.px(g.x), c.py(g.y));

  if (overlay) {
    if (overlay->kind == Action::Kind::Grasp) {
      const GraspAction& ga = *overlay->grasp;
      const Vec2 from = state.objects[static_cast<size_t>(ga.object)].center;
      c.arrow(from, ga.placement, "#d62728");
      const double r = state.objects[static_cast<size_t>(ga.object)].radius;
      c.add("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"none\" stroke=\"#d62728\" "
            "stroke-width=\"1\" stroke-dasharray=\"4 2\"/>\n",
            c.px(ga.placement.x), c.py(ga.placement.y), r * kScale);
    } else {
      const PushAction& pa = *overlay->push;
      const Vec2 dir = pa.direction, perp = dir.perp();
      const Vec2 a = pa.anchor;
      const Vec2 q0 = a - dir * pa.thickness - perp * (pa.width / 2.0);
      const Vec2 q1 = a - dir * pa.thickness + perp * (pa.width / 2.0);
      const Vec2 q2 = a + perp * (pa.width / 2.0);
      const Vec2 q3 = a - perp * (pa.width / 2.0);
      c.add("<polygon points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f %.2f,%.2f\" fill=\"#d62728\" "
            "fill-opacity=\"0.5\" stroke=\"#d62728\" stroke-width=\"1\"/>\n",
            c.px(q0.x), c.py(q0.y), c.px(q1.x), c.py(q1.y), c.px(q2.x), c.py(q2.y), c.px(q3.x),
            c.py(q3.y));
      c.arrow(a, a + dir * pa.travel, "#d62728");
    }
  }

  c.add("</svg>\n");
  return std::move(c.out);
}

void save_svg(const SceneState& state, const std::optional<Action>& overlay,
              const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << render_svg(state, overlay);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace pushsort
