#include "depict/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace depict {
namespace {

int isqrt_floor(long long v) {
  if (v < 0) return -1;
  long long s = static_cast<long long>(std::sqrt(static_cast<double>(v)));
  while (s > 0 && s * s > v) --s;
  while ((s + 1) * (s + 1) <= v) ++s;
  return static_cast<int>(s);
}

long long sq(long long v) { return v * v; }

bool rect_rect_overlap(const RectShape& a, const RectShape& b) {
  return a.x1 <= b.x2 && b.x1 <= a.x2 && a.y1 <= b.y2 && b.y1 <= a.y2;
}

bool circle_rect_overlap(const Circle& c, const RectShape& r) {
  const int qx = std::clamp(c.cx, r.x1, r.x2);
  const int qy = std::clamp(c.cy, r.y1, r.y2);
  return sq(qx - c.cx) + sq(qy - c.cy) <= sq(c.r);
}

bool circle_circle_overlap(const Circle& a, const Circle& b) {
  const long long d2 = sq(a.cx - b.cx) + sq(a.cy - b.cy);
  if (d2 > sq(a.r + b.r)) return false;
  // Scan the shared x-range; the footprints intersect iff some column's
  // y-spans do.
  const int x_lo = std::max(a.cx - a.r, b.cx - b.r);
  const int x_hi = std::min(a.cx + a.r, b.cx + b.r);
  for (int x = x_lo; x <= x_hi; ++x) {
    const int ha = isqrt_floor(sq(a.r) - sq(x - a.cx));
    const int hb = isqrt_floor(sq(b.r) - sq(x - b.cx));
    if (ha < 0 || hb < 0) continue;
    if (a.cy - ha <= b.cy + hb && b.cy - hb <= a.cy + ha) return true;
  }
  return false;
}

}  // namespace

CanvasSpec CanvasSpec::default64() {
  CanvasSpec c;
  c.width = 64;
  c.height = 64;
  c.background = Rgb{255, 255, 255};
  c.palette = {{"red", Rgb{255, 0, 0}}, {"green", Rgb{0, 255, 0}}, {"blue", Rgb{0, 0, 255}}};
  return c;
}

const Rgb* CanvasSpec::find_color(const std::string& name) const {
  for (const auto& [color, rgb] : palette) {
    if (color == name) return &rgb;
  }
  return nullptr;
}

void CanvasSpec::validate() const {
  if (width < 32 || height < 32) throw std::invalid_argument("canvas must be at least 32x32");
  std::set<std::array<std::uint8_t, 3>> seen;
  seen.insert({background.r, background.g, background.b});
  for (const auto& [name, rgb] : palette) {
    if (name.empty()) throw std::invalid_argument("palette color name must be non-empty");
    if (!seen.insert({rgb.r, rgb.g, rgb.b}).second) {
      throw std::invalid_argument("palette colors must be pairwise distinct and distinct from background");
    }
  }
}

std::string kind_name(const Geometry& g) {
  return std::holds_alternative<Circle>(g) ? "circle" : "rectangle";
}

bool footprint_contains(const Geometry& g, int x, int y) {
  if (const auto* c = std::get_if<Circle>(&g)) {
    return sq(x - c->cx) + sq(y - c->cy) <= sq(c->r);
  }
  const auto& r = std::get<RectShape>(g);
  return x >= r.x1 && x <= r.x2 && y >= r.y1 && y <= r.y2;
}

bool in_bounds(const Geometry& g, const CanvasSpec& canvas) {
  if (const auto* c = std::get_if<Circle>(&g)) {
    return c->r >= 1 && c->cx - c->r >= 0 && c->cy - c->r >= 0 && c->cx + c->r <= canvas.width - 1 &&
           c->cy + c->r <= canvas.height - 1;
  }
  const auto& r = std::get<RectShape>(g);
  return r.x1 >= 0 && r.y1 >= 0 && r.x1 <= r.x2 && r.y1 <= r.y2 && r.x2 <= canvas.width - 1 &&
         r.y2 <= canvas.height - 1;
}

bool footprint_overlap(const Geometry& a, const Geometry& b) {
  if (const auto* ca = std::get_if<Circle>(&a)) {
    if (const auto* cb = std::get_if<Circle>(&b)) return circle_circle_overlap(*ca, *cb);
    return circle_rect_overlap(*ca, std::get<RectShape>(b));
  }
  const auto& ra = std::get<RectShape>(a);
  if (const auto* cb = std::get_if<Circle>(&b)) return circle_rect_overlap(*cb, ra);
  return rect_rect_overlap(ra, std::get<RectShape>(b));
}

namespace {

Geometry shifted(const Geometry& g, int dx, int dy) {
  if (const auto* c = std::get_if<Circle>(&g)) return Circle{c->cx + dx, c->cy + dy, c->r};
  const auto& r = std::get<RectShape>(g);
  return RectShape{r.x1 + dx, r.y1 + dy, r.x2 + dx, r.y2 + dy};
}

}  // namespace

bool footprint_touch(const Geometry& a, const Geometry& b) {
  // Edge adjacency is overlap after a one-pixel shift in one of the four
  // axis directions.
  return footprint_overlap(a, b) || footprint_overlap(shifted(a, 1, 0), b) ||
         footprint_overlap(shifted(a, -1, 0), b) || footprint_overlap(shifted(a, 0, 1), b) ||
         footprint_overlap(shifted(a, 0, -1), b);
}

void ShapeScene::validate(const ConceptSpace& space) const {
  std::set<int> used;
  for (const auto& shape : shapes) {
    if (shape.concept_index < 0 || shape.concept_index >= space.size()) {
      throw std::runtime_error("scene references concept index outside the concept space");
    }
    if (!used.insert(shape.concept_index).second) {
      throw std::runtime_error("scene places concept " + space.names[static_cast<std::size_t>(shape.concept_index)] +
                               " more than once");
    }
    if (kind_name(shape.geom) != space.kind_of(shape.concept_index)) {
      throw std::runtime_error("shape kind does not match concept " +
                               space.names[static_cast<std::size_t>(shape.concept_index)]);
    }
    if (canvas.find_color(space.color_of(shape.concept_index)) == nullptr) {
      throw std::runtime_error("palette lacks color for concept " +
                               space.names[static_cast<std::size_t>(shape.concept_index)]);
    }
    if (!in_bounds(shape.geom, canvas)) {
      throw std::runtime_error("shape for concept " + space.names[static_cast<std::size_t>(shape.concept_index)] +
                               " falls outside the canvas");
    }
  }
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    for (std::size_t j = i + 1; j < shapes.size(); ++j) {
      if (footprint_overlap(shapes[i].geom, shapes[j].geom)) {
        throw std::runtime_error("shape footprints overlap");
      }
    }
  }
}

Geometry sample_geometry(const std::string& kind, const CanvasSpec& canvas, const PlacementRules& rules,
                         Rng& rng, bool& feasible) {
  feasible = true;
  if (kind == "circle") {
    const int r = rng.uniform_int(rules.circle_r_min, rules.circle_r_max);
    if (2 * r + 1 > canvas.width || 2 * r + 1 > canvas.height) {
      feasible = false;
      return Circle{0, 0, r};
    }
    const int cx = rng.uniform_int(r, canvas.width - 1 - r);
    const int cy = rng.uniform_int(r, canvas.height - 1 - r);
    return Circle{cx, cy, r};
  }
  if (kind == "rectangle") {
    const int side_x = rng.uniform_int(rules.rect_side_min, rules.rect_side_max);
    const int side_y = rng.uniform_int(rules.rect_side_min, rules.rect_side_max);
    if (side_x > canvas.width || side_y > canvas.height) {
      feasible = false;
      return RectShape{0, 0, side_x - 1, side_y - 1};
    }
    const int x1 = rng.uniform_int(0, canvas.width - side_x);
    const int y1 = rng.uniform_int(0, canvas.height - side_y);
    return RectShape{x1, y1, x1 + side_x - 1, y1 + side_y - 1};
  }
  throw std::invalid_argument("unknown shape kind: " + kind);
}

ShapeScene place_shapes(const ConceptVector& v, const ConceptSpace& space, const CanvasSpec& canvas, Rng& rng,
                        const PlacementRules& rules) {
  if (static_cast<int>(v.size()) != space.size()) {
    throw std::invalid_argument("concept vector width does not match concept space");
  }
  ShapeScene scene;
  scene.canvas = canvas;
  for (int restart = 0; restart < rules.max_restarts; ++restart) {
    scene.shapes.clear();
    bool complete = true;
    for (int j = 0; j < space.size() && complete; ++j) {
      if (!v[static_cast<std::size_t>(j)]) continue;
      const std::string kind = space.kind_of(j);
      bool placed = false;
      for (int attempt = 0; attempt < rules.max_attempts; ++attempt) {
        bool feasible = true;
        Geometry g = sample_geometry(kind, canvas, rules, rng, feasible);
        if (!feasible) continue;
        bool clash = false;
        for (const auto& other : scene.shapes) {
          if (footprint_touch(g, other.geom)) {
            clash = true;
            break;
          }
        }
        if (clash) continue;
        scene.shapes.push_back(PlacedShape{j, std::move(g)});
        placed = true;
        break;
      }
      if (!placed) complete = false;
    }
    if (complete) return scene;
  }
  throw PlacementError("could not place all requested shapes on a " + std::to_string(canvas.width) + "x" +
                       std::to_string(canvas.height) + " canvas after " + std::to_string(rules.max_restarts) +
                       " restarts");
}

}  // namespace depict
