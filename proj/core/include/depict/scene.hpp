#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "depict/concept_space.hpp"
#include "depict/rng.hpp"

namespace depict {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

struct CanvasSpec {
  int width = 64;
  int height = 64;
  Rgb background{255, 255, 255};
  std::vector<std::pair<std::string, Rgb>> palette;

  static CanvasSpec default64();
  const Rgb* find_color(const std::string& name) const;
  void validate() const;
  bool operator==(const CanvasSpec&) const = default;
};

// Closed-footprint geometry on the integer pixel grid.
struct Circle {
  int cx = 0;
  int cy = 0;
  int r = 0;
  bool operator==(const Circle&) const = default;
};

// Corners are inclusive: the footprint is [x1,x2] x [y1,y2].
struct RectShape {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;
  bool operator==(const RectShape&) const = default;
};

using Geometry = std::variant<Circle, RectShape>;

std::string kind_name(const Geometry& g);
bool footprint_contains(const Geometry& g, int x, int y);
bool in_bounds(const Geometry& g, const CanvasSpec& canvas);

// Exact intersection test of the two pixel footprints.
bool footprint_overlap(const Geometry& a, const Geometry& b);

// Overlap or edge adjacency. Placement keeps a one-pixel gap between shapes
// so same-color footprints never merge into one connected component.
bool footprint_touch(const Geometry& a, const Geometry& b);

struct PlacedShape {
  int concept_index = -1;
  Geometry geom;
  bool operator==(const PlacedShape&) const = default;
};

struct ShapeScene {
  CanvasSpec canvas;
  std::vector<PlacedShape> shapes;

  bool operator==(const ShapeScene&) const = default;
  void validate(const ConceptSpace& space) const;
};

struct PlacementRules {
  int circle_r_min = 5;
  int circle_r_max = 10;
  int rect_side_min = 8;
  int rect_side_max = 16;
  int max_attempts = 1000;
  int max_restarts = 50;
  bool operator==(const PlacementRules&) const = default;
};

struct PlacementError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Geometry sample_geometry(const std::string& kind, const CanvasSpec& canvas, const PlacementRules& rules,
                         Rng& rng, bool& feasible);

ShapeScene place_shapes(const ConceptVector& v, const ConceptSpace& space, const CanvasSpec& canvas, Rng& rng,
                        const PlacementRules& rules = {});

}  // namespace depict
