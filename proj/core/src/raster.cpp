#include "depict/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace depict {
namespace {

int isqrt_floor(long long v) {
  if (v < 0) return -1;
  long long s = static_cast<long long>(std::sqrt(static_cast<double>(v)));
  while (s > 0 && s * s > v) --s;
  while ((s + 1) * (s + 1) <= v) ++s;
  return static_cast<int>(s);
}

template <typename Paint>
void paint_footprint(const Geometry& g, Paint&& paint) {
  if (const auto* c = std::get_if<Circle>(&g)) {
    for (int dy = -c->r; dy <= c->r; ++dy) {
      const int dx = isqrt_floor(static_cast<long long>(c->r) * c->r - static_cast<long long>(dy) * dy);
      paint(c->cy + dy, c->cx - dx, c->cx + dx);
    }
    return;
  }
  const auto& r = std::get<RectShape>(g);
  for (int y = r.y1; y <= r.y2; ++y) paint(y, r.x1, r.x2);
}

}  // namespace

Image::Image(int w, int h, Rgb fill) : width(w), height(h) {
  if (w < 1 || h < 1) throw std::invalid_argument("image dimensions must be positive");
  pixels.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  if (fill.r == fill.g && fill.g == fill.b) {
    std::fill(pixels.begin(), pixels.end(), fill.r);
  } else {
    for (std::size_t i = 0; i < pixels.size(); i += 3) {
      pixels[i] = fill.r;
      pixels[i + 1] = fill.g;
      pixels[i + 2] = fill.b;
    }
  }
}

BinaryMask::BinaryMask(int w, int h) : width(w), height(h) {
  if (w < 1 || h < 1) throw std::invalid_argument("mask dimensions must be positive");
  bits.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
}

std::size_t BinaryMask::count() const {
  std::size_t n = 0;
  for (const auto b : bits) n += b != 0;
  return n;
}

Image rasterize(const ShapeScene& scene, const ConceptSpace& space) {
  Image img(scene.canvas.width, scene.canvas.height, scene.canvas.background);
  for (const auto& shape : scene.shapes) {
    const Rgb* color = scene.canvas.find_color(space.color_of(shape.concept_index));
    if (color == nullptr) {
      throw std::runtime_error("palette lacks color for concept " +
                               space.names[static_cast<std::size_t>(shape.concept_index)]);
    }
    const Rgb c = *color;
    paint_footprint(shape.geom, [&](int y, int x_lo, int x_hi) {
      std::uint8_t* row = img.pixels.data() +
                          3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width));
      for (int x = x_lo; x <= x_hi; ++x) {
        row[3 * x] = c.r;
        row[3 * x + 1] = c.g;
        row[3 * x + 2] = c.b;
      }
    });
  }
  return img;
}

std::vector<BinaryMask> concept_masks(const ShapeScene& scene, const ConceptSpace& space) {
  std::vector<BinaryMask> masks;
  masks.reserve(static_cast<std::size_t>(space.size()));
  for (int j = 0; j < space.size(); ++j) masks.emplace_back(scene.canvas.width, scene.canvas.height);
  for (const auto& shape : scene.shapes) {
    BinaryMask& m = masks[static_cast<std::size_t>(shape.concept_index)];
    paint_footprint(shape.geom, [&](int y, int x_lo, int x_hi) {
      std::uint8_t* row = m.bits.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(m.width);
      std::fill(row + x_lo, row + x_hi + 1, std::uint8_t{1});
    });
  }
  return masks;
}

}  // namespace depict
