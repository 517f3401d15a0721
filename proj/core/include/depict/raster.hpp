#pragma once

#include <cstdint>
#include <vector>

#include "depict/concept_space.hpp"
#include "depict/scene.hpp"

namespace depict {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB

  Image() = default;
  Image(int w, int h, Rgb fill);

  Rgb at(int x, int y) const {
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                               static_cast<std::size_t>(x));
    return Rgb{pixels[i], pixels[i + 1], pixels[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                               static_cast<std::size_t>(x));
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
  }

  bool operator==(const Image&) const = default;
};

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // row-major, 0 or 1

  BinaryMask() = default;
  BinaryMask(int w, int h);

  bool at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] != 0;
  }
  void set(int x, int y, bool v) {
    bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] = v ? 1 : 0;
  }
  std::size_t count() const;

  bool operator==(const BinaryMask&) const = default;
};

Image rasterize(const ShapeScene& scene, const ConceptSpace& space);

// One mask per concept; all-false where the concept is absent.
std::vector<BinaryMask> concept_masks(const ShapeScene& scene, const ConceptSpace& space);

}  // namespace depict
