#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "depict/concept_space.hpp"
#include "depict/scene.hpp"

namespace depict {

// Byte offset of the offending token in the caption text.
struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& message, std::size_t offset);
};

std::string render_caption(const ShapeScene& scene, const ConceptSpace& space);

ShapeScene parse_caption(const std::string& text, const ConceptSpace& space, const CanvasSpec& canvas);

}  // namespace depict
