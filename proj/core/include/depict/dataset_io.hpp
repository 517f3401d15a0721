#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depict/concept_space.hpp"
#include "depict/raster.hpp"
#include "depict/scene.hpp"

namespace depict {

// On-disk layout under one directory:
//   meta.json     concept names, canvas, instance count
//   index.jsonl   one record per instance: image path, caption, bits, label
//   imgs/NNNNNN.ppm
struct Dataset {
  ConceptSpace space;
  CanvasSpec canvas;
  std::vector<Image> images;
  ConceptMatrix concepts;
  std::vector<std::uint8_t> labels;
  std::vector<std::string> captions;

  std::size_t size() const { return images.size(); }
  void validate() const;
};

void write_dataset(const Dataset& ds, const std::string& dir);

// Exact inverse of write_dataset. Index problems report the 1-based line
// number; image problems name the file.
Dataset read_dataset(const std::string& dir);

}  // namespace depict
