#pragma once

#include <optional>
#include <vector>

#include "depict/models.hpp"
#include "depict/raster.hpp"
#include "depict/scene.hpp"

namespace depict {

struct SaliencyMap {
  int width = 0;
  int height = 0;
  std::vector<double> heat;  // per pixel, max |score change| over covering patches
  BinaryMask mask;           // heat > 0

  double heat_at(int x, int y) const {
    return heat[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
};

// Slides a background-colored square patch over the image on a stride grid
// that also covers the right and bottom edges, rescoring the task each time.
SaliencyMap occlusion_saliency(const TargetTask& f, const Image& img, int patch = 8, int stride = 4);

// Intersection over union; zero when both masks are empty.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

struct ConceptIou {
  int concept_index = -1;
  int images_with_concept = 0;
  std::optional<double> mean_iou;  // empty when no image contains the concept
};

struct IouRanking {
  std::vector<ConceptIou> concepts;
  std::vector<int> ranking;  // descending mean IOU; absent concepts last
};

// Saliency-vs-footprint agreement per concept, averaged over the images that
// contain the concept. scenes[i] must be the ground truth behind images[i].
IouRanking iou_ranking(const TargetTask& f, const std::vector<Image>& images,
                       const std::vector<ShapeScene>& scenes, const ConceptSpace& space, int patch = 8,
                       int stride = 4, int workers = 1);

// Heat rescaled to [0,255] (all-zero heat stays black), PGM bytes.
std::string saliency_pgm(const SaliencyMap& map);

}  // namespace depict
