#include "depict/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "depict/parallel.hpp"
#include "depict/pnm.hpp"

namespace depict {
namespace {

// Stride grid plus a forced final position so the patch reaches the far edge.
std::vector<int> patch_positions(int extent, int patch, int stride) {
  std::vector<int> out;
  const int last = std::max(extent - patch, 0);
  for (int x = 0; x < last; x += stride) out.push_back(x);
  out.push_back(last);
  return out;
}

}  // namespace

SaliencyMap occlusion_saliency(const TargetTask& f, const Image& img, int patch, int stride) {
  if (patch < 1 || stride < 1) throw std::invalid_argument("patch and stride must be positive");
  if (img.width < 1 || img.height < 1) throw std::invalid_argument("empty image");

  SaliencyMap map;
  map.width = img.width;
  map.height = img.height;
  map.heat.assign(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height), 0.0);
  map.mask = BinaryMask(img.width, img.height);

  const double base_score = target_score(f, img);
  const Rgb background = f.bottleneck.canvas.background;

  Image work = img;
  std::vector<Rgb> saved(static_cast<std::size_t>(patch) * static_cast<std::size_t>(patch));
  for (const int y0 : patch_positions(img.height, patch, stride)) {
    const int y1 = std::min(y0 + patch, img.height);
    for (const int x0 : patch_positions(img.width, patch, stride)) {
      const int x1 = std::min(x0 + patch, img.width);
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          saved[static_cast<std::size_t>((y - y0) * patch + (x - x0))] = work.at(x, y);
          work.set(x, y, background);
        }
      }
      const double delta = std::abs(target_score(f, work) - base_score);
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          work.set(x, y, saved[static_cast<std::size_t>((y - y0) * patch + (x - x0))]);
          const std::size_t i =
              static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width) + static_cast<std::size_t>(x);
          map.heat[i] = std::max(map.heat[i], delta);
        }
      }
    }
  }
  for (std::size_t i = 0; i < map.heat.size(); ++i) {
    map.mask.bits[i] = map.heat[i] > 0.0 ? 1 : 0;
  }
  return map;
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height) throw std::invalid_argument("mask dimensions differ");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool pa = a.bits[i] != 0;
    const bool pb = b.bits[i] != 0;
    inter += pa && pb ? 1 : 0;
    uni += pa || pb ? 1 : 0;
  }
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

IouRanking iou_ranking(const TargetTask& f, const std::vector<Image>& images,
                       const std::vector<ShapeScene>& scenes, const ConceptSpace& space, int patch,
                       int stride, int workers) {
  if (images.size() != scenes.size()) throw std::invalid_argument("image and scene counts differ");
  const int d = space.size();

  // ious[i][j] is the IOU for concept j in image i, negative when absent.
  std::vector<std::vector<double>> ious(images.size(), std::vector<double>(static_cast<std::size_t>(d), -1.0));
  parallel_for(images.size(), workers, [&](std::size_t i) {
    const SaliencyMap map = occlusion_saliency(f, images[i], patch, stride);
    const std::vector<BinaryMask> truth = concept_masks(scenes[i], space);
    for (const auto& shape : scenes[i].shapes) {
      const std::size_t j = static_cast<std::size_t>(shape.concept_index);
      ious[i][j] = mask_iou(map.mask, truth[j]);
    }
  });

  IouRanking out;
  out.concepts.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    auto& entry = out.concepts[static_cast<std::size_t>(j)];
    entry.concept_index = j;
    double sum = 0.0;
    for (std::size_t i = 0; i < images.size(); ++i) {
      const double v = ious[i][static_cast<std::size_t>(j)];
      if (v >= 0.0) {
        sum += v;
        ++entry.images_with_concept;
      }
    }
    if (entry.images_with_concept > 0) entry.mean_iou = sum / entry.images_with_concept;
  }

  // Concepts that never appear cannot be scored; they rank behind everything.
  std::vector<int> present, absent;
  for (int j = 0; j < d; ++j) {
    (out.concepts[static_cast<std::size_t>(j)].mean_iou ? present : absent).push_back(j);
  }
  std::sort(present.begin(), present.end(), [&](int a, int b) {
    const double va = *out.concepts[static_cast<std::size_t>(a)].mean_iou;
    const double vb = *out.concepts[static_cast<std::size_t>(b)].mean_iou;
    return va != vb ? va > vb : a < b;
  });
  out.ranking = std::move(present);
  out.ranking.insert(out.ranking.end(), absent.begin(), absent.end());
  return out;
}

std::string saliency_pgm(const SaliencyMap& map) {
  const double peak = *std::max_element(map.heat.begin(), map.heat.end());
  std::vector<double> scaled(map.heat.size(), 0.0);
  if (peak > 0.0) {
    for (std::size_t i = 0; i < map.heat.size(); ++i) scaled[i] = 255.0 * map.heat[i] / peak;
  }
  return encode_pgm(scaled, map.width, map.height);
}

}  // namespace depict
