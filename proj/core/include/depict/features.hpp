#pragma once

#include <vector>

#include "depict/raster.hpp"
#include "depict/scene.hpp"

namespace depict {

struct ComponentFeature {
  int color_id = -1;  // index into the canvas palette
  int area = 0;
  int min_x = 0;
  int min_y = 0;
  int max_x = 0;
  int max_y = 0;
  double fill_ratio = 0.0;  // area / bounding-box area, in (0,1]

  int bbox_area() const { return (max_x - min_x + 1) * (max_y - min_y + 1); }
  bool operator==(const ComponentFeature&) const = default;
};

struct FeatureVector {
  int width = 0;
  int height = 0;
  std::vector<ComponentFeature> components;  // scan order
  std::vector<long> color_histogram;         // quantized pixel count per palette color
  long background_count = 0;
};

// Quantizes every pixel to the nearest of {background} + palette, then labels
// 4-connected same-color components.
FeatureVector extract_features(const Image& img, const CanvasSpec& canvas);

// Shape discrimination boundary on fill ratio: disks sit near pi/4, boxes at 1.
inline constexpr double kCircleFillThreshold = 0.9;

// Fixed-width numeric encoding: per palette color a circle-like component
// count, a box-like component count, and an area fraction, plus the global
// non-background fraction.
std::vector<double> numeric_features(const FeatureVector& fv, const CanvasSpec& canvas);
int numeric_feature_width(const CanvasSpec& canvas);

}  // namespace depict
