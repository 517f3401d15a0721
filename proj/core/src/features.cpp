#include "depict/features.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace depict {
namespace {

struct Scratch {
  std::vector<std::int16_t> color;    // -1 background, else palette index
  std::vector<std::uint8_t> visited;
  std::vector<int> stack;

  void reserve(std::size_t n) {
    if (color.size() < n) {
      color.resize(n);
      visited.resize(n);
    }
  }
};

thread_local Scratch scratch_tls;

long sq_dist(Rgb a, Rgb b) {
  const long dr = static_cast<long>(a.r) - b.r;
  const long dg = static_cast<long>(a.g) - b.g;
  const long db = static_cast<long>(a.b) - b.b;
  return dr * dr + dg * dg + db * db;
}

}  // namespace

FeatureVector extract_features(const Image& img, const CanvasSpec& canvas) {
  if (canvas.palette.empty()) throw std::invalid_argument("canvas palette is empty");
  const int w = img.width;
  const int h = img.height;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);

  FeatureVector fv;
  fv.width = w;
  fv.height = h;
  fv.color_histogram.assign(canvas.palette.size(), 0);

  Scratch& s = scratch_tls;
  s.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    const Rgb px{img.pixels[3 * i], img.pixels[3 * i + 1], img.pixels[3 * i + 2]};
    std::int16_t best = -1;
    if (px == canvas.background) {
      // exact match fast path
    } else {
      bool exact = false;
      for (std::size_t k = 0; k < canvas.palette.size(); ++k) {
        if (px == canvas.palette[k].second) {
          best = static_cast<std::int16_t>(k);
          exact = true;
          break;
        }
      }
      if (!exact) {
        long best_d = sq_dist(px, canvas.background);
        for (std::size_t k = 0; k < canvas.palette.size(); ++k) {
          const long d = sq_dist(px, canvas.palette[k].second);
          if (d < best_d) {
            best_d = d;
            best = static_cast<std::int16_t>(k);
          }
        }
      }
    }
    s.color[i] = best;
    s.visited[i] = 0;
    if (best >= 0) {
      ++fv.color_histogram[static_cast<std::size_t>(best)];
    } else {
      ++fv.background_count;
    }
  }

  // 4-connected flood fill over same-color pixels, in scan order.
  for (std::size_t start = 0; start < n; ++start) {
    if (s.color[start] < 0 || s.visited[start]) continue;
    const std::int16_t color = s.color[start];
    ComponentFeature comp;
    comp.color_id = color;
    comp.min_x = comp.max_x = static_cast<int>(start) % w;
    comp.min_y = comp.max_y = static_cast<int>(start) / w;
    s.stack.clear();
    s.stack.push_back(static_cast<int>(start));
    s.visited[start] = 1;
    while (!s.stack.empty()) {
      const int idx = s.stack.back();
      s.stack.pop_back();
      const int x = idx % w;
      const int y = idx / w;
      ++comp.area;
      comp.min_x = std::min(comp.min_x, x);
      comp.max_x = std::max(comp.max_x, x);
      comp.min_y = std::min(comp.min_y, y);
      comp.max_y = std::max(comp.max_y, y);
      const int neighbors[4] = {x > 0 ? idx - 1 : -1, x + 1 < w ? idx + 1 : -1, y > 0 ? idx - w : -1,
                                y + 1 < h ? idx + w : -1};
      for (const int ni : neighbors) {
        if (ni >= 0 && !s.visited[static_cast<std::size_t>(ni)] &&
            s.color[static_cast<std::size_t>(ni)] == color) {
          s.visited[static_cast<std::size_t>(ni)] = 1;
          s.stack.push_back(ni);
        }
      }
    }
    comp.fill_ratio = static_cast<double>(comp.area) / static_cast<double>(comp.bbox_area());
    fv.components.push_back(comp);
  }
  return fv;
}

int numeric_feature_width(const CanvasSpec& canvas) {
  return 3 * static_cast<int>(canvas.palette.size()) + 1;
}

std::vector<double> numeric_features(const FeatureVector& fv, const CanvasSpec& canvas) {
  const double total = static_cast<double>(fv.width) * static_cast<double>(fv.height);
  std::vector<double> out(static_cast<std::size_t>(numeric_feature_width(canvas)), 0.0);
  for (const auto& comp : fv.components) {
    const std::size_t base = 3 * static_cast<std::size_t>(comp.color_id);
    if (comp.fill_ratio < kCircleFillThreshold) {
      out[base] += 1.0;
    } else {
      out[base + 1] += 1.0;
    }
  }
  long painted = 0;
  for (std::size_t k = 0; k < canvas.palette.size(); ++k) {
    out[3 * k + 2] = static_cast<double>(fv.color_histogram[k]) / total;
    painted += fv.color_histogram[k];
  }
  out.back() = static_cast<double>(painted) / total;
  return out;
}

}  // namespace depict
