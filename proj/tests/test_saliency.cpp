#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "depict/models.hpp"
#include "depict/raster.hpp"
#include "depict/rng.hpp"
#include "depict/saliency.hpp"
#include "depict/scene.hpp"

using namespace depict;

namespace {

const ConceptSpace& space() {
  static const ConceptSpace s = ConceptSpace::default_shapes();
  return s;
}

TargetTask unit_task(int concept_index) {
  TargetTask t;
  t.weights.assign(6, 0.0);
  t.weights[static_cast<std::size_t>(concept_index)] = 1.0;
  t.bottleneck = ConceptClassifier::analytic_default();
  return t;
}

BinaryMask box_mask(int w, int h, int x1, int y1, int x2, int y2) {
  BinaryMask m(w, h);
  for (int y = y1; y <= y2; ++y) {
    for (int x = x1; x <= x2; ++x) m.set(x, y, true);
  }
  return m;
}

}  // namespace

TEST_CASE("iou closed forms") {
  const BinaryMask a = box_mask(16, 16, 2, 2, 5, 3);   // 4x2 box
  const BinaryMask b = box_mask(16, 16, 4, 2, 7, 3);   // 4x2 box, 2x2 overlap
  CHECK(mask_iou(a, a) == 1.0);
  CHECK(mask_iou(a, b) == doctest::Approx(1.0 / 3.0));
  const BinaryMask far = box_mask(16, 16, 10, 10, 12, 12);
  CHECK(mask_iou(a, far) == 0.0);
  const BinaryMask empty(16, 16);
  CHECK(mask_iou(empty, empty) == 0.0);
  CHECK(mask_iou(a, empty) == 0.0);
  CHECK_THROWS_AS(mask_iou(a, BinaryMask(8, 8)), std::invalid_argument);
}

TEST_CASE("blank canvases carry no heat") {
  const Image blank(64, 64, CanvasSpec::default64().background);
  const SaliencyMap map = occlusion_saliency(unit_task(1), blank);
  CHECK(map.mask.count() == 0);
  for (const double h : map.heat) CHECK(h == 0.0);
}

TEST_CASE("a weightless task sees nothing") {
  TargetTask t;
  t.weights.assign(6, 0.0);
  t.bottleneck = ConceptClassifier::analytic_default();
  Rng rng(101);
  const ConceptVector v = {1, 1, 0, 0, 1, 0};
  const ShapeScene s = place_shapes(v, space(), CanvasSpec::default64(), rng);
  const SaliencyMap map = occlusion_saliency(t, rasterize(s, space()));
  CHECK(map.mask.count() == 0);
}

TEST_CASE("heat stays within one patch of the shapes") {
  Rng rng(102);
  const ConceptVector v = {0, 1, 0, 1, 0, 0};
  const ShapeScene s = place_shapes(v, space(), CanvasSpec::default64(), rng);
  const Image img = rasterize(s, space());
  const int patch = 8;
  const SaliencyMap map = occlusion_saliency(unit_task(1), img, patch, 4);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (map.heat_at(x, y) == 0.0) continue;
      // Some patch covering (x, y) must also touch a non-background pixel.
      bool near_shape = false;
      for (int dy = -(patch - 1); dy <= patch - 1 && !near_shape; ++dy) {
        for (int dx = -(patch - 1); dx <= patch - 1 && !near_shape; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= img.width || ny >= img.height) continue;
          if (!(img.at(nx, ny) == CanvasSpec::default64().background)) near_shape = true;
        }
      }
      CHECK(near_shape);
    }
  }
}

TEST_CASE("erasing an aligned box lights its patches") {
  ShapeScene s;
  s.canvas = CanvasSpec::default64();
  s.shapes = {PlacedShape{1, RectShape{16, 16, 23, 23}}};  // exactly one 8x8 patch
  const Image img = rasterize(s, space());
  const SaliencyMap map = occlusion_saliency(unit_task(1), img);
  // The aligned patch wipes the box out entirely, so its pixels are hot.
  CHECK(map.heat_at(20, 20) == 1.0);
  CHECK(map.mask.at(20, 20));
  // Far corner stays cold.
  CHECK(map.heat_at(60, 60) == 0.0);
  CHECK(mask_iou(map.mask, concept_masks(s, space())[1]) > 0.0);
}

TEST_CASE("single-rectangle scenes meet the calibrated agreement bound") {
  const TargetTask t = unit_task(1);
  for (int i = 0; i < 100; ++i) {
    Rng rng = Rng::derive(4242, {static_cast<std::uint64_t>(i)});
    ConceptVector v(6, 0);
    v[1] = 1;
    const ShapeScene s = place_shapes(v, space(), CanvasSpec::default64(), rng);
    const SaliencyMap map = occlusion_saliency(t, rasterize(s, space()));
    CHECK(mask_iou(map.mask, concept_masks(s, space())[1]) >= 0.15);
  }
}

TEST_CASE("partial occlusion never flips a lone disk") {
  // A patch-sized bite out of a disk leaves a same-color blob that still
  // reads as a circle, so the analytic score never moves: the occlusion
  // baseline is structurally blind to circle concepts.
  const TargetTask t = unit_task(0);
  for (int i = 0; i < 50; ++i) {
    Rng rng = Rng::derive(5252, {static_cast<std::uint64_t>(i)});
    ConceptVector v(6, 0);
    v[0] = 1;
    const ShapeScene s = place_shapes(v, space(), CanvasSpec::default64(), rng);
    const SaliencyMap map = occlusion_saliency(t, rasterize(s, space()));
    CHECK(map.mask.count() == 0);
  }
}

TEST_CASE("ranking averages per concept and parks absent concepts last") {
  std::vector<Image> images;
  std::vector<ShapeScene> scenes;
  Rng rng(103);
  for (int i = 0; i < 6; ++i) {
    ConceptVector v(6, 0);
    v[1] = 1;
    if (i % 2 == 0) v[3] = 1;
    ShapeScene s = place_shapes(v, space(), CanvasSpec::default64(), rng);
    images.push_back(rasterize(s, space()));
    scenes.push_back(std::move(s));
  }
  TargetTask t;
  t.weights = {0.0, 1.0, 0.0, 0.8, 0.0, 0.0};
  t.bottleneck = ConceptClassifier::analytic_default();
  const IouRanking r = iou_ranking(t, images, scenes, space(), 8, 4, 2);
  REQUIRE(r.concepts.size() == 6);
  CHECK(r.concepts[1].images_with_concept == 6);
  CHECK(r.concepts[3].images_with_concept == 3);
  REQUIRE(r.concepts[1].mean_iou.has_value());
  REQUIRE(r.concepts[3].mean_iou.has_value());
  CHECK(r.concepts[1].mean_iou.value() > 0.0);
  for (const int j : {0, 2, 4, 5}) {
    CHECK(r.concepts[static_cast<std::size_t>(j)].images_with_concept == 0);
    CHECK_FALSE(r.concepts[static_cast<std::size_t>(j)].mean_iou.has_value());
  }
  REQUIRE(r.ranking.size() == 6);
  // Present concepts first, absent ones behind them in index order.
  CHECK(((r.ranking[0] == 1 && r.ranking[1] == 3) || (r.ranking[0] == 3 && r.ranking[1] == 1)));
  CHECK(r.ranking[2] == 0);
  CHECK(r.ranking[3] == 2);
  CHECK(r.ranking[4] == 4);
  CHECK(r.ranking[5] == 5);
}

TEST_CASE("ranking validates its inputs") {
  const TargetTask t = unit_task(1);
  std::vector<Image> images(2, Image(64, 64, CanvasSpec::default64().background));
  std::vector<ShapeScene> scenes(1);
  CHECK_THROWS_AS(iou_ranking(t, images, scenes, space()), std::invalid_argument);
  CHECK_THROWS_AS(occlusion_saliency(t, images[0], 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(occlusion_saliency(t, images[0], 8, 0), std::invalid_argument);
}

TEST_CASE("worker counts do not change the ranking") {
  std::vector<Image> images;
  std::vector<ShapeScene> scenes;
  Rng rng(104);
  for (int i = 0; i < 4; ++i) {
    const ConceptVector v = sample_concept_vector(rng, space(), 0.7);
    ShapeScene s = place_shapes(v, space(), CanvasSpec::default64(), rng);
    images.push_back(rasterize(s, space()));
    scenes.push_back(std::move(s));
  }
  Rng task_rng(105);
  TargetTask t;
  t.weights.resize(6);
  for (auto& w : t.weights) w = task_rng.next_double();
  t.bottleneck = ConceptClassifier::analytic_default();
  const IouRanking a = iou_ranking(t, images, scenes, space(), 8, 4, 1);
  const IouRanking b = iou_ranking(t, images, scenes, space(), 8, 4, 4);
  CHECK(a.ranking == b.ranking);
  for (std::size_t j = 0; j < 6; ++j) {
    CHECK(a.concepts[j].mean_iou == b.concepts[j].mean_iou);
  }
}

TEST_CASE("heat maps serialize to well-formed pgm") {
  ShapeScene s;
  s.canvas = CanvasSpec::default64();
  s.shapes = {PlacedShape{1, RectShape{16, 16, 23, 23}}};
  const SaliencyMap map = occlusion_saliency(unit_task(1), rasterize(s, space()));
  const std::string pgm = saliency_pgm(map);
  CHECK(pgm.substr(0, 2) == "P5");
  CHECK(pgm.find("64 64") != std::string::npos);
  CHECK(pgm.size() > static_cast<std::size_t>(64 * 64));
}
