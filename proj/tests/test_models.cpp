#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "depict/features.hpp"
#include "depict/generators.hpp"
#include "depict/logistic.hpp"
#include "depict/metrics.hpp"
#include "depict/models.hpp"
#include "depict/raster.hpp"
#include "depict/rng.hpp"

using namespace depict;

namespace {

const ConceptSpace& space() {
  static const ConceptSpace s = ConceptSpace::default_shapes();
  return s;
}

Image render_bits(const ConceptVector& v, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, {11});
  return rasterize(place_shapes(v, space(), CanvasSpec::default64(), rng), space());
}

}  // namespace

TEST_CASE("background-only image has no components") {
  const Image img(64, 64, Rgb{255, 255, 255});
  const FeatureVector fv = extract_features(img, CanvasSpec::default64());
  CHECK(fv.components.empty());
  CHECK(fv.background_count == 64 * 64);
}

TEST_CASE("disk component carries the exact pixel geometry") {
  ShapeScene s;
  s.canvas = CanvasSpec::default64();
  s.shapes = {PlacedShape{0, Circle{32, 32, 5}}};
  const FeatureVector fv = extract_features(rasterize(s, space()), s.canvas);
  REQUIRE(fv.components.size() == 1);
  const ComponentFeature& c = fv.components.front();
  CHECK(c.color_id == 0);
  CHECK(c.area == 81);       // integer points with dx^2 + dy^2 <= 25
  CHECK(c.bbox_area() == 121);
  CHECK(c.fill_ratio == doctest::Approx(81.0 / 121.0));
  CHECK(c.fill_ratio < kCircleFillThreshold);
}

TEST_CASE("large disk fill ratio approaches pi over four") {
  ShapeScene s;
  s.canvas = CanvasSpec::default64();
  s.shapes = {PlacedShape{2, Circle{32, 32, 10}}};
  const FeatureVector fv = extract_features(rasterize(s, space()), s.canvas);
  REQUIRE(fv.components.size() == 1);
  CHECK(std::abs(fv.components.front().fill_ratio - std::acos(-1.0) / 4.0) < 0.1);
}

TEST_CASE("box component fills its bounding box exactly") {
  ShapeScene s;
  s.canvas = CanvasSpec::default64();
  s.shapes = {PlacedShape{5, RectShape{4, 6, 18, 13}}};
  const FeatureVector fv = extract_features(rasterize(s, space()), s.canvas);
  REQUIRE(fv.components.size() == 1);
  CHECK(fv.components.front().color_id == 2);
  CHECK(fv.components.front().fill_ratio == 1.0);
  CHECK(fv.components.front().area == 15 * 8);
}

TEST_CASE("quantization routes off-palette pixels to the nearest color") {
  CanvasSpec canvas = CanvasSpec::default64();
  Image img(8, 8, canvas.background);
  img.set(1, 1, Rgb{250, 30, 20});  // near red
  img.set(5, 5, Rgb{20, 10, 240});  // near blue
  img.set(6, 6, Rgb{240, 240, 240});  // near background
  const FeatureVector fv = extract_features(img, canvas);
  REQUIRE(fv.components.size() == 2);
  CHECK(fv.color_histogram[0] == 1);
  CHECK(fv.color_histogram[2] == 1);
  CHECK(fv.background_count == 62);
}

TEST_CASE("numeric features encode counts and fractions") {
  const CanvasSpec canvas = CanvasSpec::default64();
  CHECK(numeric_feature_width(canvas) == 10);
  ShapeScene s;
  s.canvas = canvas;
  s.shapes = {PlacedShape{0, Circle{20, 20, 5}}, PlacedShape{3, RectShape{40, 40, 49, 49}}};
  const std::vector<double> x = numeric_features(extract_features(rasterize(s, space()), canvas), canvas);
  REQUIRE(x.size() == 10);
  CHECK(x[0] == 1.0);  // red circle-like count
  CHECK(x[1] == 0.0);  // red box-like count
  CHECK(x[2] == doctest::Approx(81.0 / 4096.0));
  CHECK(x[3] == 0.0);
  CHECK(x[4] == 1.0);  // green box-like count
  CHECK(x[5] == doctest::Approx(100.0 / 4096.0));
  CHECK(x[6] == 0.0);
  CHECK(x[7] == 0.0);
  CHECK(x[8] == 0.0);
  CHECK(x[9] == doctest::Approx(181.0 / 4096.0));
}

TEST_CASE("analytic classifier recovers the generating bits on many scenes") {
  const ConceptClassifier h = ConceptClassifier::analytic_default();
  Rng rng(21);
  for (int trial = 0; trial < 10000; ++trial) {
    const ConceptVector v = sample_concept_vector(rng, space(), 0.5);
    const ShapeScene s = place_shapes(v, space(), h.canvas, rng);
    const ConceptPrediction p = predict_concepts(h, rasterize(s, space()));
    REQUIRE(p.bits == v);
    for (std::size_t j = 0; j < p.bits.size(); ++j) {
      CHECK(p.probs[j] == (p.bits[j] ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("full noise complements every bit") {
  ConceptClassifier h = ConceptClassifier::analytic_default();
  h.noise_rate = 1.0;
  Rng rng(22);
  const ConceptVector v = {1, 0, 1, 0, 0, 1};
  const Image img = render_bits(v, 1);
  Rng noise(5);
  const ConceptPrediction p = predict_concepts(h, img, noise);
  for (std::size_t j = 0; j < v.size(); ++j) {
    CHECK(p.bits[j] == (v[j] ^ 1));
    CHECK(p.bits[j] == (p.probs[j] >= 0.5 ? 1 : 0));
  }
}

TEST_CASE("analytic classifier separates every concept on a generated dataset") {
  const ConceptClassifier h = ConceptClassifier::analytic_default();
  Rng rng(23);
  const ConceptMatrix m = sample_concept_matrix(rng, space(), 2000, 0.5);
  const auto images = generate_dataset(GeneratorSpec::oracle_default(), m, space(), 23, 0, 1);
  const auto preds = predict_dataset(h, images, 23, 0, 1);
  for (int j = 0; j < space().size(); ++j) {
    std::vector<double> scores(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) scores[i] = preds[i].probs[static_cast<std::size_t>(j)];
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      correct += preds[i].bits[static_cast<std::size_t>(j)] == m.at(static_cast<int>(i), j);
    }
    CHECK(correct == preds.size());
  }
}

TEST_CASE("prediction noise streams make worker counts irrelevant") {
  ConceptClassifier h = ConceptClassifier::analytic_default();
  h.noise_rate = 0.25;
  Rng rng(24);
  const ConceptMatrix m = sample_concept_matrix(rng, space(), 64, 0.5);
  const auto images = generate_dataset(GeneratorSpec::oracle_default(), m, space(), 24, 0, 1);
  const auto a = predict_dataset(h, images, 77, 9, 1);
  const auto b = predict_dataset(h, images, 77, 9, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].bits == b[i].bits);
    CHECK(a[i].probs == b[i].probs);
  }
}

TEST_CASE("zero iterations return the zero model") {
  const std::vector<std::vector<double>> x = {{0.0}, {1.0}};
  const std::vector<std::uint8_t> y = {0, 1};
  LogisticConfig cfg;
  cfg.iterations = 0;
  const LinearModel m = train_logistic(x, y, cfg);
  CHECK(m.weights == std::vector<double>{0.0});
  CHECK(m.bias == 0.0);
  CHECK(m.iterations_run == 0);
}

TEST_CASE("training separates a linearly separable toy set") {
  std::vector<std::vector<double>> x;
  std::vector<std::uint8_t> y;
  Rng rng(25);
  for (int i = 0; i < 200; ++i) {
    const bool pos = i % 2 == 0;
    const double cx = pos ? 2.0 : -2.0;
    x.push_back({cx + rng.normal(0.0, 0.5), rng.normal(0.0, 0.5)});
    y.push_back(pos ? 1 : 0);
  }
  const LinearModel m = train_logistic(x, y);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    correct += (m.prob(x[i]) >= 0.5 ? 1 : 0) == y[i];
  }
  CHECK(correct == x.size());
  REQUIRE(m.loss_trace.size() >= 2);
  for (std::size_t i = 1; i < m.loss_trace.size(); ++i) {
    CHECK(m.loss_trace[i] <= m.loss_trace[i - 1] + 1e-12);
  }
  CHECK(m.final_loss == m.loss_trace.back());
}

TEST_CASE("training rejects single-class labels and bad configs") {
  const std::vector<std::vector<double>> x = {{0.0}, {1.0}};
  CHECK_THROWS_AS(train_logistic(x, {1, 1}), std::invalid_argument);
  LogisticConfig bad;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(train_logistic(x, {0, 1}, bad), std::invalid_argument);
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(26);
  const int n = 30, dim = 4;
  std::vector<std::vector<double>> x(n, std::vector<double>(dim));
  std::vector<std::uint8_t> y(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < dim; ++k) x[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = rng.normal(0, 1);
    y[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
  }
  const double l2 = 0.05;
  const double eps = 1e-6;
  for (int point = 0; point < 20; ++point) {
    std::vector<double> w(dim);
    for (auto& v : w) v = rng.normal(0, 1);
    double bias = rng.normal(0, 1);
    std::vector<double> grad;
    double grad_b = 0.0;
    logistic_gradient(x, y, w, bias, l2, grad, grad_b);
    double max_rel = 0.0;
    for (int k = 0; k <= dim; ++k) {
      std::vector<double> wp = w, wm = w;
      double bp = bias, bm = bias;
      if (k < dim) {
        wp[static_cast<std::size_t>(k)] += eps;
        wm[static_cast<std::size_t>(k)] -= eps;
      } else {
        bp += eps;
        bm -= eps;
      }
      const double fd = (logistic_loss(x, y, wp, bp, l2) - logistic_loss(x, y, wm, bm, l2)) / (2 * eps);
      const double an = k < dim ? grad[static_cast<std::size_t>(k)] : grad_b;
      const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-8});
      max_rel = std::max(max_rel, rel);
    }
    CHECK(max_rel <= 1e-4);
  }
}

TEST_CASE("trained concept classifier matches the analytic one on clean renders") {
  Rng rng(27);
  const ConceptMatrix train_m = sample_concept_matrix(rng, space(), 400, 0.5);
  const auto train_images = generate_dataset(GeneratorSpec::oracle_default(), train_m, space(), 27, 0, 1);
  const ConceptClassifier h =
      train_concept_classifier(train_images, train_m, space(), CanvasSpec::default64(), LogisticConfig{});
  h.validate();

  const ConceptMatrix test_m = sample_concept_matrix(rng, space(), 300, 0.5);
  const auto test_images = generate_dataset(GeneratorSpec::oracle_default(), test_m, space(), 28, 1, 1);
  std::size_t correct = 0, total = 0;
  for (std::size_t i = 0; i < test_images.size(); ++i) {
    const ConceptPrediction p = predict_concepts(h, test_images[i]);
    for (int j = 0; j < space().size(); ++j) {
      correct += p.bits[static_cast<std::size_t>(j)] == test_m.at(static_cast<int>(i), j);
      ++total;
    }
  }
  CHECK(static_cast<double>(correct) / static_cast<double>(total) >= 0.99);
}

TEST_CASE("classifier json round-trips parameters bit-exactly") {
  Rng rng(29);
  const ConceptMatrix m = sample_concept_matrix(rng, space(), 120, 0.5);
  const auto images = generate_dataset(GeneratorSpec::oracle_default(), m, space(), 29, 0, 1);
  LogisticConfig cfg;
  cfg.iterations = 60;
  ConceptClassifier h = train_concept_classifier(images, m, space(), CanvasSpec::default64(), cfg);
  h.noise_rate = 0.125;
  const ConceptClassifier back = classifier_from_json(classifier_to_json(h));
  CHECK(back.kind == h.kind);
  CHECK(back.noise_rate == h.noise_rate);
  CHECK(back.space.names == h.space.names);
  CHECK(back.canvas == h.canvas);
  REQUIRE(back.models.size() == h.models.size());
  for (std::size_t j = 0; j < h.models.size(); ++j) {
    CHECK(back.models[j].weights == h.models[j].weights);
    CHECK(back.models[j].bias == h.models[j].bias);
  }

  const ConceptClassifier analytic = ConceptClassifier::analytic_default();
  const ConceptClassifier analytic_back = classifier_from_json(classifier_to_json(analytic));
  CHECK(analytic_back.kind == ClassifierKind::analytic);
  CHECK(analytic_back.canvas == analytic.canvas);
}

TEST_CASE("single-weight task labels follow the active bit") {
  ConceptMatrix m(10, 6);
  for (int r = 0; r < 5; ++r) m.set(r, 1, 1);
  Rng rng(30);
  for (int r = 0; r < 10; ++r) {
    for (int c = 2; c < 6; ++c) m.set(r, c, rng.bernoulli(0.5) ? 1 : 0);
  }
  const std::vector<double> w = {0, 1, 0, 0, 0, 0};
  const TargetTask t = make_task_with_weights(w, ConceptClassifier::analytic_default(), m);
  CHECK(t.threshold == 0.5);
  for (int r = 0; r < 10; ++r) {
    CHECK(t.labels[static_cast<std::size_t>(r)] == m.at(r, 1));
  }
}

TEST_CASE("degenerate construction sets are rejected") {
  ConceptMatrix constant(8, 6);
  for (int r = 0; r < 8; ++r) constant.set(r, 0, 1);
  const std::vector<double> w = {1, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(make_task_with_weights(w, ConceptClassifier::analytic_default(), constant),
                  std::runtime_error);
  CHECK_THROWS_AS(make_task_with_weights(w, ConceptClassifier::analytic_default(), ConceptMatrix(0, 6)),
                  std::invalid_argument);
}

TEST_CASE("sampled task weights are uniform on the unit interval") {
  Rng rng(31);
  const ConceptMatrix m = sample_concept_matrix(rng, space(), 200, 0.5);
  std::vector<double> mean(6, 0.0);
  const int tasks = 100;
  for (int t = 0; t < tasks; ++t) {
    Rng task_rng = Rng::derive(31, {static_cast<std::uint64_t>(t)});
    const TargetTask task = make_task(task_rng, ConceptClassifier::analytic_default(), m);
    bool any_pos = false, any_neg = false;
    for (const auto y : task.labels) (y ? any_pos : any_neg) = true;
    CHECK(any_pos);
    CHECK(any_neg);
    for (int j = 0; j < 6; ++j) mean[static_cast<std::size_t>(j)] += task.weights[static_cast<std::size_t>(j)];
  }
  for (const double m_j : mean) {
    CHECK(std::abs(m_j / tasks - 0.5) < 0.1);
  }
}

TEST_CASE("zero weights score zero everywhere") {
  TargetTask t;
  t.weights.assign(6, 0.0);
  t.bottleneck = ConceptClassifier::analytic_default();
  Rng rng(32);
  for (int i = 0; i < 20; ++i) {
    const ConceptVector v = sample_concept_vector(rng, space(), 0.5);
    CHECK(target_score(t, render_bits(v, static_cast<std::uint64_t>(i))) == 0.0);
  }
}

TEST_CASE("perfect bottleneck reproduces the weighted bit sum") {
  Rng rng(33);
  TargetTask t;
  t.weights = {0.9, 0.1, 0.4, 0.7, 0.2, 0.5};
  t.bottleneck = ConceptClassifier::analytic_default();
  for (int i = 0; i < 50; ++i) {
    const ConceptVector v = sample_concept_vector(rng, space(), 0.5);
    double expected = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) expected += t.weights[j] * v[j];
    CHECK(target_score(t, render_bits(v, 100 + static_cast<std::uint64_t>(i))) == doctest::Approx(expected));
  }
}

TEST_CASE("score is linear in single concept flips") {
  TargetTask t;
  t.weights = {0.31, 0.77, 0.05, 0.6, 0.48, 0.9};
  t.bottleneck = ConceptClassifier::analytic_default();
  Rng rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    ConceptPrediction base;
    base.bits = sample_concept_vector(rng, space(), 0.5);
    base.probs.assign(6, 0.0);
    for (std::size_t j = 0; j < 6; ++j) base.probs[j] = base.bits[j];
    const int j = static_cast<int>(rng.uniform_below(6));
    if (base.bits[static_cast<std::size_t>(j)]) continue;
    ConceptPrediction flipped = base;
    flipped.bits[static_cast<std::size_t>(j)] = 1;
    flipped.probs[static_cast<std::size_t>(j)] = 1.0;
    const double delta = task_score_from_prediction(t, flipped) - task_score_from_prediction(t, base);
    CHECK(delta == doctest::Approx(t.weights[static_cast<std::size_t>(j)]).epsilon(1e-12));
  }
}

TEST_CASE("noisy bottleneck scores strictly below the noiseless task") {
  Rng rng(35);
  const ConceptMatrix m = sample_concept_matrix(rng, space(), 2000, 0.5);
  const auto images = generate_dataset(GeneratorSpec::oracle_default(), m, space(), 35, 0, 1);
  Rng task_rng(36);
  const TargetTask clean = make_task(task_rng, ConceptClassifier::analytic_default(), m);

  TargetTask noisy = clean;
  noisy.bottleneck.noise_rate = 0.1;

  const auto clean_preds = predict_dataset(clean.bottleneck, images, 37, 0, 1);
  const auto noisy_preds = predict_dataset(noisy.bottleneck, images, 37, 1, 1);
  std::vector<double> clean_scores(images.size()), noisy_scores(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    clean_scores[i] = task_score_from_prediction(clean, clean_preds[i]);
    noisy_scores[i] = task_score_from_prediction(noisy, noisy_preds[i]);
  }
  const double clean_auroc = depict::auroc(clean_scores, clean.labels).value;
  const double noisy_auroc = depict::auroc(noisy_scores, clean.labels).value;
  CHECK(clean_auroc == 1.0);
  CHECK(noisy_auroc < clean_auroc);
}

TEST_CASE("task json round-trips parameters bit-exactly") {
  Rng rng(38);
  const ConceptMatrix m = sample_concept_matrix(rng, space(), 64, 0.5);
  Rng task_rng(39);
  const TargetTask t = make_task(task_rng, ConceptClassifier::analytic_default(), m);
  const TargetTask back = task_from_json(task_to_json(t));
  CHECK(back.weights == t.weights);
  CHECK(back.threshold == t.threshold);
  CHECK(back.labels == t.labels);
  CHECK(back.bottleneck.kind == t.bottleneck.kind);
  CHECK(back.bottleneck.canvas == t.bottleneck.canvas);
}
