#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depict/concept_space.hpp"
#include "depict/features.hpp"
#include "depict/logistic.hpp"
#include "depict/raster.hpp"
#include "depict/rng.hpp"
#include "depict/scene.hpp"
#include "depict/serde.hpp"

namespace depict {

enum class ClassifierKind { analytic, trained };

// Per-concept presence detector h. The analytic kind decides from component
// color and fill ratio; the trained kind scores numeric features with one
// logistic model per concept. noise_rate flips each predicted bit
// independently when a noise stream is supplied.
struct ConceptClassifier {
  ClassifierKind kind = ClassifierKind::analytic;
  double noise_rate = 0.0;
  ConceptSpace space;
  CanvasSpec canvas;
  std::vector<LinearModel> models;

  static ConceptClassifier analytic_default();
  void validate() const;
};

struct ConceptPrediction {
  std::vector<double> probs;  // in [0,1]
  ConceptVector bits;         // bits[j] == (probs[j] >= 0.5)
};

ConceptPrediction predict_concepts(const ConceptClassifier& h, const Image& img);
ConceptPrediction predict_concepts(const ConceptClassifier& h, const Image& img, Rng& noise_rng);

// Per-row noise streams derive from (seed, salt, row), so results do not
// depend on the worker count.
std::vector<ConceptPrediction> predict_dataset(const ConceptClassifier& h, const std::vector<Image>& images,
                                               std::uint64_t seed, std::uint64_t salt, int workers);

ConceptClassifier train_concept_classifier(const std::vector<Image>& images, const ConceptMatrix& truth,
                                           const ConceptSpace& space, const CanvasSpec& canvas,
                                           const LogisticConfig& cfg = {});

// Concept-bottleneck target: score = w . c_hat, label = score > threshold,
// threshold fixed at the median score of the construction set.
struct TargetTask {
  std::vector<double> weights;
  double threshold = 0.0;
  std::vector<std::uint8_t> labels;  // over the construction set
  ConceptClassifier bottleneck;
};

TargetTask make_task(Rng& rng, const ConceptClassifier& bottleneck, const ConceptMatrix& construction);
TargetTask make_task_with_weights(const std::vector<double>& weights, const ConceptClassifier& bottleneck,
                                  const ConceptMatrix& construction);

// Hard bits under an analytic bottleneck, probabilities under a trained one.
double task_score_from_prediction(const TargetTask& t, const ConceptPrediction& p);
double target_score(const TargetTask& t, const Image& img);
bool target_label(const TargetTask& t, const Image& img);

Json classifier_to_json(const ConceptClassifier& h);
ConceptClassifier classifier_from_json(const Json& j);
Json task_to_json(const TargetTask& t);
TargetTask task_from_json(const Json& j);

}  // namespace depict
