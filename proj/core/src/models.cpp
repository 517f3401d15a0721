#include "depict/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "depict/parallel.hpp"

namespace depict {
namespace {

constexpr std::uint64_t kNoiseStream = 0x707264; // ascii "prd"

void apply_noise(ConceptPrediction& p, double rate, Rng& rng) {
  if (rate <= 0.0) return;
  for (std::size_t j = 0; j < p.bits.size(); ++j) {
    if (!rng.bernoulli(rate)) continue;
    p.bits[j] ^= 1;
    p.probs[j] = 1.0 - p.probs[j];
    if (p.bits[j] && p.probs[j] < 0.5) p.probs[j] = 0.5;
    if (!p.bits[j] && p.probs[j] >= 0.5) p.probs[j] = std::nextafter(0.5, 0.0);
  }
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

ConceptClassifier ConceptClassifier::analytic_default() {
  ConceptClassifier h;
  h.kind = ClassifierKind::analytic;
  h.space = ConceptSpace::default_shapes();
  h.canvas = CanvasSpec::default64();
  return h;
}

void ConceptClassifier::validate() const {
  space.validate();
  if (noise_rate < 0.0 || noise_rate > 1.0) throw std::invalid_argument("noise_rate outside [0,1]");
  if (kind == ClassifierKind::trained) {
    if (static_cast<int>(models.size()) != space.size()) {
      throw std::invalid_argument("trained classifier needs one model per concept");
    }
    const std::size_t width = static_cast<std::size_t>(numeric_feature_width(canvas));
    for (const auto& m : models) {
      if (m.weights.size() != width) throw std::invalid_argument("model width does not match the feature encoding");
      for (const double w : m.weights) {
        if (!std::isfinite(w)) throw std::invalid_argument("model weights must be finite");
      }
      if (!std::isfinite(m.bias)) throw std::invalid_argument("model bias must be finite");
    }
  }
  for (int j = 0; j < space.size(); ++j) {
    if (canvas.find_color(space.color_of(j)) == nullptr) {
      throw std::invalid_argument("palette lacks color for concept " + space.names[static_cast<std::size_t>(j)]);
    }
  }
}

ConceptPrediction predict_concepts(const ConceptClassifier& h, const Image& img) {
  const FeatureVector fv = extract_features(img, h.canvas);
  ConceptPrediction p;
  p.probs.assign(static_cast<std::size_t>(h.space.size()), 0.0);
  p.bits.assign(static_cast<std::size_t>(h.space.size()), 0);
  if (h.kind == ClassifierKind::analytic) {
    for (int j = 0; j < h.space.size(); ++j) {
      const std::string color = h.space.color_of(j);
      const bool wants_circle = h.space.kind_of(j) == "circle";
      int palette_id = -1;
      for (std::size_t k = 0; k < h.canvas.palette.size(); ++k) {
        if (h.canvas.palette[k].first == color) palette_id = static_cast<int>(k);
      }
      bool present = false;
      for (const auto& comp : fv.components) {
        if (comp.color_id != palette_id) continue;
        const bool circle_like = comp.fill_ratio < kCircleFillThreshold;
        if (circle_like == wants_circle) {
          present = true;
          break;
        }
      }
      p.probs[static_cast<std::size_t>(j)] = present ? 1.0 : 0.0;
      p.bits[static_cast<std::size_t>(j)] = present ? 1 : 0;
    }
    return p;
  }
  const std::vector<double> x = numeric_features(fv, h.canvas);
  for (int j = 0; j < h.space.size(); ++j) {
    const double prob = h.models[static_cast<std::size_t>(j)].prob(x);
    p.probs[static_cast<std::size_t>(j)] = prob;
    p.bits[static_cast<std::size_t>(j)] = prob >= 0.5 ? 1 : 0;
  }
  return p;
}

ConceptPrediction predict_concepts(const ConceptClassifier& h, const Image& img, Rng& noise_rng) {
  ConceptPrediction p = predict_concepts(h, img);
  apply_noise(p, h.noise_rate, noise_rng);
  return p;
}

std::vector<ConceptPrediction> predict_dataset(const ConceptClassifier& h, const std::vector<Image>& images,
                                               std::uint64_t seed, std::uint64_t salt, int workers) {
  std::vector<ConceptPrediction> out(images.size());
  parallel_for(images.size(), workers, [&](std::size_t i) {
    if (h.noise_rate > 0.0) {
      Rng rng = Rng::derive(seed, {kNoiseStream, salt, static_cast<std::uint64_t>(i)});
      out[i] = predict_concepts(h, images[i], rng);
    } else {
      out[i] = predict_concepts(h, images[i]);
    }
  });
  return out;
}

ConceptClassifier train_concept_classifier(const std::vector<Image>& images, const ConceptMatrix& truth,
                                           const ConceptSpace& space, const CanvasSpec& canvas,
                                           const LogisticConfig& cfg) {
  if (static_cast<int>(images.size()) != truth.rows()) {
    throw std::invalid_argument("image count does not match the truth matrix");
  }
  if (truth.cols() != space.size()) throw std::invalid_argument("truth matrix width does not match the space");
  std::vector<std::vector<double>> x;
  x.reserve(images.size());
  for (const auto& img : images) x.push_back(numeric_features(extract_features(img, canvas), canvas));

  ConceptClassifier h;
  h.kind = ClassifierKind::trained;
  h.space = space;
  h.canvas = canvas;
  h.models.reserve(static_cast<std::size_t>(space.size()));
  for (int j = 0; j < space.size(); ++j) {
    h.models.push_back(train_logistic(x, truth.column(j), cfg));
  }
  return h;
}

TargetTask make_task_with_weights(const std::vector<double>& weights, const ConceptClassifier& bottleneck,
                                  const ConceptMatrix& construction) {
  if (construction.rows() == 0) throw std::invalid_argument("construction set is empty");
  if (static_cast<int>(weights.size()) != construction.cols()) {
    throw std::invalid_argument("weight width does not match the construction set");
  }
  TargetTask t;
  t.weights = weights;
  t.bottleneck = bottleneck;
  std::vector<double> scores(static_cast<std::size_t>(construction.rows()), 0.0);
  for (int i = 0; i < construction.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < construction.cols(); ++j) {
      s += weights[static_cast<std::size_t>(j)] * construction.at(i, j);
    }
    scores[static_cast<std::size_t>(i)] = s;
  }
  t.threshold = median(scores);
  t.labels.resize(scores.size());
  bool any_pos = false, any_neg = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pos = scores[i] > t.threshold;
    t.labels[i] = pos ? 1 : 0;
    (pos ? any_pos : any_neg) = true;
  }
  if (!any_pos || !any_neg) {
    throw std::runtime_error("median split produced a single label class");
  }
  return t;
}

TargetTask make_task(Rng& rng, const ConceptClassifier& bottleneck, const ConceptMatrix& construction) {
  std::vector<double> w(static_cast<std::size_t>(construction.cols()));
  for (auto& v : w) v = rng.next_double();
  return make_task_with_weights(w, bottleneck, construction);
}

double task_score_from_prediction(const TargetTask& t, const ConceptPrediction& p) {
  if (p.probs.size() != t.weights.size()) throw std::invalid_argument("prediction width does not match the task");
  double s = 0.0;
  if (t.bottleneck.kind == ClassifierKind::analytic) {
    for (std::size_t j = 0; j < t.weights.size(); ++j) s += t.weights[j] * p.bits[j];
  } else {
    for (std::size_t j = 0; j < t.weights.size(); ++j) s += t.weights[j] * p.probs[j];
  }
  return s;
}

double target_score(const TargetTask& t, const Image& img) {
  return task_score_from_prediction(t, predict_concepts(t.bottleneck, img));
}

bool target_label(const TargetTask& t, const Image& img) { return target_score(t, img) > t.threshold; }

Json classifier_to_json(const ConceptClassifier& h) {
  Json j;
  j["kind"] = h.kind == ClassifierKind::analytic ? "analytic" : "trained";
  j["noise_rate"] = h.noise_rate;
  j["concepts"] = h.space.names;
  j["canvas"] = canvas_to_json(h.canvas);
  if (h.kind == ClassifierKind::trained) {
    Json models = Json::array();
    for (const auto& m : h.models) {
      models.push_back(Json{{"weights", m.weights}, {"bias", m.bias}});
    }
    j["models"] = models;
  }
  return j;
}

ConceptClassifier classifier_from_json(const Json& j) {
  ConceptClassifier h;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "analytic") {
    h.kind = ClassifierKind::analytic;
  } else if (kind == "trained") {
    h.kind = ClassifierKind::trained;
  } else {
    throw std::invalid_argument("unknown classifier kind: " + kind);
  }
  h.noise_rate = j.at("noise_rate").get<double>();
  h.space.names = j.at("concepts").get<std::vector<std::string>>();
  h.canvas = canvas_from_json(j.at("canvas"));
  if (h.kind == ClassifierKind::trained) {
    for (const Json& entry : j.at("models")) {
      LinearModel m;
      m.weights = entry.at("weights").get<std::vector<double>>();
      m.bias = entry.at("bias").get<double>();
      h.models.push_back(std::move(m));
    }
  }
  h.validate();
  return h;
}

Json task_to_json(const TargetTask& t) {
  Json j;
  j["weights"] = t.weights;
  j["threshold"] = t.threshold;
  j["labels"] = t.labels;
  j["bottleneck"] = classifier_to_json(t.bottleneck);
  return j;
}

TargetTask task_from_json(const Json& j) {
  TargetTask t;
  t.weights = j.at("weights").get<std::vector<double>>();
  t.threshold = j.at("threshold").get<double>();
  t.labels = j.at("labels").get<std::vector<std::uint8_t>>();
  t.bottleneck = classifier_from_json(j.at("bottleneck"));
  return t;
}

}  // namespace depict
