#include "depict/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "depict/pnm.hpp"
#include "depict/raster.hpp"

namespace depict {
namespace {

// Experiment-scope stream salts and dataset ids. The dataset ids sit far
// above anything the engine derives from the same task seed.
constexpr std::uint64_t kTaskSalt = 0x7a51;
constexpr std::uint64_t kMatrixSalt = 0x3a7;
constexpr std::uint64_t kWeightSalt = 0x317;
constexpr std::uint64_t kBaselineSalt = 0xba5e;
constexpr std::uint64_t kRealImages = (std::uint64_t{1} << 50) + 1;
constexpr std::uint64_t kGeneratedImages = (std::uint64_t{1} << 50) + 2;

std::optional<double> try_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  try {
    return pearson(x, y).value;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

double prediction_entry(const ConceptClassifier& h, const ConceptPrediction& p, int j) {
  return h.kind == ClassifierKind::analytic ? static_cast<double>(p.bits[static_cast<std::size_t>(j)])
                                            : p.probs[static_cast<std::size_t>(j)];
}

ExperimentConfig engine_config(const RunConfig& cfg, std::uint64_t task_seed) {
  ExperimentConfig ecfg;
  ecfg.P = cfg.P;
  ecfg.N = cfg.N;
  ecfg.seed = task_seed;
  ecfg.generator = cfg.generator;
  ecfg.thresholds = cfg.thresholds;
  ecfg.bootstrap_replicates = cfg.bootstrap_replicates;
  ecfg.bootstrap_level = cfg.bootstrap_level;
  ecfg.workers = cfg.workers;
  return ecfg;
}

TaskArtifacts run_one_task(const RunConfig& cfg, int task_index, std::uint64_t hash) {
  TaskArtifacts art;
  art.task_index = task_index;
  art.task_seed = Rng::derive(cfg.seed, {kTaskSalt, static_cast<std::uint64_t>(task_index)}).next_u64();
  art.config_hash = hash;

  Rng matrix_rng = Rng::derive(art.task_seed, {kMatrixSalt});
  const ConceptMatrix m = sample_concept_matrix(matrix_rng, cfg.space, cfg.N, 0.5);

  ConceptClassifier h;
  h.kind = ClassifierKind::analytic;
  h.space = cfg.space;
  h.canvas = cfg.canvas();
  h.validate();

  Rng weight_rng = Rng::derive(art.task_seed, {kWeightSalt});
  const TargetTask task = make_task(weight_rng, h, m);
  art.weights = task.weights;
  art.threshold = task.threshold;

  const ExperimentConfig ecfg = engine_config(cfg, art.task_seed);
  art.depict = depict_run(task, ecfg, m, task.labels, cfg.space);

  // Ground-truth side: faithful renderings of the same concept rows stand in
  // for real data, scored at the bottleneck and by standardized coefficients.
  GeneratorSpec real_spec;
  real_spec.kind = GeneratorSpec::Kind::oracle;
  real_spec.canvas = cfg.generator.canvas;
  real_spec.placement = cfg.generator.placement;
  const std::vector<Image> real_images =
      generate_dataset(real_spec, m, cfg.space, art.task_seed, kRealImages, cfg.workers);
  const auto real_preds = predict_dataset(h, real_images, art.task_seed, kRealImages, cfg.workers);
  art.bottleneck = bottleneck_oracle(task, real_preds, task.labels, cfg.P, art.task_seed,
                                     cfg.bootstrap_replicates, cfg.bootstrap_level);

  std::vector<std::vector<double>> rows(real_preds.size(), std::vector<double>(task.weights.size()));
  for (std::size_t i = 0; i < real_preds.size(); ++i) {
    for (std::size_t j = 0; j < task.weights.size(); ++j) {
      rows[i][j] = prediction_entry(h, real_preds[i], static_cast<int>(j));
    }
  }
  art.standardized = standardized_coefficients(task.weights, rows);

  art.pearson_vs_bottleneck = try_pearson(art.depict.mean_drops(), art.bottleneck.mean_drops());
  art.pearson_vs_standardized = try_pearson(art.depict.mean_drops(), art.standardized);

  const std::vector<Image> generated_images =
      generate_dataset(cfg.generator, m, cfg.space, art.task_seed, kGeneratedImages, cfg.workers);
  art.validation.effective_generation = effective_generation_check(
      task, h, real_images, generated_images, task.labels, m, cfg.thresholds, art.task_seed, cfg.workers);
  art.validation.independent_permutation = independent_permutation_matrix(h, ecfg, m, cfg.space);

  if (cfg.baseline) {
    const int count = std::min(cfg.baseline_images, cfg.N);
    std::vector<ShapeScene> scenes;
    std::vector<Image> images;
    scenes.reserve(static_cast<std::size_t>(count));
    images.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      Rng rng = Rng::derive(art.task_seed, {kBaselineSalt, static_cast<std::uint64_t>(i)});
      scenes.push_back(place_shapes(m.row(i), cfg.space, cfg.canvas(), rng, cfg.generator.placement));
      images.push_back(rasterize(scenes.back(), cfg.space));
    }
    art.baseline = iou_ranking(task, images, scenes, cfg.space, 8, 4, cfg.workers);
  }
  return art;
}

PooledMetrics pool_metrics(const RunConfig& cfg, const std::vector<TaskArtifacts>& tasks, int failures) {
  PooledMetrics pooled;
  pooled.excluded_tasks = failures;
  const int d = cfg.space.size();

  std::vector<double> depict_points, truth_points, bottleneck_points, baseline_points;
  std::vector<double> topk_sums(static_cast<std::size_t>(d), 0.0);
  for (const auto& t : tasks) {
    const std::vector<double> means = t.depict.mean_drops();
    for (int j = 0; j < d; ++j) {
      depict_points.push_back(means[static_cast<std::size_t>(j)]);
      truth_points.push_back(t.standardized[static_cast<std::size_t>(j)]);
      bottleneck_points.push_back(t.bottleneck.concepts[static_cast<std::size_t>(j)].mean_drop);
      if (t.baseline) {
        baseline_points.push_back(t.baseline->concepts[static_cast<std::size_t>(j)].mean_iou.value_or(0.0));
      }
    }
    for (int k = 1; k <= d; ++k) {
      topk_sums[static_cast<std::size_t>(k - 1)] += topk_agreement(means, t.standardized, k);
    }
  }

  auto pooled_pearson = [](const std::vector<double>& x, const std::vector<double>& y) {
    std::optional<MetricValue> out;
    try {
      out = pearson(x, y);
    } catch (const std::invalid_argument&) {
    }
    return out;
  };
  if (!tasks.empty()) {
    pooled.depict_vs_standardized = pooled_pearson(depict_points, truth_points);
    pooled.bottleneck_vs_standardized = pooled_pearson(bottleneck_points, truth_points);
    if (!baseline_points.empty()) {
      pooled.baseline_vs_standardized = pooled_pearson(baseline_points, truth_points);
    }
    pooled.topk_agreement.resize(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      pooled.topk_agreement[static_cast<std::size_t>(k)] =
          topk_sums[static_cast<std::size_t>(k)] / static_cast<double>(tasks.size());
    }
    pooled.importance_auroc_sweep = importance_auroc_sweep(depict_points, truth_points);
  }
  return pooled;
}

Json metric_to_json(const std::optional<MetricValue>& m) {
  if (!m) return nullptr;
  Json j;
  j["value"] = m->value;
  j["n"] = m->n;
  return j;
}

std::optional<MetricValue> metric_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  MetricValue m;
  m.value = j.at("value").get<double>();
  m.n = j.at("n").get<std::size_t>();
  return m;
}

Json optional_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::optional<double> optional_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Json ci_to_json(const ConfidenceInterval& ci) {
  Json j;
  j["lo"] = ci.lo;
  j["hi"] = ci.hi;
  j["level"] = ci.level;
  j["replicates"] = ci.replicates;
  return j;
}

ConfidenceInterval ci_from_json(const Json& j) {
  ConfidenceInterval ci;
  ci.lo = j.at("lo").get<double>();
  ci.hi = j.at("hi").get<double>();
  ci.level = j.at("level").get<double>();
  ci.replicates = j.at("replicates").get<int>();
  return ci;
}

Json report_to_json(const ImportanceReport& r) {
  Json j;
  j["reference"] = r.reference;
  j["reference_real"] = optional_to_json(r.reference_real);
  Json concepts = Json::array();
  for (const auto& c : r.concepts) {
    Json cj;
    cj["concept_index"] = c.concept_index;
    cj["drops"] = c.drops;
    cj["mean_drop"] = c.mean_drop;
    cj["ci"] = ci_to_json(c.ci);
    concepts.push_back(std::move(cj));
  }
  j["concepts"] = std::move(concepts);
  j["ranking"] = r.ranking;
  return j;
}

ImportanceReport report_from_json(const Json& j) {
  ImportanceReport r;
  r.reference = j.at("reference").get<double>();
  r.reference_real = optional_from_json(j.at("reference_real"));
  for (const auto& cj : j.at("concepts")) {
    ImportanceDistribution c;
    c.concept_index = cj.at("concept_index").get<int>();
    c.drops = cj.at("drops").get<std::vector<double>>();
    c.mean_drop = cj.at("mean_drop").get<double>();
    c.ci = ci_from_json(cj.at("ci"));
    r.concepts.push_back(std::move(c));
  }
  r.ranking = j.at("ranking").get<std::vector<int>>();
  return r;
}

Json validation_to_json(const ValidationReport& v) {
  Json e;
  e["reference_real"] = v.effective_generation.reference_real;
  e["reference_generated"] = v.effective_generation.reference_generated;
  e["target_diff"] = v.effective_generation.target_diff;
  e["target_flagged"] = v.effective_generation.target_flagged;
  Json diffs = Json::array();
  for (const auto& dv : v.effective_generation.concept_diffs) diffs.push_back(optional_to_json(dv));
  e["concept_diffs"] = std::move(diffs);
  e["concept_flags"] = v.effective_generation.concept_flags;

  Json ind;
  Json changes = Json::array();
  for (const auto& row : v.independent_permutation.changes) {
    Json rj = Json::array();
    for (const auto& cv : row) rj.push_back(optional_to_json(cv));
    changes.push_back(std::move(rj));
  }
  ind["changes"] = std::move(changes);
  ind["flags"] = v.independent_permutation.flags;

  Json j;
  j["effective_generation"] = std::move(e);
  j["independent_permutation"] = std::move(ind);
  return j;
}

ValidationReport validation_from_json(const Json& j) {
  ValidationReport v;
  const Json& e = j.at("effective_generation");
  v.effective_generation.reference_real = e.at("reference_real").get<double>();
  v.effective_generation.reference_generated = e.at("reference_generated").get<double>();
  v.effective_generation.target_diff = e.at("target_diff").get<double>();
  v.effective_generation.target_flagged = e.at("target_flagged").get<bool>();
  for (const auto& dv : e.at("concept_diffs")) v.effective_generation.concept_diffs.push_back(optional_from_json(dv));
  v.effective_generation.concept_flags = e.at("concept_flags").get<std::vector<bool>>();

  const Json& ind = j.at("independent_permutation");
  for (const auto& row : ind.at("changes")) {
    std::vector<std::optional<double>> out;
    for (const auto& cv : row) out.push_back(optional_from_json(cv));
    v.independent_permutation.changes.push_back(std::move(out));
  }
  v.independent_permutation.flags = ind.at("flags").get<std::vector<std::vector<bool>>>();
  return v;
}

Json iou_to_json(const std::optional<IouRanking>& r) {
  if (!r) return nullptr;
  Json j;
  Json concepts = Json::array();
  for (const auto& c : r->concepts) {
    Json cj;
    cj["concept_index"] = c.concept_index;
    cj["images_with_concept"] = c.images_with_concept;
    cj["mean_iou"] = optional_to_json(c.mean_iou);
    concepts.push_back(std::move(cj));
  }
  j["concepts"] = std::move(concepts);
  j["ranking"] = r->ranking;
  return j;
}

std::optional<IouRanking> iou_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  IouRanking r;
  for (const auto& cj : j.at("concepts")) {
    ConceptIou c;
    c.concept_index = cj.at("concept_index").get<int>();
    c.images_with_concept = cj.at("images_with_concept").get<int>();
    c.mean_iou = optional_from_json(cj.at("mean_iou"));
    r.concepts.push_back(c);
  }
  r.ranking = j.at("ranking").get<std::vector<int>>();
  return r;
}

Json task_artifacts_to_json(const TaskArtifacts& t) {
  Json j;
  j["task_index"] = t.task_index;
  j["task_seed"] = t.task_seed;
  j["config_hash"] = t.config_hash;
  j["weights"] = t.weights;
  j["threshold"] = t.threshold;
  j["depict"] = report_to_json(t.depict);
  j["bottleneck_oracle"] = report_to_json(t.bottleneck);
  j["standardized_coefficients"] = t.standardized;
  j["pearson_vs_bottleneck"] = optional_to_json(t.pearson_vs_bottleneck);
  j["pearson_vs_standardized"] = optional_to_json(t.pearson_vs_standardized);
  j["validation"] = validation_to_json(t.validation);
  j["baseline"] = iou_to_json(t.baseline);
  return j;
}

TaskArtifacts task_artifacts_from_json(const Json& j) {
  TaskArtifacts t;
  t.task_index = j.at("task_index").get<int>();
  t.task_seed = j.at("task_seed").get<std::uint64_t>();
  t.config_hash = j.at("config_hash").get<std::uint64_t>();
  t.weights = j.at("weights").get<std::vector<double>>();
  t.threshold = j.at("threshold").get<double>();
  t.depict = report_from_json(j.at("depict"));
  t.bottleneck = report_from_json(j.at("bottleneck_oracle"));
  t.standardized = j.at("standardized_coefficients").get<std::vector<double>>();
  t.pearson_vs_bottleneck = optional_from_json(j.at("pearson_vs_bottleneck"));
  t.pearson_vs_standardized = optional_from_json(j.at("pearson_vs_standardized"));
  t.validation = validation_from_json(j.at("validation"));
  t.baseline = iou_from_json(j.at("baseline"));
  return t;
}

Json pooled_to_json(const PooledMetrics& p) {
  Json j;
  j["excluded_tasks"] = p.excluded_tasks;
  j["depict_vs_standardized"] = metric_to_json(p.depict_vs_standardized);
  j["bottleneck_vs_standardized"] = metric_to_json(p.bottleneck_vs_standardized);
  j["baseline_vs_standardized"] = metric_to_json(p.baseline_vs_standardized);
  j["topk_agreement"] = p.topk_agreement;
  Json sweep = Json::array();
  for (const auto& entry : p.importance_auroc_sweep) {
    Json ej;
    ej["threshold"] = entry.threshold;
    ej["auroc"] = metric_to_json(entry.auroc);
    sweep.push_back(std::move(ej));
  }
  j["importance_auroc_sweep"] = std::move(sweep);
  return j;
}

PooledMetrics pooled_from_json(const Json& j) {
  PooledMetrics p;
  p.excluded_tasks = j.at("excluded_tasks").get<int>();
  p.depict_vs_standardized = metric_from_json(j.at("depict_vs_standardized"));
  p.bottleneck_vs_standardized = metric_from_json(j.at("bottleneck_vs_standardized"));
  p.baseline_vs_standardized = metric_from_json(j.at("baseline_vs_standardized"));
  p.topk_agreement = j.at("topk_agreement").get<std::vector<double>>();
  for (const auto& ej : j.at("importance_auroc_sweep")) {
    ThresholdSweepEntry entry;
    entry.threshold = ej.at("threshold").get<double>();
    entry.auroc = metric_from_json(ej.at("auroc"));
    p.importance_auroc_sweep.push_back(entry);
  }
  return p;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string csv_num(double v) { return Json(v).dump(); }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted[0];
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

void RunConfig::validate() const {
  space.validate();
  generator.validate(space);
  if (tasks < 1) throw std::invalid_argument("tasks must be positive");
  if (N < 10) throw std::invalid_argument("N must be at least 10");
  if (P < 1) throw std::invalid_argument("P must be at least 1");
  if (bootstrap_replicates < 1) throw std::invalid_argument("bootstrap replicates must be positive");
  if (bootstrap_level <= 0.0 || bootstrap_level >= 1.0) throw std::invalid_argument("bootstrap level outside (0,1)");
  if (workers < 1) throw std::invalid_argument("workers must be positive");
  if (baseline && baseline_images < 1) throw std::invalid_argument("baseline image count must be positive");
  thresholds.validate();
}

Json config_to_json(const RunConfig& cfg) {
  Json g;
  g["kind"] = cfg.generator.kind == GeneratorSpec::Kind::oracle ? "oracle" : "corrupted";
  g["flip_rate"] = cfg.generator.flip_rate;
  g["pixel_noise"] = cfg.generator.pixel_noise;
  g["canvas"] = canvas_to_json(cfg.generator.canvas);
  Json pl;
  pl["circle_r_min"] = cfg.generator.placement.circle_r_min;
  pl["circle_r_max"] = cfg.generator.placement.circle_r_max;
  pl["rect_side_min"] = cfg.generator.placement.rect_side_min;
  pl["rect_side_max"] = cfg.generator.placement.rect_side_max;
  pl["max_attempts"] = cfg.generator.placement.max_attempts;
  pl["max_restarts"] = cfg.generator.placement.max_restarts;
  g["placement"] = std::move(pl);

  Json th;
  th["effective_generation"] = cfg.thresholds.effective_generation;
  th["independent_diag"] = cfg.thresholds.independent_diag;
  th["independent_offdiag"] = cfg.thresholds.independent_offdiag;

  Json j;
  j["space"] = cfg.space.names;
  j["generator"] = std::move(g);
  j["tasks"] = cfg.tasks;
  j["n"] = cfg.N;
  j["p"] = cfg.P;
  j["seed"] = cfg.seed;
  j["bootstrap_replicates"] = cfg.bootstrap_replicates;
  j["bootstrap_level"] = cfg.bootstrap_level;
  j["thresholds"] = std::move(th);
  j["baseline"] = cfg.baseline;
  j["baseline_images"] = cfg.baseline_images;
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig cfg;
  cfg.space.names = j.at("space").get<std::vector<std::string>>();

  const Json& g = j.at("generator");
  const std::string kind = g.at("kind").get<std::string>();
  if (kind == "oracle") {
    cfg.generator.kind = GeneratorSpec::Kind::oracle;
  } else if (kind == "corrupted") {
    cfg.generator.kind = GeneratorSpec::Kind::corrupted;
  } else {
    throw std::invalid_argument("unknown generator kind: " + kind);
  }
  cfg.generator.flip_rate = g.at("flip_rate").get<std::vector<double>>();
  cfg.generator.pixel_noise = g.at("pixel_noise").get<double>();
  cfg.generator.canvas = canvas_from_json(g.at("canvas"));
  const Json& pl = g.at("placement");
  cfg.generator.placement.circle_r_min = pl.at("circle_r_min").get<int>();
  cfg.generator.placement.circle_r_max = pl.at("circle_r_max").get<int>();
  cfg.generator.placement.rect_side_min = pl.at("rect_side_min").get<int>();
  cfg.generator.placement.rect_side_max = pl.at("rect_side_max").get<int>();
  cfg.generator.placement.max_attempts = pl.at("max_attempts").get<int>();
  cfg.generator.placement.max_restarts = pl.at("max_restarts").get<int>();

  cfg.tasks = j.at("tasks").get<int>();
  cfg.N = j.at("n").get<int>();
  cfg.P = j.at("p").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.bootstrap_replicates = j.at("bootstrap_replicates").get<int>();
  cfg.bootstrap_level = j.at("bootstrap_level").get<double>();
  const Json& th = j.at("thresholds");
  cfg.thresholds.effective_generation = th.at("effective_generation").get<double>();
  cfg.thresholds.independent_diag = th.at("independent_diag").get<double>();
  cfg.thresholds.independent_offdiag = th.at("independent_offdiag").get<double>();
  cfg.baseline = j.at("baseline").get<bool>();
  cfg.baseline_images = j.at("baseline_images").get<int>();
  cfg.validate();
  return cfg;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string bytes = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

ExperimentArtifacts run_experiment(const RunConfig& cfg) {
  cfg.validate();
  ExperimentArtifacts artifacts;
  artifacts.config = cfg;
  artifacts.config_hash = config_hash(cfg);
  for (int t = 0; t < cfg.tasks; ++t) {
    try {
      artifacts.tasks.push_back(run_one_task(cfg, t, artifacts.config_hash));
    } catch (const std::exception& e) {
      artifacts.failures.push_back({t, std::string("task ") + std::to_string(t) + ": " + e.what()});
    }
  }
  artifacts.pooled = pool_metrics(cfg, artifacts.tasks, static_cast<int>(artifacts.failures.size()));
  return artifacts;
}

Json artifacts_to_json(const ExperimentArtifacts& artifacts) {
  Json j;
  j["schema_version"] = artifacts.schema_version;
  j["config_hash"] = artifacts.config_hash;
  j["config"] = config_to_json(artifacts.config);
  Json tasks = Json::array();
  for (const auto& t : artifacts.tasks) tasks.push_back(task_artifacts_to_json(t));
  j["tasks"] = std::move(tasks);
  Json failures = Json::array();
  for (const auto& f : artifacts.failures) {
    Json fj;
    fj["task_index"] = f.task_index;
    fj["error"] = f.error;
    failures.push_back(std::move(fj));
  }
  j["failures"] = std::move(failures);
  j["pooled"] = pooled_to_json(artifacts.pooled);
  return j;
}

ExperimentArtifacts artifacts_from_json(const Json& j) {
  ExperimentArtifacts artifacts;
  artifacts.schema_version = j.at("schema_version").get<int>();
  if (artifacts.schema_version != 1) {
    throw std::runtime_error("unsupported schema_version " + std::to_string(artifacts.schema_version));
  }
  artifacts.config_hash = j.at("config_hash").get<std::uint64_t>();
  artifacts.config = config_from_json(j.at("config"));
  for (const auto& tj : j.at("tasks")) artifacts.tasks.push_back(task_artifacts_from_json(tj));
  for (const auto& fj : j.at("failures")) {
    artifacts.failures.push_back({fj.at("task_index").get<int>(), fj.at("error").get<std::string>()});
  }
  artifacts.pooled = pooled_from_json(j.at("pooled"));
  return artifacts;
}

std::string report_csv(const ExperimentArtifacts& artifacts) {
  const ConceptSpace& space = artifacts.config.space;
  const int d = space.size();
  std::ostringstream out;
  out << "task,concept,concept_name,mean_drop,ci_lo,ci_hi,standardized,bottleneck_drop,baseline_iou\n";
  std::size_t next = 0;
  for (int t = 0; t < artifacts.config.tasks; ++t) {
    const TaskArtifacts* art = nullptr;
    if (next < artifacts.tasks.size() && artifacts.tasks[next].task_index == t) {
      art = &artifacts.tasks[next];
      ++next;
    }
    for (int j = 0; j < d; ++j) {
      out << t << ',' << j << ',' << csv_field(space.names[static_cast<std::size_t>(j)]);
      if (art) {
        const auto& c = art->depict.concepts[static_cast<std::size_t>(j)];
        out << ',' << csv_num(c.mean_drop) << ',' << csv_num(c.ci.lo) << ',' << csv_num(c.ci.hi) << ','
            << csv_num(art->standardized[static_cast<std::size_t>(j)]) << ','
            << csv_num(art->bottleneck.concepts[static_cast<std::size_t>(j)].mean_drop) << ',';
        if (art->baseline && art->baseline->concepts[static_cast<std::size_t>(j)].mean_iou) {
          out << csv_num(*art->baseline->concepts[static_cast<std::size_t>(j)].mean_iou);
        }
      } else {
        out << ",,,,,,";
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string report_svg(const ExperimentArtifacts& artifacts) {
  const ConceptSpace& space = artifacts.config.space;
  const int d = space.size();

  // Pool every repetition's drop per concept across the successful tasks.
  std::vector<std::vector<double>> pooled(static_cast<std::size_t>(d));
  for (const auto& t : artifacts.tasks) {
    for (int j = 0; j < d; ++j) {
      const auto& drops = t.depict.concepts[static_cast<std::size_t>(j)].drops;
      auto& bucket = pooled[static_cast<std::size_t>(j)];
      bucket.insert(bucket.end(), drops.begin(), drops.end());
    }
  }

  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (auto& bucket : pooled) {
    std::sort(bucket.begin(), bucket.end());
    if (bucket.empty()) continue;
    lo = any ? std::min(lo, bucket.front()) : bucket.front();
    hi = any ? std::max(hi, bucket.back()) : bucket.back();
    any = true;
  }
  if (!any) {
    lo = -1.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double margin_left = 70.0, margin_top = 30.0, margin_bottom = 60.0;
  const double slot = 90.0, box_w = 40.0, plot_h = 280.0;
  const double width = margin_left + slot * d + 20.0;
  const double height = margin_top + plot_h + margin_bottom;
  const auto y_of = [&](double v) { return margin_top + (hi - v) / (hi - lo) * plot_h; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_coord(width) << "\" height=\""
      << svg_coord(height) << "\" viewBox=\"0 0 " << svg_coord(width) << " " << svg_coord(height) << "\">\n";
  out << "  <title>Permutation importance drops by concept</title>\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << svg_coord(width) << "\" height=\"" << svg_coord(height)
      << "\" fill=\"white\"/>\n";

  // Axis with min, zero, and max gridlines.
  out << "  <line x1=\"" << svg_coord(margin_left - 10.0) << "\" y1=\"" << svg_coord(margin_top) << "\" x2=\""
      << svg_coord(margin_left - 10.0) << "\" y2=\"" << svg_coord(margin_top + plot_h)
      << "\" stroke=\"black\"/>\n";
  for (const double tick : {lo + pad, 0.0, hi - pad}) {
    if (tick < lo || tick > hi) continue;
    const double y = y_of(tick);
    out << "  <line x1=\"" << svg_coord(margin_left - 14.0) << "\" y1=\"" << svg_coord(y) << "\" x2=\""
        << svg_coord(margin_left - 10.0) << "\" y2=\"" << svg_coord(y) << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << svg_coord(margin_left - 18.0) << "\" y=\"" << svg_coord(y + 4.0)
        << "\" font-size=\"11\" text-anchor=\"end\">" << csv_num(0.001 * std::round(tick * 1000.0))
        << "</text>\n";
  }
  if (0.0 >= lo && 0.0 <= hi) {
    out << "  <line x1=\"" << svg_coord(margin_left - 10.0) << "\" y1=\"" << svg_coord(y_of(0.0)) << "\" x2=\""
        << svg_coord(margin_left + slot * d) << "\" y2=\"" << svg_coord(y_of(0.0))
        << "\" stroke=\"#cccccc\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (int j = 0; j < d; ++j) {
    const double cx = margin_left + slot * j + slot / 2.0;
    const auto& bucket = pooled[static_cast<std::size_t>(j)];
    out << "  <g class=\"concept-box\">\n";
    if (!bucket.empty()) {
      const double q1 = quantile_sorted(bucket, 0.25);
      const double q2 = quantile_sorted(bucket, 0.5);
      const double q3 = quantile_sorted(bucket, 0.75);
      const double whisker_lo = bucket.front();
      const double whisker_hi = bucket.back();
      out << "    <line x1=\"" << svg_coord(cx) << "\" y1=\"" << svg_coord(y_of(whisker_lo)) << "\" x2=\""
          << svg_coord(cx) << "\" y2=\"" << svg_coord(y_of(whisker_hi)) << "\" stroke=\"black\"/>\n";
      for (const double w : {whisker_lo, whisker_hi}) {
        out << "    <line x1=\"" << svg_coord(cx - box_w / 4.0) << "\" y1=\"" << svg_coord(y_of(w)) << "\" x2=\""
            << svg_coord(cx + box_w / 4.0) << "\" y2=\"" << svg_coord(y_of(w)) << "\" stroke=\"black\"/>\n";
      }
      out << "    <rect x=\"" << svg_coord(cx - box_w / 2.0) << "\" y=\"" << svg_coord(y_of(q3)) << "\" width=\""
          << svg_coord(box_w) << "\" height=\"" << svg_coord(std::max(y_of(q1) - y_of(q3), 0.5))
          << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
      out << "    <line x1=\"" << svg_coord(cx - box_w / 2.0) << "\" y1=\"" << svg_coord(y_of(q2)) << "\" x2=\""
          << svg_coord(cx + box_w / 2.0) << "\" y2=\"" << svg_coord(y_of(q2))
          << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    out << "    <text x=\"" << svg_coord(cx) << "\" y=\"" << svg_coord(margin_top + plot_h + 18.0)
        << "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(20 " << svg_coord(cx) << " "
        << svg_coord(margin_top + plot_h + 18.0) << ")\">" << xml_escape(space.names[static_cast<std::size_t>(j)])
        << "</text>\n";
    out << "  </g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit_report(const ExperimentArtifacts& artifacts, const std::string& dir,
                 const std::vector<std::string>& formats) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& format : formats) {
    if (format == "json") {
      write_file_bytes((fs::path(dir) / "report.json").string(), artifacts_to_json(artifacts).dump(2) + "\n");
    } else if (format == "csv") {
      write_file_bytes((fs::path(dir) / "report.csv").string(), report_csv(artifacts));
    } else if (format == "svg") {
      write_file_bytes((fs::path(dir) / "report.svg").string(), report_svg(artifacts));
    } else {
      throw std::invalid_argument("unknown report format: " + format);
    }
  }
}

}  // namespace depict
