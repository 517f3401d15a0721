// depict-lab: synthetic-shapes permutation importance workbench.
//
//   gen-dataset  render a labeled shapes dataset to a directory
//   run          full study: tasks, importance, validation, report files
//   validate     generation checks for one seed-derived task
//   baseline     occlusion-saliency IOU ranking for one task
//   report       re-emit JSON/CSV/SVG from an existing report.json

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "depict/caption.hpp"
#include "depict/dataset_io.hpp"
#include "depict/experiment.hpp"
#include "depict/pnm.hpp"
#include "depict/raster.hpp"

namespace {

using namespace depict;

constexpr std::uint64_t kRowSalt = 0xd5b1;
constexpr std::uint64_t kSceneSalt = 0xd5c3;
constexpr std::uint64_t kWeightSalt = 0x317;
constexpr std::uint64_t kImageSalt = 0xd57e;

struct GeneratorFlags {
  std::string kind = "oracle";
  std::string flip_rate;
  double pixel_noise = 0.0;
};

void add_generator_flags(CLI::App& cmd, GeneratorFlags& flags) {
  cmd.add_option("--generator", flags.kind, "Generator kind")
      ->check(CLI::IsMember({"oracle", "corrupted"}))
      ->capture_default_str();
  cmd.add_option("--flip-rate", flags.flip_rate,
                 "Concept flip probability: one value for all concepts or a comma list of six");
  cmd.add_option("--pixel-noise", flags.pixel_noise, "Stddev of additive per-channel pixel noise")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

GeneratorSpec build_generator(const GeneratorFlags& flags, const ConceptSpace& space) {
  GeneratorSpec spec = GeneratorSpec::oracle_default();
  if (flags.kind == "corrupted") spec.kind = GeneratorSpec::Kind::corrupted;
  if (!flags.flip_rate.empty()) {
    const std::vector<std::string> parts = split_list(flags.flip_rate);
    std::vector<double> rates;
    for (const auto& part : parts) {
      std::size_t used = 0;
      const double value = std::stod(part, &used);
      if (used != part.size()) throw CLI::ValidationError("--flip-rate", "not a number: " + part);
      rates.push_back(value);
    }
    if (rates.size() == 1) rates.assign(static_cast<std::size_t>(space.size()), rates[0]);
    spec.flip_rate = std::move(rates);
  }
  spec.pixel_noise = flags.pixel_noise;
  spec.validate(space);
  return spec;
}

int capped_workers(int requested) {
  int workers = std::max(requested, 1);
  if (const char* env = std::getenv("DEPICT_LAB_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) workers = std::min(workers, cap);
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("DEPICT_LAB_THREADS is not a positive integer: ") + env);
    }
  }
  return workers;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

struct SeededTask {
  ConceptSpace space;
  ConceptMatrix m;
  ConceptClassifier h;
  TargetTask task;
};

// The same seed always names the same task, independently of the subcommand.
SeededTask derive_task(std::uint64_t seed, int n, const ConceptSpace& space, const CanvasSpec& canvas) {
  SeededTask st;
  st.space = space;
  Rng row_rng = Rng::derive(seed, {kRowSalt});
  st.m = sample_concept_matrix(row_rng, space, n, 0.5);
  st.h.kind = ClassifierKind::analytic;
  st.h.space = space;
  st.h.canvas = canvas;
  st.h.validate();
  Rng weight_rng = Rng::derive(seed, {kWeightSalt});
  st.task = make_task(weight_rng, st.h, st.m);
  return st;
}

int cmd_gen_dataset(int n, std::uint64_t seed, const GeneratorFlags& gen_flags, const std::string& out) {
  const ConceptSpace space = ConceptSpace::default_shapes();
  const GeneratorSpec spec = build_generator(gen_flags, space);
  SeededTask st = derive_task(seed, n, space, spec.canvas);

  Dataset ds;
  ds.space = space;
  ds.canvas = spec.canvas;
  ds.concepts = st.m;
  ds.labels = st.task.labels;
  for (int i = 0; i < n; ++i) {
    Rng scene_rng = Rng::derive(seed, {kSceneSalt, static_cast<std::uint64_t>(i)});
    const ShapeScene scene = place_shapes(st.m.row(i), space, spec.canvas, scene_rng, spec.placement);
    ds.captions.push_back(render_caption(scene, space));
    Rng image_rng = Rng::derive(seed, {kImageSalt, static_cast<std::uint64_t>(i)});
    ds.images.push_back(generate(spec, ds.captions.back(), space, image_rng));
  }
  write_dataset(ds, out);
  std::cout << "wrote " << n << " instances to " << out << "\n";
  return 0;
}

int cmd_run(RunConfig cfg, const std::string& out, const std::string& formats_csv) {
  std::vector<std::string> formats = split_list(formats_csv);
  if (formats.empty()) throw std::runtime_error("no report formats requested");
  cfg.validate();

  const ExperimentArtifacts artifacts = run_experiment(cfg);
  emit_report(artifacts, out, formats);

  std::cout << "tasks: " << artifacts.tasks.size() << " completed, " << artifacts.failures.size()
            << " failed\n";
  for (const auto& f : artifacts.failures) std::cout << "  " << f.error << "\n";
  if (artifacts.pooled.depict_vs_standardized) {
    std::cout << "pooled Pearson vs standardized coefficients: "
              << fmt(artifacts.pooled.depict_vs_standardized->value) << "\n";
  }
  if (artifacts.pooled.bottleneck_vs_standardized) {
    std::cout << "bottleneck oracle vs standardized coefficients: "
              << fmt(artifacts.pooled.bottleneck_vs_standardized->value) << "\n";
  }
  if (artifacts.pooled.baseline_vs_standardized) {
    std::cout << "occlusion baseline vs standardized coefficients: "
              << fmt(artifacts.pooled.baseline_vs_standardized->value) << "\n";
  }
  std::cout << "report files in " << out << "\n";
  return artifacts.tasks.empty() ? 1 : 0;
}

int cmd_validate(int n, std::uint64_t seed, const GeneratorFlags& gen_flags, const EngineThresholds& thresholds,
                 int workers) {
  const ConceptSpace space = ConceptSpace::default_shapes();
  const GeneratorSpec spec = build_generator(gen_flags, space);
  SeededTask st = derive_task(seed, n, space, spec.canvas);

  ExperimentConfig ecfg;
  ecfg.P = 1;
  ecfg.N = n;
  ecfg.seed = seed;
  ecfg.generator = spec;
  ecfg.thresholds = thresholds;
  ecfg.workers = workers;

  GeneratorSpec real_spec = GeneratorSpec::oracle_default();
  real_spec.canvas = spec.canvas;
  real_spec.placement = spec.placement;
  const std::vector<Image> real = generate_dataset(real_spec, st.m, space, seed, 1, workers);
  const std::vector<Image> generated = generate_dataset(spec, st.m, space, seed, 2, workers);
  const EffectiveGenerationReport eff = effective_generation_check(
      st.task, st.h, real, generated, st.task.labels, st.m, thresholds, seed, workers);

  std::cout << "effective generation: a=" << fmt(eff.reference_real) << " a'=" << fmt(eff.reference_generated)
            << " diff=" << fmt(eff.target_diff) << (eff.target_flagged ? "  FLAG" : "") << "\n";
  bool any_flag = eff.target_flagged;
  for (int k = 0; k < space.size(); ++k) {
    std::cout << "  " << space.names[static_cast<std::size_t>(k)] << ": ";
    if (eff.concept_diffs[static_cast<std::size_t>(k)]) {
      std::cout << fmt(*eff.concept_diffs[static_cast<std::size_t>(k)]);
    } else {
      std::cout << "skipped";
    }
    if (eff.concept_flags[static_cast<std::size_t>(k)]) {
      std::cout << "  FLAG";
      any_flag = true;
    }
    std::cout << "\n";
  }

  const IndependentPermutationReport ind = independent_permutation_matrix(st.h, ecfg, st.m, space);
  std::cout << "independent permutation (rows: permuted concept; * marks a flag):\n";
  for (int j = 0; j < space.size(); ++j) {
    std::cout << "  ";
    for (int k = 0; k < space.size(); ++k) {
      const auto& change = ind.changes[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      std::cout << (change ? fmt(*change) : std::string("   --  "));
      if (ind.flags[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]) {
        std::cout << "*";
        any_flag = true;
      } else {
        std::cout << " ";
      }
      std::cout << " ";
    }
    std::cout << "\n";
  }
  std::cout << (any_flag ? "validation raised flags\n" : "validation clean\n");
  return any_flag ? 1 : 0;
}

int cmd_baseline(int n, std::uint64_t seed, int patch, int stride, const std::string& heat_dir, int workers) {
  const ConceptSpace space = ConceptSpace::default_shapes();
  const CanvasSpec canvas = CanvasSpec::default64();
  SeededTask st = derive_task(seed, n, space, canvas);

  std::vector<ShapeScene> scenes;
  std::vector<Image> images;
  for (int i = 0; i < n; ++i) {
    Rng scene_rng = Rng::derive(seed, {kSceneSalt, static_cast<std::uint64_t>(i)});
    scenes.push_back(place_shapes(st.m.row(i), space, canvas, scene_rng));
    images.push_back(rasterize(scenes.back(), space));
  }

  const IouRanking ranking = iou_ranking(st.task, images, scenes, space, patch, stride, workers);
  std::cout << "concept IOU over " << n << " images (patch " << patch << ", stride " << stride << "):\n";
  for (const int j : ranking.ranking) {
    const ConceptIou& c = ranking.concepts[static_cast<std::size_t>(j)];
    std::cout << "  " << space.names[static_cast<std::size_t>(j)] << ": ";
    if (c.mean_iou) {
      std::cout << fmt(*c.mean_iou) << " over " << c.images_with_concept << " images\n";
    } else {
      std::cout << "absent from every image\n";
    }
  }

  if (!heat_dir.empty()) {
    std::filesystem::create_directories(heat_dir);
    for (int i = 0; i < n; ++i) {
      const SaliencyMap map = occlusion_saliency(st.task, images[static_cast<std::size_t>(i)], patch, stride);
      char name[32];
      std::snprintf(name, sizeof(name), "heat_%04d.pgm", i);
      write_file_bytes((std::filesystem::path(heat_dir) / name).string(), saliency_pgm(map));
    }
    std::cout << "heat maps in " << heat_dir << "\n";
  }
  return 0;
}

int cmd_report(const std::string& in, const std::string& out, const std::string& formats_csv) {
  const std::vector<std::string> formats = split_list(formats_csv);
  if (formats.empty()) throw std::runtime_error("no report formats requested");
  const ExperimentArtifacts artifacts = artifacts_from_json(Json::parse(read_file_bytes(in)));
  emit_report(artifacts, out, formats);
  std::cout << "report files in " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation importance for image classifiers on a synthetic shapes world"};
  app.require_subcommand(1);

  // gen-dataset
  auto* gen = app.add_subcommand("gen-dataset", "Render a labeled shapes dataset");
  int gen_n = 200;
  std::uint64_t gen_seed = 0;
  GeneratorFlags gen_flags;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Instance count")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  add_generator_flags(*gen, gen_flags);
  gen->add_option("--out", gen_out, "Output directory")->required();

  // run
  auto* run = app.add_subcommand("run", "Run the full importance study");
  RunConfig run_cfg;
  GeneratorFlags run_gen_flags;
  std::string run_out, run_formats = "json,csv,svg";
  int run_workers = 1;
  run->add_option("--tasks", run_cfg.tasks, "Task count")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--n", run_cfg.N, "Test rows per task")->capture_default_str();
  run->add_option("--p", run_cfg.P, "Permutation repetitions")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--seed", run_cfg.seed, "Random seed")->required();
  add_generator_flags(*run, run_gen_flags);
  run->add_option("--bootstrap", run_cfg.bootstrap_replicates, "Bootstrap replicates")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--level", run_cfg.bootstrap_level, "Bootstrap confidence level")->capture_default_str();
  run->add_flag("--baseline", run_cfg.baseline, "Also run the occlusion-IOU baseline");
  run->add_option("--baseline-images", run_cfg.baseline_images, "Baseline instances per task")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--workers", run_workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--out", run_out, "Report directory")->required();
  run->add_option("--formats", run_formats, "Comma list from json,csv,svg")->capture_default_str();

  // validate
  auto* validate = app.add_subcommand("validate", "Generation checks for one seed-derived task");
  int val_n = 500;
  std::uint64_t val_seed = 0;
  GeneratorFlags val_gen_flags;
  EngineThresholds val_thresholds;
  int val_workers = 1;
  validate->add_option("--n", val_n, "Test rows")->capture_default_str();
  validate->add_option("--seed", val_seed, "Random seed")->capture_default_str();
  add_generator_flags(*validate, val_gen_flags);
  validate->add_option("--threshold-effective", val_thresholds.effective_generation, "Effective generation flag level")
      ->capture_default_str();
  validate->add_option("--threshold-diag", val_thresholds.independent_diag, "Expected diagonal drop")
      ->capture_default_str();
  validate->add_option("--threshold-offdiag", val_thresholds.independent_offdiag, "Off-diagonal flag level")
      ->capture_default_str();
  validate->add_option("--workers", val_workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Occlusion-saliency IOU ranking for one task");
  int base_n = 50, base_patch = 8, base_stride = 4, base_workers = 1;
  std::uint64_t base_seed = 0;
  std::string base_heat_dir;
  baseline->add_option("--n", base_n, "Image count")->check(CLI::PositiveNumber)->capture_default_str();
  baseline->add_option("--seed", base_seed, "Random seed")->capture_default_str();
  baseline->add_option("--patch", base_patch, "Occlusion patch size")->check(CLI::PositiveNumber)->capture_default_str();
  baseline->add_option("--stride", base_stride, "Occlusion stride")->check(CLI::PositiveNumber)->capture_default_str();
  baseline->add_option("--heat-dir", base_heat_dir, "Directory for PGM heat maps");
  baseline->add_option("--workers", base_workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  // report
  auto* report = app.add_subcommand("report", "Re-emit report files from report.json");
  std::string rep_in, rep_out, rep_formats = "json,csv,svg";
  report->add_option("--in", rep_in, "Existing report.json")->required()->check(CLI::ExistingFile);
  report->add_option("--out", rep_out, "Report directory")->required();
  report->add_option("--formats", rep_formats, "Comma list from json,csv,svg")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen_dataset(gen_n, gen_seed, gen_flags, gen_out);
    if (*run) {
      run_cfg.generator = build_generator(run_gen_flags, run_cfg.space);
      run_cfg.workers = capped_workers(run_workers);
      return cmd_run(run_cfg, run_out, run_formats);
    }
    if (*validate) return cmd_validate(val_n, val_seed, val_gen_flags, val_thresholds, capped_workers(val_workers));
    if (*baseline) {
      return cmd_baseline(base_n, base_seed, base_patch, base_stride, base_heat_dir, capped_workers(base_workers));
    }
    if (*report) return cmd_report(rep_in, rep_out, rep_formats);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
