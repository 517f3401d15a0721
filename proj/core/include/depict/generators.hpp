#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depict/caption.hpp"
#include "depict/concept_space.hpp"
#include "depict/raster.hpp"
#include "depict/rng.hpp"
#include "depict/scene.hpp"

namespace depict {

// The text-to-image bridge. The oracle realizes captions faithfully; the
// corrupted variant flips concept presence and adds pixel noise to model an
// imperfect generator.
struct GeneratorSpec {
  enum class Kind { oracle, corrupted };

  Kind kind = Kind::oracle;
  std::vector<double> flip_rate;  // per concept; empty means no flips
  double pixel_noise = 0.0;       // stddev of additive per-channel noise
  CanvasSpec canvas;
  PlacementRules placement;

  static GeneratorSpec oracle_default();
  static GeneratorSpec corrupted_default(std::vector<double> flip, double noise);

  double flip_for(int concept_index) const;
  bool any_flip() const;
  void validate(const ConceptSpace& space) const;
};

// Renders one caption. Shapes whose stored placement no longer fits (out of
// bounds, overlapping, or touching an earlier shape) are re-placed at a
// fresh location, keeping their size.
Image generate(const GeneratorSpec& spec, const std::string& caption, const ConceptSpace& space, Rng& rng);

// Renders one concept row with fresh placements.
Image generate_row(const GeneratorSpec& spec, const ConceptVector& bits, const ConceptSpace& space, Rng& rng);

// One image per matrix row; row streams derive from (seed, dataset_id, row),
// so the output is identical for any worker count.
std::vector<Image> generate_dataset(const GeneratorSpec& spec, const ConceptMatrix& m, const ConceptSpace& space,
                                    std::uint64_t seed, std::uint64_t dataset_id, int workers);

}  // namespace depict
