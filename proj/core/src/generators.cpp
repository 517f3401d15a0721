#include "depict/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "depict/parallel.hpp"

namespace depict {
namespace {

constexpr std::uint64_t kRowStream = 0x67656e; // ascii "gen"

void add_pixel_noise(Image& img, double stddev, Rng& rng) {
  for (auto& channel : img.pixels) {
    const double noisy = static_cast<double>(channel) + rng.normal(0.0, stddev);
    channel = static_cast<std::uint8_t>(std::clamp(std::lround(noisy), 0L, 255L));
  }
}

ConceptVector flip_bits(const GeneratorSpec& spec, const ConceptVector& bits, Rng& rng) {
  ConceptVector out = bits;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double rate = spec.flip_for(static_cast<int>(j));
    if (rate > 0.0 && rng.bernoulli(rate)) out[j] ^= 1;
  }
  return out;
}

// Fresh location for an existing shape, keeping its dimensions.
Geometry relocate(const Geometry& g, const CanvasSpec& canvas, const std::vector<PlacedShape>& placed,
                  int max_attempts, Rng& rng) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Geometry candidate;
    if (const auto* c = std::get_if<Circle>(&g)) {
      if (2 * c->r + 1 > canvas.width || 2 * c->r + 1 > canvas.height) break;
      candidate = Circle{rng.uniform_int(c->r, canvas.width - 1 - c->r),
                         rng.uniform_int(c->r, canvas.height - 1 - c->r), c->r};
    } else {
      const auto& r = std::get<RectShape>(g);
      const int side_x = r.x2 - r.x1 + 1;
      const int side_y = r.y2 - r.y1 + 1;
      if (side_x > canvas.width || side_y > canvas.height || side_x < 1 || side_y < 1) break;
      const int x1 = rng.uniform_int(0, canvas.width - side_x);
      const int y1 = rng.uniform_int(0, canvas.height - side_y);
      candidate = RectShape{x1, y1, x1 + side_x - 1, y1 + side_y - 1};
    }
    bool clash = false;
    for (const auto& other : placed) {
      if (footprint_touch(candidate, other.geom)) {
        clash = true;
        break;
      }
    }
    if (!clash) return candidate;
  }
  throw PlacementError("could not re-place a shape after a text-space change");
}

}  // namespace

GeneratorSpec GeneratorSpec::oracle_default() {
  GeneratorSpec spec;
  spec.kind = Kind::oracle;
  spec.canvas = CanvasSpec::default64();
  return spec;
}

GeneratorSpec GeneratorSpec::corrupted_default(std::vector<double> flip, double noise) {
  GeneratorSpec spec;
  spec.kind = Kind::corrupted;
  spec.flip_rate = std::move(flip);
  spec.pixel_noise = noise;
  spec.canvas = CanvasSpec::default64();
  return spec;
}

double GeneratorSpec::flip_for(int concept_index) const {
  if (flip_rate.empty()) return 0.0;
  return flip_rate.at(static_cast<std::size_t>(concept_index));
}

bool GeneratorSpec::any_flip() const {
  return std::any_of(flip_rate.begin(), flip_rate.end(), [](double r) { return r > 0.0; });
}

void GeneratorSpec::validate(const ConceptSpace& space) const {
  canvas.validate();
  if (!flip_rate.empty() && static_cast<int>(flip_rate.size()) != space.size()) {
    throw std::invalid_argument("flip_rate must list one probability per concept");
  }
  for (const double r : flip_rate) {
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("flip_rate outside [0,1]");
  }
  if (pixel_noise < 0.0) throw std::invalid_argument("pixel_noise must be non-negative");
  if (kind == Kind::oracle && (any_flip() || pixel_noise > 0.0)) {
    throw std::invalid_argument("the oracle generator admits no corruption");
  }
  if (placement.max_attempts < 1 || placement.max_restarts < 1) {
    throw std::invalid_argument("placement limits must be positive");
  }
  for (int j = 0; j < space.size(); ++j) {
    if (canvas.find_color(space.color_of(j)) == nullptr) {
      throw std::invalid_argument("palette lacks color for concept " + space.names[static_cast<std::size_t>(j)]);
    }
  }
}

Image generate(const GeneratorSpec& spec, const std::string& caption, const ConceptSpace& space, Rng& rng) {
  ShapeScene parsed = parse_caption(caption, space, spec.canvas);

  ConceptVector present(static_cast<std::size_t>(space.size()), 0);
  for (const auto& shape : parsed.shapes) present[static_cast<std::size_t>(shape.concept_index)] = 1;
  ConceptVector wanted = spec.kind == GeneratorSpec::Kind::corrupted ? flip_bits(spec, present, rng) : present;

  ShapeScene scene;
  scene.canvas = spec.canvas;
  // Keep surviving shapes, re-placing any whose stored geometry no longer
  // fits; caption order decides priority.
  for (const auto& shape : parsed.shapes) {
    if (!wanted[static_cast<std::size_t>(shape.concept_index)]) continue;
    bool ok = in_bounds(shape.geom, spec.canvas);
    if (ok) {
      for (const auto& other : scene.shapes) {
        if (footprint_touch(shape.geom, other.geom)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      scene.shapes.push_back(shape);
    } else {
      scene.shapes.push_back(
          PlacedShape{shape.concept_index,
                      relocate(shape.geom, spec.canvas, scene.shapes, spec.placement.max_attempts, rng)});
    }
  }
  // Concepts switched on by corruption get fresh geometry.
  for (int j = 0; j < space.size(); ++j) {
    if (!wanted[static_cast<std::size_t>(j)] || present[static_cast<std::size_t>(j)]) continue;
    bool placed = false;
    for (int attempt = 0; attempt < spec.placement.max_attempts && !placed; ++attempt) {
      bool feasible = true;
      Geometry g = sample_geometry(space.kind_of(j), spec.canvas, spec.placement, rng, feasible);
      if (!feasible) continue;
      bool clash = false;
      for (const auto& other : scene.shapes) {
        if (footprint_touch(g, other.geom)) {
          clash = true;
          break;
        }
      }
      if (!clash) {
        scene.shapes.push_back(PlacedShape{j, std::move(g)});
        placed = true;
      }
    }
    if (!placed) throw PlacementError("could not place a corruption-added shape");
  }

  Image img = rasterize(scene, space);
  if (spec.kind == GeneratorSpec::Kind::corrupted && spec.pixel_noise > 0.0) {
    add_pixel_noise(img, spec.pixel_noise, rng);
  }
  return img;
}

Image generate_row(const GeneratorSpec& spec, const ConceptVector& bits, const ConceptSpace& space, Rng& rng) {
  const ConceptVector wanted = spec.kind == GeneratorSpec::Kind::corrupted ? flip_bits(spec, bits, rng) : bits;
  const ShapeScene scene = place_shapes(wanted, space, spec.canvas, rng, spec.placement);
  Image img = rasterize(scene, space);
  if (spec.kind == GeneratorSpec::Kind::corrupted && spec.pixel_noise > 0.0) {
    add_pixel_noise(img, spec.pixel_noise, rng);
  }
  return img;
}

std::vector<Image> generate_dataset(const GeneratorSpec& spec, const ConceptMatrix& m, const ConceptSpace& space,
                                    std::uint64_t seed, std::uint64_t dataset_id, int workers) {
  if (m.cols() != space.size()) throw std::invalid_argument("matrix width does not match the concept space");
  std::vector<Image> out(static_cast<std::size_t>(m.rows()));
  parallel_for(out.size(), workers, [&](std::size_t i) {
    try {
      Rng rng = Rng::derive(seed, {kRowStream, dataset_id, static_cast<std::uint64_t>(i)});
      out[i] = generate_row(spec, m.row(static_cast<int>(i)), space, rng);
    } catch (const std::exception& e) {
      throw std::runtime_error("row " + std::to_string(i) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace depict
