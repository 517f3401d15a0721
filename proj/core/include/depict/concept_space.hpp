#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depict/rng.hpp"

namespace depict {

// Binary presence indicators, one per concept. Entries are 0 or 1.
using ConceptVector = std::vector<std::uint8_t>;

// The ordered set of concepts an experiment permutes. Order is fixed for the
// lifetime of an experiment; captions list shapes in this order.
struct ConceptSpace {
  std::vector<std::string> names;

  int size() const { return static_cast<int>(names.size()); }

  // The six shapes: {red, green, blue} x {circle, rectangle}, color-major.
  static ConceptSpace default_shapes();

  // Concept names follow "<color> <kind>"; these split them.
  std::string color_of(int concept_index) const;
  std::string kind_of(int concept_index) const;

  // Index of "<color> <kind>", or -1.
  int find(const std::string& color, const std::string& kind) const;

  void validate() const;

  bool operator==(const ConceptSpace&) const = default;
};

// N concept rows, row-major. All rows share the space's dimension d.
class ConceptMatrix {
 public:
  ConceptMatrix() = default;
  ConceptMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  std::uint8_t at(int row, int col) const { return bits_[index(row, col)]; }
  void set(int row, int col, std::uint8_t value) { bits_[index(row, col)] = value; }

  ConceptVector row(int r) const;
  void set_row(int r, const ConceptVector& v);
  std::vector<std::uint8_t> column(int c) const;

  bool operator==(const ConceptMatrix&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(col);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Each bit independently 1 with probability p.
ConceptVector sample_concept_vector(Rng& rng, const ConceptSpace& space, double p);

// Matrix of independent Bernoulli(p) rows.
ConceptMatrix sample_concept_matrix(Rng& rng, const ConceptSpace& space, int rows, double p);

// Uniform random permutation of column j; all other columns are copied
// bit-identically. The input is not mutated. Throws std::out_of_range for a
// bad column index.
ConceptMatrix permute_column(const ConceptMatrix& m, int column, Rng& rng);

}  // namespace depict
