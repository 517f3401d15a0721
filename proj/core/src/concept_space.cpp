#include "depict/concept_space.hpp"

#include <set>
#include <stdexcept>

namespace depict {

ConceptSpace ConceptSpace::default_shapes() {
  ConceptSpace space;
  for (const char* color : {"red", "green", "blue"}) {
    for (const char* kind : {"circle", "rectangle"}) {
      space.names.push_back(std::string(color) + " " + kind);
    }
  }
  return space;
}

std::string ConceptSpace::color_of(int concept_index) const {
  const std::string& name = names.at(static_cast<std::size_t>(concept_index));
  const auto pos = name.find(' ');
  if (pos == std::string::npos) throw std::runtime_error("concept name lacks '<color> <kind>' form: " + name);
  return name.substr(0, pos);
}

std::string ConceptSpace::kind_of(int concept_index) const {
  const std::string& name = names.at(static_cast<std::size_t>(concept_index));
  const auto pos = name.find(' ');
  if (pos == std::string::npos) throw std::runtime_error("concept name lacks '<color> <kind>' form: " + name);
  return name.substr(pos + 1);
}

int ConceptSpace::find(const std::string& color, const std::string& kind) const {
  const std::string target = color + " " + kind;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == target) return static_cast<int>(i);
  }
  return -1;
}

void ConceptSpace::validate() const {
  if (names.empty()) throw std::invalid_argument("concept space needs at least one concept");
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size()) throw std::invalid_argument("concept names must be unique");
}

ConceptMatrix::ConceptMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 1) throw std::invalid_argument("bad concept matrix shape");
  bits_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
}

ConceptVector ConceptMatrix::row(int r) const {
  ConceptVector v(static_cast<std::size_t>(cols_));
  for (int c = 0; c < cols_; ++c) v[static_cast<std::size_t>(c)] = at(r, c);
  return v;
}

void ConceptMatrix::set_row(int r, const ConceptVector& v) {
  if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("row width mismatch");
  for (int c = 0; c < cols_; ++c) set(r, c, v[static_cast<std::size_t>(c)]);
}

std::vector<std::uint8_t> ConceptMatrix::column(int c) const {
  std::vector<std::uint8_t> col(static_cast<std::size_t>(rows_));
  for (int r = 0; r < rows_; ++r) col[static_cast<std::size_t>(r)] = at(r, c);
  return col;
}

ConceptVector sample_concept_vector(Rng& rng, const ConceptSpace& space, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("bernoulli p outside [0,1]");
  ConceptVector v(static_cast<std::size_t>(space.size()));
  for (auto& bit : v) bit = rng.bernoulli(p) ? 1 : 0;
  return v;
}

ConceptMatrix sample_concept_matrix(Rng& rng, const ConceptSpace& space, int rows, double p) {
  ConceptMatrix m(rows, space.size());
  for (int r = 0; r < rows; ++r) m.set_row(r, sample_concept_vector(rng, space, p));
  return m;
}

ConceptMatrix permute_column(const ConceptMatrix& m, int column, Rng& rng) {
  if (column < 0 || column >= m.cols()) throw std::out_of_range("permute_column: column index out of range");
  ConceptMatrix out = m;
  const std::vector<int> order = rng.permutation(m.rows());
  for (int r = 0; r < m.rows(); ++r) {
    out.set(r, column, m.at(order[static_cast<std::size_t>(r)], column));
  }
  return out;
}

}  // namespace depict
