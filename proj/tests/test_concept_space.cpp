#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "depict/concept_space.hpp"
#include "depict/rng.hpp"

using namespace depict;

TEST_CASE("default space lists the six color-shape pairs in order") {
  const ConceptSpace space = ConceptSpace::default_shapes();
  const std::vector<std::string> expected = {"red circle",   "red rectangle",  "green circle",
                                             "green rectangle", "blue circle", "blue rectangle"};
  CHECK(space.names == expected);
  CHECK(space.size() == 6);
  CHECK(space.color_of(0) == "red");
  CHECK(space.kind_of(0) == "circle");
  CHECK(space.color_of(5) == "blue");
  CHECK(space.kind_of(5) == "rectangle");
  for (int j = 0; j < space.size(); ++j) {
    CHECK(space.find(space.color_of(j), space.kind_of(j)) == j);
  }
  CHECK(space.find("yellow", "circle") == -1);
  space.validate();
}

TEST_CASE("validate rejects duplicates and empty spaces") {
  ConceptSpace dup;
  dup.names = {"red circle", "red circle"};
  CHECK_THROWS_AS(dup.validate(), std::invalid_argument);
  ConceptSpace empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
}

TEST_CASE("degenerate bernoulli vectors") {
  const ConceptSpace space = ConceptSpace::default_shapes();
  Rng rng(1);
  CHECK(sample_concept_vector(rng, space, 1.0) == ConceptVector{1, 1, 1, 1, 1, 1});
  CHECK(sample_concept_vector(rng, space, 0.0) == ConceptVector{0, 0, 0, 0, 0, 0});
}

TEST_CASE("per-bit empirical mean is close to p") {
  const ConceptSpace space = ConceptSpace::default_shapes();
  Rng rng(2);
  const int n = 10000;
  std::vector<int> ones(static_cast<std::size_t>(space.size()), 0);
  for (int i = 0; i < n; ++i) {
    const ConceptVector v = sample_concept_vector(rng, space, 0.5);
    for (int j = 0; j < space.size(); ++j) ones[static_cast<std::size_t>(j)] += v[static_cast<std::size_t>(j)];
  }
  for (const int c : ones) {
    CHECK(std::abs(c / static_cast<double>(n) - 0.5) < 0.02);
  }
}

TEST_CASE("matrix accessors round-trip rows and columns") {
  ConceptMatrix m(3, 4);
  m.set_row(0, ConceptVector{1, 0, 1, 0});
  m.set_row(1, ConceptVector{0, 1, 1, 0});
  m.set_row(2, ConceptVector{1, 1, 0, 1});
  CHECK(m.row(1) == ConceptVector{0, 1, 1, 0});
  CHECK(m.column(2) == std::vector<std::uint8_t>{1, 1, 0});
  CHECK(m.at(2, 3) == 1);
  m.set(2, 3, 0);
  CHECK(m.at(2, 3) == 0);
  CHECK_THROWS_AS(m.set_row(0, ConceptVector{1}), std::invalid_argument);
}

TEST_CASE("sampled matrix has the requested shape") {
  const ConceptSpace space = ConceptSpace::default_shapes();
  Rng rng(3);
  const ConceptMatrix m = sample_concept_matrix(rng, space, 17, 0.5);
  CHECK(m.rows() == 17);
  CHECK(m.cols() == 6);
}

TEST_CASE("permuting a constant column is the identity") {
  const ConceptSpace space = ConceptSpace::default_shapes();
  Rng rng(4);
  ConceptMatrix m(5, space.size());
  for (int r = 0; r < 5; ++r) m.set(r, 2, 1);
  m.set(0, 0, 1);
  m.set(3, 4, 1);
  Rng perm_rng(99);
  CHECK(permute_column(m, 2, perm_rng) == m);
}

TEST_CASE("permutation preserves column multisets and leaves other columns alone") {
  const ConceptSpace space = ConceptSpace::default_shapes();
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ConceptMatrix m = sample_concept_matrix(rng, space, 40, 0.5);
    const int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(space.size())));
    Rng perm_rng(1000 + trial);
    const ConceptMatrix out = permute_column(m, j, perm_rng);
    for (int c = 0; c < m.cols(); ++c) {
      auto before = m.column(c);
      auto after = out.column(c);
      if (c == j) {
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
      }
      CHECK(before == after);
    }
  }
}

TEST_CASE("two-row permutation is deterministic per seed and covers both orders") {
  const ConceptSpace space = ConceptSpace::default_shapes();
  ConceptMatrix m(2, space.size());
  m.set(1, 0, 1);  // column 0 is [0, 1]
  std::map<std::vector<std::uint8_t>, int> seen;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng a(seed), b(seed);
    const ConceptMatrix out_a = permute_column(m, 0, a);
    const ConceptMatrix out_b = permute_column(m, 0, b);
    CHECK(out_a == out_b);
    const auto col = out_a.column(0);
    REQUIRE((col == std::vector<std::uint8_t>{0, 1} || col == std::vector<std::uint8_t>{1, 0}));
    ++seen[col];
  }
  CHECK(seen.size() == 2);
}

TEST_CASE("permute_column leaves the input untouched and rejects bad indices") {
  const ConceptSpace space = ConceptSpace::default_shapes();
  Rng rng(6);
  const ConceptMatrix m = sample_concept_matrix(rng, space, 10, 0.5);
  const ConceptMatrix copy = m;
  Rng perm_rng(7);
  (void)permute_column(m, 3, perm_rng);
  CHECK(m == copy);
  CHECK_THROWS_AS(permute_column(m, -1, perm_rng), std::out_of_range);
  CHECK_THROWS_AS(permute_column(m, 6, perm_rng), std::out_of_range);
}
