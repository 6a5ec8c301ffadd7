#include <gtest/gtest.h>

#include <random>

#include "locrec/smith.hpp"

using namespace locrec;

namespace {

// Order of Z^2 / span(rows) by brute force: the number of lattice cosets is
// |det| of any basis, computed here as the gcd of all 2x2 minors.
std::int64_t index_by_minors(const IntMatrix<std::int64_t>& rows) {
  std::int64_t g = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      g = std::gcd(g, rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0]);
  return g;
}

std::int64_t gcd_of_entries(const IntMatrix<std::int64_t>& rows) {
  std::int64_t g = 0;
  for (const auto& r : rows)
    for (auto x : r) g = std::gcd(g, x);
  return g;
}

}  // namespace

TEST(Smith, KnownForms) {
  EXPECT_EQ(smith_diagonal<std::int64_t>({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}),
            (std::vector<std::int64_t>{2, 6, 12}));
  EXPECT_EQ(invariant_factors<std::int64_t>({{3, 0}, {0, 3}}, 2), (std::vector<std::int64_t>{3, 3}));
  EXPECT_EQ(invariant_factors<std::int64_t>({{3, -1}, {0, 3}}, 2), (std::vector<std::int64_t>{9}));
  EXPECT_EQ(invariant_factors<std::int64_t>({{2, 0}, {0, 3}}, 2), (std::vector<std::int64_t>{6}));
  EXPECT_EQ(invariant_factors<std::int64_t>({{1, 0}, {0, 1}}, 2), (std::vector<std::int64_t>{}));
  EXPECT_EQ(invariant_factors<std::int64_t>({{4, 0}}, 2), (std::vector<std::int64_t>{4, 0}));
  EXPECT_EQ(invariant_factors<std::int64_t>({}, 1), (std::vector<std::int64_t>{0}));
  EXPECT_THROW(smith_diagonal<std::int64_t>({{1, 2}, {3}}), std::invalid_argument);
}

TEST(Smith, RandomTwoColumnRelationsMatchMinors) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> d(-12, 12);
  for (int s = 0; s < 500; ++s) {
    IntMatrix<std::int64_t> rows(3, std::vector<std::int64_t>(2));
    for (auto& r : rows)
      for (auto& x : r) x = d(rng);
    const auto diag = smith_diagonal(rows);
    const std::int64_t minors = index_by_minors(rows);
    if (minors == 0) {
      EXPECT_LT(diag.size(), 2u);
      continue;
    }
    ASSERT_EQ(diag.size(), 2u);
    EXPECT_EQ(diag[0] * diag[1], minors);
    EXPECT_EQ(diag[0], gcd_of_entries(rows));
    EXPECT_EQ(diag[1] % diag[0], 0);
  }
}
