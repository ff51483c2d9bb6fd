#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tauber/matrix_game.hpp"
#include "tauber/rng.hpp"

using namespace tauber;

namespace {

MatrixGame make(int rows, int cols, std::vector<double> entries) {
  return MatrixGame{rows, cols, std::move(entries)};
}

MatrixGame random_matrix(Xoshiro256pp& rng, int max_dim, double lo = -1.0, double hi = 1.0) {
  const int rows = 1 + static_cast<int>(rng.next_below(max_dim));
  const int cols = 1 + static_cast<int>(rng.next_below(max_dim));
  MatrixGame g;
  g.rows = rows;
  g.cols = cols;
  g.entries.resize(static_cast<std::size_t>(rows) * cols);
  for (auto& e : g.entries) e = rng.uniform(lo, hi);
  return g;
}

double row_guarantee(const MatrixGame& g, const std::vector<double>& x) {
  double worst = 1e300;
  for (int c = 0; c < g.cols; ++c) {
    double dot = 0;
    for (int r = 0; r < g.rows; ++r) dot += x[r] * g.at(r, c);
    worst = std::min(worst, dot);
  }
  return worst;
}

double col_exposure(const MatrixGame& g, const std::vector<double>& y) {
  double worst = -1e300;
  for (int r = 0; r < g.rows; ++r) {
    double dot = 0;
    for (int c = 0; c < g.cols; ++c) dot += y[c] * g.at(r, c);
    worst = std::max(worst, dot);
  }
  return worst;
}

MatrixGame negated_transpose(const MatrixGame& g) {
  MatrixGame t;
  t.rows = g.cols;
  t.cols = g.rows;
  t.entries.resize(g.entries.size());
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c) t.at(c, r) = -g.at(r, c);
  return t;
}

}  // namespace

TEST_CASE("matrix_value: constant matrix is a saddle") {
  const auto sol = matrix_value(make(2, 2, {5, 5, 5, 5}));
  CHECK(sol.value == 5.0);
}

TEST_CASE("matrix_value: matching pennies") {
  const auto sol = matrix_value(make(2, 2, {1, 0, 0, 1}));
  CHECK(sol.value == 0.5);
  CHECK(sol.row_strategy[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.row_strategy[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.col_strategy[0] == doctest::Approx(0.5).epsilon(1e-12));

  // brute force over a 10^4-point strategy grid
  const double grid = oracles::grid_lower_value_2xN(make(2, 2, {1, 0, 0, 1}), 10000);
  CHECK(sol.value == doctest::Approx(grid).epsilon(1e-3));
}

TEST_CASE("matrix_value: rock paper scissors") {
  const auto rps = make(3, 3, {0, -1, 1, 1, 0, -1, -1, 1, 0});
  const auto sol = matrix_value(rps);
  CHECK(sol.value == 0.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(sol.row_strategy[i] == doctest::Approx(1.0 / 3).epsilon(1e-9));
    CHECK(sol.col_strategy[i] == doctest::Approx(1.0 / 3).epsilon(1e-9));
  }
  const double grid = oracles::grid_lower_value_3xN(rps, 120);
  CHECK(std::abs(sol.value - grid) <= 2.5 / 120);
}

TEST_CASE("matrix_value: degenerate shapes scan") {
  const auto row = matrix_value(make(1, 3, {0.3, -0.2, 0.9}));
  CHECK(row.value == -0.2);
  CHECK(row.col_strategy[1] == 1.0);

  const auto col = matrix_value(make(3, 1, {0.3, -0.2, 0.9}));
  CHECK(col.value == 0.9);
  CHECK(col.row_strategy[2] == 1.0);
}

TEST_CASE("matrix_value: duality gap and guarantees on seeded matrices") {
  Xoshiro256pp rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto g = random_matrix(rng, 6);
    const auto sol = matrix_value(g);

    // guarantee: x secures value against every pure column, y dually
    CHECK(row_guarantee(g, sol.row_strategy) >= sol.value - 1e-9);
    CHECK(col_exposure(g, sol.col_strategy) <= sol.value + 1e-9);

    // independent dual route: value(-M^T) = -value(M)
    const auto dual = matrix_value(negated_transpose(g));
    CHECK(std::abs(dual.value + sol.value) <= 1e-9);
  }
}

TEST_CASE("matrix_value: shift equivariance") {
  Xoshiro256pp rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_matrix(rng, 5);
    const double c = rng.uniform(-2.0, 2.0);
    auto shifted = g;
    for (auto& e : shifted.entries) e += c;

    const auto a = matrix_value(g);
    const auto b = matrix_value(shifted);
    CHECK(std::abs(b.value - (a.value + c)) <= 1e-9);
    for (int r = 0; r < g.rows; ++r)
      CHECK(std::abs(a.row_strategy[r] - b.row_strategy[r]) <= 1e-9);
    for (int col = 0; col < g.cols; ++col)
      CHECK(std::abs(a.col_strategy[col] - b.col_strategy[col]) <= 1e-9);
  }
}

TEST_CASE("matrix_value: planted pure saddles are returned verbatim") {
  Xoshiro256pp rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_matrix(rng, 5);
    const int i = static_cast<int>(rng.next_below(g.rows));
    const int j = static_cast<int>(rng.next_below(g.cols));
    const double e = g.at(i, j);
    for (int c = 0; c < g.cols; ++c)
      if (g.at(i, c) < e) g.at(i, c) = e + std::abs(g.at(i, c) - e);
    for (int r = 0; r < g.rows; ++r)
      if (g.at(r, j) > e) g.at(r, j) = e - std::abs(g.at(r, j) - e);
    const auto sol = matrix_value(g);
    CHECK(sol.value == e);
  }
}
