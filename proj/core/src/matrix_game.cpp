#include "tauber/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tauber/errors.hpp"

namespace tauber {

namespace {

constexpr double kPivotEps = 1e-11;

// Pure saddle: maximal in its column, minimal in its row. Returned verbatim
// so constant matrices and dominant entries are exact.
bool find_pure_saddle(const MatrixGame& g, MatrixSolution& out) {
  for (int i = 0; i < g.rows; ++i) {
    for (int j = 0; j < g.cols; ++j) {
      const double e = g.at(i, j);
      bool saddle = true;
      for (int r = 0; r < g.rows && saddle; ++r)
        if (g.at(r, j) > e) saddle = false;
      for (int c = 0; c < g.cols && saddle; ++c)
        if (g.at(i, c) < e) saddle = false;
      if (saddle) {
        out.value = e;
        out.row_strategy.assign(g.rows, 0.0);
        out.col_strategy.assign(g.cols, 0.0);
        out.row_strategy[i] = 1.0;
        out.col_strategy[j] = 1.0;
        return true;
      }
    }
  }
  return false;
}

// Solve the square support system
//   sum_i x_i M[i][j] = v   for j in col_support
//   sum_i x_i = 1
// in long double; the simplex solution is replaced only when the refined one
// is feasible and agrees with it. Polishes desk-size games to full precision.
bool refine_on_support(const MatrixGame& g, MatrixSolution& sol) {
  std::vector<int> sx, sy;
  for (int i = 0; i < g.rows; ++i)
    if (sol.row_strategy[i] > 5e-9) sx.push_back(i);
  for (int j = 0; j < g.cols; ++j)
    if (sol.col_strategy[j] > 5e-9) sy.push_back(j);
  if (sx.size() != sy.size() || sx.empty()) return false;
  const std::size_t k = sx.size();

  auto solve = [&](bool for_rows, std::vector<double>& strat, long double& value) -> bool {
    // Unknowns: k weights plus v; equations: k equalizing rows plus the
    // normalization.
    const std::size_t dim = k + 1;
    std::vector<std::vector<long double>> a(dim, std::vector<long double>(dim + 1, 0.0L));
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c)
        a[r][c] = for_rows ? g.at(sx[c], sy[r]) : g.at(sx[r], sy[c]);
      a[r][k] = -1.0L;  // -v
      a[r][dim] = 0.0L;
    }
    for (std::size_t c = 0; c < k; ++c) a[k][c] = 1.0L;
    a[k][dim] = 1.0L;

    for (std::size_t col = 0; col < dim; ++col) {
      std::size_t best = col;
      for (std::size_t r = col + 1; r < dim; ++r)
        if (std::abs(static_cast<double>(a[r][col])) >
            std::abs(static_cast<double>(a[best][col])))
          best = r;
      if (std::abs(static_cast<double>(a[best][col])) < 1e-12) return false;
      std::swap(a[col], a[best]);
      for (std::size_t r = 0; r < dim; ++r) {
        if (r == col) continue;
        const long double f = a[r][col] / a[col][col];
        for (std::size_t c = col; c <= dim; ++c) a[r][c] -= f * a[col][c];
      }
    }
    std::vector<long double> sol_vec(dim);
    for (std::size_t r = 0; r < dim; ++r) sol_vec[r] = a[r][dim] / a[r][r];
    value = sol_vec[k];
    strat.assign(for_rows ? g.rows : g.cols, 0.0);
    const auto& idx = for_rows ? sx : sy;
    for (std::size_t r = 0; r < k; ++r) {
      if (sol_vec[r] < -1e-9) return false;
      strat[idx[r]] = static_cast<double>(std::max(sol_vec[r], 0.0L));
    }
    return true;
  };

  std::vector<double> x, y;
  long double vx = 0, vy = 0;
  if (!solve(true, x, vx) || !solve(false, y, vy)) return false;
  const double v = static_cast<double>(vx);
  if (std::abs(v - sol.value) > 1e-7 || std::abs(static_cast<double>(vy) - v) > 1e-7)
    return false;

  // The refined pair must still guarantee the value against every pure reply.
  for (int j = 0; j < g.cols; ++j) {
    long double dot = 0;
    for (int i = 0; i < g.rows; ++i) dot += static_cast<long double>(x[i]) * g.at(i, j);
    if (static_cast<double>(dot) < v - 1e-10) return false;
  }
  for (int i = 0; i < g.rows; ++i) {
    long double dot = 0;
    for (int j = 0; j < g.cols; ++j) dot += static_cast<long double>(y[j]) * g.at(i, j);
    if (static_cast<double>(dot) > v + 1e-10) return false;
  }

  sol.value = v;
  sol.row_strategy = std::move(x);
  sol.col_strategy = std::move(y);
  return true;
}

}  // namespace

MatrixSolution matrix_value(const MatrixGame& g) {
  if (g.rows < 1 || g.cols < 1 ||
      g.entries.size() != static_cast<std::size_t>(g.rows) * static_cast<std::size_t>(g.cols))
    raise(Errc::NonPositiveParameter, "matrix game needs rows, cols >= 1 and rows*cols entries");

  MatrixSolution sol;
  if (find_pure_saddle(g, sol)) return sol;

  if (g.rows == 1) {
    int best = 0;
    for (int j = 1; j < g.cols; ++j)
      if (g.at(0, j) < g.at(0, best)) best = j;
    sol.value = g.at(0, best);
    sol.row_strategy = {1.0};
    sol.col_strategy.assign(g.cols, 0.0);
    sol.col_strategy[best] = 1.0;
    return sol;
  }
  if (g.cols == 1) {
    int best = 0;
    for (int i = 1; i < g.rows; ++i)
      if (g.at(i, 0) > g.at(best, 0)) best = i;
    sol.value = g.at(best, 0);
    sol.col_strategy = {1.0};
    sol.row_strategy.assign(g.rows, 0.0);
    sol.row_strategy[best] = 1.0;
    return sol;
  }

  if (g.rows == 2 && g.cols == 2) {
    // No pure saddle, so both players mix; the classical closed form.
    const double a = g.at(0, 0), b = g.at(0, 1), c = g.at(1, 0), d = g.at(1, 1);
    const double den = a + d - b - c;
    sol.value = (a * d - b * c) / den;
    const double x0 = (d - c) / den;
    const double y0 = (d - b) / den;
    sol.row_strategy = {x0, 1.0 - x0};
    sol.col_strategy = {y0, 1.0 - y0};
    return sol;
  }

  // Shift to strictly positive entries so the value is positive and the
  // classical normalization applies: maximize sum(y~) s.t. A y~ <= 1, y~ >= 0;
  // at the optimum sum(y~) = 1/value(A), the duals give the row strategy.
  const int m = g.rows, n = g.cols;
  double lowest = g.entries[0];
  for (double e : g.entries) lowest = std::min(lowest, e);
  const double lift = 1.0 - lowest;

  const int width = n + m + 1;  // structural, slack, rhs
  std::vector<std::vector<double>> tab(m, std::vector<double>(width, 0.0));
  std::vector<double> zrow(width, 0.0);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tab[i][j] = g.at(i, j) + lift;
    tab[i][n + i] = 1.0;
    tab[i][width - 1] = 1.0;
    basis[i] = n + i;
  }
  for (int j = 0; j < n; ++j) zrow[j] = -1.0;

  const long cap = 10L * (m + n) * (m + n);
  long iterations = 0;
  while (true) {
    // Bland: the lowest-index improving column.
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (zrow[j] < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = 0;
    for (int i = 0; i < m; ++i) {
      if (tab[i][enter] <= kPivotEps) continue;
      const double ratio = tab[i][width - 1] / tab[i][enter];
      if (leave < 0 || ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0)
      raise(Errc::NumericalFailure, "game LP unbounded (shifted matrix must be positive)");

    const double pivot = tab[leave][enter];
    for (int c = 0; c < width; ++c) tab[leave][c] /= pivot;
    tab[leave][enter] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == leave || tab[i][enter] == 0.0) continue;
      const double f = tab[i][enter];
      for (int c = 0; c < width; ++c) tab[i][c] -= f * tab[leave][c];
      tab[i][enter] = 0.0;
    }
    const double fz = zrow[enter];
    if (fz != 0.0) {
      for (int c = 0; c < width; ++c) zrow[c] -= fz * tab[leave][c];
      zrow[enter] = 0.0;
    }
    basis[leave] = enter;

    if (++iterations > cap)
      raise(Errc::NumericalFailure,
            "simplex exceeded " + std::to_string(cap) + " iterations");
  }

  const double objective = zrow[width - 1];  // 1 / value(shifted)
  if (!(objective > 0))
    raise(Errc::NumericalFailure, "degenerate game LP objective");
  const double lifted_value = 1.0 / objective;

  std::vector<double> y_scaled(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) y_scaled[basis[i]] = tab[i][width - 1];

  sol.value = lifted_value - lift;
  sol.row_strategy.assign(m, 0.0);
  sol.col_strategy.assign(n, 0.0);
  for (int i = 0; i < m; ++i) sol.row_strategy[i] = std::max(zrow[n + i], 0.0) * lifted_value;
  for (int j = 0; j < n; ++j) sol.col_strategy[j] = std::max(y_scaled[j], 0.0) * lifted_value;

  // Normalize away the last few ulps so strategies are proper distributions.
  for (auto* strat : {&sol.row_strategy, &sol.col_strategy}) {
    double sum = 0;
    for (double w : *strat) sum += w;
    if (sum > 0)
      for (double& w : *strat) w /= sum;
  }

  refine_on_support(g, sol);
  return sol;
}

}  // namespace tauber
