#pragma once

#include <vector>

namespace tauber {

// Finite matrix game; the maximizer chooses a row.
struct MatrixGame {
  int rows = 0;
  int cols = 0;
  std::vector<double> entries;  // row-major, rows*cols

  double at(int r, int c) const { return entries[static_cast<std::size_t>(r) * cols + c]; }
  double& at(int r, int c) { return entries[static_cast<std::size_t>(r) * cols + c]; }
};

struct MatrixSolution {
  double value = 0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
};

// Exact minimax value and optimal mixed strategies. Pure saddle points are
// returned verbatim; 1xN / Mx1 games are min/max scans; everything else is
// solved by the classical game LP after a shift to positive entries, with
// Bland's rule (termination guaranteed, iteration cap 10*(m+n)^2).
MatrixSolution matrix_value(const MatrixGame& game);

}  // namespace tauber
