//------------------------------------------------------------------------------
//
//   Copyright 2026 The augdist Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "augdist/transport.hpp"
#include "augdist/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

namespace augdist {

double Coupling::marginal_residual() const
{
  double rows = (plan.rowwise().sum() - row_marginal).cwiseAbs().maxCoeff();
  double cols = (plan.colwise().sum().transpose() - col_marginal).cwiseAbs().maxCoeff();
  return std::max(rows, cols);
}

namespace {

struct Arc
{
  int row;
  int col;
  double flow;
};

// Spanning-tree basis of the bipartite transportation graph. Row i is node i,
// column j is node rows + j.
class TransportSimplex
{
public:
  TransportSimplex(const Matrix &cost, const Vector &supply, const Vector &demand)
    : cost_(cost), rows_(static_cast<int>(cost.rows())), cols_(static_cast<int>(cost.cols())),
      basic_(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_), false)
  {
    northwest_corner(supply, demand);
    const double scale = cost.size() == 0 ? 0.0 : cost.cwiseAbs().maxCoeff();
    reduced_tol_ = 1e-12 * (1.0 + scale);
  }

  int solve()
  {
    const long long limit = 100LL * rows_ * cols_ + 10000;
    int pivots = 0;
    for (;;) {
      build_adjacency();
      compute_potentials();
      int enter_row = -1, enter_col = -1;
      if (!find_entering(enter_row, enter_col))
        return pivots;
      pivot(enter_row, enter_col);
      if (++pivots > limit)
        throw Error(ErrorCode::InvalidArgument, "transport simplex exceeded its pivot limit");
    }
  }

  Matrix plan() const
  {
    Matrix out = Matrix::Zero(rows_, cols_);
    for (const auto &arc : arcs_)
      out(arc.row, arc.col) = std::max(0.0, arc.flow);
    return out;
  }

private:
  std::size_t cell(int i, int j) const
  {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
  }

  void add_arc(int i, int j, double flow)
  {
    arcs_.push_back({i, j, flow});
    basic_[cell(i, j)] = true;
  }

  // Produces exactly rows + cols - 1 arcs forming a spanning tree; the last
  // row and column absorb rounding residue.
  void northwest_corner(const Vector &supply, const Vector &demand)
  {
    std::vector<double> s(supply.data(), supply.data() + supply.size());
    std::vector<double> d(demand.data(), demand.data() + demand.size());
    int i = 0, j = 0;
    while (i < rows_ && j < cols_) {
      const bool last_row = i == rows_ - 1;
      const bool last_col = j == cols_ - 1;
      if (last_row && last_col) {
        add_arc(i, j, std::max(0.0, std::min(s[i], d[j])));
        break;
      }
      bool advance_row;
      if (last_row)
        advance_row = false;
      else if (last_col)
        advance_row = true;
      else
        advance_row = s[i] <= d[j];

      const double flow = std::max(0.0, advance_row ? s[i] : d[j]);
      add_arc(i, j, flow);
      if (advance_row) {
        d[j] = std::max(0.0, d[j] - flow);
        ++i;
      } else {
        s[i] = std::max(0.0, s[i] - flow);
        ++j;
      }
    }
  }

  void build_adjacency()
  {
    adjacency_.assign(static_cast<std::size_t>(rows_ + cols_), {});
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
      adjacency_[static_cast<std::size_t>(arcs_[a].row)].push_back(static_cast<int>(a));
      adjacency_[static_cast<std::size_t>(rows_ + arcs_[a].col)].push_back(static_cast<int>(a));
    }
  }

  int other_end(const Arc &arc, int node) const
  {
    return node < rows_ ? rows_ + arc.col : arc.row;
  }

  void compute_potentials()
  {
    const double unset = std::numeric_limits<double>::quiet_NaN();
    potential_.assign(static_cast<std::size_t>(rows_ + cols_), unset);
    potential_[0] = 0.0;
    std::deque<int> queue{0};
    while (!queue.empty()) {
      int node = queue.front();
      queue.pop_front();
      for (int a : adjacency_[static_cast<std::size_t>(node)]) {
        const Arc &arc = arcs_[static_cast<std::size_t>(a)];
        int next = other_end(arc, node);
        if (!std::isnan(potential_[static_cast<std::size_t>(next)]))
          continue;
        // u_row + v_col = cost on basic arcs
        potential_[static_cast<std::size_t>(next)] =
            cost_(arc.row, arc.col) - potential_[static_cast<std::size_t>(node)];
        queue.push_back(next);
      }
    }
  }

  // Bland: the first non-basic cell in row-major order with negative reduced cost.
  bool find_entering(int &row, int &col) const
  {
    for (int i = 0; i < rows_; ++i) {
      const double u = potential_[static_cast<std::size_t>(i)];
      for (int j = 0; j < cols_; ++j) {
        if (basic_[cell(i, j)])
          continue;
        const double reduced = cost_(i, j) - u - potential_[static_cast<std::size_t>(rows_ + j)];
        if (reduced < -reduced_tol_) {
          row = i;
          col = j;
          return true;
        }
      }
    }
    return false;
  }

  // Arc indices on the tree path from row node `row` to column node `col`.
  std::vector<int> tree_path(int row, int col) const
  {
    const int target = rows_ + col;
    std::vector<int> parent_arc(static_cast<std::size_t>(rows_ + cols_), -1);
    std::vector<bool> seen(static_cast<std::size_t>(rows_ + cols_), false);
    std::deque<int> queue{row};
    seen[static_cast<std::size_t>(row)] = true;
    while (!queue.empty() && !seen[static_cast<std::size_t>(target)]) {
      int node = queue.front();
      queue.pop_front();
      for (int a : adjacency_[static_cast<std::size_t>(node)]) {
        int next = other_end(arcs_[static_cast<std::size_t>(a)], node);
        if (seen[static_cast<std::size_t>(next)])
          continue;
        seen[static_cast<std::size_t>(next)] = true;
        parent_arc[static_cast<std::size_t>(next)] = a;
        queue.push_back(next);
      }
    }
    std::vector<int> path;
    for (int node = target; node != row;) {
      int a = parent_arc[static_cast<std::size_t>(node)];
      path.push_back(a);
      node = other_end(arcs_[static_cast<std::size_t>(a)], node);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  void pivot(int row, int col)
  {
    // Cycle: +entering, then path arcs alternate -, +, -, ... starting at `row`.
    std::vector<int> path = tree_path(row, col);
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < path.size(); p += 2)
      theta = std::min(theta, arcs_[static_cast<std::size_t>(path[p])].flow);

    int leaving = -1;
    std::size_t leaving_cell = 0;
    for (std::size_t p = 0; p < path.size(); p += 2) {
      const Arc &arc = arcs_[static_cast<std::size_t>(path[p])];
      if (arc.flow != theta)
        continue;
      std::size_t c = cell(arc.row, arc.col);
      if (leaving < 0 || c < leaving_cell) {
        leaving = path[p];
        leaving_cell = c;
      }
    }

    for (std::size_t p = 0; p < path.size(); ++p) {
      Arc &arc = arcs_[static_cast<std::size_t>(path[p])];
      arc.flow = (p % 2 == 0) ? std::max(0.0, arc.flow - theta) : arc.flow + theta;
    }

    basic_[leaving_cell] = false;
    arcs_[static_cast<std::size_t>(leaving)] = {row, col, theta};
    basic_[cell(row, col)] = true;
  }

  const Matrix &cost_;
  int rows_;
  int cols_;
  double reduced_tol_ = 0.0;
  std::vector<Arc> arcs_;
  std::vector<bool> basic_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<double> potential_;
};

} // namespace

TransportResult ot_solve(const Matrix &cost, const Vector &row_weights, const Vector &col_weights)
{
  if (cost.rows() != row_weights.size() || cost.cols() != col_weights.size())
    throw Error(ErrorCode::DimensionMismatch, "cost shape does not match marginals");
  if (cost.rows() == 0 || cost.cols() == 0)
    throw Error(ErrorCode::DimensionMismatch, "empty transport problem");
  if (!cost.allFinite() || !row_weights.allFinite() || !col_weights.allFinite())
    throw Error(ErrorCode::NonFiniteEntry, "transport inputs must be finite");
  if ((row_weights.array() < 0.0).any() || (col_weights.array() < 0.0).any())
    throw Error(ErrorCode::InvalidArgument, "marginals must be non-negative");
  if (std::abs(row_weights.sum() - col_weights.sum()) > 1e-9)
    throw Error(ErrorCode::InfeasibleMarginals, "marginal totals differ");

  TransportSimplex simplex(cost, row_weights, col_weights);
  TransportResult result;
  result.pivots = simplex.solve();
  result.coupling.plan = simplex.plan();
  result.coupling.row_marginal = row_weights;
  result.coupling.col_marginal = col_weights;
  result.value = result.coupling.plan.cwiseProduct(cost).sum();
  return result;
}

} // namespace augdist
