#include "adaptsel/assignment.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

namespace adaptsel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double solve_assignment(const double* cost, int n, std::vector<int>* col_of_row) {
  if (n <= 0) throw std::invalid_argument("solve_assignment: n must be positive");

  std::vector<double> u(n, 0.0), v(n, 0.0);
  std::vector<int> match_row(n, -1);  // column -> row
  std::vector<int> match_col(n, -1);  // row -> column

  // Warm start: column-minimum potentials, then greedy zero-reduced-cost
  // matches. Keeps the reduced costs non-negative and usually matches most
  // rows before any augmentation is needed.
  for (int j = 0; j < n; ++j) {
    double m = kInf;
    for (int i = 0; i < n; ++i) m = std::min(m, cost[i * n + j]);
    v[j] = m;
  }
  for (int i = 0; i < n; ++i) {
    double m = kInf;
    int arg = -1;
    for (int j = 0; j < n; ++j) {
      const double rc = cost[i * n + j] - v[j];
      if (rc < m) {
        m = rc;
        arg = j;
      }
    }
    u[i] = m;
    if (match_row[arg] == -1) {
      match_row[arg] = i;
      match_col[i] = arg;
    }
  }

  std::vector<double> dist(n);
  std::vector<int> pred(n);  // previous column on the alternating path
  std::vector<int> cols(n);  // [0, lo) popped, [lo, n) frontier

  for (int r = 0; r < n; ++r) {
    if (match_col[r] != -1) continue;

    for (int j = 0; j < n; ++j) {
      dist[j] = cost[r * n + j] - u[r] - v[j];
      pred[j] = -1;
      cols[j] = j;
    }

    int lo = 0;
    int sink = -1;
    double min_val = 0.0;
    while (sink == -1) {
      int best = lo;
      for (int k = lo + 1; k < n; ++k)
        if (dist[cols[k]] < dist[cols[best]]) best = k;
      std::swap(cols[lo], cols[best]);
      const int j = cols[lo++];
      min_val = dist[j];
      if (match_row[j] == -1) {
        sink = j;
        break;
      }
      const int i = match_row[j];
      const double base = min_val - u[i];
      for (int k = lo; k < n; ++k) {
        const int j2 = cols[k];
        const double nd = base + cost[i * n + j2] - v[j2];
        if (nd < dist[j2]) {
          dist[j2] = nd;
          pred[j2] = j;
        }
      }
    }

    // Dual update over the popped region keeps reduced costs non-negative
    // and zero along the augmenting path.
    u[r] += min_val;
    for (int k = 0; k < lo - 1; ++k) {
      const int j = cols[k];
      u[match_row[j]] += min_val - dist[j];
      v[j] += dist[j] - min_val;
    }

    // Flip matched edges along the path ending at the free column.
    int j = sink;
    while (true) {
      const int pj = pred[j];
      const int i = (pj == -1) ? r : match_row[pj];
      match_row[j] = i;
      match_col[i] = j;
      if (pj == -1) break;
      j = pj;
    }
  }

  double total = 0.0;
  for (int j = 0; j < n; ++j) total += cost[match_row[j] * n + j];
  if (col_of_row) *col_of_row = match_col;
  return total;
}

double solve_uniform_transport(const double* cost, int n, int m) {
  if (n <= 0 || m <= 0)
    throw std::invalid_argument("solve_uniform_transport: sizes must be positive");

  // Successive shortest paths with potentials on the bipartite transport
  // graph. Supplies are integeriezd as n sources x m units and m sinks x n
  // units so mass bookkeeping is exact. Nodes: [0, n) sources, [n, n+m) sinks.
  const int nodes = n + m;
  std::vector<long long> supply(n, m), demand(m, n);
  std::vector<std::vector<long long>> flow(n, std::vector<long long>(m, 0));
  std::vector<double> pot(nodes, 0.0), dist(nodes);
  std::vector<int> pred_node(nodes);
  std::vector<char> done(nodes);

  // Initial potentials so every forward reduced cost is non-negative.
  for (int j = 0; j < m; ++j) {
    double mn = kInf;
    for (int i = 0; i < n; ++i) mn = std::min(mn, cost[i * m + j]);
    pot[n + j] = mn;
  }

  long long remaining = static_cast<long long>(n) * m;
  double total_cost = 0.0;

  while (remaining > 0) {
    // Dense Dijkstra from all sources with remaining supply.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    std::fill(pred_node.begin(), pred_node.end(), -1);
    for (int i = 0; i < n; ++i)
      if (supply[i] > 0) dist[i] = 0.0;

    for (int it = 0; it < nodes; ++it) {
      int best = -1;
      for (int x = 0; x < nodes; ++x)
        if (!done[x] && dist[x] < kInf && (best == -1 || dist[x] < dist[best]))
          best = x;
      if (best == -1) break;
      done[best] = 1;
      if (best < n) {
        const int i = best;
        for (int j = 0; j < m; ++j) {
          const double rc = cost[i * m + j] - pot[i] + pot[n + j];
          const double nd = dist[i] + rc;
          if (nd < dist[n + j]) {
            dist[n + j] = nd;
            pred_node[n + j] = i;
          }
        }
      } else {
        const int j = best - n;
        for (int i = 0; i < n; ++i) {
          if (flow[i][j] <= 0) continue;  // backward arc requires flow
          const double rc = -(cost[i * m + j] - pot[i] + pot[n + j]);
          const double nd = dist[best] + rc;
          if (nd < dist[i]) {
            dist[i] = nd;
            pred_node[i] = best;
          }
        }
      }
    }

    // Cheapest reachable sink with unmet demand.
    int sink = -1;
    for (int j = 0; j < m; ++j)
      if (demand[j] > 0 && dist[n + j] < kInf &&
          (sink == -1 || dist[n + j] < dist[n + sink]))
        sink = j;
    if (sink == -1)
      throw std::logic_error("solve_uniform_transport: no augmenting path");

    // Bottleneck: sink demand, root supply, and every backward arc's flow.
    long long push = demand[sink];
    {
      int x = n + sink;
      while (pred_node[x] != -1) {
        const int p = pred_node[x];
        if (x >= n && p < n) {
          // forward arc p -> x; only the path root is supply-limited
          if (pred_node[p] == -1) push = std::min(push, supply[p]);
        } else if (x < n && p >= n) {
          push = std::min(push, flow[x][p - n]);  // backward arc
        }
        x = p;
      }
    }

    // Apply flow along the path.
    {
      int x = n + sink;
      while (pred_node[x] != -1) {
        const int p = pred_node[x];
        if (x >= n && p < n) {
          flow[p][x - n] += push;
          total_cost += push * cost[p * m + (x - n)];
        } else if (x < n && p >= n) {
          flow[x][p - n] -= push;
          total_cost -= push * cost[x * m + (p - n)];
        }
        x = p;
      }
      supply[x] -= push;  // x is the root source
    }
    demand[sink] -= push;
    remaining -= push;

    // Potential update for the next round.
    for (int x = 0; x < nodes; ++x)
      if (dist[x] < kInf) pot[x] += dist[x] - dist[n + sink];
  }

  return total_cost / (static_cast<double>(n) * static_cast<double>(m));
}

}  // namespace adaptsel
