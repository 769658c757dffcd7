#pragma once

#include <cstddef>
#include <vector>

namespace adaptsel {

// Minimum-cost perfect matching on a dense n x n cost matrix (row-major).
// Shortest-augmenting-path with dual potentials; no epsilon comparisons, so
// it is safe on arbitrary double costs. Optionally reports the matching
// (col_of_row[i] = column assigned to row i). O(n^3).
double solve_assignment(const double* cost, int n,
                        std::vector<int>* col_of_row = nullptr);

// Minimum-cost transport between uniform discrete measures supported on n
// sources and m sinks with dense costs (row-major n x m). Masses are scaled
// to integers (each source supplies m units, each sink demands n units), so
// the result is exact up to float summation. Returns the average cost per
// unit mass, i.e. the transport cost of two uniform empirical measures.
double solve_uniform_transport(const double* cost, int n, int m);

}  // namespace adaptsel
