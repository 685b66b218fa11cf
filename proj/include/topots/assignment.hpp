#pragma once

#include <cstddef>
#include <vector>

namespace topots {

/// Dense square cost matrix, row-major.
class CostMatrix {
public:
    explicit CostMatrix(std::size_t n, double fill = 0.0) : n_(n), cells_(n * n, fill) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t r, std::size_t c) { return cells_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return cells_[r * n_ + c]; }

private:
    std::size_t n_;
    std::vector<double> cells_;
};

struct Assignment {
    std::vector<std::size_t> row_to_col;
    double total_cost = 0.0;  ///< sum of the selected entries
};

/// Minimum-cost perfect assignment (Hungarian method with potentials, O(n^3)).
/// Costs must be finite.
Assignment solve_assignment(const CostMatrix& cost);

}  // namespace topots
