#include "topots/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "topots/error.hpp"

namespace topots {

Assignment solve_assignment(const CostMatrix& cost) {
    const std::size_t n = cost.size();
    Assignment result;
    result.row_to_col.assign(n, 0);
    if (n == 0) {
        return result;
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (!std::isfinite(cost(r, c))) {
                throw_numerical("assignment cost matrix contains a non-finite entry");
            }
        }
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based shortest augmenting path formulation; column 0 is a virtual root.
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0);  // match[col] = row (1-based), 0 = free
    std::vector<std::size_t> way(n + 1, 0);
    std::vector<double> min_slack(n + 1);
    std::vector<char> used(n + 1);
    for (std::size_t row = 1; row <= n; ++row) {
        match[0] = row;
        std::size_t col0 = 0;
        std::fill(min_slack.begin(), min_slack.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[col0] = 1;
            const std::size_t row0 = match[col0];
            double delta = inf;
            std::size_t col1 = 0;
            for (std::size_t col = 1; col <= n; ++col) {
                if (used[col]) {
                    continue;
                }
                const double slack = cost(row0 - 1, col - 1) - u[row0] - v[col];
                if (slack < min_slack[col]) {
                    min_slack[col] = slack;
                    way[col] = col0;
                }
                if (min_slack[col] < delta) {
                    delta = min_slack[col];
                    col1 = col;
                }
            }
            for (std::size_t col = 0; col <= n; ++col) {
                if (used[col]) {
                    u[match[col]] += delta;
                    v[col] -= delta;
                } else {
                    min_slack[col] -= delta;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    for (std::size_t col = 1; col <= n; ++col) {
        result.row_to_col[match[col] - 1] = col - 1;
    }
    for (std::size_t r = 0; r < n; ++r) {
        result.total_cost += cost(r, result.row_to_col[r]);
    }
    return result;
}

}  // namespace topots
