#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topots/persistence.hpp"

namespace topots {

struct WassersteinConfig {
    double p = 1.0;     ///< order, >= 1
    int dimension = 0;  ///< homology dimension compared

    void validate() const;
};

/// p-Wasserstein distance with L-infinity ground metric. Each diagram is
/// augmented with the diagonal projections of the other's points; any two
/// diagonal slots match at zero cost. Solved exactly as an assignment problem.
double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                   const WassersteinConfig& cfg = {});

/// Rectangular test x train matrix, row-major.
struct DistanceMatrix {
    std::vector<std::size_t> row_windows;  ///< test window indices
    std::vector<std::size_t> col_windows;  ///< train window indices
    std::vector<Label> row_labels;
    std::vector<Label> col_labels;
    std::vector<double> values;

    std::size_t rows() const { return row_windows.size(); }
    std::size_t cols() const { return col_windows.size(); }
    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
    std::span<const double> row(std::size_t r) const {
        return std::span(values).subspan(r * cols(), cols());
    }
};

/// Only test x train entries are computed. Entries are independent, so the
/// result is identical for any thread count.
DistanceMatrix distance_matrix(std::span<const WindowDiagrams> test,
                               std::span<const WindowDiagrams> train,
                               const WassersteinConfig& cfg, unsigned threads = 0);

/// CSV: header `window,<train window indices...>`, then one row per test window.
std::string matrix_to_csv(const DistanceMatrix& m);
DistanceMatrix matrix_from_csv(std::string_view text, std::string_view source = "<memory>");

/// JSON sidecar: config, content hashes of both diagram sets, window labels.
std::string matrix_sidecar_json(const DistanceMatrix& m, const WassersteinConfig& cfg,
                                std::string_view test_set_hash,
                                std::string_view train_set_hash);

/// Restores row/column labels from a sidecar written by matrix_sidecar_json.
void apply_sidecar_labels(DistanceMatrix& m, std::string_view sidecar_json);

}  // namespace topots
