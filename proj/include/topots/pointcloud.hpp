#pragma once

#include <cstddef>
#include <vector>

#include "topots/ingest.hpp"
#include "topots/windowing.hpp"

namespace topots {

/// Symmetry-breaking offset plus fixed anchor points.
struct AugmentConfig {
    Point offset;
    std::vector<Point> anchors;

    /// Defaults: offset (0, 1, ..., d-1) and a single anchor at the origin.
    static AugmentConfig defaults(std::size_t d);

    void validate(std::size_t d) const;
};

struct AugmentedCloud {
    std::vector<Point> points;  ///< translated window points, then anchors
    std::size_t source_window = 0;
    Label label = 0;
};

/// (0, 1, ..., d-1)
Point default_offset(std::size_t d);

/// Translates every window point by the offset and appends the anchors.
AugmentedCloud augment(const LabeledWindow& window, const AugmentConfig& cfg);

std::vector<AugmentedCloud> augment_all(const std::vector<LabeledWindow>& windows,
                                        const AugmentConfig& cfg);

double euclidean_distance(const Point& a, const Point& b);

}  // namespace topots
