#include "topots/pointcloud.hpp"

#include <cmath>

#include "topots/error.hpp"

namespace topots {

Point default_offset(std::size_t d) {
    if (d == 0) {
        throw_usage("offset dimension must be positive");
    }
    Point v(d);
    for (std::size_t i = 0; i < d; ++i) {
        v[i] = static_cast<double>(i);
    }
    return v;
}

AugmentConfig AugmentConfig::defaults(std::size_t d) {
    return AugmentConfig{default_offset(d), {Point(d, 0.0)}};
}

void AugmentConfig::validate(std::size_t d) const {
    if (offset.size() != d) {
        throw_usage("offset has " + std::to_string(offset.size()) + " components, expected " +
                    std::to_string(d));
    }
    for (const auto& a : anchors) {
        if (a.size() != d) {
            throw_usage("anchor has " + std::to_string(a.size()) + " components, expected " +
                        std::to_string(d));
        }
    }
}

AugmentedCloud augment(const LabeledWindow& window, const AugmentConfig& cfg) {
    if (window.points.empty()) {
        throw_data("window " + std::to_string(window.index) + " has no points");
    }
    const std::size_t d = window.points.front().size();
    cfg.validate(d);
    AugmentedCloud cloud;
    cloud.source_window = window.index;
    cloud.label = window.label;
    cloud.points.reserve(window.points.size() + cfg.anchors.size());
    for (const auto& x : window.points) {
        if (x.size() != d) {
            throw_usage("window " + std::to_string(window.index) + " mixes point dimensions");
        }
        Point y(d);
        for (std::size_t k = 0; k < d; ++k) {
            y[k] = x[k] + cfg.offset[k];
        }
        cloud.points.push_back(std::move(y));
    }
    for (const auto& a : cfg.anchors) {
        cloud.points.push_back(a);
    }
    return cloud;
}

std::vector<AugmentedCloud> augment_all(const std::vector<LabeledWindow>& windows,
                                        const AugmentConfig& cfg) {
    std::vector<AugmentedCloud> clouds;
    clouds.reserve(windows.size());
    for (const auto& w : windows) {
        clouds.push_back(augment(w, cfg));
    }
    return clouds;
}

double euclidean_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return std::sqrt(s);
}

}  // namespace topots
