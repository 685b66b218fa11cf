#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "topots/ingest.hpp"

namespace topots {

enum class LabelRule {
    any_positive,  ///< 1 if any time step is labeled 1, else 0
    majority,      ///< modal label; ties go to the earliest time step's label
};

std::string to_string(LabelRule rule);
LabelRule parse_label_rule(std::string_view text);

struct WindowConfig {
    std::size_t length = 10;  ///< points per window, >= 2
    std::size_t stride = 10;  ///< time steps between window starts, >= 1
    LabelRule label_rule = LabelRule::any_positive;

    void validate() const;
};

struct LabeledWindow {
    std::size_t index = 0;  ///< 0-based window ordinal
    std::vector<Point> points;
    Label label = 0;
    std::pair<double, double> time_range{0.0, 0.0};
};

/// Number of whole windows: floor((len - w) / s) + 1, or 0 when len < w.
std::size_t window_count(std::size_t series_length, const WindowConfig& cfg);

/// Window n covers rows [n*s, n*s + w). A trailing remainder shorter than w is dropped.
std::vector<LabeledWindow> make_windows(const TimeSeries& series, const WindowConfig& cfg);

Label window_label(std::span<const Label> labels, LabelRule rule);

}  // namespace topots
