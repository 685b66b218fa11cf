#include "topots/windowing.hpp"

#include <map>

#include "topots/error.hpp"

namespace topots {

std::string to_string(LabelRule rule) {
    return rule == LabelRule::majority ? "majority" : "any_positive";
}

LabelRule parse_label_rule(std::string_view text) {
    if (text == "any_positive") {
        return LabelRule::any_positive;
    }
    if (text == "majority") {
        return LabelRule::majority;
    }
    throw_usage("unknown label rule '" + std::string(text) + "'");
}

void WindowConfig::validate() const {
    if (length < 2) {
        throw_usage("window length must be at least 2 (got " + std::to_string(length) + ")");
    }
    if (stride < 1) {
        throw_usage("stride must be at least 1");
    }
}

std::size_t window_count(std::size_t series_length, const WindowConfig& cfg) {
    cfg.validate();
    if (series_length < cfg.length) {
        return 0;
    }
    return (series_length - cfg.length) / cfg.stride + 1;
}

std::vector<LabeledWindow> make_windows(const TimeSeries& series, const WindowConfig& cfg) {
    cfg.validate();
    if (series.size() < cfg.length) {
        throw_data("series of length " + std::to_string(series.size()) +
                   " is shorter than the window length " + std::to_string(cfg.length));
    }
    const std::size_t count = window_count(series.size(), cfg);
    std::vector<LabeledWindow> windows;
    windows.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        const std::size_t first = n * cfg.stride;
        const std::size_t last = first + cfg.length;
        LabeledWindow w;
        w.index = n;
        w.points.assign(series.values.begin() + static_cast<std::ptrdiff_t>(first),
                        series.values.begin() + static_cast<std::ptrdiff_t>(last));
        w.label = window_label(std::span(series.labels).subspan(first, cfg.length),
                               cfg.label_rule);
        w.time_range = {series.timestamps[first], series.timestamps[last - 1]};
        windows.push_back(std::move(w));
    }
    return windows;
}

Label window_label(std::span<const Label> labels, LabelRule rule) {
    if (labels.empty()) {
        throw_usage("window_label needs at least one label");
    }
    if (rule == LabelRule::any_positive) {
        for (Label l : labels) {
            if (l == 1) {
                return 1;
            }
        }
        return 0;
    }
    std::map<Label, std::size_t> counts;
    std::size_t best = 0;
    for (Label l : labels) {
        best = std::max(best, ++counts[l]);
    }
    // Earliest time step whose label attains the modal count.
    for (Label l : labels) {
        if (counts[l] == best) {
            return l;
        }
    }
    return labels.front();
}

}  // namespace topots
