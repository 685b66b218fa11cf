#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace topots {

using Point = std::vector<double>;
using Label = int;

/// Labeled multivariate series: one row of `dimension()` channels per time index.
struct TimeSeries {
    std::vector<double> timestamps;
    std::vector<Point> values;
    std::vector<Label> labels;
    std::vector<std::string> channel_names;

    std::size_t size() const { return timestamps.size(); }
    std::size_t dimension() const { return channel_names.size(); }

    /// Throws a data error if any invariant is violated.
    void validate() const;

    /// Rows [begin, end) as a new series.
    TimeSeries slice(std::size_t begin, std::size_t end) const;
};

/// Column mapping for CSV ingestion.
struct CsvSchema {
    std::string timestamp_column;
    std::vector<std::string> feature_columns;
    std::string label_column;
    char delimiter = ',';
};

/// Half-open row range [begin, end).
struct SplitRange {
    std::string name;
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
};

struct SplitSpec {
    std::vector<SplitRange> ranges;

    /// Ranges must be nonempty, in bounds, uniquely named and pairwise disjoint.
    void validate(std::size_t series_length) const;
    const SplitRange& find(std::string_view name) const;
};

enum class StandardizationMode { fit_on_combined, fit_on_train };

struct StandardizationParams {
    std::vector<double> means;
    std::vector<double> standard_deviations;
    StandardizationMode mode = StandardizationMode::fit_on_combined;
};

std::string to_string(StandardizationMode mode);
StandardizationMode parse_standardization_mode(std::string_view text);

/// Accepts a plain number or an ISO-8601 "YYYY-MM-DD[ T]HH:MM[:SS]" stamp (UTC seconds).
double parse_timestamp(std::string_view text);

TimeSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Same as load_csv on in-memory text; `source` names the input in error messages.
TimeSeries parse_csv(std::string_view text, const CsvSchema& schema,
                     std::string_view source = "<memory>");

/// Normalized series CSV: timestamp,label,<channels...>
std::string series_to_csv(const TimeSeries& series);
TimeSeries series_from_csv(std::string_view text, std::string_view source = "<memory>");

/// Population statistics over the fitted rows: every range for fit_on_combined,
/// only the range named `train_name` for fit_on_train.
StandardizationParams fit_standardizer(const TimeSeries& series, const SplitSpec& split,
                                       StandardizationMode mode,
                                       std::string_view train_name = "train");

TimeSeries apply_standardizer(const TimeSeries& series, const StandardizationParams& params);

}  // namespace topots
