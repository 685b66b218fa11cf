#include "topots/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "topots/error.hpp"
#include "topots/text_io.hpp"

namespace topots {

void TimeSeries::validate() const {
    if (channel_names.empty()) {
        throw_data("time series has zero feature channels");
    }
    if (values.size() != timestamps.size() || labels.size() != timestamps.size()) {
        throw_data("time series row counts disagree: " + std::to_string(timestamps.size()) +
                   " timestamps, " + std::to_string(values.size()) + " value rows, " +
                   std::to_string(labels.size()) + " labels");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != channel_names.size()) {
            throw_data("row " + std::to_string(i) + " has " + std::to_string(values[i].size()) +
                       " values, expected " + std::to_string(channel_names.size()));
        }
        for (double v : values[i]) {
            if (!std::isfinite(v)) {
                throw_data("row " + std::to_string(i) + " contains a non-finite value");
            }
        }
        if (!std::isfinite(timestamps[i])) {
            throw_data("row " + std::to_string(i) + " has a non-finite timestamp");
        }
        if (i > 0 && !(timestamps[i] > timestamps[i - 1])) {
            throw_data("timestamps not strictly increasing at row " + std::to_string(i));
        }
    }
}

TimeSeries TimeSeries::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > size()) {
        throw_usage("slice [" + std::to_string(begin) + ", " + std::to_string(end) +
                    ") out of bounds for series of length " + std::to_string(size()));
    }
    TimeSeries out;
    out.channel_names = channel_names;
    out.timestamps.assign(timestamps.begin() + static_cast<std::ptrdiff_t>(begin),
                          timestamps.begin() + static_cast<std::ptrdiff_t>(end));
    out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(begin),
                      values.begin() + static_cast<std::ptrdiff_t>(end));
    out.labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(begin),
                      labels.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

void SplitSpec::validate(std::size_t series_length) const {
    if (ranges.empty()) {
        throw_usage("split specification is empty");
    }
    std::set<std::string> names;
    for (const auto& r : ranges) {
        if (r.name.empty()) {
            throw_usage("split range with empty name");
        }
        if (!names.insert(r.name).second) {
            throw_usage("duplicate split name '" + r.name + "'");
        }
        if (r.begin >= r.end) {
            throw_usage("split '" + r.name + "' is empty");
        }
        if (r.end > series_length) {
            throw_usage("split '" + r.name + "' ends at row " + std::to_string(r.end) +
                        " beyond series length " + std::to_string(series_length));
        }
    }
    for (std::size_t a = 0; a < ranges.size(); ++a) {
        for (std::size_t b = a + 1; b < ranges.size(); ++b) {
            if (ranges[a].begin < ranges[b].end && ranges[b].begin < ranges[a].end) {
                throw_usage("splits '" + ranges[a].name + "' and '" + ranges[b].name +
                            "' overlap");
            }
        }
    }
}

const SplitRange& SplitSpec::find(std::string_view name) const {
    for (const auto& r : ranges) {
        if (r.name == name) {
            return r;
        }
    }
    throw_usage("unknown split '" + std::string(name) + "'");
}

std::string to_string(StandardizationMode mode) {
    return mode == StandardizationMode::fit_on_train ? "fit_on_train" : "fit_on_combined";
}

StandardizationMode parse_standardization_mode(std::string_view text) {
    if (text == "fit_on_combined") {
        return StandardizationMode::fit_on_combined;
    }
    if (text == "fit_on_train") {
        return StandardizationMode::fit_on_train;
    }
    throw_usage("unknown standardization mode '" + std::string(text) + "'");
}

namespace {

bool read_fixed_int(std::string_view s, std::size_t pos, std::size_t width, int& out) {
    if (pos + width > s.size()) {
        return false;
    }
    int v = 0;
    for (std::size_t i = pos; i < pos + width; ++i) {
        if (s[i] < '0' || s[i] > '9') {
            return false;
        }
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

std::optional<double> parse_iso_datetime(std::string_view s) {
    // YYYY-MM-DD[ T]HH:MM[:SS[.fff]]
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    if (s.size() < 16 || !read_fixed_int(s, 0, 4, year) || s[4] != '-' ||
        !read_fixed_int(s, 5, 2, month) || s[7] != '-' || !read_fixed_int(s, 8, 2, day) ||
        (s[10] != ' ' && s[10] != 'T') || !read_fixed_int(s, 11, 2, hour) || s[13] != ':' ||
        !read_fixed_int(s, 14, 2, minute)) {
        return std::nullopt;
    }
    double fraction = 0.0;
    std::size_t pos = 16;
    if (pos < s.size()) {
        if (s[pos] != ':' || !read_fixed_int(s, pos + 1, 2, second)) {
            return std::nullopt;
        }
        pos += 3;
        if (pos < s.size()) {
            if (s[pos] != '.') {
                return std::nullopt;
            }
            auto frac = text::parse_double("0" + std::string(s.substr(pos)));
            if (!frac) {
                return std::nullopt;
            }
            fraction = *frac;
        }
    }
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                             std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) {
        return std::nullopt;
    }
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second +
           fraction;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                         std::string_view source) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw_data(std::string(source) + ": column '" + name + "' not found in header");
    }
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

double parse_timestamp(std::string_view text) {
    if (auto v = text::parse_double(text)) {
        return *v;
    }
    if (auto v = parse_iso_datetime(text::trim(text))) {
        return *v;
    }
    throw_data("unparseable timestamp '" + std::string(text) + "'");
}

TimeSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    if (!std::filesystem::exists(path)) {
        throw_data("missing file: " + path.string());
    }
    return parse_csv(text::read_file(path), schema, path.string());
}

TimeSeries parse_csv(std::string_view text_in, const CsvSchema& schema, std::string_view source) {
    if (schema.feature_columns.empty()) {
        throw_data(std::string(source) + ": schema has zero feature columns");
    }
    if (schema.timestamp_column.empty() || schema.label_column.empty()) {
        throw_data(std::string(source) + ": schema must name timestamp and label columns");
    }
    std::istringstream in{std::string(text_in)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!text::trim(line).empty()) {
            header = text::split_csv_line(line, schema.delimiter);
            break;
        }
    }
    if (header.empty()) {
        throw_data(std::string(source) + ": empty file (header row required)");
    }
    const std::size_t ts_col = column_index(header, schema.timestamp_column, source);
    const std::size_t label_col = column_index(header, schema.label_column, source);
    std::vector<std::size_t> feature_cols;
    for (const auto& name : schema.feature_columns) {
        feature_cols.push_back(column_index(header, name, source));
    }

    TimeSeries series;
    series.channel_names = schema.feature_columns;
    auto row_error = [&](const std::string& what) {
        throw_data(std::string(source) + ": row " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        const auto fields = text::split_csv_line(line, schema.delimiter);
        if (fields.size() != header.size()) {
            row_error("expected " + std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
        }
        double ts = 0.0;
        try {
            ts = parse_timestamp(fields[ts_col]);
        } catch (const Error&) {
            row_error("unparseable timestamp '" + fields[ts_col] + "'");
        }
        auto label = text::parse_int(fields[label_col]);
        if (!label) {
            row_error("label '" + fields[label_col] + "' is not an integer");
        }
        Point point;
        point.reserve(feature_cols.size());
        for (std::size_t k = 0; k < feature_cols.size(); ++k) {
            auto v = text::parse_double(fields[feature_cols[k]]);
            if (!v) {
                row_error("column '" + schema.feature_columns[k] + "' has non-numeric value '" +
                          fields[feature_cols[k]] + "'");
            }
            point.push_back(*v);
        }
        if (!series.timestamps.empty() && !(ts > series.timestamps.back())) {
            row_error("non-monotone timestamp '" + fields[ts_col] + "'");
        }
        series.timestamps.push_back(ts);
        series.values.push_back(std::move(point));
        series.labels.push_back(static_cast<Label>(*label));
    }
    if (series.size() == 0) {
        throw_data(std::string(source) + ": no data rows");
    }
    series.validate();
    return series;
}

std::string series_to_csv(const TimeSeries& series) {
    std::string out = "timestamp,label";
    for (const auto& name : series.channel_names) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += text::format_double(series.timestamps[i]);
        out += ',';
        out += std::to_string(series.labels[i]);
        for (double v : series.values[i]) {
            out += ',';
            out += text::format_double(v);
        }
        out += '\n';
    }
    return out;
}

TimeSeries series_from_csv(std::string_view text_in, std::string_view source) {
    std::istringstream in{std::string(text_in)};
    std::string line;
    if (!std::getline(in, line)) {
        throw_data(std::string(source) + ": empty series file");
    }
    const auto header = text::split_csv_line(line);
    if (header.size() < 3 || header[0] != "timestamp" || header[1] != "label") {
        throw_data(std::string(source) + ": expected header timestamp,label,<channels>");
    }
    CsvSchema schema;
    schema.timestamp_column = "timestamp";
    schema.label_column = "label";
    schema.feature_columns.assign(header.begin() + 2, header.end());
    return parse_csv(text_in, schema, source);
}

StandardizationParams fit_standardizer(const TimeSeries& series, const SplitSpec& split,
                                       StandardizationMode mode, std::string_view train_name) {
    split.validate(series.size());
    std::vector<const SplitRange*> fitted;
    if (mode == StandardizationMode::fit_on_train) {
        fitted.push_back(&split.find(train_name));
    } else {
        for (const auto& r : split.ranges) {
            fitted.push_back(&r);
        }
    }
    const std::size_t d = series.dimension();
    std::size_t count = 0;
    std::vector<double> sum(d, 0.0);
    for (const auto* r : fitted) {
        for (std::size_t i = r->begin; i < r->end; ++i) {
            for (std::size_t k = 0; k < d; ++k) {
                sum[k] += series.values[i][k];
            }
        }
        count += r->size();
    }
    if (count == 0) {
        throw_data("standardization selection is empty");
    }
    StandardizationParams params;
    params.mode = mode;
    params.means.resize(d);
    params.standard_deviations.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        params.means[k] = sum[k] / static_cast<double>(count);
    }
    // Two-pass population variance.
    std::vector<double> sq(d, 0.0);
    for (const auto* r : fitted) {
        for (std::size_t i = r->begin; i < r->end; ++i) {
            for (std::size_t k = 0; k < d; ++k) {
                const double c = series.values[i][k] - params.means[k];
                sq[k] += c * c;
            }
        }
    }
    for (std::size_t k = 0; k < d; ++k) {
        const double sd = std::sqrt(sq[k] / static_cast<double>(count));
        if (!(sd > 0.0)) {
            throw_data("channel '" + series.channel_names[k] +
                       "' has zero variance over the fitted rows");
        }
        params.standard_deviations[k] = sd;
    }
    return params;
}

TimeSeries apply_standardizer(const TimeSeries& series, const StandardizationParams& params) {
    const std::size_t d = series.dimension();
    if (params.means.size() != d || params.standard_deviations.size() != d) {
        throw_usage("standardizer has dimension " + std::to_string(params.means.size()) +
                    " but series has " + std::to_string(d) + " channels");
    }
    TimeSeries out = series;
    for (auto& row : out.values) {
        for (std::size_t k = 0; k < d; ++k) {
            row[k] = (row[k] - params.means[k]) / params.standard_deviations[k];
        }
    }
    return out;
}

}  // namespace topots
