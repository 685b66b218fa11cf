#include "topots/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "topots/content_hash.hpp"
#include "topots/error.hpp"
#include "topots/text_io.hpp"

namespace topots {

namespace fs = std::filesystem;
using nlohmann::json;

AugmentConfig AugmentSpec::resolve(std::size_t d) const {
    AugmentConfig cfg;
    cfg.offset = offset ? *offset : default_offset(d);
    switch (anchor_mode) {
        case Anchors::origin:
            cfg.anchors = {Point(d, 0.0)};
            break;
        case Anchors::none:
            break;
        case Anchors::explicit_points:
            cfg.anchors = anchor_points;
            break;
    }
    cfg.validate(d);
    return cfg;
}

void PipelineConfig::validate() const {
    if (run_id.empty() || run_id.find_first_of("/\\") != std::string::npos || run_id == "." ||
        run_id == "..") {
        throw_usage("run_id must be a nonempty name without path separators");
    }
    if (schema.feature_columns.empty()) {
        throw_usage("config names no feature columns");
    }
    if (splits.empty()) {
        throw_usage("config defines no splits");
    }
    SplitSpec spec{splits};
    spec.validate(std::numeric_limits<std::size_t>::max());
    spec.find(train_split);
    if (experiments.empty()) {
        throw_usage("config defines no experiments");
    }
    for (const auto& e : experiments) {
        spec.find(e.train);
        spec.find(e.test);
        if (e.train == e.test) {
            throw_usage("experiment uses split '" + e.train + "' for both train and test");
        }
    }
    window.validate();
    persistence.validate();
    wasserstein.validate();
    if (wasserstein.dimension > persistence.max_dimension) {
        throw_usage("Wasserstein dimension " + std::to_string(wasserstein.dimension) +
                    " exceeds the highest computed homology dimension " +
                    std::to_string(persistence.max_dimension));
    }
    if (k && *k == 0) {
        throw_usage("k must be at least 1");
    }
    if (k_selection) {
        spec.find(k_selection->split);
        if (k_selection->ks.empty()) {
            throw_usage("k selection needs at least one k");
        }
        for (auto kk : k_selection->ks) {
            if (kk == 0) {
                throw_usage("k must be at least 1");
            }
        }
    } else if (!k) {
        throw_usage("k = \"auto\" requires a k selection split");
    }
}

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return fallback;
    }
    return j.at(key).get<T>();
}

Point parse_point(const json& j) {
    if (j.is_string()) {
        Point p;
        std::stringstream ss(j.get<std::string>());
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto v = text::parse_double(item);
            if (!v) {
                throw_usage("invalid coordinate '" + item + "'");
            }
            p.push_back(*v);
        }
        return p;
    }
    return j.get<Point>();
}

}  // namespace

PipelineConfig pipeline_config_from_json(const json& j, const fs::path& base_dir) {
    PipelineConfig cfg;
    try {
        cfg.run_id = get_or<std::string>(j, "run_id", cfg.run_id);
        const auto& data = j.at("data");
        fs::path path = data.at("path").get<std::string>();
        cfg.data_path = path.is_relative() && !base_dir.empty() ? base_dir / path : path;
        cfg.schema.timestamp_column = data.at("timestamp").get<std::string>();
        cfg.schema.feature_columns = data.at("features").get<std::vector<std::string>>();
        cfg.schema.label_column = data.at("label").get<std::string>();
        const auto delim = get_or<std::string>(data, "delimiter", ",");
        if (delim.size() != 1) {
            throw_usage("delimiter must be a single character");
        }
        cfg.schema.delimiter = delim[0];

        for (const auto& s : j.at("splits")) {
            cfg.splits.push_back({s.at("name").get<std::string>(), s.at("start").get<std::size_t>(),
                                  s.at("end").get<std::size_t>()});
        }
        cfg.train_split = get_or<std::string>(j, "train_split", "train");
        cfg.standardization = parse_standardization_mode(
            get_or<std::string>(j, "standardization", "fit_on_combined"));

        const json window = get_or<json>(j, "window", json::object());
        cfg.window.length = get_or<std::size_t>(window, "length", cfg.window.length);
        cfg.window.stride = get_or<std::size_t>(window, "stride", cfg.window.stride);
        cfg.window.label_rule =
            parse_label_rule(get_or<std::string>(window, "label_rule", "any_positive"));

        const json augment = get_or<json>(j, "augment", json::object());
        if (augment.contains("offset") && !(augment["offset"].is_string() &&
                                            augment["offset"].get<std::string>() == "auto")) {
            cfg.augment.offset = parse_point(augment["offset"]);
        }
        if (augment.contains("anchors")) {
            const auto& a = augment["anchors"];
            if (a.is_string() && a.get<std::string>() == "origin") {
                cfg.augment.anchor_mode = AugmentSpec::Anchors::origin;
            } else if (a.is_string() && a.get<std::string>() == "none") {
                cfg.augment.anchor_mode = AugmentSpec::Anchors::none;
            } else if (a.is_array()) {
                cfg.augment.anchor_mode = AugmentSpec::Anchors::explicit_points;
                for (const auto& p : a) {
                    cfg.augment.anchor_points.push_back(parse_point(p));
                }
            } else {
                throw_usage("anchors must be \"origin\", \"none\" or a list of points");
            }
        }

        const json pers = get_or<json>(j, "persistence", json::object());
        cfg.persistence.max_dimension = get_or<int>(pers, "dimension", 0);
        cfg.persistence.essential =
            parse_essential_policy(get_or<std::string>(pers, "essential", "dropped"));
        cfg.persistence.maxscale = get_or<double>(pers, "maxscale", 0.0);

        const json wass = get_or<json>(j, "wasserstein", json::object());
        cfg.wasserstein.p = get_or<double>(wass, "p", 1.0);
        cfg.wasserstein.dimension = get_or<int>(wass, "dimension", 0);

        const json knn = get_or<json>(j, "knn", json::object());
        if (knn.contains("k")) {
            if (knn["k"].is_string() && knn["k"].get<std::string>() == "auto") {
                cfg.k.reset();
            } else {
                cfg.k = knn["k"].get<std::size_t>();
            }
        }
        cfg.tie_break =
            parse_vote_tie_break(get_or<std::string>(knn, "tie_break", "nearest_neighbor_label"));
        if (knn.contains("selection") && !knn["selection"].is_null()) {
            const auto& sel = knn["selection"];
            cfg.k_selection = KSelection{sel.at("split").get<std::string>(),
                                         sel.at("ks").get<std::vector<std::size_t>>()};
        }

        if (j.contains("experiments")) {
            for (const auto& e : j.at("experiments")) {
                cfg.experiments.push_back(
                    {get_or<std::string>(e, "train", cfg.train_split), e.at("test").get<std::string>()});
            }
        } else {
            for (const auto& s : cfg.splits) {
                if (s.name != cfg.train_split &&
                    !(cfg.k_selection && cfg.k_selection->split == s.name)) {
                    cfg.experiments.push_back({cfg.train_split, s.name});
                }
            }
        }
    } catch (const json::exception& e) {
        throw_usage(std::string("invalid pipeline config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    const std::string text_in = text::read_file(path);
    json j;
    try {
        j = json::parse(text_in);
    } catch (const json::exception& e) {
        throw_usage("cannot parse config " + path.string() + ": " + e.what());
    }
    return pipeline_config_from_json(j, path.parent_path());
}

json pipeline_config_to_json(const PipelineConfig& cfg) {
    json j;
    j["run_id"] = cfg.run_id;
    j["data"] = {{"path", cfg.data_path.generic_string()},
                 {"timestamp", cfg.schema.timestamp_column},
                 {"features", cfg.schema.feature_columns},
                 {"label", cfg.schema.label_column},
                 {"delimiter", std::string(1, cfg.schema.delimiter)}};
    json splits = json::array();
    for (const auto& s : cfg.splits) {
        splits.push_back({{"name", s.name}, {"start", s.begin}, {"end", s.end}});
    }
    j["splits"] = splits;
    j["train_split"] = cfg.train_split;
    json experiments = json::array();
    for (const auto& e : cfg.experiments) {
        experiments.push_back({{"train", e.train}, {"test", e.test}});
    }
    j["experiments"] = experiments;
    j["standardization"] = to_string(cfg.standardization);
    j["window"] = {{"length", cfg.window.length},
                   {"stride", cfg.window.stride},
                   {"label_rule", to_string(cfg.window.label_rule)}};
    json augment;
    augment["offset"] = cfg.augment.offset ? json(*cfg.augment.offset) : json("auto");
    switch (cfg.augment.anchor_mode) {
        case AugmentSpec::Anchors::origin:
            augment["anchors"] = "origin";
            break;
        case AugmentSpec::Anchors::none:
            augment["anchors"] = "none";
            break;
        case AugmentSpec::Anchors::explicit_points:
            augment["anchors"] = cfg.augment.anchor_points;
            break;
    }
    j["augment"] = augment;
    j["persistence"] = {{"dimension", cfg.persistence.max_dimension},
                        {"essential", to_string(cfg.persistence.essential)},
                        {"maxscale", cfg.persistence.maxscale}};
    j["wasserstein"] = {{"p", cfg.wasserstein.p}, {"dimension", cfg.wasserstein.dimension}};
    json knn;
    knn["k"] = cfg.k ? json(*cfg.k) : json("auto");
    knn["tie_break"] = to_string(cfg.tie_break);
    knn["selection"] = cfg.k_selection
                           ? json{{"split", cfg.k_selection->split}, {"ks", cfg.k_selection->ks}}
                           : json(nullptr);
    j["knn"] = knn;
    return j;
}

fs::path resolve_cache_root(const fs::path& requested) {
    if (!requested.empty()) {
        return requested;
    }
    if (const char* env = std::getenv("TOPOTS_CACHE_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return "runs";
}

namespace {

using Files = std::map<std::string, std::string>;

class StageRunner {
public:
    StageRunner(fs::path run_dir, bool no_cache, std::vector<StageRecord>& records)
        : run_dir_(std::move(run_dir)), no_cache_(no_cache), records_(records) {}

    Files run(const std::string& stage, const std::string& scope, const std::string& key,
              const std::vector<std::string>& names, const std::function<Files()>& compute) {
        const fs::path dir = run_dir_ / stage / key;
        const fs::path marker = dir / ".complete";
        StageRecord record{stage, scope, key, false, 0.0, {}};
        const auto start = std::chrono::steady_clock::now();
        Files files;
        try {
            const bool hit = !no_cache_ && fs::exists(marker) &&
                             std::all_of(names.begin(), names.end(),
                                         [&](const std::string& n) { return fs::exists(dir / n); });
            if (hit) {
                for (const auto& n : names) {
                    files[n] = text::read_file(dir / n);
                }
                record.cached = true;
            } else {
                files = compute();
                fs::remove(marker);
                for (const auto& n : names) {
                    text::write_file(dir / n, files.at(n));
                }
                text::write_file(marker, key + "\n");
            }
        } catch (const Error& e) {
            throw Error(e.kind(), "stage '" + stage + "'" + (scope.empty() ? "" : " [" + scope + "]") +
                                      ": " + e.what());
        } catch (const fs::filesystem_error& e) {
            throw_data("stage '" + stage + "': " + e.what());
        }
        record.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const auto& n : names) {
            record.artifacts.push_back((dir / n).generic_string());
        }
        records_.push_back(std::move(record));
        return files;
    }

private:
    fs::path run_dir_;
    bool no_cache_;
    std::vector<StageRecord>& records_;
};

/// Re-raises errors raised outside StageRunner with the stage name attached.
template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.kind(), "stage '" + stage + "': " + e.what());
    }
}

std::string predictions_to_csv(const std::vector<std::size_t>& windows,
                               const std::vector<Label>& truths,
                               const std::vector<std::vector<Label>>& predictions,
                               const std::vector<std::string>& columns) {
    std::string out = "window,truth";
    for (const auto& c : columns) {
        out += ',' + c;
    }
    out += '\n';
    for (std::size_t r = 0; r < windows.size(); ++r) {
        out += std::to_string(windows[r]) + ',' + std::to_string(truths[r]);
        for (const auto& column : predictions) {
            out += ',' + std::to_string(column[r]);
        }
        out += '\n';
    }
    return out;
}

/// Returns truths followed by one prediction vector per column.
std::vector<std::vector<Label>> predictions_from_csv(const std::string& text_in,
                                                     std::size_t columns) {
    std::istringstream in(text_in);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<Label>> out(columns + 1);
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) {
            continue;
        }
        const auto f = text::split_csv_line(line);
        if (f.size() != columns + 2) {
            throw_data("corrupt predictions artifact");
        }
        for (std::size_t c = 0; c <= columns; ++c) {
            auto v = text::parse_int(f[c + 1]);
            if (!v) {
                throw_data("corrupt predictions artifact");
            }
            out[c].push_back(static_cast<Label>(*v));
        }
    }
    return out;
}

json split_json(const SplitRange& s) {
    return {{"name", s.name}, {"start", s.begin}, {"end", s.end}};
}

struct ExperimentData {
    Experiment experiment;
    std::string distances_key;
    DistanceMatrix matrix;
};

json stage_record_json(const StageRecord& r) {
    return {{"stage", r.stage},
            {"scope", r.scope},
            {"key", r.key},
            {"status", r.cached ? "cached" : "computed"},
            {"seconds", r.seconds},
            {"artifacts", r.artifacts}};
}

}  // namespace

RunResult run_pipeline(const PipelineConfig& cfg, const PipelineOptions& options) {
    cfg.validate();
    RunResult result;
    result.run_id = cfg.run_id;
    result.run_dir = resolve_cache_root(options.cache_root) / cfg.run_id;
    StageRunner runner(result.run_dir, options.no_cache, result.stages);
    const json cfg_json = pipeline_config_to_json(cfg);

    // Ingest.
    const std::string raw = in_stage("ingest", [&] {
        if (!fs::exists(cfg.data_path)) {
            throw_data("missing file: " + cfg.data_path.string());
        }
        return text::read_file(cfg.data_path);
    });
    const json schema_json = {cfg_json["data"]["timestamp"], cfg_json["data"]["features"],
                              cfg_json["data"]["label"], cfg_json["data"]["delimiter"]};
    const std::string ingest_key =
        ContentHasher().add("ingest").add(sha256_hex(raw)).add(schema_json.dump()).digest();
    const auto ingest_files = runner.run("ingest", "", ingest_key, {"series.csv"}, [&] {
        return Files{{"series.csv",
                      series_to_csv(parse_csv(raw, cfg.schema, cfg.data_path.string()))}};
    });
    const TimeSeries series = in_stage("ingest", [&] {
        auto s = series_from_csv(ingest_files.at("series.csv"), "series.csv");
        SplitSpec{cfg.splits}.validate(s.size());
        return s;
    });
    const std::size_t d = series.dimension();
    const AugmentConfig augment = in_stage("clouds", [&] { return cfg.augment.resolve(d); });
    const SplitSpec all_splits{cfg.splits};

    std::vector<Experiment> needed = cfg.experiments;
    std::optional<Experiment> selection;
    if (cfg.k_selection) {
        selection = Experiment{cfg.train_split, cfg.k_selection->split};
        if (std::none_of(needed.begin(), needed.end(),
                         [&](const Experiment& e) { return e.name() == selection->name(); })) {
            needed.push_back(*selection);
        }
    }

    std::map<std::string, ExperimentData> data;
    for (const auto& e : needed) {
        const SplitRange& train = all_splits.find(e.train);
        const SplitRange& test = all_splits.find(e.test);
        const SplitSpec pair{{train, test}};

        const std::string clouds_key = ContentHasher()
                                           .add("clouds")
                                           .add(ingest_key)
                                           .add(split_json(train).dump())
                                           .add(split_json(test).dump())
                                           .add(cfg_json["standardization"].dump())
                                           .add(cfg_json["window"].dump())
                                           .add(json{{"offset", augment.offset},
                                                     {"anchors", augment.anchors}}
                                                    .dump())
                                           .digest();
        const auto clouds_files = runner.run(
            "clouds", e.name(), clouds_key, {"train.csv", "test.csv", "standardizer.json"}, [&] {
                const auto params =
                    fit_standardizer(series, pair, cfg.standardization, e.train);
                auto clouds_for = [&](const SplitRange& r) {
                    const auto part = apply_standardizer(series.slice(r.begin, r.end), params);
                    return clouds_to_csv(augment_all(make_windows(part, cfg.window), augment));
                };
                const json params_json = {{"means", params.means},
                                          {"standard_deviations", params.standard_deviations},
                                          {"mode", to_string(params.mode)}};
                return Files{{"train.csv", clouds_for(train)},
                             {"test.csv", clouds_for(test)},
                             {"standardizer.json", params_json.dump(2) + "\n"}};
            });

        const std::string diagrams_key = ContentHasher()
                                             .add("diagrams")
                                             .add(clouds_key)
                                             .add(cfg_json["persistence"].dump())
                                             .digest();
        const auto diagram_files =
            runner.run("diagrams", e.name(), diagrams_key, {"train.csv", "test.csv"}, [&] {
                Files out;
                for (const char* name : {"train.csv", "test.csv"}) {
                    const auto clouds = clouds_from_csv(clouds_files.at(name), name);
                    out[name] = diagram_set_to_csv(
                        compute_diagram_set(clouds, cfg.persistence, options.threads));
                }
                return out;
            });

        const std::string distances_key = ContentHasher()
                                              .add("distances")
                                              .add(diagrams_key)
                                              .add(cfg_json["wasserstein"].dump())
                                              .digest();
        const auto distance_files =
            runner.run("distances", e.name(), distances_key, {"matrix.csv", "matrix.json"}, [&] {
                const auto train_set =
                    diagram_set_from_csv(diagram_files.at("train.csv"), "train.csv");
                const auto test_set = diagram_set_from_csv(diagram_files.at("test.csv"), "test.csv");
                const auto m = distance_matrix(test_set, train_set, cfg.wasserstein, options.threads);
                return Files{{"matrix.csv", matrix_to_csv(m)},
                             {"matrix.json",
                              matrix_sidecar_json(m, cfg.wasserstein,
                                                  sha256_hex(diagram_files.at("test.csv")),
                                                  sha256_hex(diagram_files.at("train.csv")))}};
            });
        auto matrix = in_stage("distances", [&] {
            auto m = matrix_from_csv(distance_files.at("matrix.csv"), "matrix.csv");
            apply_sidecar_labels(m, distance_files.at("matrix.json"));
            return m;
        });
        data[e.name()] = ExperimentData{e, distances_key, std::move(matrix)};
    }

    // k selection.
    std::optional<std::size_t> chosen_k = cfg.k;
    if (selection) {
        const auto& sel = data.at(selection->name());
        const auto& ks = cfg.k_selection->ks;
        json ks_json = ks;
        const std::string sweep_key = ContentHasher()
                                          .add("sweep")
                                          .add(sel.distances_key)
                                          .add(ks_json.dump())
                                          .add(to_string(cfg.tie_break))
                                          .digest();
        const auto sweep_files =
            runner.run("sweep", selection->name(), sweep_key, {"predictions.csv"}, [&] {
                std::vector<std::vector<Label>> columns;
                std::vector<std::string> names;
                for (auto k : ks) {
                    columns.push_back(knn_predict_all(sel.matrix, sel.matrix.col_labels,
                                                      KnnConfig{k, cfg.tie_break}));
                    names.push_back("k" + std::to_string(k));
                }
                return Files{{"predictions.csv",
                              predictions_to_csv(sel.matrix.row_windows, sel.matrix.row_labels,
                                                 columns, names)}};
            });
        result.sweep = in_stage("sweep", [&] {
            const auto cols = predictions_from_csv(sweep_files.at("predictions.csv"), ks.size());
            std::vector<SweepRow> rows;
            for (std::size_t i = 0; i < ks.size(); ++i) {
                rows.push_back({ks[i], evaluate(cols[i + 1], cols[0])});
            }
            return rows;
        });
        if (!chosen_k) {
            const SweepRow* best = &result.sweep.front();
            for (const auto& row : result.sweep) {
                if (row.report.accuracy.value() > best->report.accuracy.value()) {
                    best = &row;
                }
            }
            chosen_k = best->k;
        }
    }
    result.k = *chosen_k;

    for (const auto& e : cfg.experiments) {
        const auto& ed = data.at(e.name());
        const std::string classify_key = ContentHasher()
                                             .add("classify")
                                             .add(ed.distances_key)
                                             .add(std::to_string(result.k))
                                             .add(to_string(cfg.tie_break))
                                             .digest();
        const auto files = runner.run("classify", e.name(), classify_key, {"predictions.csv"}, [&] {
            const auto predictions =
                knn_predict_all(ed.matrix, ed.matrix.col_labels, KnnConfig{result.k, cfg.tie_break});
            return Files{{"predictions.csv",
                          predictions_to_csv(ed.matrix.row_windows, ed.matrix.row_labels,
                                             {predictions}, {"prediction"})}};
        });
        ExperimentResult er;
        er.experiment = e;
        er.train_windows = ed.matrix.cols();
        er.test_windows = ed.matrix.rows();
        er.report = in_stage("classify", [&] {
            const auto cols = predictions_from_csv(files.at("predictions.csv"), 1);
            return evaluate(cols[1], cols[0]);
        });
        result.experiments.push_back(std::move(er));
    }

    // Report (deterministic; no timings).
    json report;
    report["run_id"] = cfg.run_id;
    report["config"] = cfg_json;
    report["k"] = result.k;
    if (selection) {
        json table = json::array();
        for (const auto& row : result.sweep) {
            json entry = {{"k", row.k}, {"accuracy", row.report.accuracy.value()}};
            if (row.report.binary) {
                entry["sensitivity"] = row.report.sensitivity.value();
                entry["specificity"] = row.report.specificity.value();
            }
            table.push_back(entry);
        }
        report["k_selection"] = {{"split", cfg.k_selection->split}, {"table", table}};
    } else {
        report["k_selection"] = nullptr;
    }
    json experiments = json::array();
    std::vector<NamedReport> named;
    for (const auto& er : result.experiments) {
        experiments.push_back({{"name", er.experiment.name()},
                               {"train", er.experiment.train},
                               {"test", er.experiment.test},
                               {"train_windows", er.train_windows},
                               {"test_windows", er.test_windows},
                               {"evaluation", report_to_json(er.report)}});
        named.push_back({er.experiment.test, &er.report});
    }
    report["experiments"] = experiments;
    result.report_json = report.dump(2) + "\n";

    std::string table = render_report_table(named, 4);
    if (!result.sweep.empty()) {
        table += "\nk selection on '" + cfg.k_selection->split + "':\n" +
                 render_sweep_table(result.sweep);
    }
    text::write_file(result.run_dir / "report.json", result.report_json);
    text::write_file(result.run_dir / "report.txt", table);

    json provenance;
    provenance["run_id"] = cfg.run_id;
    provenance["config"] = cfg_json;
    json stages = json::array();
    for (const auto& r : result.stages) {
        stages.push_back(stage_record_json(r));
    }
    provenance["stages"] = stages;
    provenance["report_sha256"] = sha256_hex(result.report_json);
    text::write_file(result.run_dir / "provenance.json", provenance.dump(2) + "\n");
    return result;
}

json describe_run(const fs::path& cache_root, const std::string& run_id) {
    const fs::path path = resolve_cache_root(cache_root) / run_id / "provenance.json";
    if (!fs::exists(path)) {
        throw_data("unknown run '" + run_id + "' (no " + path.string() + ")");
    }
    try {
        return json::parse(text::read_file(path));
    } catch (const json::exception& e) {
        throw_data("corrupt provenance record " + path.string() + ": " + e.what());
    }
}

}  // namespace topots
