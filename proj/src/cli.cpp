#include "topots/cli.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "topots/classify.hpp"
#include "topots/content_hash.hpp"
#include "topots/distance.hpp"
#include "topots/error.hpp"
#include "topots/persistence.hpp"
#include "topots/pipeline.hpp"
#include "topots/plot.hpp"
#include "topots/pointcloud.hpp"
#include "topots/text_io.hpp"
#include "topots/windowing.hpp"

namespace topots {

namespace fs = std::filesystem;
using nlohmann::json;

TimeSeries make_synthetic_series(std::size_t windows, std::size_t window, std::size_t d,
                                 std::uint64_t seed, double quiet_sigma, double loud_sigma) {
    if (windows == 0 || window == 0 || d == 0) {
        throw_usage("synthetic series needs positive window count, window length and dimension");
    }
    std::mt19937_64 rng(seed);
    std::vector<Label> classes(windows);
    for (std::size_t i = 0; i < windows; ++i) {
        classes[i] = i < windows / 2 ? 0 : 1;
    }
    std::shuffle(classes.begin(), classes.end(), rng);
    std::normal_distribution<double> noise(0.0, 1.0);
    TimeSeries s;
    for (std::size_t k = 0; k < d; ++k) {
        s.channel_names.push_back("x" + std::to_string(k));
    }
    for (std::size_t w = 0; w < windows; ++w) {
        const double sigma = classes[w] == 0 ? quiet_sigma : loud_sigma;
        for (std::size_t t = 0; t < window; ++t) {
            Point p(d);
            for (auto& x : p) {
                x = sigma * noise(rng);
            }
            s.timestamps.push_back(static_cast<double>(s.timestamps.size()));
            s.values.push_back(std::move(p));
            s.labels.push_back(classes[w]);
        }
    }
    s.validate();
    return s;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(text::trim(item));
    }
    return out;
}

Point parse_point_list(const std::string& s) {
    Point p;
    for (const auto& item : split_list(s)) {
        auto v = text::parse_double(item);
        if (!v) {
            throw_usage("invalid number '" + item + "' in list '" + s + "'");
        }
        p.push_back(*v);
    }
    if (p.empty()) {
        throw_usage("empty coordinate list");
    }
    return p;
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(s)) {
        auto v = text::parse_int(item);
        if (!v || *v < 1) {
            throw_usage("invalid positive integer '" + item + "'");
        }
        out.push_back(static_cast<std::size_t>(*v));
    }
    return out;
}

SplitRange parse_split(const std::string& s) {
    // name:start:end
    const auto first = s.find(':');
    const auto second = s.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw_usage("split must be name:start:end, got '" + s + "'");
    }
    auto begin = text::parse_int(s.substr(first + 1, second - first - 1));
    auto end = text::parse_int(s.substr(second + 1));
    if (!begin || !end || *begin < 0 || *end < 0) {
        throw_usage("split must be name:start:end, got '" + s + "'");
    }
    return {s.substr(0, first), static_cast<std::size_t>(*begin), static_cast<std::size_t>(*end)};
}

/// Applies --offset / --anchor values to an AugmentSpec.
void apply_augment_flags(AugmentSpec& spec, const std::optional<std::string>& offset,
                         const std::vector<std::string>& anchors) {
    if (offset) {
        if (*offset == "auto") {
            spec.offset.reset();
        } else {
            spec.offset = parse_point_list(*offset);
        }
    }
    if (!anchors.empty()) {
        spec.anchor_points.clear();
        if (anchors.size() == 1 && anchors[0] == "origin") {
            spec.anchor_mode = AugmentSpec::Anchors::origin;
        } else if (anchors.size() == 1 && anchors[0] == "none") {
            spec.anchor_mode = AugmentSpec::Anchors::none;
        } else {
            spec.anchor_mode = AugmentSpec::Anchors::explicit_points;
            for (const auto& a : anchors) {
                if (a == "origin" || a == "none") {
                    throw_usage("'" + a + "' cannot be combined with explicit anchors");
                }
                spec.anchor_points.push_back(parse_point_list(a));
            }
        }
    }
}

fs::path sidecar_path(const fs::path& matrix_path) {
    auto p = matrix_path;
    p.replace_extension(".json");
    return p;
}

DistanceMatrix load_matrix_with_labels(const fs::path& path) {
    auto m = matrix_from_csv(text::read_file(path), path.string());
    const auto sidecar = sidecar_path(path);
    if (!fs::exists(sidecar)) {
        throw_data("missing matrix sidecar " + sidecar.string());
    }
    apply_sidecar_labels(m, text::read_file(sidecar));
    return m;
}

void emit(const std::string& content, const std::optional<fs::path>& out_path, std::ostream& out) {
    if (out_path) {
        text::write_file(*out_path, content);
    } else {
        out << content;
    }
}

struct Flags {
    // shared
    std::optional<std::string> config;
    std::optional<std::size_t> window;
    std::optional<std::size_t> stride;
    std::optional<std::string> offset;
    std::vector<std::string> anchors;
    std::optional<int> dimension;
    std::optional<double> p;
    std::optional<std::size_t> k;
    std::optional<std::string> label_rule;
    bool no_cache = false;
    std::uint64_t seed = 0;
    std::optional<std::string> out;
    unsigned threads = 0;
    // ingest
    std::optional<std::string> data;
    std::optional<std::string> timestamp;
    std::optional<std::string> features;
    std::optional<std::string> label;
    std::string delimiter = ",";
    std::string standardize = "none";
    std::vector<std::string> splits;
    std::string train_name = "train";
    // windows
    std::optional<std::string> series;
    std::optional<std::string> range;
    // diagrams
    std::optional<std::string> clouds;
    std::string essential = "dropped";
    double maxscale = 0.0;
    // distmat
    std::optional<std::string> test;
    std::optional<std::string> train;
    // classify / sweep
    std::optional<std::string> matrix;
    std::string tie_break = "nearest_neighbor_label";
    std::string ks = "10,20,30,40,50,60,70,80,90,100";
    // run / describe
    std::optional<std::string> run_id;
    // plot
    std::optional<std::string> diagram;
    std::optional<std::size_t> plot_window;
    std::string title;
    // synth
    std::size_t synth_windows = 100;
    std::size_t synth_length = 10;
    std::size_t synth_dim = 3;
};

int cmd_ingest(const Flags& f, std::ostream& out) {
    CsvSchema schema;
    fs::path data_path;
    std::vector<SplitRange> ranges;
    for (const auto& s : f.splits) {
        ranges.push_back(parse_split(s));
    }
    if (f.config) {
        const auto cfg = load_pipeline_config(*f.config);
        schema = cfg.schema;
        data_path = cfg.data_path;
        if (ranges.empty()) {
            ranges = cfg.splits;
        }
    }
    if (f.data) {
        data_path = *f.data;
    }
    if (f.timestamp) {
        schema.timestamp_column = *f.timestamp;
    }
    if (f.features) {
        schema.feature_columns = split_list(*f.features);
    }
    if (f.label) {
        schema.label_column = *f.label;
    }
    if (f.delimiter.size() != 1) {
        throw_usage("--delimiter must be a single character");
    }
    if (!f.config || f.delimiter != ",") {
        schema.delimiter = f.delimiter[0];
    }
    if (data_path.empty()) {
        throw_usage("ingest needs --data or --config");
    }
    auto series = load_csv(data_path, schema);
    if (f.standardize != "none") {
        const auto mode = parse_standardization_mode(f.standardize);
        SplitSpec split{ranges.empty() ? std::vector<SplitRange>{{f.train_name, 0, series.size()}}
                                       : ranges};
        const auto params = fit_standardizer(series, split, mode, f.train_name);
        series = apply_standardizer(series, params);
        if (f.out) {
            const json pj = {{"means", params.means},
                             {"standard_deviations", params.standard_deviations},
                             {"mode", to_string(params.mode)}};
            fs::path pp = *f.out;
            pp.replace_extension(".standardizer.json");
            text::write_file(pp, pj.dump(2) + "\n");
        }
    }
    emit(series_to_csv(series), f.out ? std::optional<fs::path>(*f.out) : std::nullopt, out);
    return 0;
}

int cmd_windows(const Flags& f, std::ostream& out) {
    if (!f.series) {
        throw_usage("windows needs --series");
    }
    auto series = series_from_csv(text::read_file(*f.series), *f.series);
    if (f.range) {
        const auto r = parse_split("range:" + *f.range);
        SplitSpec{{r}}.validate(series.size());
        series = series.slice(r.begin, r.end);
    }
    WindowConfig wc;
    wc.length = f.window.value_or(wc.length);
    wc.stride = f.stride.value_or(wc.length);
    wc.label_rule = parse_label_rule(f.label_rule.value_or("any_positive"));
    AugmentSpec spec;
    apply_augment_flags(spec, f.offset, f.anchors);
    const auto clouds =
        augment_all(make_windows(series, wc), spec.resolve(series.dimension()));
    emit(clouds_to_csv(clouds), f.out ? std::optional<fs::path>(*f.out) : std::nullopt, out);
    return 0;
}

int cmd_diagrams(const Flags& f, std::ostream& out) {
    if (!f.clouds) {
        throw_usage("diagrams needs --clouds");
    }
    PersistenceOptions opts;
    opts.max_dimension = f.dimension.value_or(0);
    opts.essential = parse_essential_policy(f.essential);
    opts.maxscale = f.maxscale;
    const auto clouds = clouds_from_csv(text::read_file(*f.clouds), *f.clouds);
    const auto set = compute_diagram_set(clouds, opts, f.threads);
    emit(diagram_set_to_csv(set), f.out ? std::optional<fs::path>(*f.out) : std::nullopt, out);
    return 0;
}

int cmd_distmat(const Flags& f, std::ostream& out) {
    if (!f.test || !f.train || !f.out) {
        throw_usage("distmat needs --test, --train and --out");
    }
    WassersteinConfig wc;
    wc.p = f.p.value_or(1.0);
    wc.dimension = f.dimension.value_or(0);
    const std::string test_text = text::read_file(*f.test);
    const std::string train_text = text::read_file(*f.train);
    const auto m = distance_matrix(diagram_set_from_csv(test_text, *f.test),
                                   diagram_set_from_csv(train_text, *f.train), wc, f.threads);
    text::write_file(*f.out, matrix_to_csv(m));
    text::write_file(sidecar_path(*f.out),
                     matrix_sidecar_json(m, wc, sha256_hex(test_text), sha256_hex(train_text)));
    out << "wrote " << m.rows() << " x " << m.cols() << " matrix to " << *f.out << "\n";
    return 0;
}

int cmd_classify(const Flags& f, std::ostream& out, std::ostream& err) {
    if (!f.matrix) {
        throw_usage("classify needs --matrix");
    }
    const auto m = load_matrix_with_labels(*f.matrix);
    const KnnConfig kc{f.k.value_or(50), parse_vote_tie_break(f.tie_break)};
    const auto predictions = knn_predict_all(m, m.col_labels, kc);
    const auto report = evaluate(predictions, m.row_labels);
    for (const auto& w : report.warnings) {
        err << "warning: " << w << "\n";
    }
    json j = report_to_json(report);
    j["k"] = kc.k;
    j["tie_break"] = to_string(kc.tie_break);
    if (f.out) {
        text::write_file(*f.out, j.dump(2) + "\n");
    }
    const NamedReport named{"test", &report};
    out << render_report_table(std::span(&named, 1), 4);
    return 0;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
    if (!f.matrix) {
        throw_usage("sweep-k needs --matrix");
    }
    const auto m = load_matrix_with_labels(*f.matrix);
    const auto ks = parse_size_list(f.ks);
    const auto rows = sweep_k(m, m.col_labels, m.row_labels, ks, parse_vote_tie_break(f.tie_break));
    if (f.out) {
        text::write_file(*f.out, sweep_to_csv(rows));
    }
    out << render_sweep_table(rows);
    return 0;
}

int cmd_run(const Flags& f, std::ostream& out, std::ostream& err) {
    if (!f.config) {
        throw_usage("run needs --config");
    }
    auto cfg = load_pipeline_config(*f.config);
    if (f.run_id) {
        cfg.run_id = *f.run_id;
    }
    if (f.window) {
        cfg.window.length = *f.window;
        if (!f.stride) {
            cfg.window.stride = *f.window;
        }
    }
    if (f.stride) {
        cfg.window.stride = *f.stride;
    }
    if (f.label_rule) {
        cfg.window.label_rule = parse_label_rule(*f.label_rule);
    }
    apply_augment_flags(cfg.augment, f.offset, f.anchors);
    if (f.dimension) {
        cfg.wasserstein.dimension = *f.dimension;
        cfg.persistence.max_dimension = std::max(cfg.persistence.max_dimension, *f.dimension);
    }
    if (f.maxscale > 0.0) {
        cfg.persistence.maxscale = f.maxscale;
    }
    if (f.p) {
        cfg.wasserstein.p = *f.p;
    }
    if (f.k) {
        cfg.k = *f.k;
    }
    PipelineOptions opts;
    opts.no_cache = f.no_cache;
    opts.threads = f.threads;
    if (f.out) {
        opts.cache_root = *f.out;
    }
    const auto result = run_pipeline(cfg, opts);
    for (const auto& e : result.experiments) {
        for (const auto& w : e.report.warnings) {
            err << "warning [" << e.experiment.name() << "]: " << w << "\n";
        }
    }
    out << text::read_file(result.run_dir / "report.txt");
    out << "report: " << (result.run_dir / "report.json").generic_string() << "\n";
    return 0;
}

int cmd_plot(const Flags& f, std::ostream& out) {
    if (!f.diagram || !f.out) {
        throw_usage("plot-diagram needs --diagram and --out");
    }
    const std::string content = text::read_file(*f.diagram);
    std::vector<PersistenceDiagram> diagrams;
    if (content.rfind("window,", 0) == 0) {
        const auto set = diagram_set_from_csv(content, *f.diagram);
        const std::size_t wanted = f.plot_window.value_or(set.empty() ? 0 : set.front().window);
        auto it = std::find_if(set.begin(), set.end(),
                               [&](const WindowDiagrams& w) { return w.window == wanted; });
        if (it == set.end()) {
            throw_data("window " + std::to_string(wanted) + " not found in " + *f.diagram);
        }
        diagrams = it->diagrams;
    } else {
        diagrams = diagram_from_csv(content, std::nullopt, *f.diagram);
    }
    const auto csv = plot_diagram(diagrams, *f.out, f.title);
    out << "wrote " << *f.out << " and " << csv.generic_string() << "\n";
    return 0;
}

int cmd_describe(const Flags& f, std::ostream& out) {
    if (!f.run_id) {
        throw_usage("describe needs --run-id");
    }
    out << describe_run(f.out ? fs::path(*f.out) : fs::path{}, *f.run_id).dump(2) << "\n";
    return 0;
}

int cmd_synth(const Flags& f, std::ostream& out) {
    const auto s =
        make_synthetic_series(f.synth_windows, f.synth_length, f.synth_dim, f.seed);
    emit(series_to_csv(s), f.out ? std::optional<fs::path>(*f.out) : std::nullopt, out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Topological k-NN classification of multivariate time-series windows", "topots"};
    app.require_subcommand(1);
    Flags f;

    auto add_out = [&](CLI::App* c, const std::string& help) {
        c->add_option("--out", f.out, help);
    };
    auto add_threads = [&](CLI::App* c) {
        c->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    };
    auto add_augment = [&](CLI::App* c) {
        c->add_option("--offset", f.offset, "Symmetry-breaking offset: comma list or 'auto'");
        c->add_option("--anchor", f.anchors,
                      "Anchor point: comma list (repeatable), 'origin' or 'none'")
            ->take_all();
    };

    auto* ingest = app.add_subcommand("ingest", "Load and validate a CSV series, optionally standardize");
    ingest->add_option("--config", f.config, "Pipeline config supplying schema and splits");
    ingest->add_option("--data", f.data, "Input CSV");
    ingest->add_option("--timestamp", f.timestamp, "Timestamp column");
    ingest->add_option("--features", f.features, "Feature columns, comma separated");
    ingest->add_option("--label", f.label, "Label column");
    ingest->add_option("--delimiter", f.delimiter, "Field delimiter");
    ingest->add_option("--standardize", f.standardize, "none | fit_on_combined | fit_on_train");
    ingest->add_option("--split", f.splits, "Split name:start:end (repeatable)");
    ingest->add_option("--train-split", f.train_name, "Split fitted by fit_on_train");
    add_out(ingest, "Normalized series CSV (default stdout)");

    auto* windows = app.add_subcommand("windows", "Cut windows and build augmented point clouds");
    windows->add_option("--series", f.series, "Normalized series CSV")->required();
    windows->add_option("--range", f.range, "Row range start:end");
    windows->add_option("-w,--window", f.window, "Window length");
    windows->add_option("-s,--stride", f.stride, "Stride (default: window length)");
    windows->add_option("--label-rule", f.label_rule, "any_positive | majority");
    add_augment(windows);
    add_out(windows, "Clouds CSV (default stdout)");

    auto* diagrams = app.add_subcommand("diagrams", "Rips persistence diagrams of every cloud");
    diagrams->add_option("--clouds", f.clouds, "Clouds CSV")->required();
    diagrams->add_option("--dimension", f.dimension, "Highest homology dimension (0 or 1)");
    diagrams->add_option("--essential", f.essential, "dropped | capped");
    diagrams->add_option("--maxscale", f.maxscale, "Filtration cap");
    add_threads(diagrams);
    add_out(diagrams, "Diagram set CSV (default stdout)");

    auto* distmat = app.add_subcommand("distmat", "Test x train Wasserstein distance matrix");
    distmat->add_option("--test", f.test, "Test diagram set")->required();
    distmat->add_option("--train", f.train, "Train diagram set")->required();
    distmat->add_option("--p", f.p, "Wasserstein order");
    distmat->add_option("--dimension", f.dimension, "Homology dimension compared");
    add_threads(distmat);
    add_out(distmat, "Matrix CSV (a .json sidecar is written next to it)");

    auto* classify = app.add_subcommand("classify", "k-NN over a distance matrix");
    classify->add_option("--matrix", f.matrix, "Matrix CSV with sidecar")->required();
    classify->add_option("--k", f.k, "Neighbors");
    classify->add_option("--tie-break", f.tie_break, "nearest_neighbor_label | lowest_class_id");
    add_out(classify, "Report JSON");

    auto* sweep = app.add_subcommand("sweep-k", "Evaluate several k on one matrix");
    sweep->add_option("--matrix", f.matrix, "Matrix CSV with sidecar")->required();
    sweep->add_option("--ks", f.ks, "Comma-separated k values");
    sweep->add_option("--tie-break", f.tie_break, "nearest_neighbor_label | lowest_class_id");
    add_out(sweep, "Sweep CSV");

    auto* run = app.add_subcommand("run", "Run the whole pipeline from a JSON config");
    run->add_option("--config", f.config, "Pipeline config JSON")->required();
    run->add_option("--run-id", f.run_id, "Override run id");
    run->add_option("-w,--window", f.window, "Window length");
    run->add_option("-s,--stride", f.stride, "Stride");
    run->add_option("--label-rule", f.label_rule, "any_positive | majority");
    add_augment(run);
    run->add_option("--dimension", f.dimension, "Homology dimension compared");
    run->add_option("--maxscale", f.maxscale, "Filtration cap");
    run->add_option("--p", f.p, "Wasserstein order");
    run->add_option("--k", f.k, "Neighbors");
    run->add_flag("--no-cache", f.no_cache, "Recompute every stage");
    run->add_option("--seed", f.seed, "Recorded seed (the pipeline itself is deterministic)");
    add_threads(run);
    add_out(run, "Cache root (default $TOPOTS_CACHE_DIR or ./runs)");

    auto* plot = app.add_subcommand("plot-diagram", "SVG scatter of a diagram plus CSV twin");
    plot->add_option("--diagram", f.diagram, "Diagram CSV or diagram set CSV")->required();
    plot->add_option("--window", f.plot_window, "Window to plot from a diagram set");
    plot->add_option("--title", f.title, "Plot title");
    add_out(plot, "Output SVG path");

    auto* describe = app.add_subcommand("describe", "Show provenance of a pipeline run");
    describe->add_option("--run-id", f.run_id, "Run id")->required();
    add_out(describe, "Cache root");

    auto* synth = app.add_subcommand("synth", "Generate the two-class synthetic series");
    synth->add_option("--seed", f.seed, "RNG seed");
    synth->add_option("--windows", f.synth_windows, "Number of windows");
    synth->add_option("-w,--window", f.synth_length, "Rows per window");
    synth->add_option("--dims", f.synth_dim, "Channels");
    add_out(synth, "Series CSV (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "topots: usage error: " << e.what() << "\n";
        err << app.help();
        return static_cast<int>(ErrorKind::usage);
    }

    try {
        if (ingest->parsed()) return cmd_ingest(f, out);
        if (windows->parsed()) return cmd_windows(f, out);
        if (diagrams->parsed()) return cmd_diagrams(f, out);
        if (distmat->parsed()) return cmd_distmat(f, out);
        if (classify->parsed()) return cmd_classify(f, out, err);
        if (sweep->parsed()) return cmd_sweep(f, out);
        if (run->parsed()) return cmd_run(f, out, err);
        if (plot->parsed()) return cmd_plot(f, out);
        if (describe->parsed()) return cmd_describe(f, out);
        if (synth->parsed()) return cmd_synth(f, out);
    } catch (const Error& e) {
        err << "topots: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        err << "topots: data error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::data);
    }
    err << app.help();
    return static_cast<int>(ErrorKind::usage);
}

}  // namespace topots
