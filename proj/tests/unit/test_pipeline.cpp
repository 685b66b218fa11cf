#include <doctest.h>

#include "oracles.hpp"
#include "topots/cli.hpp"
#include "topots/error.hpp"
#include "topots/pipeline.hpp"
#include "topots/text_io.hpp"

using namespace topots;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

PipelineConfig synthetic_config(const fs::path& data) {
    PipelineConfig cfg;
    cfg.run_id = "synthetic";
    cfg.data_path = data;
    cfg.schema = {"timestamp", {"x0", "x1", "x2"}, "label", ','};
    cfg.splits = {{"train", 0, 1000}, {"test", 1000, 2000}};
    cfg.experiments = {{"train", "test"}};
    return cfg;
}

fs::path write_synthetic(const oracle::TempDir& dir, std::uint64_t seed = 7) {
    const auto path = dir / "synthetic.csv";
    text::write_file(path, series_to_csv(make_synthetic_series(200, 10, 3, seed)));
    return path;
}

std::map<std::string, std::string> statuses(const json& provenance) {
    std::map<std::string, std::string> out;
    for (const auto& s : provenance["stages"]) {
        out[s["stage"].get<std::string>() + "/" + s["scope"].get<std::string>()] =
            s["status"].get<std::string>();
    }
    return out;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("synthetic two-class series separates with defaults") {
    oracle::TempDir dir;
    const auto cfg = synthetic_config(write_synthetic(dir));
    const auto result = run_pipeline(cfg, {dir / "runs", false, 0});
    REQUIRE(result.experiments.size() == 1);
    const auto& r = result.experiments[0];
    CHECK(r.train_windows == 100);
    CHECK(r.test_windows == 100);
    CHECK(result.k == 50);
    CHECK(r.report.accuracy.value() >= 0.95);
    CHECK(fs::exists(result.run_dir / "report.json"));
    CHECK(fs::exists(result.run_dir / "report.txt"));
}

TEST_CASE("fresh, repeated and k-only runs") {
    oracle::TempDir dir;
    auto cfg = synthetic_config(write_synthetic(dir));
    const PipelineOptions opts{dir / "runs", false, 2};

    const auto first = run_pipeline(cfg, opts);
    for (const auto& [name, status] : statuses(describe_run(opts.cache_root, "synthetic"))) {
        CHECK_MESSAGE(status == "computed", name);
    }

    const auto second = run_pipeline(cfg, opts);
    for (const auto& [name, status] : statuses(describe_run(opts.cache_root, "synthetic"))) {
        CHECK_MESSAGE(status == "cached", name);
    }
    CHECK(first.report_json == second.report_json);

    cfg.k = 9;
    const auto third = run_pipeline(cfg, opts);
    const auto st = statuses(describe_run(opts.cache_root, "synthetic"));
    CHECK(st.at("ingest/") == "cached");
    CHECK(st.at("clouds/train__test") == "cached");
    CHECK(st.at("diagrams/train__test") == "cached");
    CHECK(st.at("distances/train__test") == "cached");
    CHECK(st.at("classify/train__test") == "computed");
    CHECK(third.k == 9);
}

TEST_CASE("cached and recomputed outputs are byte-identical") {
    oracle::TempDir dir;
    const auto cfg = synthetic_config(write_synthetic(dir));
    const auto cached = run_pipeline(cfg, {dir / "a", false, 1});
    const auto again = run_pipeline(cfg, {dir / "a", false, 4});
    const auto fresh = run_pipeline(cfg, {dir / "a", true, 4});
    CHECK(cached.report_json == again.report_json);
    CHECK(cached.report_json == fresh.report_json);
    for (const auto& s : fresh.stages) CHECK_FALSE(s.cached);
}

TEST_CASE("changing the window invalidates clouds and everything after") {
    oracle::TempDir dir;
    auto cfg = synthetic_config(write_synthetic(dir));
    const PipelineOptions opts{dir / "runs", false, 0};
    run_pipeline(cfg, opts);
    cfg.window = {5, 5, LabelRule::any_positive};
    cfg.k = 20;
    const auto r = run_pipeline(cfg, opts);
    const auto st = statuses(describe_run(opts.cache_root, "synthetic"));
    CHECK(st.at("ingest/") == "cached");
    CHECK(st.at("clouds/train__test") == "computed");
    CHECK(st.at("distances/train__test") == "computed");
    CHECK(r.experiments[0].train_windows == 200);
}

TEST_CASE("k selection picks the best accuracy on the selection split") {
    oracle::TempDir dir;
    auto cfg = synthetic_config(write_synthetic(dir, 3));
    cfg.splits = {{"train", 0, 1000}, {"val", 1000, 1500}, {"test", 1500, 2000}};
    cfg.k.reset();
    cfg.k_selection = KSelection{"val", {1, 5, 75}};
    const auto r = run_pipeline(cfg, {dir / "runs", false, 0});
    REQUIRE(r.sweep.size() == 3);
    double best = 0;
    for (const auto& row : r.sweep) best = std::max(best, row.report.accuracy.value());
    std::size_t first_best = 0;
    for (const auto& row : r.sweep) {
        if (row.report.accuracy.value() == best) {
            first_best = row.k;
            break;
        }
    }
    CHECK(r.k == first_best);
    const auto report = json::parse(r.report_json);
    CHECK(report["k_selection"]["table"].size() == 3);
}

TEST_CASE("empty data file fails in the ingest stage") {
    oracle::TempDir dir;
    text::write_file(dir / "empty.csv", "");
    const auto cfg = synthetic_config(dir / "empty.csv");
    try {
        run_pipeline(cfg, {dir / "runs", false, 0});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::data);
        CHECK(std::string(e.what()).find("ingest") != std::string::npos);
    }
}

TEST_CASE("describe_run of unknown run") {
    oracle::TempDir dir;
    CHECK_THROWS_AS(describe_run(dir.path(), "nope"), Error);
}

TEST_CASE("config json parsing and defaults") {
    const json j = json::parse(R"({
        "run_id": "occ",
        "data": {"path": "data.csv", "timestamp": "date",
                 "features": ["Temperature", "Humidity"], "label": "Occupancy"},
        "splits": [{"name": "test2", "start": 0, "end": 10},
                   {"name": "train", "start": 10, "end": 50},
                   {"name": "test1", "start": 50, "end": 60}],
        "augment": {"offset": "auto", "anchors": "origin"},
        "knn": {"k": "auto", "selection": {"split": "test1", "ks": [1, 3]}}
    })");
    const auto cfg = pipeline_config_from_json(j, "/base");
    CHECK(cfg.data_path == fs::path("/base/data.csv"));
    REQUIRE(cfg.experiments.size() == 1);
    CHECK(cfg.experiments[0].test == "test2");
    CHECK_FALSE(cfg.k.has_value());
    CHECK(cfg.window.length == 10);
    CHECK(cfg.augment.resolve(2).offset == Point{0, 1});

    const auto round = pipeline_config_from_json(pipeline_config_to_json(cfg));
    CHECK(pipeline_config_to_json(round) == pipeline_config_to_json(cfg));

    json bad = j;
    bad["window"] = {{"length", 1}};
    CHECK_THROWS_AS(pipeline_config_from_json(bad), Error);
    bad = j;
    bad.erase("data");
    CHECK_THROWS_AS(pipeline_config_from_json(bad), Error);
    bad = j;
    bad["augment"]["anchors"] = 3;
    CHECK_THROWS_AS(pipeline_config_from_json(bad), Error);
}

TEST_CASE("synthetic generator is seeded and balanced") {
    const auto a = make_synthetic_series(20, 5, 2, 42);
    const auto b = make_synthetic_series(20, 5, 2, 42);
    const auto c = make_synthetic_series(20, 5, 2, 43);
    CHECK(a.values == b.values);
    CHECK_FALSE(a.values == c.values);
    int ones = 0;
    for (std::size_t w = 0; w < 20; ++w) ones += a.labels[w * 5];
    CHECK(ones == 10);
}

}
