#include <doctest.h>

#include <algorithm>

#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "topots/cli.hpp"
#include "topots/text_io.hpp"

using namespace topots;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("no arguments prints usage and fails") {
    const auto r = run({});
    CHECK(r.code == 1);
    CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("unknown flag is a usage error") {
    const auto r = run({"classify", "--matrix", "m.csv", "--bogus"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("topots: usage error:", 0) == 0);
}

TEST_CASE("data and usage errors use their exit codes and a single line") {
    oracle::TempDir dir;
    auto r = run({"windows", "--series", (dir / "missing.csv").string()});
    CHECK(r.code == 2);
    CHECK(lines(r.err) == 1);
    CHECK(r.err.rfind("topots: data error:", 0) == 0);

    text::write_file(dir / "s.csv", series_to_csv(make_synthetic_series(4, 5, 2, 1)));
    r = run({"windows", "--series", (dir / "s.csv").string(), "--window", "1"});
    CHECK(r.code == 1);
    CHECK(lines(r.err) == 1);
}

TEST_CASE("stage commands chain through files") {
    oracle::TempDir dir;
    const auto p = [&](const char* name) { return (dir / name).string(); };
    REQUIRE(run({"synth", "--seed", "5", "--windows", "40", "--out", p("raw.csv")}).code == 0);
    REQUIRE(run({"ingest", "--data", p("raw.csv"), "--timestamp", "timestamp", "--features",
                 "x0,x1,x2", "--label", "label", "--standardize", "fit_on_combined", "--out",
                 p("series.csv")})
                .code == 0);
    CHECK(fs::exists(dir / "series.standardizer.json"));
    REQUIRE(run({"windows", "--series", p("series.csv"), "--range", "0:200", "--out", p("train_clouds.csv")}).code == 0);
    REQUIRE(run({"windows", "--series", p("series.csv"), "--range", "200:400", "--offset", "auto",
                 "--anchor", "origin", "--out", p("test_clouds.csv")})
                .code == 0);
    REQUIRE(run({"diagrams", "--clouds", p("train_clouds.csv"), "--out", p("train_d.csv")}).code == 0);
    REQUIRE(run({"diagrams", "--clouds", p("test_clouds.csv"), "--out", p("test_d.csv"), "--threads", "2"}).code == 0);
    REQUIRE(run({"distmat", "--test", p("test_d.csv"), "--train", p("train_d.csv"), "--out", p("m.csv")}).code == 0);
    CHECK(fs::exists(dir / "m.json"));
    const auto c = run({"classify", "--matrix", p("m.csv"), "--k", "5", "--out", p("report.json")});
    REQUIRE(c.code == 0);
    CHECK(c.out.find("Accuracy") != std::string::npos);
    CHECK(fs::exists(dir / "report.json"));
    const auto s = run({"sweep-k", "--matrix", p("m.csv"), "--ks", "1,3,5", "--out", p("sweep.csv")});
    REQUIRE(s.code == 0);
    CHECK(lines(text::read_file(dir / "sweep.csv")) == 4);
    const auto plot = run({"plot-diagram", "--diagram", p("test_d.csv"), "--window", "2", "--out", p("w2.svg")});
    CHECK(plot.code == 0);
    CHECK(fs::exists(dir / "w2.csv"));
    CHECK(run({"classify", "--matrix", p("m.csv"), "--k", "500"}).code == 1);
}

TEST_CASE("explicit anchors and offsets") {
    oracle::TempDir dir;
    text::write_file(dir / "s.csv", series_to_csv(make_synthetic_series(2, 3, 2, 1)));
    const auto r = run({"windows", "--series", (dir / "s.csv").string(), "-w", "3", "--offset",
                        "10,20", "--anchor", "1,1", "--anchor", "2,2"});
    REQUIRE(r.code == 0);
    // header + 2 windows x (3 points + 2 anchors)
    CHECK(lines(r.out) == 11);
    CHECK(r.out.find(",1,1\n") != std::string::npos);
    CHECK(run({"windows", "--series", (dir / "s.csv").string(), "-w", "3", "--anchor", "1,1,1"}).code == 1);
}

TEST_CASE("run, describe and overrides") {
    oracle::TempDir dir;
    text::write_file(dir / "data.csv", series_to_csv(make_synthetic_series(200, 10, 3, 7)));
    text::write_file(dir / "cfg.json", R"({
        "run_id": "syn",
        "data": {"path": "data.csv", "timestamp": "timestamp", "features": ["x0","x1","x2"], "label": "label"},
        "splits": [{"name": "train", "start": 0, "end": 1000}, {"name": "test", "start": 1000, "end": 2000}]
    })");
    const auto runs = (dir / "runs").string();
    const auto r = run({"run", "--config", (dir / "cfg.json").string(), "--out", runs});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "runs" / "syn" / "report.json"));
    const auto d = run({"describe", "--run-id", "syn", "--out", runs});
    CHECK(d.code == 0);
    CHECK(d.out.find("\"computed\"") != std::string::npos);
    CHECK(run({"describe", "--run-id", "other", "--out", runs}).code == 2);

    const auto o = run({"run", "--config", (dir / "cfg.json").string(), "--out", runs, "--k", "7",
                        "--run-id", "syn7", "--no-cache", "--seed", "3"});
    REQUIRE(o.code == 0);
    const auto report = nlohmann::json::parse(text::read_file(dir / "runs" / "syn7" / "report.json"));
    CHECK(report["k"] == 7);

    const auto dim1 = run({"run", "--config", (dir / "cfg.json").string(), "--out", runs,
                           "--dimension", "1", "--run-id", "syn1"});
    CHECK(dim1.code == 1);
    const auto dim1_ok = run({"run", "--config", (dir / "cfg.json").string(), "--out", runs,
                              "--dimension", "1", "--maxscale", "6", "--run-id", "syn1"});
    CHECK(dim1_ok.code == 0);
}

}
