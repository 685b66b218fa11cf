#include <doctest.h>

#include <cmath>

#include "topots/error.hpp"
#include "topots/ingest.hpp"
#include "topots/persistence.hpp"
#include "topots/pointcloud.hpp"
#include "topots/windowing.hpp"

using namespace topots;

namespace {

LabeledWindow window_of(std::vector<Point> pts) {
    LabeledWindow w;
    w.points = std::move(pts);
    return w;
}

}  // namespace

TEST_SUITE("pointcloud") {

TEST_CASE("symmetry breaking and origin anchor reproduce Y1 and Y2") {
    const auto cfg = AugmentConfig::defaults(5);
    CHECK(cfg.offset == Point{0, 1, 2, 3, 4});
    REQUIRE(cfg.anchors.size() == 1);
    CHECK(cfg.anchors[0] == Point{0, 0, 0, 0, 0});

    const auto y1 = augment(window_of({{0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}}), cfg);
    const auto y2 = augment(window_of({{0, 0, 0, 0, 0}, {0, 1, 0, 0, 0}}), cfg);
    CHECK(y1.points == std::vector<Point>{{0, 1, 2, 3, 4}, {1, 1, 2, 3, 4}, {0, 0, 0, 0, 0}});
    CHECK(y2.points == std::vector<Point>{{0, 1, 2, 3, 4}, {0, 2, 2, 3, 4}, {0, 0, 0, 0, 0}});
    CHECK(std::abs(euclidean_distance(y1.points[1], y1.points[2]) - std::sqrt(31.0)) < 1e-12);
    CHECK(std::abs(euclidean_distance(y2.points[1], y2.points[2]) - std::sqrt(33.0)) < 1e-12);
}

TEST_CASE("X1 and X2 are isometric until augmented") {
    const std::vector<Point> x1{{0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}};
    const std::vector<Point> x2{{0, 0, 0, 0, 0}, {0, 1, 0, 0, 0}};
    CHECK(rips_persistence_dim0(x1).pairs == rips_persistence_dim0(x2).pairs);
    const auto cfg = AugmentConfig::defaults(5);
    const auto e1 = rips_edges(augment(window_of(x1), cfg).points);
    const auto e2 = rips_edges(augment(window_of(x2), cfg).points);
    REQUIRE(e1.size() == 3);
    CHECK(e1.back().length != e2.back().length);
}

TEST_CASE("translation is separated by the anchor") {
    const std::vector<Point> a{{0, 0}, {1, 0}, {0, 1}};
    const std::vector<Point> b{{5, 5}, {6, 5}, {5, 6}};
    CHECK(rips_persistence_dim0(a).pairs == rips_persistence_dim0(b).pairs);
    AugmentConfig cfg{{0, 0}, {{0, 0}}};
    CHECK_FALSE(rips_persistence_dim0(augment(window_of(a), cfg).points).pairs ==
                rips_persistence_dim0(augment(window_of(b), cfg).points).pairs);
}

TEST_CASE("standardized data shifted by v has means 0..d-1 and unit SD") {
    TimeSeries s;
    s.channel_names = {"t", "h", "l", "c", "r"};
    for (int i = 0; i < 50; ++i) {
        s.timestamps.push_back(i);
        s.values.push_back({std::sin(i * 0.3) * 4 + 20, i * 0.1 + 27, (i % 7) * 100.0,
                            std::cos(i * 0.11) * 300 + 700, (i % 3) * 0.001 + 0.004});
        s.labels.push_back(i % 2);
    }
    const SplitSpec all{{{"train", 0, 50}}};
    const auto z =
        apply_standardizer(s, fit_standardizer(s, all, StandardizationMode::fit_on_combined));
    const auto clouds = augment_all(make_windows(z, {10, 10}), AugmentConfig::defaults(5));
    for (std::size_t k = 0; k < 5; ++k) {
        double mean = 0.0;
        double sq = 0.0;
        std::size_t n = 0;
        for (const auto& c : clouds) {
            for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
                mean += c.points[i][k];
                ++n;
            }
        }
        mean /= static_cast<double>(n);
        for (const auto& c : clouds) {
            for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
                sq += (c.points[i][k] - mean) * (c.points[i][k] - mean);
            }
        }
        CHECK(mean == doctest::Approx(static_cast<double>(k)).epsilon(1e-12));
        CHECK(std::sqrt(sq / static_cast<double>(n)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("no anchors, several anchors and dimension checks") {
    const auto w = window_of({{1, 2}, {3, 4}});
    const auto none = augment(w, AugmentConfig{{0, 0}, {}});
    CHECK(none.points.size() == 2);
    const auto many = augment(w, AugmentConfig{{1, 1}, {{0, 0}, {9, 9}}});
    CHECK(many.points == std::vector<Point>{{2, 3}, {4, 5}, {0, 0}, {9, 9}});
    CHECK_THROWS_AS(augment(w, AugmentConfig{{0, 0, 0}, {}}), Error);
    CHECK_THROWS_AS(augment(w, AugmentConfig{{0, 0}, {{0, 0, 0}}}), Error);
    CHECK(default_offset(3) == Point{0, 1, 2});
}

TEST_CASE("augment keeps window identity") {
    LabeledWindow w = window_of({{1, 1}, {2, 2}});
    w.index = 7;
    w.label = 1;
    const auto c = augment(w, AugmentConfig::defaults(2));
    CHECK(c.source_window == 7);
    CHECK(c.label == 1);
}

}
