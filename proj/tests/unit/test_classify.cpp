#include <doctest.h>

#include <cmath>
#include <random>

#include "topots/classify.hpp"
#include "topots/error.hpp"

using namespace topots;

namespace {

double round_to(double v, int decimals) {
    const double f = std::pow(10.0, decimals);
    return std::round(v * f) / f;
}

DistanceMatrix matrix(std::vector<std::vector<double>> rows, std::vector<Label> row_labels,
                      std::vector<Label> col_labels) {
    DistanceMatrix m;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        m.row_windows.push_back(r);
        for (double v : rows[r]) m.values.push_back(v);
    }
    for (std::size_t c = 0; c < col_labels.size(); ++c) m.col_windows.push_back(c);
    m.row_labels = std::move(row_labels);
    m.col_labels = std::move(col_labels);
    return m;
}

}  // namespace

TEST_SUITE("classify") {

TEST_CASE("knn examples") {
    const std::vector<double> d{0.5, 0.1, 0.9, 0.2, 0.3};
    const std::vector<Label> y{1, 0, 1, 0, 1};
    CHECK(knn_predict(d, y, {1}) == 0);
    CHECK(knn_predict(d, y, {3}) == 0);
    CHECK(knn_predict(d, y, {5}) == 1);
}

TEST_CASE("equal distances prefer the lower training index") {
    const std::vector<double> d{1.0, 1.0, 1.0};
    CHECK(knn_predict(d, std::vector<Label>{1, 0, 0}, {1}) == 1);
    CHECK(knn_predict(d, std::vector<Label>{0, 1, 1}, {1}) == 0);
}

TEST_CASE("vote ties") {
    // k = 4, two votes each; the nearest neighbor is class 1
    const std::vector<double> d{0.4, 0.1, 0.3, 0.2, 9.0};
    const std::vector<Label> y{0, 1, 0, 1, 0};
    CHECK(knn_predict(d, y, {4, VoteTieBreak::nearest_neighbor_label}) == 1);
    CHECK(knn_predict(d, y, {4, VoteTieBreak::lowest_class_id}) == 0);
    CHECK(parse_vote_tie_break("lowest_class_id") == VoteTieBreak::lowest_class_id);
    CHECK_THROWS_AS(parse_vote_tie_break("random"), Error);
}

TEST_CASE("k validation") {
    const std::vector<double> d{0.1, 0.2};
    const std::vector<Label> y{0, 1};
    CHECK_THROWS_AS(knn_predict(d, y, {0}), Error);
    CHECK_THROWS_AS(knn_predict(d, y, {3}), Error);
    CHECK_THROWS_AS(knn_predict(d, std::vector<Label>{0}, {1}), Error);
}

TEST_CASE("multiclass majority") {
    const std::vector<double> d{1, 2, 3, 4, 5, 6};
    const std::vector<Label> y{2, 3, 3, 5, 3, 2};
    CHECK(knn_predict(d, y, {5}) == 3);
}

TEST_CASE("occupancy test set 2 confusion matrix") {
    const auto r = evaluate_confusion({0, 1}, {{109, 5}, {14, 72}});
    CHECK(r.binary);
    CHECK(r.total() == 200);
    CHECK(r.accuracy.numerator == 181);
    CHECK(r.accuracy.denominator == 200);
    CHECK(round_to(r.accuracy.value(), 2) == 0.91);
    CHECK(round_to(r.sensitivity.value(), 2) == 0.84);
    CHECK(round_to(r.specificity.value(), 2) == 0.96);
    CHECK(round_to(r.metrics_for(0).precision.value(), 2) == 0.89);
    CHECK(round_to(r.metrics_for(1).precision.value(), 2) == 0.94);
    CHECK(r.metrics_for(1).precision.str() == "72/77");
    CHECK(round_to(r.metrics_for(0).f1.value(), 2) == 0.92);
    CHECK(round_to(r.metrics_for(1).f1.value(), 2) == 0.88);
    CHECK(r.warnings.empty());
}

TEST_CASE("activity recognition confusion matrix") {
    const auto r = evaluate_confusion({0, 1}, {{266, 1}, {0, 309}});
    CHECK(round_to(r.accuracy.value(), 4) == 0.9983);
    CHECK(r.sensitivity.value() == 1.0);
    CHECK(round_to(r.specificity.value(), 4) == 0.9963);
    CHECK(r.metrics_for(0).precision.value() == 1.0);
    CHECK(round_to(r.metrics_for(1).precision.value(), 4) == 0.9968);
    CHECK(round_to(r.metrics_for(0).f1.value(), 4) == 0.9981);
    CHECK(round_to(r.metrics_for(1).f1.value(), 4) == 0.9984);
}

TEST_CASE("evaluate from predictions and f1 identity") {
    const std::vector<Label> truth{0, 0, 1, 1, 1, 0, 1};
    const std::vector<Label> pred{0, 1, 1, 0, 1, 0, 1};
    const auto r = evaluate(pred, truth);
    CHECK(r.confusion == std::vector<std::vector<long long>>{{2, 1}, {1, 3}});
    for (Label l : {0, 1}) {
        const auto& m = r.metrics_for(l);
        const double p = m.precision.value();
        const double rec = m.recall.value();
        CHECK(m.f1.value() == doctest::Approx(2 * p * rec / (p + rec)));
    }
    CHECK_THROWS_AS(evaluate(pred, std::vector<Label>{0}), Error);
}

TEST_CASE("no predicted positives gives 0 with a warning") {
    const auto r = evaluate(std::vector<Label>{0, 0, 0}, std::vector<Label>{0, 1, 0});
    CHECK(r.binary);
    CHECK(r.metrics_for(1).precision.value() == 0.0);
    CHECK_FALSE(r.metrics_for(1).precision.defined());
    CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("single-class input still reports both binary classes") {
    const auto r = evaluate(std::vector<Label>{1, 1}, std::vector<Label>{1, 1});
    CHECK(r.classes == std::vector<Label>{0, 1});
    CHECK(r.accuracy.value() == 1.0);
    CHECK(r.sensitivity.value() == 1.0);
    CHECK_FALSE(r.specificity.defined());
}

TEST_CASE("multiclass report is not binary") {
    const auto r = evaluate(std::vector<Label>{0, 2, 1}, std::vector<Label>{0, 2, 2});
    CHECK_FALSE(r.binary);
    CHECK(r.classes == std::vector<Label>{0, 1, 2});
    CHECK(r.accuracy.str() == "2/3");
}

TEST_CASE("report json and table") {
    const auto r = evaluate_confusion({0, 1}, {{109, 5}, {14, 72}});
    const auto j = report_to_json(r);
    CHECK(j["accuracy"]["numerator"] == 181);
    CHECK(j["accuracy"]["denominator"] == 200);
    CHECK(j["confusion"][1][0] == 14);
    const NamedReport named{"Test Set 2", &r};
    const auto table = render_report_table(std::span(&named, 1));
    CHECK(table.find("Accuracy") != std::string::npos);
    CHECK(table.find("Test Set 2") != std::string::npos);
    CHECK(table.find("0.91") != std::string::npos);
    CHECK(table.find("0.94") != std::string::npos);
}

TEST_CASE("sweep over k") {
    const auto m = matrix({{0.1, 0.2, 0.3, 0.4, 0.5}, {0.5, 0.4, 0.3, 0.2, 0.1}}, {0, 1},
                          {0, 0, 1, 1, 1});
    const std::vector<std::size_t> ks{1, 3, 5};
    const auto rows = sweep_k(m, m.col_labels, m.row_labels, ks);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].report.accuracy.value() == 1.0);
    CHECK(rows[1].report.accuracy.value() == 1.0);
    CHECK(rows[2].report.accuracy.value() == 0.5);
    const auto csv = sweep_to_csv(rows);
    CHECK(csv.rfind("k,accuracy,sensitivity,specificity\n", 0) == 0);
    CHECK(render_sweep_table(rows).find(" 50") != std::string::npos);
    CHECK_THROWS_AS(sweep_k(m, m.col_labels, m.row_labels, std::vector<std::size_t>{}), Error);
}

TEST_CASE("knn_predict_all is row-wise knn_predict") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<std::vector<double>> rows(20, std::vector<double>(30));
    for (auto& r : rows)
        for (auto& v : r) v = u(rng);
    std::vector<Label> cols(30);
    for (std::size_t i = 0; i < 30; ++i) cols[i] = Label(i % 3 == 0);
    const auto m = matrix(rows, std::vector<Label>(20, 0), cols);
    const auto all = knn_predict_all(m, cols, {7});
    for (std::size_t r = 0; r < 20; ++r) CHECK(all[r] == knn_predict(rows[r], cols, {7}));
}

}
