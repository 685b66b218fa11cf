#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "topots/distance.hpp"

namespace topots {

enum class VoteTieBreak {
    nearest_neighbor_label,  ///< among tied classes, the one holding the closest neighbor
    lowest_class_id,
};

std::string to_string(VoteTieBreak rule);
VoteTieBreak parse_vote_tie_break(std::string_view text);

struct KnnConfig {
    std::size_t k = 50;
    VoteTieBreak tie_break = VoteTieBreak::nearest_neighbor_label;

    void validate(std::size_t train_size) const;
};

/// Majority vote over the k smallest distances. Equal distances are ordered
/// by training index.
Label knn_predict(std::span<const double> distances, std::span<const Label> train_labels,
                  const KnnConfig& cfg);

std::vector<Label> knn_predict_all(const DistanceMatrix& m, std::span<const Label> train_labels,
                                   const KnnConfig& cfg);

/// Exact fraction; value() of 0/0 is 0.
struct Ratio {
    long long numerator = 0;
    long long denominator = 0;

    double value() const {
        return denominator == 0 ? 0.0
                                : static_cast<double>(numerator) /
                                      static_cast<double>(denominator);
    }
    bool defined() const { return denominator != 0; }
    std::string str() const;
};

struct ClassMetrics {
    Label label = 0;
    long long support = 0;  ///< true count
    Ratio precision;
    Ratio recall;
    Ratio f1;  ///< 2TP / (2TP + FP + FN), equal to 2PR/(P+R)
};

struct EvaluationReport {
    std::vector<Label> classes;
    std::vector<std::vector<long long>> confusion;  ///< [true][predicted]
    Ratio accuracy;
    bool binary = false;
    Ratio sensitivity;  ///< binary only: recall of class 1
    Ratio specificity;  ///< binary only: recall of class 0
    std::vector<ClassMetrics> per_class;
    std::vector<std::string> warnings;

    long long total() const;
    const ClassMetrics& metrics_for(Label label) const;
};

/// Binary whenever every label is 0 or 1; classes are then exactly {0, 1}.
EvaluationReport evaluate(std::span<const Label> predictions, std::span<const Label> truths);

/// Rebuilds all metrics from a confusion matrix.
EvaluationReport evaluate_confusion(std::vector<Label> classes,
                                    std::vector<std::vector<long long>> confusion);

nlohmann::json report_to_json(const EvaluationReport& report);

struct NamedReport {
    std::string name;
    const EvaluationReport* report;
};

/// Aligned table: accuracy, sensitivity, specificity, per-class precision and F1.
std::string render_report_table(std::span<const NamedReport> reports, int decimals = 2);

struct SweepRow {
    std::size_t k = 0;
    EvaluationReport report;
};

/// One evaluation per k over a fixed matrix.
std::vector<SweepRow> sweep_k(const DistanceMatrix& m, std::span<const Label> train_labels,
                              std::span<const Label> test_labels, std::span<const std::size_t> ks,
                              VoteTieBreak tie_break = VoteTieBreak::nearest_neighbor_label);

/// CSV with header k,accuracy,sensitivity,specificity.
std::string sweep_to_csv(std::span<const SweepRow> rows);
std::string render_sweep_table(std::span<const SweepRow> rows);

}  // namespace topots
