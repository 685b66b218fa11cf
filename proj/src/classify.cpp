#include "topots/classify.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "topots/error.hpp"
#include "topots/text_io.hpp"

namespace topots {

std::string to_string(VoteTieBreak rule) {
    return rule == VoteTieBreak::lowest_class_id ? "lowest_class_id" : "nearest_neighbor_label";
}

VoteTieBreak parse_vote_tie_break(std::string_view text) {
    if (text == "nearest_neighbor_label") {
        return VoteTieBreak::nearest_neighbor_label;
    }
    if (text == "lowest_class_id") {
        return VoteTieBreak::lowest_class_id;
    }
    throw_usage("unknown tie-break rule '" + std::string(text) + "'");
}

void KnnConfig::validate(std::size_t train_size) const {
    if (k < 1) {
        throw_usage("k must be at least 1");
    }
    if (k > train_size) {
        throw_usage("k = " + std::to_string(k) + " exceeds the training size " +
                    std::to_string(train_size));
    }
}

Label knn_predict(std::span<const double> distances, std::span<const Label> train_labels,
                  const KnnConfig& cfg) {
    if (distances.size() != train_labels.size()) {
        throw_usage("distance row has " + std::to_string(distances.size()) +
                    " entries but there are " + std::to_string(train_labels.size()) +
                    " training labels");
    }
    cfg.validate(train_labels.size());
    std::vector<std::size_t> order(distances.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cfg.k),
                      order.end(), [&](std::size_t a, std::size_t b) {
                          if (distances[a] != distances[b]) {
                              return distances[a] < distances[b];
                          }
                          return a < b;
                      });
    std::map<Label, std::size_t> votes;
    std::size_t best = 0;
    for (std::size_t i = 0; i < cfg.k; ++i) {
        best = std::max(best, ++votes[train_labels[order[i]]]);
    }
    if (cfg.tie_break == VoteTieBreak::lowest_class_id) {
        for (const auto& [label, count] : votes) {
            if (count == best) {
                return label;
            }
        }
    }
    for (std::size_t i = 0; i < cfg.k; ++i) {
        const Label label = train_labels[order[i]];
        if (votes[label] == best) {
            return label;
        }
    }
    return train_labels[order.front()];
}

std::vector<Label> knn_predict_all(const DistanceMatrix& m, std::span<const Label> train_labels,
                                   const KnnConfig& cfg) {
    std::vector<Label> out;
    out.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out.push_back(knn_predict(m.row(r), train_labels, cfg));
    }
    return out;
}

std::string Ratio::str() const {
    return std::to_string(numerator) + "/" + std::to_string(denominator);
}

long long EvaluationReport::total() const {
    long long t = 0;
    for (const auto& row : confusion) {
        for (long long c : row) {
            t += c;
        }
    }
    return t;
}

const ClassMetrics& EvaluationReport::metrics_for(Label label) const {
    for (const auto& m : per_class) {
        if (m.label == label) {
            return m;
        }
    }
    throw_usage("no metrics for class " + std::to_string(label));
}

EvaluationReport evaluate(std::span<const Label> predictions, std::span<const Label> truths) {
    if (predictions.size() != truths.size()) {
        throw_usage("evaluate: " + std::to_string(predictions.size()) + " predictions vs " +
                    std::to_string(truths.size()) + " truths");
    }
    if (truths.empty()) {
        throw_usage("evaluate: empty input");
    }
    std::set<Label> seen(truths.begin(), truths.end());
    seen.insert(predictions.begin(), predictions.end());
    const bool binary = std::all_of(seen.begin(), seen.end(), [](Label l) { return l == 0 || l == 1; });
    if (binary) {
        seen = {0, 1};
    }
    std::vector<Label> classes(seen.begin(), seen.end());
    std::map<Label, std::size_t> index;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        index[classes[i]] = i;
    }
    std::vector<std::vector<long long>> confusion(classes.size(),
                                                  std::vector<long long>(classes.size(), 0));
    for (std::size_t i = 0; i < truths.size(); ++i) {
        ++confusion[index[truths[i]]][index[predictions[i]]];
    }
    return evaluate_confusion(std::move(classes), std::move(confusion));
}

EvaluationReport evaluate_confusion(std::vector<Label> classes,
                                    std::vector<std::vector<long long>> confusion) {
    const std::size_t n = classes.size();
    if (n == 0 || confusion.size() != n) {
        throw_usage("confusion matrix shape does not match the class list");
    }
    for (const auto& row : confusion) {
        if (row.size() != n) {
            throw_usage("confusion matrix must be square");
        }
        for (long long c : row) {
            if (c < 0) {
                throw_usage("confusion matrix has a negative count");
            }
        }
    }
    EvaluationReport report;
    report.classes = std::move(classes);
    report.confusion = std::move(confusion);
    const long long total = report.total();
    if (total == 0) {
        throw_usage("confusion matrix is empty");
    }
    long long trace = 0;
    for (std::size_t i = 0; i < n; ++i) {
        trace += report.confusion[i][i];
    }
    report.accuracy = {trace, total};
    for (std::size_t c = 0; c < n; ++c) {
        long long tp = report.confusion[c][c];
        long long predicted = 0;
        long long actual = 0;
        for (std::size_t i = 0; i < n; ++i) {
            predicted += report.confusion[i][c];
            actual += report.confusion[c][i];
        }
        ClassMetrics m;
        m.label = report.classes[c];
        m.support = actual;
        m.precision = {tp, predicted};
        m.recall = {tp, actual};
        m.f1 = {2 * tp, predicted + actual};
        const std::string name = "class " + std::to_string(m.label);
        if (!m.precision.defined()) {
            report.warnings.push_back("precision of " + name +
                                      " is 0/0 (no predictions); reported as 0");
        }
        if (!m.recall.defined()) {
            report.warnings.push_back("recall of " + name + " is 0/0 (no samples); reported as 0");
        }
        if (!m.f1.defined()) {
            report.warnings.push_back("F1 of " + name + " is 0/0; reported as 0");
        }
        report.per_class.push_back(m);
    }
    report.binary = report.classes == std::vector<Label>{0, 1};
    if (report.binary) {
        report.sensitivity = report.per_class[1].recall;
        report.specificity = report.per_class[0].recall;
    }
    return report;
}

namespace {

nlohmann::json ratio_json(const Ratio& r) {
    return {{"value", r.value()}, {"numerator", r.numerator}, {"denominator", r.denominator}};
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()), 0);
        for (std::size_t c = 0; c < r.size(); ++c) {
            width[c] = std::max(width[c], r[c].size());
        }
    }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c == 0) {
                line += r[c] + std::string(width[c] - r[c].size(), ' ');
            } else {
                line += "  " + pad(r[c], width[c]);
            }
        }
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out += line + '\n';
    }
    return out;
}

}  // namespace

nlohmann::json report_to_json(const EvaluationReport& report) {
    nlohmann::json j;
    j["classes"] = report.classes;
    j["confusion"] = report.confusion;
    j["total"] = report.total();
    j["accuracy"] = ratio_json(report.accuracy);
    j["binary"] = report.binary;
    if (report.binary) {
        j["sensitivity"] = ratio_json(report.sensitivity);
        j["specificity"] = ratio_json(report.specificity);
    }
    nlohmann::json per = nlohmann::json::array();
    for (const auto& m : report.per_class) {
        per.push_back({{"label", m.label},
                       {"support", m.support},
                       {"precision", ratio_json(m.precision)},
                       {"recall", ratio_json(m.recall)},
                       {"f1", ratio_json(m.f1)}});
    }
    j["per_class"] = per;
    j["warnings"] = report.warnings;
    return j;
}

std::string render_report_table(std::span<const NamedReport> reports, int decimals) {
    std::vector<Label> classes;
    for (const auto& r : reports) {
        for (Label l : r.report->classes) {
            if (std::find(classes.begin(), classes.end(), l) == classes.end()) {
                classes.push_back(l);
            }
        }
    }
    std::sort(classes.begin(), classes.end());
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"", "Accuracy", "Sensitivity", "Specificity"};
    for (Label l : classes) {
        header.push_back("Precision(" + std::to_string(l) + ")");
    }
    for (Label l : classes) {
        header.push_back("F1(" + std::to_string(l) + ")");
    }
    rows.push_back(header);
    for (const auto& r : reports) {
        const auto& rep = *r.report;
        std::vector<std::string> row{r.name, fixed(rep.accuracy.value(), decimals)};
        row.push_back(rep.binary ? fixed(rep.sensitivity.value(), decimals) : "-");
        row.push_back(rep.binary ? fixed(rep.specificity.value(), decimals) : "-");
        auto cell = [&](Label l, auto member) {
            for (const auto& m : rep.per_class) {
                if (m.label == l) {
                    return fixed((m.*member).value(), decimals);
                }
            }
            return std::string("-");
        };
        for (Label l : classes) {
            row.push_back(cell(l, &ClassMetrics::precision));
        }
        for (Label l : classes) {
            row.push_back(cell(l, &ClassMetrics::f1));
        }
        rows.push_back(row);
    }
    return render_rows(rows);
}

std::vector<SweepRow> sweep_k(const DistanceMatrix& m, std::span<const Label> train_labels,
                              std::span<const Label> test_labels, std::span<const std::size_t> ks,
                              VoteTieBreak tie_break) {
    if (train_labels.size() != m.cols() || test_labels.size() != m.rows()) {
        throw_usage("label vectors do not match the distance matrix shape");
    }
    if (ks.empty()) {
        throw_usage("sweep needs at least one k");
    }
    for (std::size_t k : ks) {
        KnnConfig{k, tie_break}.validate(train_labels.size());
    }
    std::vector<SweepRow> rows;
    for (std::size_t k : ks) {
        const auto predictions = knn_predict_all(m, train_labels, KnnConfig{k, tie_break});
        rows.push_back({k, evaluate(predictions, test_labels)});
    }
    return rows;
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
    std::string out = "k,accuracy,sensitivity,specificity\n";
    for (const auto& r : rows) {
        out += std::to_string(r.k) + ',' + text::format_double(r.report.accuracy.value()) + ',';
        out += r.report.binary ? text::format_double(r.report.sensitivity.value()) : "";
        out += ',';
        out += r.report.binary ? text::format_double(r.report.specificity.value()) : "";
        out += '\n';
    }
    return out;
}

std::string render_sweep_table(std::span<const SweepRow> rows) {
    std::vector<std::vector<std::string>> table{{"Value of k"}, {"Accuracy (%)"},
                                                {"Sensitivity (%)"}, {"Specificity (%)"}};
    for (const auto& r : rows) {
        table[0].push_back(std::to_string(r.k));
        table[1].push_back(fixed(100.0 * r.report.accuracy.value(), 0));
        table[2].push_back(r.report.binary ? fixed(100.0 * r.report.sensitivity.value(), 0) : "-");
        table[3].push_back(r.report.binary ? fixed(100.0 * r.report.specificity.value(), 0) : "-");
    }
    return render_rows(table);
}

}  // namespace topots
