#include "topots/distance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "topots/assignment.hpp"
#include "topots/error.hpp"
#include "topots/parallel.hpp"
#include "topots/text_io.hpp"

namespace topots {

void WassersteinConfig::validate() const {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw_usage("Wasserstein order p must be a finite number >= 1");
    }
    if (dimension < 0) {
        throw_usage("homology dimension must be nonnegative");
    }
}

namespace {

struct DiagramPoint {
    double birth;
    double death;
    bool diagonal;
};

double linf(const DiagramPoint& x, const DiagramPoint& y) {
    return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
}

void check_finite(const PersistenceDiagram& d) {
    for (const auto& p : d.pairs) {
        if (!std::isfinite(p.birth) || !std::isfinite(p.death)) {
            throw_numerical("Wasserstein distance requires finite persistence pairs");
        }
    }
}

bool pair_less(const PersistencePair& x, const PersistencePair& y) {
    return std::tie(x.birth, x.death) < std::tie(y.birth, y.death);
}

}  // namespace

double wasserstein(const PersistenceDiagram& first, const PersistenceDiagram& second,
                   const WassersteinConfig& cfg) {
    cfg.validate();
    // Canonical argument order: W(a, b) and W(b, a) are bitwise equal.
    const bool swap = std::lexicographical_compare(second.pairs.begin(), second.pairs.end(),
                                                   first.pairs.begin(), first.pairs.end(),
                                                   pair_less);
    const PersistenceDiagram& a = swap ? second : first;
    const PersistenceDiagram& b = swap ? first : second;
    if (a.dimension != b.dimension) {
        throw_usage("cannot compare diagrams of dimension " + std::to_string(a.dimension) +
                    " and " + std::to_string(b.dimension));
    }
    check_finite(a);
    check_finite(b);
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    if (m + n == 0) {
        return 0.0;
    }
    // Left side: a's points then projections of b's; right side: b's points then projections of a's.
    std::vector<DiagramPoint> left;
    std::vector<DiagramPoint> right;
    left.reserve(m + n);
    right.reserve(m + n);
    for (const auto& p : a.pairs) {
        left.push_back({p.birth, p.death, false});
    }
    for (const auto& p : b.pairs) {
        const double mid = 0.5 * (p.birth + p.death);
        left.push_back({mid, mid, true});
    }
    for (const auto& p : b.pairs) {
        right.push_back({p.birth, p.death, false});
    }
    for (const auto& p : a.pairs) {
        const double mid = 0.5 * (p.birth + p.death);
        right.push_back({mid, mid, true});
    }
    CostMatrix cost(m + n);
    for (std::size_t r = 0; r < m + n; ++r) {
        for (std::size_t c = 0; c < m + n; ++c) {
            if (left[r].diagonal && right[c].diagonal) {
                cost(r, c) = 0.0;
            } else {
                const double d = linf(left[r], right[c]);
                cost(r, c) = cfg.p == 1.0 ? d : std::pow(d, cfg.p);
            }
        }
    }
    const double total = solve_assignment(cost).total_cost;
    return cfg.p == 1.0 ? total : std::pow(total, 1.0 / cfg.p);
}

DistanceMatrix distance_matrix(std::span<const WindowDiagrams> test,
                               std::span<const WindowDiagrams> train,
                               const WassersteinConfig& cfg, unsigned threads) {
    cfg.validate();
    if (test.empty() || train.empty()) {
        throw_usage("distance matrix needs nonempty test and train diagram sets");
    }
    DistanceMatrix m;
    for (const auto& w : test) {
        m.row_windows.push_back(w.window);
        m.row_labels.push_back(w.label);
        w.in_dimension(cfg.dimension);
    }
    for (const auto& w : train) {
        m.col_windows.push_back(w.window);
        m.col_labels.push_back(w.label);
        w.in_dimension(cfg.dimension);
    }
    m.values.assign(test.size() * train.size(), 0.0);
    parallel_for(test.size(), threads, [&](std::size_t r) {
        const auto& lhs = test[r].in_dimension(cfg.dimension);
        for (std::size_t c = 0; c < train.size(); ++c) {
            const double d = wasserstein(lhs, train[c].in_dimension(cfg.dimension), cfg);
            if (!std::isfinite(d) || d < 0.0) {
                throw_numerical("non-finite or negative Wasserstein distance");
            }
            m.values[r * train.size() + c] = d;
        }
    });
    return m;
}

std::string matrix_to_csv(const DistanceMatrix& m) {
    std::string out = "window";
    for (auto c : m.col_windows) {
        out += ',' + std::to_string(c);
    }
    out += '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out += std::to_string(m.row_windows[r]);
        for (double v : m.row(r)) {
            out += ',' + text::format_double(v);
        }
        out += '\n';
    }
    return out;
}

DistanceMatrix matrix_from_csv(std::string_view text_in, std::string_view source) {
    std::istringstream in{std::string(text_in)};
    std::string line;
    if (!std::getline(in, line)) {
        throw_data(std::string(source) + ": empty matrix file");
    }
    const auto header = text::split_csv_line(line);
    if (header.size() < 2 || header[0] != "window") {
        throw_data(std::string(source) + ": expected header window,<train windows...>");
    }
    DistanceMatrix m;
    for (std::size_t c = 1; c < header.size(); ++c) {
        auto w = text::parse_int(header[c]);
        if (!w || *w < 0) {
            throw_data(std::string(source) + ": invalid train window index '" + header[c] + "'");
        }
        m.col_windows.push_back(static_cast<std::size_t>(*w));
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        const auto f = text::split_csv_line(line);
        if (f.size() != header.size()) {
            throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                       ": expected " + std::to_string(header.size()) + " fields");
        }
        auto w = text::parse_int(f[0]);
        if (!w || *w < 0) {
            throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                       ": invalid test window index");
        }
        m.row_windows.push_back(static_cast<std::size_t>(*w));
        for (std::size_t c = 1; c < f.size(); ++c) {
            auto v = text::parse_double(f[c]);
            if (!v || *v < 0.0) {
                throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                           ": invalid distance '" + f[c] + "'");
            }
            m.values.push_back(*v);
        }
    }
    if (m.rows() == 0) {
        throw_data(std::string(source) + ": matrix has no rows");
    }
    return m;
}

std::string matrix_sidecar_json(const DistanceMatrix& m, const WassersteinConfig& cfg,
                                std::string_view test_set_hash,
                                std::string_view train_set_hash) {
    nlohmann::json j;
    j["config"] = {{"p", cfg.p}, {"dimension", cfg.dimension}, {"ground_metric", "linf"}};
    j["test_diagrams_sha256"] = std::string(test_set_hash);
    j["train_diagrams_sha256"] = std::string(train_set_hash);
    j["test_windows"] = m.row_windows;
    j["train_windows"] = m.col_windows;
    j["test_labels"] = m.row_labels;
    j["train_labels"] = m.col_labels;
    j["shape"] = {m.rows(), m.cols()};
    return j.dump(2) + "\n";
}

void apply_sidecar_labels(DistanceMatrix& m, std::string_view sidecar_json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(sidecar_json);
        m.row_labels = j.at("test_labels").get<std::vector<Label>>();
        m.col_labels = j.at("train_labels").get<std::vector<Label>>();
        const auto rows = j.at("test_windows").get<std::vector<std::size_t>>();
        const auto cols = j.at("train_windows").get<std::vector<std::size_t>>();
        if (rows != m.row_windows || cols != m.col_windows) {
            throw_data("matrix sidecar window indices do not match the matrix");
        }
    } catch (const nlohmann::json::exception& e) {
        throw_data(std::string("invalid matrix sidecar: ") + e.what());
    }
}

}  // namespace topots
