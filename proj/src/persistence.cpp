#include "topots/persistence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "topots/error.hpp"
#include "topots/parallel.hpp"
#include "topots/text_io.hpp"

namespace topots {

std::string to_string(EssentialPolicy policy) {
    return policy == EssentialPolicy::capped ? "capped" : "dropped";
}

EssentialPolicy parse_essential_policy(std::string_view text) {
    if (text == "dropped") {
        return EssentialPolicy::dropped;
    }
    if (text == "capped") {
        return EssentialPolicy::capped;
    }
    throw_usage("unknown essential-class policy '" + std::string(text) + "'");
}

void PersistenceOptions::validate() const {
    if (max_dimension < 0 || max_dimension > 1) {
        throw_usage("homology dimension must be 0 or 1 (got " + std::to_string(max_dimension) +
                    ")");
    }
    const bool needs_scale = essential == EssentialPolicy::capped || max_dimension >= 1;
    if (needs_scale && !(maxscale > 0.0 && std::isfinite(maxscale))) {
        throw_usage("maxscale must be a positive finite number");
    }
}

namespace {

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        if (rank_[a] < rank_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        if (rank_[a] == rank_[b]) {
            ++rank_[a];
        }
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

void check_points(std::span<const Point> points) {
    if (points.empty()) {
        return;
    }
    const std::size_t d = points.front().size();
    for (const auto& p : points) {
        if (p.size() != d) {
            throw_usage("point cloud mixes dimensions");
        }
        for (double x : p) {
            if (!std::isfinite(x)) {
                throw_numerical("point cloud contains a non-finite coordinate");
            }
        }
    }
}

bool by_death_then_birth(const PersistencePair& a, const PersistencePair& b) {
    return std::tie(a.death, a.birth) < std::tie(b.death, b.birth);
}

}  // namespace

std::vector<FiltrationEdge> rips_edges(std::span<const Point> points) {
    check_points(points);
    std::vector<FiltrationEdge> edges;
    edges.reserve(points.size() * (points.size() - (points.empty() ? 0 : 1)) / 2);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            edges.push_back({i, j, euclidean_distance(points[i], points[j])});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const FiltrationEdge& a, const FiltrationEdge& b) {
        return std::tie(a.length, a.i, a.j) < std::tie(b.length, b.i, b.j);
    });
    return edges;
}

PersistenceDiagram rips_persistence_dim0(std::span<const Point> points, EssentialPolicy essential,
                                         double maxscale) {
    PersistenceDiagram diagram;
    diagram.dimension = 0;
    diagram.essential = essential;
    diagram.maxscale = maxscale;
    if (essential == EssentialPolicy::capped && !(maxscale > 0.0)) {
        throw_usage("capped essential policy requires maxscale > 0");
    }
    const auto edges = rips_edges(points);
    if (points.empty()) {
        return diagram;
    }
    DisjointSet components(points.size());
    for (const auto& e : edges) {
        if (components.unite(e.i, e.j)) {
            diagram.pairs.push_back({0.0, e.length});
            if (diagram.pairs.size() + 1 == points.size()) {
                break;
            }
        }
    }
    if (essential == EssentialPolicy::capped) {
        diagram.pairs.push_back({0.0, maxscale});
    }
    std::sort(diagram.pairs.begin(), diagram.pairs.end(), by_death_then_birth);
    return diagram;
}

PersistenceDiagram rips_persistence_dim1(std::span<const Point> points, double maxscale) {
    if (!(maxscale > 0.0) || !std::isfinite(maxscale)) {
        throw_usage("maxscale must be a positive finite number");
    }
    check_points(points);
    PersistenceDiagram diagram;
    diagram.dimension = 1;
    diagram.essential = EssentialPolicy::capped;
    diagram.maxscale = maxscale;
    const std::size_t n = points.size();
    if (n < 3) {
        return diagram;
    }

    struct Simplex {
        double value;
        int dim;
        std::size_t index;  // lexicographic rank within its dimension
        std::array<std::size_t, 3> vertices;
    };
    std::vector<Simplex> simplices;
    std::vector<std::vector<double>> length(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            length[i][j] = length[j][i] = euclidean_distance(points[i], points[j]);
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        simplices.push_back({0.0, 0, v, {v, 0, 0}});
    }
    std::size_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++rank) {
            if (length[i][j] <= maxscale) {
                simplices.push_back({length[i][j], 1, rank, {i, j, 0}});
            }
        }
    }
    rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k, ++rank) {
                const double value = std::max({length[i][j], length[i][k], length[j][k]});
                if (value <= maxscale) {
                    simplices.push_back({value, 2, rank, {i, j, k}});
                }
            }
        }
    }
    std::sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
        return std::tie(a.value, a.dim, a.index) < std::tie(b.value, b.dim, b.index);
    });

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_position;
    std::vector<std::size_t> vertex_position(n);
    for (std::size_t pos = 0; pos < simplices.size(); ++pos) {
        const auto& s = simplices[pos];
        if (s.dim == 0) {
            vertex_position[s.vertices[0]] = pos;
        } else if (s.dim == 1) {
            edge_position[{s.vertices[0], s.vertices[1]}] = pos;
        }
    }

    // Column reduction over Z/2; columns are sorted row positions.
    const std::size_t m = simplices.size();
    std::vector<std::vector<std::size_t>> columns(m);
    std::vector<std::size_t> owner_of_low(m, m);
    for (std::size_t pos = 0; pos < m; ++pos) {
        const auto& s = simplices[pos];
        auto& col = columns[pos];
        if (s.dim == 1) {
            col = {vertex_position[s.vertices[0]], vertex_position[s.vertices[1]]};
        } else if (s.dim == 2) {
            const auto [i, j, k] = s.vertices;
            col = {edge_position.at({i, j}), edge_position.at({i, k}), edge_position.at({j, k})};
        }
        std::sort(col.begin(), col.end());
        while (!col.empty() && owner_of_low[col.back()] != m) {
            const auto& other = columns[owner_of_low[col.back()]];
            std::vector<std::size_t> sum;
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                          std::back_inserter(sum));
            col = std::move(sum);
        }
        if (!col.empty()) {
            owner_of_low[col.back()] = pos;
        }
    }

    for (std::size_t pos = 0; pos < m; ++pos) {
        const auto& s = simplices[pos];
        if (s.dim == 2 && !columns[pos].empty()) {
            const double birth = simplices[columns[pos].back()].value;
            if (s.value > birth) {
                diagram.pairs.push_back({birth, s.value});
            }
        } else if (s.dim == 1 && columns[pos].empty() && owner_of_low[pos] == m) {
            if (s.value < maxscale) {
                diagram.pairs.push_back({s.value, maxscale});
            }
        }
    }
    std::sort(diagram.pairs.begin(), diagram.pairs.end(), by_death_then_birth);
    return diagram;
}

std::vector<PersistenceDiagram> compute_diagrams(std::span<const Point> points,
                                                 const PersistenceOptions& options) {
    options.validate();
    std::vector<PersistenceDiagram> out;
    out.push_back(rips_persistence_dim0(points, options.essential, options.maxscale));
    if (options.max_dimension >= 1) {
        out.push_back(rips_persistence_dim1(points, options.maxscale));
    }
    return out;
}

std::vector<DiagramRow> diagram_to_rows(std::span<const PersistenceDiagram> diagrams) {
    std::vector<DiagramRow> rows;
    for (const auto& d : diagrams) {
        for (const auto& p : d.pairs) {
            rows.push_back({d.dimension, p.birth, p.death});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const DiagramRow& a, const DiagramRow& b) {
        return std::tie(a.dimension, a.death, a.birth) < std::tie(b.dimension, b.death, b.birth);
    });
    return rows;
}

std::vector<DiagramRow> diagram_to_rows(const PersistenceDiagram& diagram) {
    return diagram_to_rows(std::span(&diagram, 1));
}

std::string diagram_to_csv(std::span<const PersistenceDiagram> diagrams) {
    std::string out = "dim,birth,death\n";
    for (const auto& r : diagram_to_rows(diagrams)) {
        out += std::to_string(r.dimension) + ',' + text::format_double(r.birth) + ',' +
               text::format_double(r.death) + '\n';
    }
    return out;
}

namespace {

PersistencePair parse_pair(const std::string& birth, const std::string& death,
                           std::string_view source, std::size_t line_no) {
    auto b = text::parse_double(birth);
    auto d = text::parse_double(death);
    if (!b || !d) {
        throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                   ": unparseable birth/death");
    }
    if (*b > *d) {
        throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                   ": birth exceeds death");
    }
    return {*b, *d};
}

int parse_dimension(const std::string& field, std::string_view source, std::size_t line_no) {
    auto dim = text::parse_int(field);
    if (!dim || *dim < 0 || *dim > 8) {
        throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                   ": invalid dimension '" + field + "'");
    }
    return static_cast<int>(*dim);
}

std::vector<std::string> expect_header(std::istream& in, const std::vector<std::string>& expected,
                                       std::string_view source) {
    std::string line;
    if (!std::getline(in, line)) {
        throw_data(std::string(source) + ": empty file");
    }
    auto header = text::split_csv_line(line);
    if (header.size() < expected.size() ||
        !std::equal(expected.begin(), expected.end(), header.begin())) {
        throw_data(std::string(source) + ": expected header starting with " +
                   text::join(expected, ","));
    }
    return header;
}

}  // namespace

std::vector<PersistenceDiagram> diagram_from_csv(std::string_view text_in,
                                                 std::optional<int> max_dimension,
                                                 std::string_view source) {
    std::istringstream in{std::string(text_in)};
    expect_header(in, {"dim", "birth", "death"}, source);
    std::vector<DiagramRow> rows;
    std::string line;
    std::size_t line_no = 1;
    int top = max_dimension.value_or(0);
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        const auto f = text::split_csv_line(line);
        if (f.size() != 3) {
            throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                       ": expected 3 fields");
        }
        const int dim = parse_dimension(f[0], source, line_no);
        const auto pair = parse_pair(f[1], f[2], source, line_no);
        if (max_dimension && dim > *max_dimension) {
            continue;
        }
        top = std::max(top, dim);
        rows.push_back({dim, pair.birth, pair.death});
    }
    std::vector<PersistenceDiagram> diagrams(static_cast<std::size_t>(top) + 1);
    for (int k = 0; k <= top; ++k) {
        diagrams[k].dimension = k;
    }
    for (const auto& r : rows) {
        diagrams[r.dimension].pairs.push_back({r.birth, r.death});
    }
    return diagrams;
}

const PersistenceDiagram& WindowDiagrams::in_dimension(int dim) const {
    if (dim < 0 || static_cast<std::size_t>(dim) >= diagrams.size()) {
        throw_usage("window " + std::to_string(window) + " has no diagram in dimension " +
                    std::to_string(dim));
    }
    return diagrams[dim];
}

std::string diagram_set_to_csv(std::span<const WindowDiagrams> set) {
    std::string out = "window,label,dim,birth,death\n";
    for (const auto& w : set) {
        const std::string prefix = std::to_string(w.window) + ',' + std::to_string(w.label) + ',';
        const auto rows = diagram_to_rows(w.diagrams);
        const int top = w.diagrams.empty() ? 0 : w.diagrams.back().dimension;
        out += prefix + "#" + std::to_string(top) + ",,\n";
        for (const auto& r : rows) {
            out += prefix + std::to_string(r.dimension) + ',' + text::format_double(r.birth) +
                   ',' + text::format_double(r.death) + '\n';
        }
    }
    return out;
}

std::vector<WindowDiagrams> diagram_set_from_csv(std::string_view text_in,
                                                 std::string_view source) {
    std::istringstream in{std::string(text_in)};
    expect_header(in, {"window", "label", "dim", "birth", "death"}, source);
    std::vector<WindowDiagrams> set;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        const auto f = text::split_csv_line(line);
        if (f.size() != 5) {
            throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                       ": expected 5 fields");
        }
        auto window = text::parse_int(f[0]);
        auto label = text::parse_int(f[1]);
        if (!window || *window < 0 || !label) {
            throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                       ": invalid window or label");
        }
        if (!f[2].empty() && f[2].front() == '#') {
            const int top = parse_dimension(f[2].substr(1), source, line_no);
            WindowDiagrams w;
            w.window = static_cast<std::size_t>(*window);
            w.label = static_cast<Label>(*label);
            for (int k = 0; k <= top; ++k) {
                PersistenceDiagram d;
                d.dimension = k;
                w.diagrams.push_back(d);
            }
            set.push_back(std::move(w));
            continue;
        }
        if (set.empty() || set.back().window != static_cast<std::size_t>(*window)) {
            throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                       ": pair row without a preceding window marker");
        }
        const int dim = parse_dimension(f[2], source, line_no);
        auto& w = set.back();
        if (static_cast<std::size_t>(dim) >= w.diagrams.size()) {
            throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                       ": dimension exceeds the window marker");
        }
        w.diagrams[dim].pairs.push_back(parse_pair(f[3], f[4], source, line_no));
    }
    return set;
}

std::string clouds_to_csv(std::span<const AugmentedCloud> clouds) {
    const std::size_t d = clouds.empty() || clouds.front().points.empty()
                              ? 0
                              : clouds.front().points.front().size();
    std::string out = "window,label,point";
    for (std::size_t k = 0; k < d; ++k) {
        out += ",x" + std::to_string(k);
    }
    out += '\n';
    for (const auto& c : clouds) {
        for (std::size_t p = 0; p < c.points.size(); ++p) {
            out += std::to_string(c.source_window) + ',' + std::to_string(c.label) + ',' +
                   std::to_string(p);
            for (double x : c.points[p]) {
                out += ',' + text::format_double(x);
            }
            out += '\n';
        }
    }
    return out;
}

std::vector<AugmentedCloud> clouds_from_csv(std::string_view text_in, std::string_view source) {
    std::istringstream in{std::string(text_in)};
    const auto header = expect_header(in, {"window", "label", "point"}, source);
    const std::size_t d = header.size() - 3;
    std::vector<AugmentedCloud> clouds;
    std::string line;
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
        auto window = text::parse_int(f[0]);
        auto label = text::parse_int(f[1]);
        auto point = text::parse_int(f[2]);
        if (!window || *window < 0 || !label || !point) {
            throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                       ": invalid window/label/point index");
        }
        if (*point == 0) {
            AugmentedCloud c;
            c.source_window = static_cast<std::size_t>(*window);
            c.label = static_cast<Label>(*label);
            clouds.push_back(std::move(c));
        } else if (clouds.empty() ||
                   clouds.back().source_window != static_cast<std::size_t>(*window) ||
                   static_cast<long long>(clouds.back().points.size()) != *point) {
            throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                       ": points out of order");
        }
        Point p(d);
        for (std::size_t k = 0; k < d; ++k) {
            auto v = text::parse_double(f[3 + k]);
            if (!v) {
                throw_data(std::string(source) + ": row " + std::to_string(line_no) +
                           ": non-numeric coordinate");
            }
            p[k] = *v;
        }
        clouds.back().points.push_back(std::move(p));
    }
    return clouds;
}

std::vector<WindowDiagrams> compute_diagram_set(std::span<const AugmentedCloud> clouds,
                                                const PersistenceOptions& options,
                                                unsigned threads) {
    options.validate();
    std::vector<WindowDiagrams> set(clouds.size());
    parallel_for(clouds.size(), threads, [&](std::size_t i) {
        set[i].window = clouds[i].source_window;
        set[i].label = clouds[i].label;
        set[i].diagrams = compute_diagrams(clouds[i].points, options);
    });
    return set;
}

}  // namespace topots
