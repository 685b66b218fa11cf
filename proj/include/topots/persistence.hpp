#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topots/ingest.hpp"
#include "topots/pointcloud.hpp"

namespace topots {

enum class EssentialPolicy {
    dropped,  ///< classes that never die are omitted
    capped,   ///< reported with death = maxscale
};

std::string to_string(EssentialPolicy policy);
EssentialPolicy parse_essential_policy(std::string_view text);

struct PersistencePair {
    double birth = 0.0;
    double death = 0.0;

    double persistence() const { return death - birth; }
    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
    int dimension = 0;
    std::vector<PersistencePair> pairs;
    EssentialPolicy essential = EssentialPolicy::dropped;
    double maxscale = 0.0;  ///< meaningful when essential == capped or dimension == 1

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
};

struct FiltrationEdge {
    std::size_t i = 0;
    std::size_t j = 0;
    double length = 0.0;
};

struct PersistenceOptions {
    int max_dimension = 0;  ///< 0 or 1
    EssentialPolicy essential = EssentialPolicy::dropped;
    double maxscale = 0.0;  ///< must be > 0 for capped dim 0 or for dim 1

    void validate() const;
};

/// All pairwise Euclidean edges, sorted by (length, i, j).
std::vector<FiltrationEdge> rips_edges(std::span<const Point> points);

/// Rips dimension-0 diagram by Kruskal: each merge at edge length l emits (0, l).
/// Pairs are sorted by death. The one essential class follows `essential`.
PersistenceDiagram rips_persistence_dim0(std::span<const Point> points,
                                         EssentialPolicy essential = EssentialPolicy::dropped,
                                         double maxscale = 0.0);

/// Rips dimension-1 diagram over Z/2 from the 2-skeleton with edges <= maxscale.
/// Zero-persistence pairs are omitted; cycles alive at maxscale are capped there.
PersistenceDiagram rips_persistence_dim1(std::span<const Point> points, double maxscale);

/// Diagrams for dimensions 0..options.max_dimension.
std::vector<PersistenceDiagram> compute_diagrams(std::span<const Point> points,
                                                 const PersistenceOptions& options);

struct DiagramRow {
    int dimension = 0;
    double birth = 0.0;
    double death = 0.0;
};

/// Rows sorted by (dimension, death, birth).
std::vector<DiagramRow> diagram_to_rows(std::span<const PersistenceDiagram> diagrams);
std::vector<DiagramRow> diagram_to_rows(const PersistenceDiagram& diagram);

/// CSV with header dim,birth,death.
std::string diagram_to_csv(std::span<const PersistenceDiagram> diagrams);

/// Parses a dim,birth,death file. Returns diagrams for 0..max dimension seen
/// (or `max_dimension` when given), empty ones included.
std::vector<PersistenceDiagram> diagram_from_csv(std::string_view text,
                                                 std::optional<int> max_dimension = std::nullopt,
                                                 std::string_view source = "<memory>");

/// Diagrams of one window in a diagram set.
struct WindowDiagrams {
    std::size_t window = 0;
    Label label = 0;
    std::vector<PersistenceDiagram> diagrams;  ///< indexed by dimension

    const PersistenceDiagram& in_dimension(int dim) const;
};

/// Long format keyed by window: window,label,dim,birth,death. Each window opens
/// with a marker row `window,label,#D,,` (D = highest dimension computed) so
/// windows with empty diagrams survive the round trip.
std::string diagram_set_to_csv(std::span<const WindowDiagrams> set);
std::vector<WindowDiagrams> diagram_set_from_csv(std::string_view text,
                                                 std::string_view source = "<memory>");

/// Clouds as long-format CSV: window,label,point,x0,...,x{d-1}.
std::string clouds_to_csv(std::span<const AugmentedCloud> clouds);
std::vector<AugmentedCloud> clouds_from_csv(std::string_view text,
                                            std::string_view source = "<memory>");

/// Diagrams for every cloud; runs on up to `threads` workers (0 = hardware).
std::vector<WindowDiagrams> compute_diagram_set(std::span<const AugmentedCloud> clouds,
                                                const PersistenceOptions& options,
                                                unsigned threads = 0);

}  // namespace topots
