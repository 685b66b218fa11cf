#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "topots/classify.hpp"
#include "topots/distance.hpp"
#include "topots/ingest.hpp"
#include "topots/persistence.hpp"
#include "topots/pointcloud.hpp"
#include "topots/windowing.hpp"

namespace topots {

/// Offset/anchor choices before the data dimension is known.
struct AugmentSpec {
    enum class Anchors { origin, none, explicit_points };

    std::optional<Point> offset;  ///< nullopt = (0, 1, ..., d-1)
    Anchors anchor_mode = Anchors::origin;
    std::vector<Point> anchor_points;

    AugmentConfig resolve(std::size_t d) const;
};

struct Experiment {
    std::string train;
    std::string test;

    std::string name() const { return train + "__" + test; }
};

struct KSelection {
    std::string split;  ///< evaluated against the train split
    std::vector<std::size_t> ks;
};

struct PipelineConfig {
    std::string run_id = "run";
    std::filesystem::path data_path;
    CsvSchema schema;
    std::vector<SplitRange> splits;
    std::vector<Experiment> experiments;
    std::string train_split = "train";
    StandardizationMode standardization = StandardizationMode::fit_on_combined;
    WindowConfig window;
    AugmentSpec augment;
    PersistenceOptions persistence;
    WassersteinConfig wasserstein;
    std::optional<std::size_t> k = 50;  ///< nullopt = pick the best k from k_selection
    VoteTieBreak tie_break = VoteTieBreak::nearest_neighbor_label;
    std::optional<KSelection> k_selection;

    void validate() const;
};

/// Relative data paths resolve against `base_dir`. Missing experiments default
/// to (train split, every other split except the k-selection split).
PipelineConfig pipeline_config_from_json(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Canonical form with all defaults filled in.
nlohmann::json pipeline_config_to_json(const PipelineConfig& cfg);

struct PipelineOptions {
    std::filesystem::path cache_root;  ///< empty = $TOPOTS_CACHE_DIR or ./runs
    bool no_cache = false;             ///< recompute every stage, overwriting artifacts
    unsigned threads = 0;              ///< 0 = hardware concurrency
};

std::filesystem::path resolve_cache_root(const std::filesystem::path& requested);

struct StageRecord {
    std::string stage;
    std::string scope;  ///< experiment name, empty for run-wide stages
    std::string key;    ///< content hash of inputs and configuration
    bool cached = false;
    double seconds = 0.0;
    std::vector<std::string> artifacts;
};

struct ExperimentResult {
    Experiment experiment;
    std::size_t train_windows = 0;
    std::size_t test_windows = 0;
    EvaluationReport report;
};

struct RunResult {
    std::string run_id;
    std::size_t k = 0;
    std::vector<SweepRow> sweep;  ///< empty without k selection
    std::vector<ExperimentResult> experiments;
    std::vector<StageRecord> stages;
    std::filesystem::path run_dir;
    std::string report_json;  ///< exact bytes of report.json
};

/// Series -> windows -> augmented clouds -> diagrams -> distances -> k-NN -> report.
/// Artifacts live under <cache_root>/<run_id>/<stage>/<key>/; unchanged inputs reuse them.
RunResult run_pipeline(const PipelineConfig& cfg, const PipelineOptions& options = {});

/// Provenance of the last run: config, stage keys, cache status and timings.
nlohmann::json describe_run(const std::filesystem::path& cache_root, const std::string& run_id);

}  // namespace topots
