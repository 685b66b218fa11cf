#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "topots/persistence.hpp"

namespace topots {

/// SVG scatter of (birth, death) with the diagonal; one marker style per dimension.
std::string render_diagram_svg(std::span<const PersistenceDiagram> diagrams,
                               std::string_view title = "");

/// Writes `svg_path` and a CSV twin next to it (same stem, .csv).
/// Returns the CSV path.
std::filesystem::path plot_diagram(std::span<const PersistenceDiagram> diagrams,
                                   const std::filesystem::path& svg_path,
                                   std::string_view title = "");

}  // namespace topots
