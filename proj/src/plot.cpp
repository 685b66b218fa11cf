#include "topots/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "topots/text_io.hpp"

namespace topots {

namespace {

constexpr double kSize = 400.0;
constexpr double kMargin = 50.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_diagram_svg(std::span<const PersistenceDiagram> diagrams,
                               std::string_view title) {
    double extent = 0.0;
    for (const auto& d : diagrams) {
        for (const auto& p : d.pairs) {
            extent = std::max({extent, p.birth, p.death});
        }
    }
    extent = extent > 0.0 ? extent * 1.05 : 1.0;
    const double plot = kSize - 2 * kMargin;
    auto sx = [&](double v) { return kMargin + v / extent * plot; };
    auto sy = [&](double v) { return kSize - kMargin - v / extent * plot; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kSize) + "\" height=\"" +
           num(kSize) + "\" viewBox=\"0 0 " + num(kSize) + " " + num(kSize) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) {
        svg += "<text x=\"" + num(kSize / 2) + "\" y=\"25\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"14\">" + escape_xml(title) + "</text>\n";
    }
    svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + num(sx(0)) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" + num(sx(extent)) +
           "\" y2=\"" + num(sy(0)) + "\"/>\n";
    svg += "<line x1=\"" + num(sx(0)) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" + num(sx(0)) +
           "\" y2=\"" + num(sy(extent)) + "\"/>\n";
    svg += "</g>\n";
    svg += "<line class=\"diagonal\" x1=\"" + num(sx(0)) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" +
           num(sx(extent)) + "\" y2=\"" + num(sy(extent)) +
           "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    svg += "<text x=\"" + num(kSize / 2) + "\" y=\"" + num(kSize - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">Birth</text>\n";
    svg += "<text x=\"14\" y=\"" + num(kSize / 2) + "\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 " +
           num(kSize / 2) + ")\">Death</text>\n";
    svg += "<text x=\"" + num(sx(extent)) + "\" y=\"" + num(sy(0) + 15) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
           escape_xml(text::format_double(extent)) + "</text>\n";
    static constexpr const char* colors[] = {"black", "red", "blue"};
    for (const auto& d : diagrams) {
        const char* color = colors[std::min<std::size_t>(d.dimension, 2)];
        for (const auto& p : d.pairs) {
            if (d.dimension == 0) {
                svg += "<circle class=\"pair\" data-dim=\"0\" cx=\"" + num(sx(p.birth)) +
                       "\" cy=\"" + num(sy(p.death)) + "\" r=\"3.5\" fill=\"" + color + "\"/>\n";
            } else {
                const double x = sx(p.birth);
                const double y = sy(p.death);
                svg += "<rect class=\"pair\" data-dim=\"" + std::to_string(d.dimension) +
                       "\" x=\"" + num(x - 3.5) + "\" y=\"" + num(y - 3.5) +
                       "\" width=\"7\" height=\"7\" fill=\"none\" stroke=\"" + color + "\"/>\n";
            }
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::filesystem::path plot_diagram(std::span<const PersistenceDiagram> diagrams,
                                   const std::filesystem::path& svg_path, std::string_view title) {
    auto csv_path = svg_path;
    csv_path.replace_extension(".csv");
    text::write_file(svg_path, render_diagram_svg(diagrams, title));
    text::write_file(csv_path, diagram_to_csv(diagrams));
    return csv_path;
}

}  // namespace topots
