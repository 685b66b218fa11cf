#include <doctest.h>

#include "oracles.hpp"
#include "topots/plot.hpp"
#include "topots/text_io.hpp"

using namespace topots;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_SUITE("plot") {

TEST_CASE("empty diagram plots only the diagonal") {
    const std::vector<PersistenceDiagram> ds{PersistenceDiagram{}};
    const auto svg = render_diagram_svg(ds);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count(svg, "class=\"diagonal\"") == 1);
    CHECK(count(svg, "class=\"pair\"") == 0);
}

TEST_CASE("two points above the diagonal") {
    PersistenceDiagram d;
    d.pairs = {{0, 1}, {0, 2}};
    const std::vector<PersistenceDiagram> ds{d};
    const auto svg = render_diagram_svg(ds, "window 3");
    CHECK(count(svg, "class=\"pair\"") == 2);
    CHECK(svg.find("window 3") != std::string::npos);
}

TEST_CASE("csv twin is lossless") {
    oracle::TempDir dir;
    PersistenceDiagram d0;
    d0.pairs = {{0, 0.1 + 0.2}, {0, 2}};
    PersistenceDiagram d1;
    d1.dimension = 1;
    d1.pairs = {{1, 1.4142135623730951}};
    const std::vector<PersistenceDiagram> ds{d0, d1};
    const auto csv = plot_diagram(ds, dir / "d.svg");
    CHECK(csv == dir / "d.csv");
    CHECK(std::filesystem::exists(dir / "d.svg"));
    const auto back = diagram_from_csv(text::read_file(csv));
    REQUIRE(back.size() == 2);
    CHECK(back[0].pairs == d0.pairs);
    CHECK(back[1].pairs == d1.pairs);
    CHECK(count(text::read_file(dir / "d.svg"), "data-dim=\"1\"") == 1);
}

}
