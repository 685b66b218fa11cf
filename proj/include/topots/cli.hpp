#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "topots/ingest.hpp"

namespace topots {

/// Entry point shared by the executable and the tests. Returns 0 on success,
/// otherwise the ErrorKind value (1 usage, 2 data, 3 numerical).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Two-class synthetic series: every block of `window` rows is i.i.d. Gaussian
/// noise, sigma `quiet_sigma` for class 0 and `loud_sigma` for class 1. Classes
/// are a seeded shuffle of an even split over `windows` blocks.
TimeSeries make_synthetic_series(std::size_t windows, std::size_t window, std::size_t d,
                                 std::uint64_t seed, double quiet_sigma = 0.1,
                                 double loud_sigma = 2.0);

}  // namespace topots
