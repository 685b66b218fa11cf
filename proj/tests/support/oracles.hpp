#pragma once

// Brute-force reference implementations used by the unit and acceptance tests.
// They share no code with the library beyond the Point/PersistencePair types.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "topots/persistence.hpp"

namespace oracle {

using topots::PersistencePair;
using topots::Point;

double distance(const Point& a, const Point& b);

/// Dimension-0 deaths from component counts of the threshold graphs
/// G_eps = {edges of length <= eps}. Sorted ascending.
std::vector<double> dim0_deaths(const std::vector<Point>& points);

/// Dimension-1 pairs of the Rips filtration truncated at `maxscale`, from
/// persistent Betti numbers computed with Z/2 ranks of boundary matrices.
/// Classes alive at maxscale are reported with death = maxscale.
/// Sorted by (death, birth).
std::vector<PersistencePair> dim1_pairs(const std::vector<Point>& points, double maxscale);

/// p-Wasserstein distance with L-infinity ground metric by enumerating every
/// partial matching; unmatched points pay their distance to the diagonal.
double wasserstein(const std::vector<PersistencePair>& a, const std::vector<PersistencePair>& b,
                   double p);

std::vector<Point> random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t d,
                                double scale = 1.0);
/// Points near a unit circle in the first two coordinates, jittered by `noise`
/// in every coordinate. Produces dimension-1 classes far more often than
/// uniform clouds.
std::vector<Point> noisy_circle(std::mt19937_64& rng, std::size_t n, std::size_t d, double noise);
std::vector<PersistencePair> random_diagram(std::mt19937_64& rng, std::size_t max_points);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& prefix = "topots-test");
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace oracle
