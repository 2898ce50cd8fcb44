#pragma once

#include <map>
#include <vector>

#include "sdm/geom.hpp"
#include "sdm/mosaic.hpp"

namespace sdm {

// Discrete probability distribution on n+1 outcomes: a point of the standard
// n-simplex.
struct Distribution {
    std::vector<double> probs;

    int n() const { return static_cast<int>(probs.size()) - 1; }
};

// Throws DomainError unless the entries are nonnegative and sum to 1 within
// 1e-12.
void validate_distribution(const Distribution& x);

// Image of the isometry onto the nonnegative orthant of the unit sphere:
// u_i = sqrt(x_i). (The classical isometry carries a factor sqrt(2); the
// spherical machinery here runs on the unit sphere and distances carry it.)
Point to_sphere(const Distribution& x);

// Inverse map x_i = u_i^2 (renormalized). Coordinates below -1e-12 raise
// NegativeCoordinate.
Distribution from_sphere(const Point& u);

// Geodesic length induced by the Fisher information metric:
// sqrt(2) * arccos(sum_i sqrt(x_i y_i)), in [0, sqrt(2) pi/2].
double fisher_distance(const Distribution& x, const Distribution& y);

inline double fisher_radius(double geo_radius) {
    return 1.4142135623730951 * geo_radius;  // sqrt(2)
}

// Delaunay mosaic of distributions under the Fisher metric, computed through
// the spherical image. The image lies in one orthant, hence one hemisphere,
// so non-Delaunay hull faces are expected and merely counted.
struct FisherResult {
    std::vector<Point> sphere_points;
    Mosaic mosaic;
    std::vector<MorseInterval> intervals;
    std::map<int, long> non_delaunay;
};

FisherResult fisher_delaunay(const std::vector<Distribution>& points);

}  // namespace sdm
