#include "sdm/fisher.hpp"

#include <algorithm>
#include <cmath>

#include "sdm/errors.hpp"
#include "sdm/hull.hpp"

namespace sdm {

void validate_distribution(const Distribution& x) {
    if (x.probs.empty()) throw DomainError("distribution: no entries");
    double sum = 0.0;
    for (double p : x.probs) {
        if (p < 0.0) throw DomainError("distribution: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw DomainError("distribution: probabilities must sum to 1");
}

Point to_sphere(const Distribution& x) {
    validate_distribution(x);
    Point u(x.probs.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sqrt(x.probs[i]);
    return u;
}

Distribution from_sphere(const Point& u) {
    check_unit(u);
    double sum = 0.0;
    Distribution x;
    x.probs.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < -1e-12)
            throw NegativeCoordinate("sphere point outside the orthant");
        x.probs[i] = u[i] * u[i];
        sum += x.probs[i];
    }
    for (double& p : x.probs) p /= sum;
    return x;
}

double fisher_distance(const Distribution& x, const Distribution& y) {
    if (x.probs.size() != y.probs.size())
        throw DimensionMismatch("fisher_distance: dimension mismatch");
    validate_distribution(x);
    validate_distribution(y);
    double dot = 0.0;
    for (std::size_t i = 0; i < x.probs.size(); ++i)
        dot += std::sqrt(x.probs[i] * y.probs[i]);
    return fisher_radius(std::acos(std::clamp(dot, -1.0, 1.0)));
}

FisherResult fisher_delaunay(const std::vector<Distribution>& points) {
    if (points.empty()) throw DomainError("fisher_delaunay: no points");
    const std::size_t d = points[0].probs.size();
    if (points.size() < d + 1)
        throw DomainError("fisher_delaunay: need at least n+2 distributions");
    FisherResult res;
    res.sphere_points.reserve(points.size());
    for (const Distribution& x : points) {
        if (x.probs.size() != d)
            throw DimensionMismatch("fisher_delaunay: mixed dimensions");
        res.sphere_points.push_back(to_sphere(x));
    }
    HullComplex hull = build_hull(res.sphere_points);
    res.mosaic = build_mosaic(hull);
    res.intervals = radius_and_intervals(res.mosaic);
    res.non_delaunay = non_delaunay_face_count(hull, res.mosaic);
    return res;
}

}  // namespace sdm
