#pragma once

#include <compare>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "sdm/geom.hpp"

namespace sdm {

// Abstract simplex: strictly increasing point indices.
struct Face {
    std::vector<int> vertex_ids;

    int dim() const { return static_cast<int>(vertex_ids.size()) - 1; }
    auto operator<=>(const Face&) const = default;
};

struct HullFacet {
    std::vector<int> vertices;   // sorted ids, size n+1
    Point normal;                // outward unit normal
    double offset = 0.0;         // facet plane {x . normal = offset}
    std::vector<int> neighbors;  // neighbors[i] shares the ridge omitting vertices[i]
};

// Simplicial boundary complex of the convex hull of points on S^n.
struct HullComplex {
    int n = 0;  // sphere dimension; ambient dimension n+1
    std::vector<Point> points;
    std::vector<HullFacet> facets;

    std::size_t facet_count() const { return facets.size(); }
};

// Incremental (beneath-beyond) hull of >= n+2 unit points in R^(n+1).
// Throws DegenerateInput for flat clouds and NotGeneral when a point lands on
// a facet plane at tolerance or a ridge ends up shared by != 2 facets.
HullComplex build_hull(std::span<const Point> points);

// Every sub-simplex of every facet, deduplicated, keyed by dimension 0..n.
std::map<int, std::set<Face>> enumerate_faces(const HullComplex& hull);

}  // namespace sdm
