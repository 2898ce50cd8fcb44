#pragma once

#include <map>
#include <set>
#include <vector>

#include "sdm/hull.hpp"

namespace sdm {

// Spherical Delaunay mosaic: the faces of the hull facets whose empty
// (outward) cap is the small cap, i.e. whose plane has the origin strictly
// on the inner side.
struct Mosaic {
    HullComplex source;
    std::vector<bool> delaunay_facet_flags;  // parallel to source.facets
    std::map<int, std::set<Face>> faces;     // dim -> faces of flagged facets

    std::size_t face_count() const {
        std::size_t c = 0;
        for (const auto& [dim, fs] : faces) c += fs.size();
        return c;
    }
};

// One interval [L,U] of the radius function; the 2^(k-ell) member simplices
// share the circumcap of U.
struct MorseInterval {
    Face lower;
    Face upper;
    int ell = 0;
    int k = 0;
    double geo_radius = 0.0;
    double normalized_radius = 0.0;  // geo_radius * density^(1/n), set by census

    bool critical() const { return ell == k; }
    long member_count() const { return 1L << (k - ell); }
};

struct IntervalCensus {
    int n = 0;
    double density = 0.0;
    // per type (ell,k): ascending radii
    std::map<std::pair<int, int>, std::vector<double>> geo_radii;
    std::map<std::pair<int, int>, std::vector<double>> normalized_radii;
    std::map<std::pair<int, int>, long> type_totals;
    std::map<int, long> simplex_counts;  // j -> number of j-simplices
    long total_faces = 0;                // sum of 2^(k-ell)
};

// Flags facets by the sign of their outward offset. Throws AmbiguousFacet
// when a facet plane passes through the origin at tolerance.
Mosaic build_mosaic(const HullComplex& hull);

// Decomposes the radius function into discrete-Morse intervals: for every
// mosaic face whose smallest circumscribed cap is empty, emits [L,U] with L =
// U minus the vertices opposite the facets visible from the cap's Euclidean
// center. Verifies that the emitted intervals tile the mosaic exactly once
// (PartitionFailure otherwise).
std::vector<MorseInterval> radius_and_intervals(const Mosaic& mosaic);

// Aggregates intervals into per-type radius lists and per-dimension simplex
// counts; normalizes radii by density^(1/n).
IntervalCensus census(const std::vector<MorseInterval>& intervals,
                      double model_density, int n);

// Per-dimension count of hull faces absent from the mosaic.
std::map<int, long> non_delaunay_face_count(const HullComplex& hull,
                                            const Mosaic& mosaic);

}  // namespace sdm
