#include "sdm/mosaic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sdm/errors.hpp"
#include "sdm/numeric.hpp"

namespace sdm {

namespace {

struct VecIntHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 0x9e3779b97f4a7c15ull ^ v.size();
        for (int x : v)
            h ^= static_cast<std::size_t>(x) + 0x9e3779b9ull + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace

Mosaic build_mosaic(const HullComplex& hull) {
    Mosaic m;
    m.source = hull;
    m.delaunay_facet_flags.resize(hull.facets.size());
    for (std::size_t f = 0; f < hull.facets.size(); ++f) {
        double c = hull.facets[f].offset;
        if (std::abs(c) <= kGeomTol)
            throw AmbiguousFacet("facet plane through the origin at tolerance");
        m.delaunay_facet_flags[f] = c > 0.0;
    }
    for (int dim = 0; dim <= hull.n; ++dim) m.faces[dim];
    for (std::size_t f = 0; f < hull.facets.size(); ++f) {
        if (!m.delaunay_facet_flags[f]) continue;
        const auto& verts = hull.facets[f].vertices;
        const std::size_t sz = verts.size();
        for (unsigned mask = 1; mask < (1u << sz); ++mask) {
            Face face;
            for (std::size_t i = 0; i < sz; ++i)
                if (mask & (1u << i)) face.vertex_ids.push_back(verts[i]);
            m.faces[face.dim()].insert(std::move(face));
        }
    }
    return m;
}

std::vector<MorseInterval> radius_and_intervals(const Mosaic& mosaic) {
    const std::vector<Point>& pts = mosaic.source.points;
    std::vector<MorseInterval> intervals;
    std::unordered_map<std::vector<int>, int, VecIntHash> covered;

    auto faces_at = [&](int dim) -> const std::set<Face>& {
        static const std::set<Face> empty;
        auto it = mosaic.faces.find(dim);
        return it == mosaic.faces.end() ? empty : it->second;
    };

    // every vertex is critical with value 0
    for (const Face& v : faces_at(0)) {
        intervals.push_back(MorseInterval{v, v, 0, 0, 0.0, 0.0});
        covered[v.vertex_ids] += 1;
    }

    std::vector<Point> simplex;
    for (int k = 1; k <= mosaic.source.n; ++k) {
        for (const Face& upper : faces_at(k)) {
            simplex.clear();
            for (int id : upper.vertex_ids) simplex.push_back(pts[id]);
            CircumData cd = project_origin(simplex);
            Point center = normalized(cd.foot);

            bool empty_cap = true;
            for (std::size_t w = 0; w < pts.size(); ++w) {
                if (std::binary_search(upper.vertex_ids.begin(),
                                       upper.vertex_ids.end(),
                                       static_cast<int>(w)))
                    continue;
                double s = dot(pts[w], center);
                if (std::abs(s - cd.height) <= kGeomTol)
                    throw NotGeneral("non-member point on a cap boundary");
                if (s > cd.height) empty_cap = false;
            }
            if (!empty_cap) continue;

            std::vector<int> vis = visible_facets(simplex, cd.foot);
            Face lower;
            for (std::size_t i = 0; i < upper.vertex_ids.size(); ++i)
                if (!std::binary_search(vis.begin(), vis.end(), static_cast<int>(i)))
                    lower.vertex_ids.push_back(upper.vertex_ids[i]);

            MorseInterval iv;
            iv.ell = lower.dim();
            iv.k = k;
            iv.geo_radius = cd.geo_radius;
            iv.lower = std::move(lower);
            iv.upper = upper;

            // mark all members L <= Q <= U
            std::vector<int> free_ids;
            for (int id : iv.upper.vertex_ids)
                if (!std::binary_search(iv.lower.vertex_ids.begin(),
                                        iv.lower.vertex_ids.end(), id))
                    free_ids.push_back(id);
            const std::size_t fsz = free_ids.size();
            for (unsigned mask = 0; mask < (1u << fsz); ++mask) {
                std::vector<int> member = iv.lower.vertex_ids;
                for (std::size_t i = 0; i < fsz; ++i)
                    if (mask & (1u << i)) member.push_back(free_ids[i]);
                std::sort(member.begin(), member.end());
                covered[member] += 1;
            }
            intervals.push_back(std::move(iv));
        }
    }

    // the intervals must tile the mosaic exactly
    std::size_t marked = 0;
    for (const auto& [key, count] : covered) {
        if (count != 1)
            throw PartitionFailure("face covered " + std::to_string(count) +
                                   " times by intervals");
        ++marked;
    }
    if (marked != mosaic.face_count())
        throw PartitionFailure("intervals cover " + std::to_string(marked) +
                               " of " + std::to_string(mosaic.face_count()) +
                               " mosaic faces");
    for (const auto& [dim, fs] : mosaic.faces)
        for (const Face& f : fs)
            if (!covered.count(f.vertex_ids))
                throw PartitionFailure("mosaic face missed by intervals");
    return intervals;
}

IntervalCensus census(const std::vector<MorseInterval>& intervals,
                      double model_density, int n) {
    if (!(model_density > 0.0)) throw DomainError("census: density must be > 0");
    IntervalCensus c;
    c.n = n;
    c.density = model_density;
    const double scale = std::pow(model_density, 1.0 / n);
    for (const MorseInterval& iv : intervals) {
        auto key = std::make_pair(iv.ell, iv.k);
        c.geo_radii[key].push_back(iv.geo_radius);
        c.normalized_radii[key].push_back(iv.geo_radius * scale);
        c.type_totals[key] += 1;
        c.total_faces += iv.member_count();
    }
    for (auto& [key, v] : c.geo_radii) std::sort(v.begin(), v.end());
    for (auto& [key, v] : c.normalized_radii) std::sort(v.begin(), v.end());
    for (int j = 0; j <= n; ++j) {
        long count = 0;
        for (const auto& [key, total] : c.type_totals) {
            auto [ell, k] = key;
            count += static_cast<long>(binomial(k - ell, k - j)) * total;
        }
        c.simplex_counts[j] = count;
    }
    return c;
}

std::map<int, long> non_delaunay_face_count(const HullComplex& hull,
                                            const Mosaic& mosaic) {
    std::map<int, long> missing;
    std::map<int, std::set<Face>> all = enumerate_faces(hull);
    for (const auto& [dim, fs] : all) {
        long count = 0;
        auto it = mosaic.faces.find(dim);
        for (const Face& f : fs)
            if (it == mosaic.faces.end() || !it->second.count(f)) ++count;
        missing[dim] = count;
    }
    return missing;
}

}  // namespace sdm
