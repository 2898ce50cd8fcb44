#include "sdm/hull.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "sdm/errors.hpp"

namespace sdm {

namespace {

struct VecIntHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 0x9e3779b97f4a7c15ull ^ v.size();
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b9ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

using RidgeMap = std::unordered_map<std::vector<int>, std::pair<int, int>, VecIntHash>;

struct Builder {
    std::span<const Point> pts;
    std::size_t d;  // ambient dimension
    Point interior; // centroid of all points, strictly inside the hull
    std::vector<HullFacet> facets;
    std::vector<bool> alive;

    // Unit normal of the hyperplane through d points, oriented so the
    // interior reference lies strictly on the negative side.
    void plane_through(const std::vector<int>& ids, Point& normal, double& offset) const {
        std::vector<std::vector<double>> rows(d - 1, std::vector<double>(d));
        for (std::size_t i = 0; i + 1 < d; ++i)
            for (std::size_t c = 0; c < d; ++c)
                rows[i][c] = pts[ids[i + 1]][c] - pts[ids[0]][c];
        // null vector by elimination; the column without a pivot is free
        std::vector<int> pivot_col(d - 1, -1);
        std::size_t row = 0;
        for (std::size_t col = 0; col < d && row < d - 1; ++col) {
            std::size_t piv = row;
            for (std::size_t r = row + 1; r < d - 1; ++r)
                if (std::abs(rows[r][col]) > std::abs(rows[piv][col])) piv = r;
            if (std::abs(rows[piv][col]) <= 1e-12) continue;
            std::swap(rows[piv], rows[row]);
            for (std::size_t r = 0; r < d - 1; ++r) {
                if (r == row) continue;
                double f = rows[r][col] / rows[row][col];
                if (f == 0.0) continue;
                for (std::size_t c = col; c < d; ++c) rows[r][c] -= f * rows[row][c];
            }
            pivot_col[row] = static_cast<int>(col);
            ++row;
        }
        if (row < d - 1) throw NotGeneral("hull facet is rank-deficient");
        std::vector<bool> is_pivot(d, false);
        for (int pc : pivot_col) is_pivot[pc] = true;
        std::size_t free_col = 0;
        while (free_col < d && is_pivot[free_col]) ++free_col;
        normal.assign(d, 0.0);
        normal[free_col] = 1.0;
        for (std::size_t r = 0; r < d - 1; ++r) {
            int pc = pivot_col[r];
            normal[pc] = -rows[r][free_col] / rows[r][pc];
        }
        normal = normalized(std::move(normal));
        offset = 0.0;
        for (int id : ids) offset += dot(normal, pts[id]);
        offset /= static_cast<double>(d);
        double side = dot(normal, interior) - offset;
        if (std::abs(side) <= kGeomTol)
            throw DegenerateInput("interior reference on a facet plane");
        if (side > 0.0) {
            for (double& c : normal) c = -c;
            offset = -offset;
        }
    }

    int make_facet(std::vector<int> ids) {
        std::sort(ids.begin(), ids.end());
        HullFacet f;
        plane_through(ids, f.normal, f.offset);
        f.vertices = std::move(ids);
        f.neighbors.assign(d, -1);
        facets.push_back(std::move(f));
        alive.push_back(true);
        return static_cast<int>(facets.size()) - 1;
    }

    double signed_height(int facet, const Point& x) const {
        return dot(facets[facet].normal, x) - facets[facet].offset;
    }

    bool visible_from(int facet, const Point& x) const {
        double s = signed_height(facet, x);
        if (std::abs(s) <= kGeomTol)
            throw NotGeneral("point on a facet plane at tolerance");
        return s > 0.0;
    }
};

std::vector<int> ridge_without(const std::vector<int>& vertices, std::size_t slot) {
    std::vector<int> r;
    r.reserve(vertices.size() - 1);
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (i != slot) r.push_back(vertices[i]);
    return r;
}

std::size_t slot_of(const std::vector<int>& vertices, int id) {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), id);
    return static_cast<std::size_t>(it - vertices.begin());
}

// Wires neighbor links among the given facets from scratch (seed simplex).
void wire_all(Builder& b, const std::vector<int>& facet_ids) {
    RidgeMap ridges;
    for (int f : facet_ids) {
        const auto& verts = b.facets[f].vertices;
        for (std::size_t slot = 0; slot < verts.size(); ++slot) {
            std::vector<int> key = ridge_without(verts, slot);
            auto it = ridges.find(key);
            if (it == ridges.end()) {
                ridges.emplace(std::move(key), std::make_pair(f, static_cast<int>(slot)));
            } else {
                auto [g, gslot] = it->second;
                b.facets[f].neighbors[slot] = g;
                b.facets[g].neighbors[gslot] = f;
            }
        }
    }
}

// Greedy max-volume seed: repeatedly add the point farthest from the current
// affine hull, tracked with an orthonormal basis.
std::vector<int> greedy_seed(std::span<const Point> pts) {
    const std::size_t d = pts[0].size();
    std::vector<int> seed{0};
    std::vector<Point> basis;
    while (seed.size() < d + 1) {
        int best = -1;
        double best_res = 0.0;
        Point best_dir;
        for (std::size_t q = 0; q < pts.size(); ++q) {
            if (std::find(seed.begin(), seed.end(), static_cast<int>(q)) != seed.end())
                continue;
            Point v(d);
            for (std::size_t c = 0; c < d; ++c) v[c] = pts[q][c] - pts[seed[0]][c];
            for (const Point& e : basis) {
                double proj = dot(v, e);
                for (std::size_t c = 0; c < d; ++c) v[c] -= proj * e[c];
            }
            double res = norm(v);
            if (res > best_res) {
                best_res = res;
                best = static_cast<int>(q);
                best_dir = std::move(v);
            }
        }
        if (best < 0 || best_res <= kGeomTol)
            throw DegenerateInput("point cloud is not full-dimensional");
        seed.push_back(best);
        for (double& c : best_dir) c /= best_res;
        basis.push_back(std::move(best_dir));
    }
    return seed;
}

}  // namespace

HullComplex build_hull(std::span<const Point> points) {
    if (points.empty()) throw DegenerateInput("empty point cloud");
    const std::size_t d = points[0].size();
    if (d < 2) throw DomainError("build_hull: ambient dimension must be >= 2");
    if (points.size() < d + 1)
        throw DegenerateInput("build_hull: need at least n+2 points");
    for (const Point& p : points) {
        if (p.size() != d) throw DimensionMismatch("build_hull: mixed dimensions");
        check_unit(p);
    }

    Builder b;
    b.pts = points;
    b.d = d;

    std::vector<int> seed = greedy_seed(points);
    // centroid of the seed simplex: interior to every partial hull, hence a
    // valid outward-orientation reference throughout the build
    b.interior.assign(d, 0.0);
    for (int s : seed)
        for (std::size_t c = 0; c < d; ++c) b.interior[c] += points[s][c];
    for (double& c : b.interior) c /= static_cast<double>(seed.size());
    std::vector<bool> in_seed(points.size(), false);
    for (int s : seed) in_seed[s] = true;

    std::vector<int> init;
    for (std::size_t omit = 0; omit < seed.size(); ++omit) {
        std::vector<int> ids;
        for (std::size_t i = 0; i < seed.size(); ++i)
            if (i != omit) ids.push_back(seed[i]);
        init.push_back(b.make_facet(std::move(ids)));
    }
    wire_all(b, init);

    for (std::size_t q = 0; q < points.size(); ++q) {
        if (in_seed[q]) continue;
        const Point& x = points[q];

        int start = -1;
        for (std::size_t f = 0; f < b.facets.size(); ++f) {
            if (!b.alive[f]) continue;
            if (b.visible_from(static_cast<int>(f), x)) {
                start = static_cast<int>(f);
                break;
            }
        }
        if (start < 0)
            throw NotGeneral("sphere point inside the current hull at tolerance");

        // flood the visible region through adjacency
        std::vector<int> visible{start};
        std::vector<char> seen(b.facets.size(), 0);
        seen[start] = 1;
        std::deque<int> queue{start};
        while (!queue.empty()) {
            int f = queue.front();
            queue.pop_front();
            for (int g : b.facets[f].neighbors) {
                if (g < 0 || seen[g] || !b.alive[g]) continue;
                seen[g] = 1;
                if (b.visible_from(g, x)) {
                    visible.push_back(g);
                    queue.push_back(g);
                }
            }
        }
        std::vector<char> is_visible(b.facets.size(), 0);
        for (int f : visible) is_visible[f] = 1;

        // horizon ridges -> new facets
        std::vector<int> fresh;
        for (int f : visible) {
            const auto verts = b.facets[f].vertices;  // copy: facets vector grows
            for (std::size_t slot = 0; slot < verts.size(); ++slot) {
                int g = b.facets[f].neighbors[slot];
                if (g < 0 || is_visible[g]) continue;
                std::vector<int> ids = ridge_without(verts, slot);
                std::vector<int> ridge = ids;
                ids.push_back(static_cast<int>(q));
                int nf = b.make_facet(std::move(ids));
                is_visible.push_back(0);
                fresh.push_back(nf);
                // link the new facet with the surviving facet across the ridge
                std::size_t nf_slot = slot_of(b.facets[nf].vertices, static_cast<int>(q));
                b.facets[nf].neighbors[nf_slot] = g;
                for (std::size_t gs = 0; gs < b.facets[g].vertices.size(); ++gs) {
                    if (b.facets[g].neighbors[gs] == f) {
                        if (ridge_without(b.facets[g].vertices, gs) == ridge) {
                            b.facets[g].neighbors[gs] = nf;
                            break;
                        }
                    }
                }
            }
        }

        // link the new facets among themselves across sub-ridges through q
        RidgeMap open;
        for (int nf : fresh) {
            const auto& verts = b.facets[nf].vertices;
            for (std::size_t slot = 0; slot < verts.size(); ++slot) {
                if (verts[slot] == static_cast<int>(q)) continue;
                std::vector<int> key = ridge_without(verts, slot);
                auto it = open.find(key);
                if (it == open.end()) {
                    open.emplace(std::move(key), std::make_pair(nf, static_cast<int>(slot)));
                } else {
                    auto [g, gslot] = it->second;
                    b.facets[nf].neighbors[slot] = g;
                    b.facets[g].neighbors[gslot] = nf;
                    open.erase(it);
                }
            }
        }
        if (!open.empty()) throw NotGeneral("horizon did not close up");

        for (int f : visible) b.alive[f] = 0;
    }

    // compact into the result, remapping neighbor ids
    HullComplex hull;
    hull.n = static_cast<int>(d) - 1;
    hull.points.assign(points.begin(), points.end());
    std::vector<int> remap(b.facets.size(), -1);
    for (std::size_t f = 0; f < b.facets.size(); ++f) {
        if (!b.alive[f]) continue;
        remap[f] = static_cast<int>(hull.facets.size());
        hull.facets.push_back(std::move(b.facets[f]));
    }
    for (HullFacet& f : hull.facets)
        for (int& g : f.neighbors) {
            if (g < 0 || remap[g] < 0)
                throw NotGeneral("dangling ridge after construction");
            g = remap[g];
        }

    // final sanity: every ridge shared by exactly two facets, all points inside
    RidgeMap ridges;
    for (std::size_t f = 0; f < hull.facets.size(); ++f) {
        const auto& verts = hull.facets[f].vertices;
        for (std::size_t slot = 0; slot < verts.size(); ++slot) {
            std::vector<int> key = ridge_without(verts, slot);
            auto it = ridges.find(key);
            if (it == ridges.end())
                ridges.emplace(std::move(key), std::make_pair(static_cast<int>(f), 1));
            else
                it->second.second += 1;
        }
    }
    for (const auto& [key, rec] : ridges)
        if (rec.second != 2) throw NotGeneral("ridge not shared by exactly 2 facets");
    for (const HullFacet& f : hull.facets)
        for (const Point& p : hull.points)
            if (dot(f.normal, p) - f.offset > kGeomTol)
                throw NotGeneral("hull containment violated at tolerance");
    return hull;
}

std::map<int, std::set<Face>> enumerate_faces(const HullComplex& hull) {
    std::map<int, std::set<Face>> faces;
    for (int dim = 0; dim <= hull.n; ++dim) faces[dim];
    for (const HullFacet& f : hull.facets) {
        const std::size_t m = f.vertices.size();
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
            Face face;
            for (std::size_t i = 0; i < m; ++i)
                if (mask & (1u << i)) face.vertex_ids.push_back(f.vertices[i]);
            faces[face.dim()].insert(std::move(face));
        }
    }
    return faces;
}

}  // namespace sdm
