#include "sdm/geom.hpp"

#include <algorithm>
#include <cmath>

#include "sdm/errors.hpp"

namespace sdm {

double dot(const Point& a, const Point& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("dot: vectors of different dimension");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Point& a) { return std::sqrt(dot(a, a)); }

Point normalized(Point a) {
    double n = norm(a);
    if (n < 1e-300) throw DomainError("normalized: zero vector");
    for (double& c : a) c /= n;
    return a;
}

void check_unit(const Point& a) {
    if (std::abs(norm(a) - 1.0) > kGeomTol)
        throw DomainError("expected a unit vector");
}

double geodesic_distance(const Point& x, const Point& y) {
    if (x.size() != y.size())
        throw DimensionMismatch("geodesic_distance: dimension mismatch");
    check_unit(x);
    check_unit(y);
    double c = std::clamp(dot(x, y), -1.0, 1.0);
    return std::acos(c);
}

bool solve_linear(std::vector<std::vector<double>>& a, std::vector<double>& b,
                  double tol) {
    const std::size_t m = a.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) <= tol) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < m; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t col = m; col-- > 0;) {
        double s = b[col];
        for (std::size_t c = col + 1; c < m; ++c) s -= a[col][c] * b[c];
        b[col] = s / a[col][col];
    }
    return true;
}

namespace {

// Solves the affine-hull least-squares system: returns coefficients lambda
// such that x0 + sum lambda_i (x_i - x0) is the projection of `target` onto
// the affine hull. Throws DegenerateSimplex on rank deficiency.
std::vector<double> affine_coefficients(std::span<const Point> pts,
                                        const Point& target) {
    const std::size_t m = pts.size() - 1;  // number of difference vectors
    const Point& base = pts[0];
    std::vector<std::vector<double>> gram(m, std::vector<double>(m));
    std::vector<double> rhs(m);
    Point shifted(target.size());
    for (std::size_t c = 0; c < target.size(); ++c)
        shifted[c] = target[c] - base[c];
    std::vector<Point> diffs(m, Point(base.size()));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c < base.size(); ++c)
            diffs[i][c] = pts[i + 1][c] - base[c];
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j)
            gram[i][j] = gram[j][i] = dot(diffs[i], diffs[j]);
        rhs[i] = dot(diffs[i], shifted);
    }
    // rank check relative to the Gram scale: a uniformly small simplex is
    // fine, a genuinely flat one is not
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, gram[i][i]);
    if (!solve_linear(gram, rhs, std::max(kGeomTol * scale, 1e-300)))
        throw DegenerateSimplex("affine hull rank-deficient at tolerance");
    return rhs;
}

void validate_simplex(std::span<const Point> pts, std::size_t max_extra) {
    if (pts.empty()) throw DomainError("simplex needs at least one point");
    const std::size_t d = pts[0].size();
    if (pts.size() > d + max_extra)
        throw DomainError("simplex has more points than the ambient dimension");
    for (const Point& p : pts) {
        if (p.size() != d)
            throw DimensionMismatch("simplex points of mixed dimension");
        check_unit(p);
    }
}

}  // namespace

CircumData project_origin(std::span<const Point> simplex) {
    validate_simplex(simplex, 0);  // on-sphere simplices have k+1 <= n+1 points
    CircumData cd;
    if (simplex.size() == 1) {
        cd.foot = simplex[0];
        cd.height = 1.0;
        return cd;
    }
    Point origin(simplex[0].size(), 0.0);
    std::vector<double> lambda = affine_coefficients(simplex, origin);
    cd.foot = simplex[0];
    for (std::size_t i = 0; i < lambda.size(); ++i)
        for (std::size_t c = 0; c < cd.foot.size(); ++c)
            cd.foot[c] += lambda[i] * (simplex[i + 1][c] - simplex[0][c]);
    cd.height = norm(cd.foot);
    if (cd.height <= kGeomTol)
        throw GreatSphere("cap boundary is a great-sphere at tolerance");
    Point resid = simplex[0];
    for (std::size_t c = 0; c < resid.size(); ++c) resid[c] -= cd.foot[c];
    cd.euclid_radius = norm(resid);
    cd.geo_radius = std::atan2(cd.euclid_radius, cd.height);
    cd.t = cd.euclid_radius * cd.euclid_radius;
    return cd;
}

Cap smallest_circumscribed_cap(std::span<const Point> simplex) {
    CircumData cd = project_origin(simplex);
    Cap cap;
    cap.center = normalized(std::move(cd.foot));
    cap.geo_radius = cd.geo_radius;
    return cap;
}

double simplex_volume(std::span<const Point> points) {
    if (points.empty()) throw DomainError("simplex_volume: no points");
    const std::size_t k = points.size() - 1;
    if (k == 0) return 1.0;
    const std::size_t d = points[0].size();
    if (k > d) throw DomainError("simplex_volume: k exceeds ambient dimension");
    std::vector<Point> diffs(k, Point(d));
    for (std::size_t i = 0; i < k; ++i) {
        if (points[i + 1].size() != d)
            throw DimensionMismatch("simplex_volume: mixed dimensions");
        for (std::size_t c = 0; c < d; ++c)
            diffs[i][c] = points[i + 1][c] - points[0][c];
    }
    std::vector<std::vector<double>> gram(k, std::vector<double>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j)
            gram[i][j] = gram[j][i] = dot(diffs[i], diffs[j]);
    // determinant by plain elimination; near-zero means degenerate, not error
    double det = 1.0;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(gram[r][col]) > std::abs(gram[piv][col])) piv = r;
        if (gram[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(gram[piv], gram[col]);
            det = -det;
        }
        det *= gram[col][col];
        for (std::size_t r = col + 1; r < k; ++r) {
            double f = gram[r][col] / gram[col][col];
            for (std::size_t c = col; c < k; ++c) gram[r][c] -= f * gram[col][c];
        }
    }
    if (det <= 0.0) return 0.0;
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    return std::sqrt(det) / fact;
}

std::vector<double> barycentric_coordinates(std::span<const Point> simplex,
                                            const Point& q) {
    validate_simplex(simplex, 1);  // full-dimensional simplices allowed here
    if (simplex.size() == 1) return {1.0};
    std::vector<double> lambda = affine_coefficients(simplex, q);
    std::vector<double> bary(simplex.size());
    double rest = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        bary[i + 1] = lambda[i];
        rest += lambda[i];
    }
    bary[0] = 1.0 - rest;
    return bary;
}

std::vector<int> visible_facets(std::span<const Point> simplex, const Point& foot) {
    if (simplex.size() == 1) return {};
    std::vector<double> bary = barycentric_coordinates(simplex, foot);
    std::vector<int> visible;
    for (std::size_t i = 0; i < bary.size(); ++i) {
        if (std::abs(bary[i]) <= kGeomTol)
            throw TangencyAtTolerance(
                "cap center on a facet plane at tolerance");
        if (bary[i] < 0.0) visible.push_back(static_cast<int>(i));
    }
    return visible;
}

}  // namespace sdm
