#pragma once

#include <span>
#include <vector>

namespace sdm {

// A point of R^d, d = n+1 when it lives on the sphere S^n.
using Point = std::vector<double>;

// Tolerance shared by the geometric predicates in this library. A point is
// "on" a plane / cap boundary when the relevant functional is within this of
// zero; random inputs hitting it are resampled by the experiment layer.
inline constexpr double kGeomTol = 1e-9;

// Projection data of a simplex on the sphere: foot of the origin on the
// affine hull, Euclidean and geodesic circumradius.
struct CircumData {
    Point foot;                 // p, orthogonal projection of 0 onto aff(Q)
    double euclid_radius = 0.0; // r, with r^2 + |p|^2 = 1
    double height = 0.0;        // |p|
    double geo_radius = 0.0;    // theta = atan2(r, |p|) in [0, pi/2)
    double t = 0.0;             // r^2 = sin^2 theta
};

struct Cap {
    Point center;            // unit vector
    double geo_radius = 0.0; // radians in [0, pi]
};

double dot(const Point& a, const Point& b);
double norm(const Point& a);
Point normalized(Point a);
void check_unit(const Point& a);  // throws DomainError beyond 1e-9

// Geodesic distance on the unit sphere, in [0, pi].
double geodesic_distance(const Point& x, const Point& y);

// Orthogonal projection of the origin onto the affine hull of 1 <= k+1 <= d
// unit points, plus the derived circumradius data. Throws DegenerateSimplex
// when the hull is rank-deficient at tolerance and GreatSphere when the foot
// is (numerically) the origin.
CircumData project_origin(std::span<const Point> simplex);

// The smallest circumscribed cap: center foot/|foot|, radius arccos|foot|.
Cap smallest_circumscribed_cap(std::span<const Point> simplex);

// k-dimensional volume of the simplex spanned by k+1 points in R^m,
// sqrt(det(G^T G))/k!; 0 for degenerate input.
double simplex_volume(std::span<const Point> points);

// Indices i such that the facet opposite vertex i is visible from `foot`
// (which must lie in the affine hull, as produced by project_origin).
// Facet i is visible iff the barycentric coordinate of foot at vertex i is
// < -tol; |coord| <= tol throws TangencyAtTolerance.
std::vector<int> visible_facets(std::span<const Point> simplex, const Point& foot);

// Barycentric coordinates of a point of the affine hull w.r.t. the simplex
// vertices. Exposed for the separation tests in the constants module.
std::vector<double> barycentric_coordinates(std::span<const Point> simplex,
                                            const Point& q);

// Gaussian elimination with partial pivoting; returns false when a pivot
// falls below tol. `a` is row-major square, `b` the right-hand side (both
// clobbered); the solution lands in b.
bool solve_linear(std::vector<std::vector<double>>& a, std::vector<double>& b,
                  double tol);

}  // namespace sdm
