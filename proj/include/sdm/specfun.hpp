#pragma once

namespace sdm {

// Numeric result with an absolute error bound (0 for closed forms).
struct SpecValue {
    double value = 0.0;
    double abs_error_bound = 0.0;
};

// Gamma function for x > 0. Exact factorial for integer arguments (up to the
// double overflow guard), Lanczos otherwise.
double gamma_fn(double x);
double log_gamma(double x);  // x > 0

// Complete Beta function B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b).
double beta_fn(double a, double b);

// Area of the unit (n-1)-sphere in R^n.
double sphere_area(int n);

// Volume of the unit n-ball: sphere_area(n)/n.
double ball_volume(int n);

// Incomplete Beta B_u(a,b) = int_0^u t^(a-1) (1-t)^(b-1) dt, 0 <= u <= 1.
// Not regularized: beta_inc(1,a,b) == beta_fn(a,b).
double beta_inc(double u, double a, double b);
SpecValue beta_inc_full(double u, double a, double b);

// Lower incomplete gamma int_0^u t^(k-1) e^-t dt. u may be +infinity, in
// which case the complete Gamma(k) is returned.
double gamma_lower(double u, double k);
SpecValue gamma_lower_full(double u, double k);

// Area of the spherical cap of geodesic radius theta in [0,pi] on the
// n-sphere S^n (living in R^(n+1)).
double cap_area(double theta, int n);

// Measure of the Grassmannian of k-planes through the origin in R^n,
// 1 <= k <= n.
double grassmannian_measure(int k, int n);

}  // namespace sdm
