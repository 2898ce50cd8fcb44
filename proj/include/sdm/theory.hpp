#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sdm/constants.hpp"
#include "sdm/numeric.hpp"

namespace sdm {

struct TheoryValue {
    double value = 0.0;
    double quadrature_error = 0.0;  // numeric error only; MC error lives in CTable
    std::string formula_tag;
};

// The radius integral shared by the finite-density formula and its
// boundedness check:
//   int_0^(sin^2 theta0) rho^k t^((kn-2)/2) (1-t)^((n-k-1)/2)
//                        e^(-rho A(arcsin sqrt t)) dt,
// evaluated after the substitution t = sin^2 phi, which removes both
// endpoint singularities.
QuadResult radius_integral(int k, int n, double rho, double theta0);

// Expected number of intervals of type (ell,k) with geodesic radius <=
// theta0 at finite density (the integral formula).
TheoryValue expected_intervals_exact(int ell, int k, int n, double rho,
                                     double theta0, double C);

// Asymptotic law: rho sigma_(n+1) * gamma_v(k)/Gamma(k) * C with
// v = R0^n nu_n; R0 may be +infinity.
TheoryValue expected_intervals_asymptotic(int ell, int k, int n, double rho,
                                          double R0, double C);

// Expected number of j-simplices with normalized radius <= R0.
TheoryValue expected_simplices(int j, int n, double rho, double R0,
                               const CTable& table);

// Limit distribution of the normalized radius of the typical j-simplex.
TheoryValue typical_radius_cdf(int j, int n, double R0, const CTable& table);

// First-order law for N uniform points instead of a Poisson process.
TheoryValue expected_intervals_uniform(int ell, int k, int n, double N,
                                       double R0, double C);

// Rotationally symmetric test function h(t), t = squared Euclidean
// circumradius in [0,1]. Breakpoints mark jump locations so the quadrature
// can split there.
struct RadialProfile {
    std::function<double(double)> h;
    std::vector<double> breakpoints;
};

struct BpCheckResult {
    double lhs = 0.0;
    double lhs_se = 0.0;
    double rhs = 0.0;
    double rhs_err = 0.0;
};

// Monte Carlo check of the spherical Blaschke-Petkantschin identity: the
// direct (S^n)^(k+1) average of h against the plane-decomposed right-hand
// side. Both sides carry error bars.
BpCheckResult bp_check(int n, int k, const RadialProfile& profile,
                       std::uint64_t mc_samples, std::uint64_t seed,
                       int threads = 1);

}  // namespace sdm
