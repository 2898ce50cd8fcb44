#include "sdm/theory.hpp"

#include <cmath>
#include <limits>

#include "sdm/errors.hpp"
#include "sdm/geom.hpp"
#include "sdm/sampling.hpp"
#include "sdm/specfun.hpp"

namespace sdm {

namespace {

constexpr std::uint64_t kBatchSize = 8192;

double gamma_ratio(double v, int k) {
    // gamma_v(k) / Gamma(k); v may be +infinity
    return gamma_lower(v, static_cast<double>(k)) /
           gamma_fn(static_cast<double>(k));
}

double ball_from_normalized(double R0, int n) {
    if (std::isinf(R0)) return std::numeric_limits<double>::infinity();
    return std::pow(R0, n) * ball_volume(n);
}

}  // namespace

QuadResult radius_integral(int k, int n, double rho, double theta0) {
    if (k < 1 || k > n) throw DomainError("radius_integral: need 1 <= k <= n");
    if (!(rho > 0.0)) throw DomainError("radius_integral: rho must be > 0");
    if (!(theta0 >= 0.0) || theta0 > 0.5 * M_PI + 1e-15)
        throw DomainError("radius_integral: theta0 must lie in [0, pi/2]");
    const double rk = std::pow(rho, k);
    const double sin_pow = k * n - 1.0;
    const double cos_pow = static_cast<double>(n - k);
    auto integrand = [&](double phi) {
        double s = std::sin(phi), c = std::cos(phi);
        return 2.0 * rk * std::pow(s, sin_pow) * std::pow(c, cos_pow) *
               std::exp(-rho * cap_area(phi, n));
    };
    return integrate(integrand, 0.0, std::min(theta0, 0.5 * M_PI), 1e-8, 16, 20);
}

TheoryValue expected_intervals_exact(int ell, int k, int n, double rho,
                                     double theta0, double C) {
    if (ell < 1 || ell > k || k > n)
        throw DomainError("expected_intervals_exact: need 1 <= ell <= k <= n");
    QuadResult j = radius_integral(k, n, rho, theta0);
    double front = rho * sphere_area(n + 1) * std::pow(sphere_area(n), k) /
                   (2.0 * gamma_fn(static_cast<double>(k)) * std::pow(n, k - 1)) *
                   C;
    TheoryValue tv;
    tv.value = front * j.value;
    tv.quadrature_error = std::abs(front) * j.error;
    tv.formula_tag = "eq5";
    return tv;
}

TheoryValue expected_intervals_asymptotic(int ell, int k, int n, double rho,
                                          double R0, double C) {
    if (ell < 1 || ell > k || k > n)
        throw DomainError("expected_intervals_asymptotic: need 1 <= ell <= k <= n");
    if (!(rho > 0.0)) throw DomainError("expected_intervals_asymptotic: rho > 0");
    if (std::isnan(R0) || R0 < 0.0)
        throw DomainError("expected_intervals_asymptotic: R0 must be >= 0 or inf");
    TheoryValue tv;
    tv.value = rho * sphere_area(n + 1) * gamma_ratio(ball_from_normalized(R0, n), k) * C;
    tv.formula_tag = "eq6";
    return tv;
}

TheoryValue expected_simplices(int j, int n, double rho, double R0,
                               const CTable& table) {
    if (j < 1 || j > n) throw DomainError("expected_simplices: need 1 <= j <= n");
    if (!(rho > 0.0)) throw DomainError("expected_simplices: rho > 0");
    double v = ball_from_normalized(R0, n);
    double total = 0.0;
    for (int k = j; k <= n; ++k) {
        double inner = 0.0;
        for (int ell = 0; ell <= j; ++ell)
            inner += binomial(k - ell, k - j) * table.value(ell, k);
        total += gamma_ratio(v, k) * inner;
    }
    TheoryValue tv;
    tv.value = rho * sphere_area(n + 1) * total;
    tv.formula_tag = "eq8";
    return tv;
}

TheoryValue typical_radius_cdf(int j, int n, double R0, const CTable& table) {
    if (j < 1 || j > n) throw DomainError("typical_radius_cdf: need 1 <= j <= n");
    DConstant d = constant_D(j, n, table);
    if (!(d.value > 0.0))
        throw DomainError("typical_radius_cdf: D constant must be positive");
    double v = ball_from_normalized(R0, n);
    double total = 0.0;
    for (int k = j; k <= n; ++k) {
        double inner = 0.0;
        for (int ell = 0; ell <= j; ++ell)
            inner += binomial(k - ell, k - j) * table.value(ell, k);
        total += gamma_ratio(v, k) * inner;
    }
    TheoryValue tv;
    tv.value = total / d.value;
    tv.formula_tag = "eq9";
    return tv;
}

TheoryValue expected_intervals_uniform(int ell, int k, int n, double N, double R0,
                                       double C) {
    if (ell < 1 || ell > k || k > n)
        throw DomainError("expected_intervals_uniform: need 1 <= ell <= k <= n");
    if (N < 0.0) throw DomainError("expected_intervals_uniform: N must be >= 0");
    TheoryValue tv;
    tv.value = N * gamma_ratio(ball_from_normalized(R0, n), k) * C;
    tv.formula_tag = "uniform";
    return tv;
}

BpCheckResult bp_check(int n, int k, const RadialProfile& profile,
                       std::uint64_t mc_samples, std::uint64_t seed, int threads) {
    if (k < 1 || k > n) throw DomainError("bp_check: need 1 <= k <= n");
    if (mc_samples < 1000) throw DomainError("bp_check: need >= 1000 samples");

    const std::uint64_t num_batches = (mc_samples + kBatchSize - 1) / kBatchSize;

    // left side: direct average of h over (S^n)^(k+1)
    std::vector<RunningStat> lhs_parts(num_batches);
    parallel_batches(num_batches, threads, [&](std::size_t b) {
        RunningStat acc;
        std::uint64_t lo = b * kBatchSize;
        std::uint64_t hi = std::min(mc_samples, lo + kBatchSize);
        RngStream g(seed, b, 1);
        std::vector<Point> pts(k + 1);
        for (std::uint64_t s = lo; s < hi; ++s) {
            for (;;) {
                for (int i = 0; i <= k; ++i) pts[i] = uniform_direction(g, n + 1);
                try {
                    CircumData cd = project_origin(pts);
                    acc.add(profile.h(cd.t));
                    break;
                } catch (const DegenerateSimplex&) {
                } catch (const GreatSphere&) {
                }
            }
        }
        lhs_parts[b] = acc;
    });
    RunningStat lhs_acc;
    for (const RunningStat& part : lhs_parts) lhs_acc.merge(part);

    // right side: volume moment over (S^(k-1))^(k+1) times the radial quadrature
    std::vector<RunningStat> vol_parts(num_batches);
    const int vol_power = n - k + 1;
    parallel_batches(num_batches, threads, [&](std::size_t b) {
        RunningStat acc;
        std::uint64_t lo = b * kBatchSize;
        std::uint64_t hi = std::min(mc_samples, lo + kBatchSize);
        RngStream g(seed, b, 2);
        std::vector<Point> pts(k + 1);
        for (std::uint64_t s = lo; s < hi; ++s) {
            for (int i = 0; i <= k; ++i) pts[i] = uniform_direction(g, k);
            acc.add(std::pow(simplex_volume(pts), vol_power));
        }
        vol_parts[b] = acc;
    });
    RunningStat vol_acc;
    for (const RunningStat& part : vol_parts) vol_acc.merge(part);

    const double sin_pow = k * n - 1.0;
    const double cos_pow = static_cast<double>(n - k);
    auto integrand = [&](double phi) {
        double s = std::sin(phi), c = std::cos(phi);
        return 2.0 * std::pow(s, sin_pow) * std::pow(c, cos_pow) *
               profile.h(s * s);
    };
    std::vector<double> cuts;
    for (double t : profile.breakpoints)
        if (t > 0.0 && t < 1.0) cuts.push_back(std::asin(std::sqrt(t)));
    QuadResult quad = integrate_piecewise(integrand, 0.0, 0.5 * M_PI, cuts, 1e-10, 16);

    double kfact = gamma_fn(static_cast<double>(k) + 1.0);
    double vol_scale = std::pow(sphere_area(k), k + 1) * std::pow(kfact, vol_power);
    double i_vol = vol_scale * vol_acc.mean();
    double i_vol_se = vol_scale * vol_acc.stderr_mean();
    double coef = 0.5 * sphere_area(n + 1) * grassmannian_measure(k, n);

    BpCheckResult res;
    double lhs_scale = std::pow(sphere_area(n + 1), k + 1);
    res.lhs = lhs_scale * lhs_acc.mean();
    res.lhs_se = lhs_scale * lhs_acc.stderr_mean();
    res.rhs = coef * quad.value * i_vol;
    res.rhs_err = coef * std::hypot(quad.error * i_vol, quad.value * i_vol_se);
    return res;
}

}  // namespace sdm
