#include <doctest.h>

#include <cmath>

#include "sdm/errors.hpp"
#include "sdm/specfun.hpp"

using namespace sdm;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("sphere areas and ball volumes") {
    CHECK(sphere_area(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sphere_area(2) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
    CHECK(sphere_area(3) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
    CHECK(sphere_area(4) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-13));
    CHECK(ball_volume(1) == doctest::Approx(2.0));
    CHECK(ball_volume(2) == doctest::Approx(M_PI));
    CHECK(ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
    CHECK_THROWS_AS(sphere_area(0), DomainError);
}

TEST_CASE("gamma function basics") {
    CHECK(gamma_fn(1.0) == 1.0);
    CHECK(gamma_fn(5.0) == 24.0);
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(gamma_fn(2.5) ==
          doctest::Approx(1.5 * 0.5 * std::sqrt(M_PI)).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-1.5), DomainError);
}

TEST_CASE("incomplete beta endpoints and closed forms") {
    // B_1(a,b) = Gamma(a)Gamma(b)/Gamma(a+b)
    for (double a : {0.5, 1.0, 2.5, 7.0}) {
        for (double b : {0.5, 1.5, 4.0}) {
            double full = beta_inc(1.0, a, b);
            double expect = gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b);
            CHECK(full == doctest::Approx(expect).epsilon(1e-10));
        }
    }
    // constant integrand
    for (double u = 0.0; u <= 1.0; u += 0.125)
        CHECK(beta_inc(u, 1.0, 1.0) == doctest::Approx(u).epsilon(1e-13));
    // B_u(1/2,1/2) = 2 arcsin(sqrt u)
    for (double u : {0.1, 0.25, 0.5, 0.77, 0.99}) {
        CHECK(beta_inc(u, 0.5, 0.5) ==
              doctest::Approx(2.0 * std::asin(std::sqrt(u))).epsilon(1e-12));
    }
    CHECK(beta_inc(0.5, 0.5, 0.5) == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(beta_inc(-0.1, 1, 1), DomainError);
    CHECK_THROWS_AS(beta_inc(1.1, 1, 1), DomainError);
    CHECK_THROWS_AS(beta_inc(0.5, 0, 1), DomainError);
}

TEST_CASE("incomplete beta is nondecreasing in u") {
    for (double a : {0.5, 2.0}) {
        for (double b : {0.5, 3.0}) {
            double prev = 0.0;
            for (double u = 0.0; u <= 1.0001; u += 0.01) {
                double v = beta_inc(std::min(u, 1.0), a, b);
                CHECK(v >= prev - 1e-15);
                prev = v;
            }
        }
    }
}

TEST_CASE("lower incomplete gamma") {
    CHECK(gamma_lower(kInf, 1.0) == doctest::Approx(1.0));
    CHECK(gamma_lower(kInf, 4.0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(gamma_lower(kInf, 6.0) == doctest::Approx(120.0).epsilon(1e-12));
    for (double v : {0.01, 0.5, 1.0, 3.0, 10.0})
        CHECK(gamma_lower(v, 1.0) ==
              doctest::Approx(1.0 - std::exp(-v)).epsilon(1e-12));
    CHECK(gamma_lower(0.0, 3.3) == 0.0);
    // monotone convergence to Gamma(k)
    for (double k : {0.7, 2.0, 5.5}) {
        double prev = 0.0;
        for (double u : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 64.0}) {
            double g = gamma_lower(u, k);
            CHECK(g >= prev);
            CHECK(g <= gamma_fn(k) * (1 + 1e-12));
            prev = g;
        }
        CHECK(gamma_lower(64.0, k) == doctest::Approx(gamma_fn(k)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(gamma_lower(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(gamma_lower(-1.0, 1.0), DomainError);
}

TEST_CASE("cap area endpoints and the n=2 closed form") {
    for (int n = 1; n <= 4; ++n) {
        double total = sphere_area(n + 1);
        CHECK(cap_area(0.0, n) == doctest::Approx(0.0));
        CHECK(cap_area(M_PI / 2.0, n) == doctest::Approx(total / 2.0).epsilon(1e-12));
        CHECK(cap_area(M_PI, n) == doctest::Approx(total).epsilon(1e-12));
    }
    // on S^2 the cap area is 2 pi (1 - cos theta)
    for (double th = 0.1; th < M_PI; th += 0.3)
        CHECK(cap_area(th, 2) ==
              doctest::Approx(2.0 * M_PI * (1.0 - std::cos(th))).epsilon(1e-11));
    CHECK(cap_area(M_PI / 3.0, 2) == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK_THROWS_AS(cap_area(-0.1, 2), DomainError);
    CHECK_THROWS_AS(cap_area(M_PI + 0.1, 2), DomainError);
}

TEST_CASE("cap area antipodal complement") {
    for (int n = 1; n <= 4; ++n) {
        double total = sphere_area(n + 1);
        for (double th = 0.0; th <= M_PI + 1e-12; th += M_PI / 17.0) {
            double t = std::min(th, M_PI);
            CHECK(cap_area(t, n) + cap_area(M_PI - t, n) ==
                  doctest::Approx(total).epsilon(1e-10));
        }
    }
}

TEST_CASE("cap area derivative matches the zonal area element") {
    // d/dtheta A(theta) = sigma_n sin^(n-1) theta
    const double h = 1e-5;
    for (int n = 1; n <= 4; ++n) {
        for (double th : {0.4, 0.9, 1.3, 1.9, 2.6}) {
            double numeric = (cap_area(th + h, n) - cap_area(th - h, n)) / (2 * h);
            double exact = sphere_area(n) * std::pow(std::sin(th), n - 1);
            CHECK(numeric == doctest::Approx(exact).epsilon(1e-6));
        }
    }
}

TEST_CASE("grassmannian measure") {
    CHECK(grassmannian_measure(1, 2) == doctest::Approx(M_PI).epsilon(1e-13));
    CHECK(grassmannian_measure(1, 3) == doctest::Approx(2.0 * M_PI).epsilon(1e-13));
    for (int n = 2; n <= 6; ++n)
        for (int k = 1; k < n; ++k)
            CHECK(grassmannian_measure(k, n) ==
                  doctest::Approx(grassmannian_measure(n - k, n)).epsilon(1e-12));
    CHECK_THROWS_AS(grassmannian_measure(0, 2), DomainError);
    CHECK_THROWS_AS(grassmannian_measure(3, 2), DomainError);
}

TEST_CASE("beta/gamma cross identity") {
    for (double a : {0.5, 1.0, 3.5})
        for (double b : {0.5, 2.0}) {
            double lhs = beta_inc(1.0, a, b) * gamma_fn(a + b);
            double rhs = gamma_fn(a) * gamma_fn(b);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
}
