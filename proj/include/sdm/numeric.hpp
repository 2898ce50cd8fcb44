#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace sdm {

// One panel of Gauss-Legendre nodes/weights on [-1,1]. Computed once per
// order and cached.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int order);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // |last - previous| of the doubling sequence
};

// Composite Gauss-Legendre over 2^m uniform subintervals of [a,b], doubling m
// until successive values agree to rel_tol (plus a tiny absolute floor).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10, int order = 16, int max_doublings = 16);

// Same, but the integrand is only piecewise smooth: split at the interior
// breakpoints first.
QuadResult integrate_piecewise(const std::function<double(double)>& f, double a,
                               double b, const std::vector<double>& breakpoints,
                               double rel_tol = 1e-10, int order = 16);

double binomial(int n, int k);

// Locale-independent decimal formatting with 12 significant digits.
std::string format_real(double x);

// Shortest representation that round-trips exactly (cloud dumps).
std::string format_real_exact(double x);

// Mean / standard-error accumulator for Monte Carlo sums.
struct RunningStat {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
    void merge(const RunningStat& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }
    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
    double variance() const;
    double stderr_mean() const;
};

// Deterministic batch-parallel map: items [0,n) are split into fixed-size
// batches, worker threads claim batches, and merge happens in batch order so
// the result does not depend on scheduling.
void parallel_batches(std::size_t num_batches, int threads,
                      const std::function<void(std::size_t)>& run_batch);

}  // namespace sdm
