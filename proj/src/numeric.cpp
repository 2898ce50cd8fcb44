#include "sdm/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "sdm/errors.hpp"

namespace sdm {

namespace {

GaussLegendre compute_gl(int order) {
    GaussLegendre gl;
    gl.nodes.resize(order);
    gl.weights.resize(order);
    // Newton on P_n with the Chebyshev initial guess; converges in a handful
    // of steps for any order we use.
    for (int i = 0; i < order; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= order; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.nodes[i] = x;
        gl.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

double panel_sum(const std::function<double(double)>& f, double a, double b,
                 int pieces, const GaussLegendre& gl) {
    double h = (b - a) / pieces;
    double total = 0.0;
    for (int p = 0; p < pieces; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h;
        double half = 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
            s += gl.weights[i] * f(mid + half * gl.nodes[i]);
        total += s * half;
    }
    return total;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
    static std::mutex mtx;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
    return it->second;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, int order, int max_doublings) {
    QuadResult res;
    if (!(b > a)) return res;
    const GaussLegendre& gl = gauss_legendre(order);
    double prev = panel_sum(f, a, b, 1, gl);
    int pieces = 2;
    for (int m = 1; m <= max_doublings; ++m, pieces *= 2) {
        double cur = panel_sum(f, a, b, pieces, gl);
        res.value = cur;
        res.error = std::abs(cur - prev);
        if (res.error <= rel_tol * std::abs(cur) + 1e-300) return res;
        prev = cur;
    }
    return res;
}

QuadResult integrate_piecewise(const std::function<double(double)>& f, double a,
                               double b, const std::vector<double>& breakpoints,
                               double rel_tol, int order) {
    std::vector<double> cuts{a};
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    QuadResult total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        QuadResult part = integrate(f, cuts[i], cuts[i + 1], rel_tol, order);
        total.value += part.value;
        total.error += part.error;
    }
    return total;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

std::string format_real(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x,
                                   std::chars_format::general, 12);
    if (ec != std::errc()) throw IoError("number formatting failed");
    return std::string(buf, ptr);
}

std::string format_real_exact(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw IoError("number formatting failed");
    return std::string(buf, ptr);
}

double RunningStat::variance() const {
    if (count < 2) return 0.0;
    double n = static_cast<double>(count);
    double m = sum / n;
    double v = (sum_sq - n * m * m) / (n - 1.0);
    return std::max(v, 0.0);
}

double RunningStat::stderr_mean() const {
    if (count < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(count));
}

void parallel_batches(std::size_t num_batches, int threads,
                      const std::function<void(std::size_t)>& run_batch) {
    threads = std::max(1, threads);
    if (threads == 1 || num_batches <= 1) {
        for (std::size_t b = 0; b < num_batches; ++b) run_batch(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mtx;
    auto worker = [&]() {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= num_batches) return;
            try {
                run_batch(b);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int nthreads = static_cast<int>(std::min<std::size_t>(threads, num_batches));
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sdm
