#include "sdm/sampling.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sdm/errors.hpp"
#include "sdm/numeric.hpp"
#include "sdm/specfun.hpp"

namespace sdm {

std::array<std::uint64_t, 2> Philox2x64::block(std::uint64_t key, std::uint64_t c0,
                                               std::uint64_t c1) {
    std::uint64_t x0 = c0, x1 = c1, k = key;
    for (int round = 0; round < 10; ++round) {
        __uint128_t prod = static_cast<__uint128_t>(kMul) * x0;
        std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
        std::uint64_t lo = static_cast<std::uint64_t>(prod);
        x0 = hi ^ k ^ x1;
        x1 = lo;
        k += kWeyl;
    }
    return {x0, x1};
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t trial, std::uint32_t stream)
    : key_(seed), tag_((trial << 16) | (stream & 0xFFFFu)) {}

RngStream::result_type RngStream::operator()() {
    if (pos_ >= 2) {
        buf_ = Philox2x64::block(key_, block_++, tag_);
        pos_ = 0;
    }
    return buf_[pos_++];
}

double RngStream::uniform01() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_gauss_;
    }
    for (;;) {
        double u = 2.0 * uniform01() - 1.0;
        double v = 2.0 * uniform01() - 1.0;
        double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_gauss_ = v * f;
        has_cached_ = true;
        return u * f;
    }
}

long poisson_variate(RngStream& g, double mean) {
    if (!(mean > 0.0)) throw DomainError("poisson_variate: mean must be > 0");
    if (mean < 30.0) {
        // inversion by sequential search
        double p = std::exp(-mean);
        double cdf = p;
        double u = g.uniform01();
        long k = 0;
        while (u > cdf && k < 10000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }
    // PTRS (Hormann's transformed rejection)
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        double u = g.uniform01() - 0.5;
        double v = g.uniform01();
        double us = 0.5 - std::abs(u);
        long k = static_cast<long>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
        if (us >= 0.07 && v <= v_r) return k;
        if (k < 0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - log_gamma(static_cast<double>(k) + 1.0))
            return k;
    }
}

Point uniform_direction(RngStream& g, int dim) {
    if (dim < 1) throw DomainError("uniform_direction: dim must be >= 1");
    for (;;) {
        Point p(dim);
        double sq = 0.0;
        for (int c = 0; c < dim; ++c) {
            p[c] = g.gaussian();
            sq += p[c] * p[c];
        }
        if (sq < 1e-24) continue;
        double inv = 1.0 / std::sqrt(sq);
        for (double& c : p) c *= inv;
        return p;
    }
}

PointCloud sample(const ProcessSpec& spec, std::uint64_t trial, std::uint32_t stream) {
    if (spec.n < 1) throw DomainError("sample: n must be >= 1");
    const int d = spec.n + 1;
    const double total_area = sphere_area(d);  // area of S^n
    long count;
    RngStream g(spec.seed, trial, stream);
    if (spec.model == ProcessSpec::Model::Poisson) {
        if (!(spec.density > 0.0)) throw DomainError("sample: density must be > 0");
        double mean = spec.density * total_area;
        if (spec.orthant_only) mean *= std::pow(0.5, d);
        count = poisson_variate(g, mean);
    } else {
        if (spec.count < spec.n + 2)
            throw DomainError("sample: uniform count must be >= n+2");
        count = spec.count;
    }
    if (count < spec.n + 2)
        throw TooFewPoints("realized count " + std::to_string(count) +
                           " below n+2");

    PointCloud cloud;
    cloud.n = spec.n;
    cloud.spec = spec;
    cloud.trial = trial;
    cloud.stream = stream;
    cloud.points.reserve(count);
    for (long i = 0; i < count; ++i) {
        Point p = uniform_direction(g, d);
        if (spec.orthant_only)
            for (double& c : p) c = std::abs(c);
        cloud.points.push_back(std::move(p));
    }
    cloud.effective_density = spec.model == ProcessSpec::Model::Poisson
                                  ? spec.density
                                  : static_cast<double>(count) / total_area;
    return cloud;
}

double empty_cap_probability(double rho, double theta, int n) {
    if (!(rho > 0.0)) throw DomainError("empty_cap_probability: rho must be > 0");
    return std::exp(-rho * cap_area(theta, n));
}

void write_cloud(std::ostream& out, const PointCloud& cloud) {
    out << "# sdm-cloud n=" << cloud.n << " model="
        << (cloud.spec.model == ProcessSpec::Model::Poisson ? "poisson" : "uniform")
        << " density=" << format_real_exact(cloud.spec.density)
        << " count=" << cloud.spec.count
        << " orthant=" << (cloud.spec.orthant_only ? 1 : 0)
        << " seed=" << cloud.spec.seed << " trial=" << cloud.trial
        << " stream=" << cloud.stream << "\n";
    out << "# points=" << cloud.points.size()
        << " effective_density=" << format_real_exact(cloud.effective_density)
        << "\n";
    for (const Point& p : cloud.points) {
        for (std::size_t c = 0; c < p.size(); ++c) {
            if (c) out << ' ';
            out << format_real_exact(p[c]);
        }
        out << "\n";
    }
    if (!out) throw IoError("write_cloud: stream failure");
}

PointCloud read_cloud(std::istream& in) {
    PointCloud cloud;
    cloud.n = -1;
    long declared_points = -1;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string token;
            while (ls >> token) {
                auto eq = token.find('=');
                if (eq == std::string::npos) continue;
                std::string key = token.substr(0, eq);
                std::string val = token.substr(eq + 1);
                if (key == "n") cloud.n = std::stoi(val);
                else if (key == "model")
                    cloud.spec.model = val == "uniform" ? ProcessSpec::Model::Uniform
                                                        : ProcessSpec::Model::Poisson;
                else if (key == "density") cloud.spec.density = std::stod(val);
                else if (key == "count") cloud.spec.count = std::stol(val);
                else if (key == "orthant") cloud.spec.orthant_only = val != "0";
                else if (key == "seed") cloud.spec.seed = std::stoull(val);
                else if (key == "trial") cloud.trial = std::stoull(val);
                else if (key == "stream")
                    cloud.stream = static_cast<std::uint32_t>(std::stoul(val));
                else if (key == "points") declared_points = std::stol(val);
                else if (key == "effective_density")
                    cloud.effective_density = std::stod(val);
            }
            continue;
        }
        std::istringstream ls(line);
        Point p;
        double v;
        while (ls >> v) p.push_back(v);
        if (!p.empty()) cloud.points.push_back(std::move(p));
    }
    if (cloud.points.empty()) throw IoError("read_cloud: no points");
    if (cloud.n < 0) cloud.n = static_cast<int>(cloud.points[0].size()) - 1;
    cloud.spec.n = cloud.n;
    for (const Point& p : cloud.points)
        if (p.size() != static_cast<std::size_t>(cloud.n + 1))
            throw IoError("read_cloud: inconsistent point dimension");
    if (declared_points >= 0 &&
        declared_points != static_cast<long>(cloud.points.size()))
        throw IoError("read_cloud: point count does not match header");
    if (cloud.effective_density == 0.0)
        cloud.effective_density =
            cloud.spec.model == ProcessSpec::Model::Poisson
                ? cloud.spec.density
                : static_cast<double>(cloud.points.size()) / sphere_area(cloud.n + 1);
    return cloud;
}

}  // namespace sdm
