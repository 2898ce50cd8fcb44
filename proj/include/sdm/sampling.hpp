#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "sdm/geom.hpp"

namespace sdm {

// Philox2x64-10: counter-based generator, one 128-bit block per counter
// value. Distinct (seed, trial, stream) triples give independent streams,
// which is what makes trial-level parallelism reproducible.
struct Philox2x64 {
    static constexpr std::uint64_t kMul = 0xD2B74407B1CE6E93ull;
    static constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ull;

    static std::array<std::uint64_t, 2> block(std::uint64_t key, std::uint64_t c0,
                                              std::uint64_t c1);
};

// Sequential view over one Philox stream. Satisfies
// UniformRandomBitGenerator. trial is limited to 48 bits, stream to 16.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t trial, std::uint32_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()();
    double uniform01();  // [0, 1)
    double gaussian();   // standard normal, Marsaglia polar

private:
    std::uint64_t key_;
    std::uint64_t tag_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buf_{};
    int pos_ = 2;
    double cached_gauss_ = 0.0;
    bool has_cached_ = false;
};

// Poisson count: inversion below mean 30, PTRS transformed rejection above.
long poisson_variate(RngStream& g, double mean);

// Uniform direction on S^(dim-1) via a normalized Gaussian vector.
Point uniform_direction(RngStream& g, int dim);

struct ProcessSpec {
    enum class Model { Poisson, Uniform };

    int n = 2;
    Model model = Model::Poisson;
    double density = 1.0;  // Poisson intensity, points per unit n-volume
    long count = 0;        // Uniform: prescribed number of points
    bool orthant_only = false;
    std::uint64_t seed = 0;
};

struct PointCloud {
    int n = 0;
    std::vector<Point> points;
    ProcessSpec spec;
    double effective_density = 0.0;
    std::uint64_t trial = 0;
    std::uint32_t stream = 0;
};

// Draws one realization. Identical (spec, trial, stream) give identical
// clouds. Throws TooFewPoints when the realized count is below n+2.
PointCloud sample(const ProcessSpec& spec, std::uint64_t trial = 0,
                  std::uint32_t stream = 0);

// e^(-rho * cap_area(theta)), the probability that a fixed cap is empty.
double empty_cap_probability(double rho, double theta, int n);

// Cloud dump: '#'-prefixed metadata, then one point per line.
void write_cloud(std::ostream& out, const PointCloud& cloud);
PointCloud read_cloud(std::istream& in);

}  // namespace sdm
