#include "sdm/constants.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "sdm/errors.hpp"
#include "sdm/geom.hpp"
#include "sdm/numeric.hpp"
#include "sdm/sampling.hpp"
#include "sdm/specfun.hpp"

namespace sdm {

namespace {

constexpr std::uint64_t kBatchSize = 8192;
constexpr double kSeparationTol = 1e-12;
constexpr double kDegenerateVolume = 1e-14;

struct BatchAcc {
    std::vector<double> sum;     // per separating-facet count m = 0..k
    std::vector<double> sum_sq;
    std::uint64_t count = 0;
};

}  // namespace

double constant_prefactor(int k, int n) {
    if (k < 1 || k > n) throw DomainError("constant_prefactor: need 1 <= k <= n");
    double kfact = gamma_fn(static_cast<double>(k) + 1.0);
    return grassmannian_measure(k, n) * gamma_fn(static_cast<double>(k)) *
           std::pow(static_cast<double>(n), k - 1) * std::pow(kfact, n - k) *
           std::pow(sphere_area(k), k + 1) /
           ((k + 1) * std::pow(sphere_area(n), k));
}

int separating_facet_count(const std::vector<std::vector<double>>& simplex) {
    if (simplex_volume(simplex) <= kDegenerateVolume) return -1;
    Point origin(simplex[0].size(), 0.0);
    std::vector<double> bary = barycentric_coordinates(simplex, origin);
    int m = 0;
    for (double b : bary) {
        if (std::abs(b) <= kSeparationTol)
            throw TangencyAtTolerance("origin on a facet hyperplane");
        if (b < 0.0) ++m;
    }
    return m;
}

std::vector<ConstantEstimate> estimate_E_all(int k, int n, std::uint64_t samples,
                                             std::uint64_t seed, int threads) {
    if (k < 1 || k > n) throw DomainError("estimate_E: need 1 <= k <= n");
    if (samples < 1000) throw DomainError("estimate_E: need >= 1000 samples");

    const std::uint64_t num_batches = (samples + kBatchSize - 1) / kBatchSize;
    std::vector<BatchAcc> batches(num_batches);
    const int vol_power = n - k + 1;

    parallel_batches(num_batches, threads, [&](std::size_t b) {
        BatchAcc acc;
        acc.sum.assign(k + 1, 0.0);
        acc.sum_sq.assign(k + 1, 0.0);
        std::uint64_t lo = b * kBatchSize;
        std::uint64_t hi = std::min(samples, lo + kBatchSize);
        RngStream g(seed, (static_cast<std::uint64_t>(k) << 28) | b, 0);
        std::vector<Point> pts(k + 1);
        for (std::uint64_t s = lo; s < hi; ++s) {
            for (;;) {
                for (int i = 0; i <= k; ++i) pts[i] = uniform_direction(g, k);
                double vol = simplex_volume(pts);
                if (vol <= kDegenerateVolume) {
                    // zero weight either way; only reachable for k = 1
                    acc.count += 1;
                    break;
                }
                int m;
                try {
                    Point origin(k, 0.0);
                    std::vector<double> bary = barycentric_coordinates(pts, origin);
                    m = 0;
                    bool on_plane = false;
                    for (double bc : bary) {
                        if (std::abs(bc) <= kSeparationTol) {
                            on_plane = true;
                            break;
                        }
                        if (bc < 0.0) ++m;
                    }
                    if (on_plane) continue;  // measure-zero hit: redraw
                } catch (const DegenerateSimplex&) {
                    continue;
                }
                double w = std::pow(vol, vol_power);
                acc.sum[m] += w;
                acc.sum_sq[m] += w * w;
                acc.count += 1;
                break;
            }
        }
        batches[b] = std::move(acc);
    });

    std::vector<double> sum(k + 1, 0.0), sum_sq(k + 1, 0.0);
    std::uint64_t count = 0;
    for (const BatchAcc& acc : batches) {
        for (int m = 0; m <= k; ++m) {
            sum[m] += acc.sum[m];
            sum_sq[m] += acc.sum_sq[m];
        }
        count += acc.count;
    }

    double prefactor = constant_prefactor(k, n);
    std::vector<ConstantEstimate> out;
    for (int ell = 1; ell <= k; ++ell) {
        int m = k - ell;
        ConstantEstimate est;
        est.ell = ell;
        est.k = k;
        est.n = n;
        est.samples = count;
        est.seed = seed;
        double nn = static_cast<double>(count);
        est.E_mean = sum[m] / nn;
        double var = (sum_sq[m] / nn - est.E_mean * est.E_mean) / (nn - 1.0);
        est.E_stderr = std::sqrt(std::max(var, 0.0));
        est.C_value = prefactor * est.E_mean;
        est.C_stderr = prefactor * est.E_stderr;
        out.push_back(est);
    }
    return out;
}

ConstantEstimate estimate_E(int ell, int k, int n, std::uint64_t samples,
                            std::uint64_t seed, int threads) {
    if (ell < 1 || ell > k) throw DomainError("estimate_E: need 1 <= ell <= k");
    std::vector<ConstantEstimate> all = estimate_E_all(k, n, samples, seed, threads);
    return all[ell - 1];
}

double constant_C(const ConstantEstimate& est) {
    return constant_prefactor(est.k, est.n) * est.E_mean;
}

double CTable::value(int ell, int k) const {
    auto it = table_.find({ell, k});
    if (it == table_.end())
        throw MissingConstant("C(" + std::to_string(ell) + "," + std::to_string(k) +
                              ") not in table");
    return it->second.first;
}

double CTable::stderr_of(int ell, int k) const {
    auto it = table_.find({ell, k});
    if (it == table_.end())
        throw MissingConstant("C(" + std::to_string(ell) + "," + std::to_string(k) +
                              ") not in table");
    return it->second.second;
}

void CTable::set(int ell, int k, double value, double stderr) {
    table_[{ell, k}] = {value, stderr};
}

void CTable::insert(const ConstantEstimate& est) {
    set(est.ell, est.k, est.C_value, est.C_stderr);
}

CTable exact_low_order(int n) {
    CTable t(n);
    t.set(0, 0, 1.0, 0.0);  // every point is a critical vertex
    for (int k = 1; k <= n; ++k) t.set(0, k, 0.0, 0.0);
    return t;
}

CTable mc_table(int n, std::uint64_t samples, std::uint64_t seed, int threads) {
    CTable t = exact_low_order(n);
    for (int k = 1; k <= n; ++k)
        for (const ConstantEstimate& est : estimate_E_all(k, n, samples, seed, threads))
            t.insert(est);
    return t;
}

DConstant constant_D(int j, int n, const CTable& table) {
    if (j < 0 || j > n) throw DomainError("constant_D: need 0 <= j <= n");
    DConstant d;
    d.j = j;
    d.n = n;
    double var = 0.0;
    for (int k = std::max(j, 0); k <= n; ++k) {
        for (int ell = 0; ell <= j; ++ell) {
            double b = binomial(k - ell, k - j);
            if (b == 0.0) continue;
            d.value += b * table.value(ell, k);
            double se = b * table.stderr_of(ell, k);
            var += se * se;
        }
    }
    d.stderr = std::sqrt(var);
    return d;
}

void write_constants_csv(std::ostream& out,
                         const std::vector<ConstantEstimate>& rows) {
    out << "n,ell,k,E_mean,E_stderr,C,C_stderr,samples,seed\n";
    for (const ConstantEstimate& r : rows) {
        out << r.n << ',' << r.ell << ',' << r.k << ',' << format_real(r.E_mean)
            << ',' << format_real(r.E_stderr) << ',' << format_real(r.C_value)
            << ',' << format_real(r.C_stderr) << ',' << r.samples << ',' << r.seed
            << "\n";
    }
    if (!out) throw IoError("write_constants_csv: stream failure");
}

std::vector<ConstantEstimate> read_constants_csv(std::istream& in) {
    std::vector<ConstantEstimate> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 9) throw IoError("constants csv: bad row");
        ConstantEstimate e;
        e.n = std::stoi(cells[0]);
        e.ell = std::stoi(cells[1]);
        e.k = std::stoi(cells[2]);
        e.E_mean = std::stod(cells[3]);
        e.E_stderr = std::stod(cells[4]);
        e.C_value = std::stod(cells[5]);
        e.C_stderr = std::stod(cells[6]);
        e.samples = std::stoull(cells[7]);
        e.seed = std::stoull(cells[8]);
        rows.push_back(e);
    }
    return rows;
}

CTable table_from_estimates(int n, const std::vector<ConstantEstimate>& rows) {
    CTable t = exact_low_order(n);
    for (const ConstantEstimate& r : rows)
        if (r.n == n) t.insert(r);
    return t;
}

}  // namespace sdm
