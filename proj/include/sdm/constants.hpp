#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

namespace sdm {

// Monte Carlo estimate of E = E[Vol(u)^(n-k+1) * 1_(k-ell)(u)] over k+1
// uniform points on S^(k-1), together with the derived C constant.
struct ConstantEstimate {
    int ell = 0, k = 0, n = 0;
    double E_mean = 0.0;
    double E_stderr = 0.0;
    double C_value = 0.0;
    double C_stderr = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Deterministic prefactor turning E into C:
//   |G(k,n)| Gamma(k) n^(k-1) k!^(n-k) sigma_k^(k+1) / ((k+1) sigma_n^k).
double constant_prefactor(int k, int n);

// One MC run shared by every ell = 1..k (the per-sample separating-facet
// count routes the weight to exactly one ell).
std::vector<ConstantEstimate> estimate_E_all(int k, int n, std::uint64_t samples,
                                             std::uint64_t seed, int threads = 1);

ConstantEstimate estimate_E(int ell, int k, int n, std::uint64_t samples,
                            std::uint64_t seed, int threads = 1);

double constant_C(const ConstantEstimate& est);

// Separating-facet count of one configuration: how many facet hyperplanes of
// the simplex separate the origin from the opposite vertex (the number of
// negative barycentric coordinates of the origin). Exposed for tests.
// Returns -1 for a degenerate simplex (zero volume; weight vanishes anyway).
int separating_facet_count(const std::vector<std::vector<double>>& simplex);

// Table of C constants for one n, including the exact ell=0 rows:
// C(0,0) = 1 (one critical vertex per point) and C(0,k) = 0 for k >= 1.
class CTable {
public:
    explicit CTable(int n = 0) : n_(n) {}

    int n() const { return n_; }
    bool has(int ell, int k) const { return table_.count({ell, k}) != 0; }
    double value(int ell, int k) const;      // throws MissingConstant
    double stderr_of(int ell, int k) const;  // throws MissingConstant
    void set(int ell, int k, double value, double stderr);
    void insert(const ConstantEstimate& est);
    const std::map<std::pair<int, int>, std::pair<double, double>>& entries() const {
        return table_;
    }

private:
    int n_;
    std::map<std::pair<int, int>, std::pair<double, double>> table_;
};

// Exact low-order entries only.
CTable exact_low_order(int n);

// Full table: exact ell=0 rows plus MC estimates for every 1 <= ell <= k <= n.
CTable mc_table(int n, std::uint64_t samples, std::uint64_t seed, int threads = 1);

struct DConstant {
    int j = 0, n = 0;
    double value = 0.0;
    double stderr = 0.0;
};

// D_j^n = sum_(k=j..n) sum_(ell=0..j) binom(k-ell, k-j) C_(ell,k)^n with
// independent-error quadrature.
DConstant constant_D(int j, int n, const CTable& table);

void write_constants_csv(std::ostream& out,
                         const std::vector<ConstantEstimate>& rows);
std::vector<ConstantEstimate> read_constants_csv(std::istream& in);
CTable table_from_estimates(int n, const std::vector<ConstantEstimate>& rows);

}  // namespace sdm
