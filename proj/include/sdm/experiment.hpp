#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdm/constants.hpp"
#include "sdm/mosaic.hpp"
#include "sdm/sampling.hpp"

namespace sdm {

struct ExperimentConfig {
    enum class Format { Csv, Json };

    int n = 2;
    ProcessSpec::Model model = ProcessSpec::Model::Poisson;
    double density = 1.0;  // Poisson intensity
    long count = 0;        // Uniform point count
    int trials = 1;
    std::uint64_t seed = 0;
    std::vector<double> thresholds;  // normalized radii, ascending; inf allowed
    bool constants_from_file = false;
    std::string constants_path;
    std::uint64_t constants_samples = 1000000;
    std::string input_cloud;  // when set: load this cloud instead of sampling
                              // (single-trial fixture mode)
    std::string out;  // empty -> stdout
    Format format = Format::Csv;
    int threads = 1;
    bool strict = false;
};

// key=value lines, '#' comments; unknown keys are an error.
ExperimentConfig parse_config_file(std::istream& in);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);
std::vector<double> parse_threshold_list(const std::string& csv);

// One aggregated row of the comparison table.
struct TypeRow {
    int ell = 0, k = 0;
    double threshold = 0.0;  // normalized radius
    double empirical_mean = 0.0;
    double empirical_se = 0.0;
    double eq5 = 0.0;
    double eq6 = 0.0;
    double eq6_se = 0.0;  // from the C constant's MC error
    double zscore = 0.0;  // (mean - eq6) / sqrt(emp_se^2 + eq6_se^2)
};

struct SimplexRow {
    int j = 0;
    double threshold = 0.0;
    double empirical_mean = 0.0;
    double empirical_se = 0.0;
    double eq8 = 0.0;
};

struct KsRow {
    int j = 0;  // simplex dimension; radii weighted by per-interval multiplicity
    std::size_t pooled = 0;
    double ks = 0.0;  // KS distance to the typical-radius CDF G_j
};

struct TrialLog {
    std::uint64_t trial = 0;
    std::uint32_t stream = 0;  // stream index that finally succeeded
    int redraws = 0;
    long points = 0;
};

struct ComparisonReport {
    ExperimentConfig config;
    double rho = 0.0;  // density used for normalization and the formulas
    long trials_done = 0;
    long discarded = 0;
    double mean_points = 0.0;
    long critical_vertex_mismatches = 0;  // trials where critical vertices != |X|
    std::vector<TypeRow> rows;
    std::vector<SimplexRow> simplex_rows;
    std::vector<KsRow> ks_rows;
    std::vector<TrialLog> trial_log;
    CTable table;
};

// Runs the trials, aggregates counts, and evaluates the formulas against the
// same thresholds. Deterministic for a fixed config. Degenerate draws are
// redrawn with the next stream index; a discard rate above 1% aborts.
ComparisonReport run(const ExperimentConfig& cfg);

// Main comparison table in the pinned schema
// (n,ell,k,threshold,empirical_mean,empirical_se,eq5,eq6,zscore).
void emit_csv(const ComparisonReport& report, std::ostream& out);
void emit_simplices_csv(const ComparisonReport& report, std::ostream& out);
void emit_ks_csv(const ComparisonReport& report, std::ostream& out);
void emit_json(const ComparisonReport& report, std::ostream& out);

// Writes to files derived from config.out ("<out>.csv", "<out>_simplices.csv",
// "<out>_ks.csv" or "<out>.json"), or the main table to stdout when out is
// empty. Returns the list of files written.
std::vector<std::string> emit(const ComparisonReport& report);

// True when every |zscore| <= 3 and every KS distance <= 0.05 (the strict
// gate behind `compare --strict`).
bool report_acceptable(const ComparisonReport& report);

// Kolmogorov-Smirnov distance between a sample and a CDF.
double ks_distance(std::vector<double> sample,
                   const std::function<double(double)>& cdf);

// Interval/census serialization shared by the `intervals` and `fisher`
// subcommands.
void write_intervals_csv(std::ostream& out, const std::vector<MorseInterval>& ivs,
                         double density, int n, bool with_fisher);
void write_census_csv(std::ostream& out, const IntervalCensus& census);

}  // namespace sdm
