#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdm/constants.hpp"
#include "sdm/errors.hpp"
#include "sdm/experiment.hpp"
#include "sdm/fisher.hpp"
#include "sdm/hull.hpp"
#include "sdm/mosaic.hpp"
#include "sdm/numeric.hpp"
#include "sdm/sampling.hpp"
#include "sdm/specfun.hpp"
#include "sdm/theory.hpp"

namespace {

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    int threads = 1;
};

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw sdm::IoError("cannot write " + path);
    return file;
}

sdm::PointCloud load_cloud(const std::string& path) {
    if (path.empty() || path == "-") return sdm::read_cloud(std::cin);
    std::ifstream in(path);
    if (!in) throw sdm::IoError("cannot read " + path);
    return sdm::read_cloud(in);
}

std::vector<sdm::Distribution> load_distributions(const std::string& path) {
    std::unique_ptr<std::ifstream> file;
    std::istream* in = &std::cin;
    if (!path.empty() && path != "-") {
        file = std::make_unique<std::ifstream>(path);
        if (!*file) throw sdm::IoError("cannot read " + path);
        in = file.get();
    }
    std::vector<sdm::Distribution> out;
    std::string line;
    while (std::getline(*in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ls(line);
        sdm::Distribution d;
        double v;
        while (ls >> v) d.probs.push_back(v);
        if (!d.probs.empty()) out.push_back(std::move(d));
    }
    return out;
}

sdm::CTable constants_for(int n, const std::string& source, std::uint64_t seed,
                          int threads) {
    if (source.rfind("file:", 0) == 0) {
        std::ifstream in(source.substr(5));
        if (!in) throw sdm::IoError("cannot read " + source.substr(5));
        return sdm::table_from_estimates(n, sdm::read_constants_csv(in));
    }
    std::uint64_t samples = 1000000;
    if (source.rfind("mc:", 0) == 0) samples = std::stoull(source.substr(3));
    else if (!source.empty() && source != "mc")
        throw sdm::DomainError("constants source must be mc:SAMPLES or file:PATH");
    return sdm::mc_table(n, samples, seed, threads);
}

int cmd_sample(const GlobalOpts& g, int n, const std::string& model, double density,
               long count, bool orthant, std::uint64_t trial, std::uint32_t stream) {
    sdm::ProcessSpec spec;
    spec.n = n;
    spec.model = model == "uniform" ? sdm::ProcessSpec::Model::Uniform
                                    : sdm::ProcessSpec::Model::Poisson;
    spec.density = density;
    spec.count = count;
    spec.orthant_only = orthant;
    spec.seed = g.seed;
    sdm::PointCloud cloud = sdm::sample(spec, trial, stream);
    std::ofstream file;
    sdm::write_cloud(open_output(file, g.out), cloud);
    return 0;
}

int cmd_mosaic(const GlobalOpts& g, const std::string& input) {
    sdm::PointCloud cloud = load_cloud(input);
    sdm::HullComplex hull = sdm::build_hull(cloud.points);
    sdm::Mosaic mosaic = sdm::build_mosaic(hull);
    std::map<int, long> missing = sdm::non_delaunay_face_count(hull, mosaic);
    auto all = sdm::enumerate_faces(hull);
    long flagged = 0;
    for (bool f : mosaic.delaunay_facet_flags)
        if (f) ++flagged;

    std::ofstream file;
    std::ostream& out = open_output(file, g.out);
    if (g.format == "json") {
        nlohmann::json j;
        j["n"] = hull.n;
        j["points"] = cloud.points.size();
        j["facets"] = hull.facets.size();
        j["delaunay_facets"] = flagged;
        j["dims"] = nlohmann::json::array();
        for (const auto& [dim, faces] : all) {
            nlohmann::json row;
            row["dim"] = dim;
            row["hull_faces"] = faces.size();
            row["mosaic_faces"] = mosaic.faces.at(dim).size();
            row["non_delaunay"] = missing.at(dim);
            j["dims"].push_back(row);
        }
        out << j.dump(2) << "\n";
    } else {
        out << "dim,hull_faces,mosaic_faces,non_delaunay\n";
        for (const auto& [dim, faces] : all)
            out << dim << ',' << faces.size() << ',' << mosaic.faces.at(dim).size()
                << ',' << missing.at(dim) << "\n";
    }
    return 0;
}

int cmd_intervals(const GlobalOpts& g, const std::string& input, bool summary) {
    sdm::PointCloud cloud = load_cloud(input);
    sdm::HullComplex hull = sdm::build_hull(cloud.points);
    sdm::Mosaic mosaic = sdm::build_mosaic(hull);
    std::vector<sdm::MorseInterval> ivs = sdm::radius_and_intervals(mosaic);
    double density = cloud.effective_density > 0.0
                         ? cloud.effective_density
                         : static_cast<double>(cloud.points.size()) /
                               sdm::sphere_area(cloud.n + 1);
    std::ofstream file;
    std::ostream& out = open_output(file, g.out);
    if (summary) {
        sdm::IntervalCensus cen = sdm::census(ivs, density, cloud.n);
        if (g.format == "json") {
            nlohmann::json j;
            j["n"] = cloud.n;
            j["density"] = density;
            j["total_faces"] = cen.total_faces;
            j["types"] = nlohmann::json::array();
            for (const auto& [key, total] : cen.type_totals) {
                nlohmann::json row;
                row["ell"] = key.first;
                row["k"] = key.second;
                row["count"] = total;
                j["types"].push_back(row);
            }
            for (const auto& [dim, c] : cen.simplex_counts)
                j["simplex_counts"][std::to_string(dim)] = c;
            out << j.dump(2) << "\n";
        } else {
            sdm::write_census_csv(out, cen);
        }
    } else {
        sdm::write_intervals_csv(out, ivs, density, cloud.n, false);
    }
    return 0;
}

int cmd_constants(const GlobalOpts& g, int n, std::uint64_t samples) {
    std::vector<sdm::ConstantEstimate> rows;
    for (int k = 1; k <= n; ++k) {
        auto ests = sdm::estimate_E_all(k, n, samples, g.seed, g.threads);
        rows.insert(rows.end(), ests.begin(), ests.end());
    }
    std::ofstream file;
    sdm::write_constants_csv(open_output(file, g.out), rows);
    return 0;
}

int cmd_theory(const GlobalOpts& g, int n, double rho, long count,
               const std::string& csource, const std::string& thresholds,
               const std::string& formula) {
    sdm::CTable table = constants_for(n, csource, g.seed, g.threads);
    std::vector<double> Ts = sdm::parse_threshold_list(thresholds);
    const double scale = std::pow(rho, -1.0 / n);
    std::ofstream file;
    std::ostream& out = open_output(file, g.out);
    out << "formula_tag,n,ell,k_or_j,rho_or_N,threshold,value,error\n";
    auto emit_row = [&](const std::string& tag, int ell, int kj, double rho_or_n,
                        double T, double value, double err) {
        out << tag << ',' << n << ',' << ell << ',' << kj << ','
            << sdm::format_real(rho_or_n) << ',' << sdm::format_real(T) << ','
            << sdm::format_real(value) << ',' << sdm::format_real(err) << "\n";
    };
    for (double T : Ts) {
        for (int k = 1; k <= n; ++k) {
            for (int ell = 1; ell <= k; ++ell) {
                double C = table.value(ell, k);
                double C_se = table.stderr_of(ell, k);
                if (formula == "eq5" || formula == "all") {
                    double theta0 = std::isinf(T) ? 0.5 * M_PI
                                                  : std::min(T * scale, 0.5 * M_PI);
                    sdm::TheoryValue tv =
                        sdm::expected_intervals_exact(ell, k, n, rho, theta0, C);
                    emit_row("eq5", ell, k, rho, T, tv.value, tv.quadrature_error);
                }
                if (formula == "eq6" || formula == "all") {
                    sdm::TheoryValue tv =
                        sdm::expected_intervals_asymptotic(ell, k, n, rho, T, C);
                    emit_row("eq6", ell, k, rho, T, tv.value,
                             C > 0.0 ? tv.value / C * C_se : 0.0);
                }
                if (count > 0 && (formula == "uniform" || formula == "all")) {
                    sdm::TheoryValue tv = sdm::expected_intervals_uniform(
                        ell, k, n, static_cast<double>(count), T, C);
                    emit_row("uniform", ell, k, static_cast<double>(count), T,
                             tv.value, C > 0.0 ? tv.value / C * C_se : 0.0);
                }
            }
        }
        for (int j = 1; j <= n; ++j) {
            if (formula == "eq8" || formula == "all") {
                sdm::TheoryValue tv = sdm::expected_simplices(j, n, rho, T, table);
                emit_row("eq8", -1, j, rho, T, tv.value, 0.0);
            }
            if (formula == "eq9" || formula == "all") {
                sdm::TheoryValue tv = sdm::typical_radius_cdf(j, n, T, table);
                emit_row("eq9", -1, j, rho, T, tv.value, 0.0);
            }
        }
    }
    return 0;
}

int cmd_compare(const GlobalOpts& g, sdm::ExperimentConfig cfg) {
    if (cfg.thresholds.empty())
        cfg.thresholds = {std::numeric_limits<double>::infinity()};
    cfg.seed = g.seed;
    cfg.out = g.out;
    cfg.format = g.format == "json" ? sdm::ExperimentConfig::Format::Json
                                    : sdm::ExperimentConfig::Format::Csv;
    cfg.threads = g.threads;

    sdm::ComparisonReport rep = sdm::run(cfg);
    sdm::emit(rep);
    if (cfg.strict && !sdm::report_acceptable(rep)) {
        std::cerr << "strict comparison failed: |z| > 3 or KS > 0.05\n";
        return 3;
    }
    return 0;
}

int cmd_fisher(const GlobalOpts& g, const std::string& input, bool summary) {
    std::vector<sdm::Distribution> dists = load_distributions(input);
    sdm::FisherResult res = sdm::fisher_delaunay(dists);
    int n = static_cast<int>(dists[0].probs.size()) - 1;
    double density =
        static_cast<double>(dists.size()) / sdm::sphere_area(n + 1);
    std::ofstream file;
    std::ostream& out = open_output(file, g.out);
    if (summary) {
        out << "dim,mosaic_faces,non_delaunay\n";
        for (const auto& [dim, faces] : res.mosaic.faces)
            out << dim << ',' << faces.size() << ',' << res.non_delaunay.at(dim)
                << "\n";
    } else {
        sdm::write_intervals_csv(out, res.intervals, density, n, true);
    }
    return 0;
}

int cmd_bp_check(const GlobalOpts& g, int n, int k, const std::string& profile,
                 std::uint64_t samples) {
    sdm::RadialProfile prof;
    if (profile == "one") {
        prof.h = [](double) { return 1.0; };
    } else if (profile == "t") {
        prof.h = [](double t) { return t; };
    } else if (profile == "step") {
        prof.h = [](double t) { return t <= 0.5 ? 1.0 : 0.0; };
        prof.breakpoints = {0.5};
    } else {
        throw sdm::DomainError("profile must be one|t|step");
    }
    sdm::BpCheckResult r = sdm::bp_check(n, k, prof, samples, g.seed, g.threads);
    double combined = std::hypot(r.lhs_se, r.rhs_err);
    double z = combined > 0.0 ? (r.lhs - r.rhs) / combined : 0.0;
    std::ofstream file;
    std::ostream& out = open_output(file, g.out);
    out << "n,k,profile,samples,lhs,lhs_se,rhs,rhs_err,z\n";
    out << n << ',' << k << ',' << profile << ',' << samples << ','
        << sdm::format_real(r.lhs) << ',' << sdm::format_real(r.lhs_se) << ','
        << sdm::format_real(r.rhs) << ',' << sdm::format_real(r.rhs_err) << ','
        << sdm::format_real(z) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poisson-Delaunay mosaics on the n-sphere"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--seed", g.seed, "RNG seed");
    app.add_option("--out", g.out, "output path (default: stdout)");
    app.add_option("--format", g.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", g.threads, "worker threads")
        ->check(CLI::PositiveNumber);

    // sample
    auto* sc_sample = app.add_subcommand("sample", "draw a point cloud on S^n");
    int s_n = 2;
    std::string s_model = "poisson";
    double s_density = 100.0;
    long s_count = 0;
    bool s_orthant = false;
    std::uint64_t s_trial = 0;
    std::uint32_t s_stream = 0;
    sc_sample->add_option("--n", s_n, "sphere dimension")->check(CLI::PositiveNumber);
    sc_sample->add_option("--model", s_model)->check(CLI::IsMember({"poisson", "uniform"}));
    sc_sample->add_option("--density", s_density, "Poisson intensity");
    sc_sample->add_option("--count", s_count, "uniform point count");
    sc_sample->add_flag("--orthant", s_orthant, "restrict to the nonnegative orthant");
    sc_sample->add_option("--trial", s_trial);
    sc_sample->add_option("--stream", s_stream);

    // mosaic
    auto* sc_mosaic = app.add_subcommand("mosaic", "hull + Delaunay flags summary");
    std::string m_in;
    sc_mosaic->add_option("--in", m_in, "cloud file ('-' = stdin)");

    // intervals
    auto* sc_intervals =
        app.add_subcommand("intervals", "radius-function interval decomposition");
    std::string i_in;
    bool i_summary = false;
    sc_intervals->add_option("--in", i_in, "cloud file ('-' = stdin)");
    sc_intervals->add_flag("--summary", i_summary, "per-type census instead of rows");

    // constants
    auto* sc_constants = app.add_subcommand("constants", "Monte Carlo C constants");
    int c_n = 2;
    std::uint64_t c_samples = 1000000;
    sc_constants->add_option("--n", c_n)->check(CLI::PositiveNumber);
    sc_constants->add_option("--samples", c_samples);

    // theory
    auto* sc_theory = app.add_subcommand("theory", "evaluate the count formulas");
    int t_n = 2;
    double t_rho = 100.0;
    std::string t_constants = "mc:1000000";
    std::string t_thresholds = "inf";
    std::string t_formula = "all";
    sc_theory->add_option("--n", t_n)->check(CLI::PositiveNumber);
    sc_theory->add_option("--rho", t_rho, "Poisson intensity");
    long t_count = 0;
    sc_theory->add_option("--count", t_count, "uniform point count (adds 'uniform' rows)");
    sc_theory->add_option("--constants", t_constants, "mc:SAMPLES or file:PATH");
    sc_theory->add_option("--thresholds", t_thresholds, "normalized radii (csv, inf ok)");
    sc_theory->add_option("--formula", t_formula)
        ->check(CLI::IsMember({"eq5", "eq6", "eq8", "eq9", "uniform", "all"}));

    // compare
    auto* sc_compare =
        app.add_subcommand("compare", "simulation vs theory comparison report");
    std::string cp_config;
    int cp_n = 2;
    std::string cp_model = "poisson";
    double cp_density = 100.0;
    long cp_count = 0;
    int cp_trials = 10;
    std::string cp_thresholds;
    std::string cp_constants;
    bool cp_strict = false;
    sc_compare->add_option("--config", cp_config, "key=value config file");
    auto* o_n = sc_compare->add_option("--n", cp_n);
    auto* o_model = sc_compare->add_option("--model", cp_model)
                        ->check(CLI::IsMember({"poisson", "uniform"}));
    auto* o_density = sc_compare->add_option("--density", cp_density);
    auto* o_count = sc_compare->add_option("--count", cp_count);
    auto* o_trials = sc_compare->add_option("--trials", cp_trials);
    auto* o_thresholds = sc_compare->add_option("--thresholds", cp_thresholds);
    auto* o_constants =
        sc_compare->add_option("--constants", cp_constants, "mc:SAMPLES or file:PATH");
    std::string cp_input;
    auto* o_input = sc_compare->add_option(
        "--in", cp_input, "fixture cloud file (single-trial mode)");
    sc_compare->add_flag("--strict", cp_strict, "exit 3 when |z|>3 or KS>0.05");

    // fisher
    auto* sc_fisher =
        app.add_subcommand("fisher", "Fisher-metric Delaunay of distributions");
    std::string f_in;
    bool f_summary = false;
    sc_fisher->add_option("--in", f_in, "distribution rows ('-' = stdin)");
    sc_fisher->add_flag("--summary", f_summary);

    // bp-check
    auto* sc_bp = app.add_subcommand("bp-check", "Blaschke-Petkantschin MC identity");
    int b_n = 2, b_k = 1;
    std::string b_profile = "one";
    std::uint64_t b_samples = 1000000;
    sc_bp->add_option("--n", b_n)->check(CLI::PositiveNumber);
    sc_bp->add_option("--k", b_k)->check(CLI::PositiveNumber);
    sc_bp->add_option("--profile", b_profile)->check(CLI::IsMember({"one", "t", "step"}));
    sc_bp->add_option("--samples", b_samples);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sc_sample->parsed())
            return cmd_sample(g, s_n, s_model, s_density, s_count, s_orthant,
                              s_trial, s_stream);
        if (sc_mosaic->parsed()) return cmd_mosaic(g, m_in);
        if (sc_intervals->parsed()) return cmd_intervals(g, i_in, i_summary);
        if (sc_constants->parsed()) return cmd_constants(g, c_n, c_samples);
        if (sc_theory->parsed())
            return cmd_theory(g, t_n, t_rho, t_count, t_constants, t_thresholds,
                              t_formula);
        if (sc_compare->parsed()) {
            sdm::ExperimentConfig cfg;
            if (!cp_config.empty()) {
                std::ifstream in(cp_config);
                if (!in) throw sdm::IoError("cannot read " + cp_config);
                cfg = sdm::parse_config_file(in);
            }
            if (!o_n->empty()) cfg.n = cp_n;
            if (!o_model->empty())
                cfg.model = cp_model == "uniform" ? sdm::ProcessSpec::Model::Uniform
                                                  : sdm::ProcessSpec::Model::Poisson;
            if (!o_density->empty()) cfg.density = cp_density;
            if (!o_count->empty()) cfg.count = cp_count;
            if (!o_trials->empty()) cfg.trials = cp_trials;
            if (!o_thresholds->empty())
                cfg.thresholds = sdm::parse_threshold_list(cp_thresholds);
            if (!o_constants->empty())
                sdm::apply_config_entry(cfg, "constants", cp_constants);
            if (!o_input->empty()) cfg.input_cloud = cp_input;
            cfg.strict = cfg.strict || cp_strict;
            return cmd_compare(g, std::move(cfg));
        }
        if (sc_fisher->parsed()) return cmd_fisher(g, f_in, f_summary);
        if (sc_bp->parsed()) return cmd_bp_check(g, b_n, b_k, b_profile, b_samples);
    } catch (const sdm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
