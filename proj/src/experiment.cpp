#include "sdm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sdm/errors.hpp"
#include "sdm/fisher.hpp"
#include "sdm/hull.hpp"
#include "sdm/numeric.hpp"
#include "sdm/specfun.hpp"
#include "sdm/theory.hpp"

namespace sdm {

namespace {

constexpr int kMaxRedraws = 64;

double parse_threshold(const std::string& tok) {
    if (tok == "inf" || tok == "Inf" || tok == "INF")
        return std::numeric_limits<double>::infinity();
    return std::stod(tok);
}

// round to the 12 significant digits the CSV carries, so the JSON mirror
// matches byte for byte after parsing
double mirror(double x) {
    if (!std::isfinite(x)) return x;
    return std::stod(format_real(x));
}

struct TrialResult {
    // per type (ell,k): counts at each threshold index
    std::map<std::pair<int, int>, std::vector<long>> type_counts;
    std::map<std::pair<int, int>, std::vector<double>> radii;  // normalized
    long points = 0;
    long critical_vertices = 0;
    int redraws = 0;
    std::uint32_t stream = 0;
    std::vector<std::string> discard_reasons;
};

TrialResult run_trial(const ExperimentConfig& cfg, double rho, std::uint64_t trial) {
    ProcessSpec spec;
    spec.n = cfg.n;
    spec.model = cfg.model;
    spec.density = cfg.density;
    spec.count = cfg.count;
    spec.seed = cfg.seed;

    TrialResult res;
    for (std::uint32_t stream = 0;; ++stream) {
        if (stream >= kMaxRedraws)
            throw Error("trial " + std::to_string(trial) + " exceeded " +
                        std::to_string(kMaxRedraws) + " redraws");
        try {
            PointCloud cloud;
            if (cfg.input_cloud.empty()) {
                cloud = sample(spec, trial, stream);
            } else {
                std::ifstream in(cfg.input_cloud);
                if (!in) throw IoError("cannot read " + cfg.input_cloud);
                cloud = read_cloud(in);
            }
            HullComplex hull = build_hull(cloud.points);
            Mosaic mosaic = build_mosaic(hull);
            std::vector<MorseInterval> intervals = radius_and_intervals(mosaic);
            IntervalCensus cen = census(intervals, rho, cfg.n);
            if (cen.total_faces != static_cast<long>(mosaic.face_count()))
                throw PartitionFailure("census does not add up to the face count");
            res.points = static_cast<long>(cloud.points.size());
            for (const auto& [key, radii] : cen.normalized_radii) {
                std::vector<long> counts;
                counts.reserve(cfg.thresholds.size());
                for (double T : cfg.thresholds) {
                    auto it = std::upper_bound(radii.begin(), radii.end(), T);
                    counts.push_back(static_cast<long>(it - radii.begin()));
                }
                res.type_counts[key] = std::move(counts);
                res.radii[key] = radii;
            }
            auto crit = cen.type_totals.find({0, 0});
            res.critical_vertices = crit == cen.type_totals.end() ? 0 : crit->second;
            res.stream = stream;
            return res;
        } catch (const Error& e) {
            if (!is_resample_event(e)) throw;
            ++res.redraws;
            res.discard_reasons.push_back(e.what());
        }
    }
}

}  // namespace

std::vector<double> parse_threshold_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(parse_threshold(tok));
    }
    if (!std::is_sorted(out.begin(), out.end()))
        throw DomainError("thresholds must be ascending");
    return out;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "n") cfg.n = std::stoi(value);
    else if (key == "model") {
        if (value == "poisson") cfg.model = ProcessSpec::Model::Poisson;
        else if (value == "uniform") cfg.model = ProcessSpec::Model::Uniform;
        else throw DomainError("config: model must be poisson or uniform");
    } else if (key == "density") cfg.density = std::stod(value);
    else if (key == "count") cfg.count = std::stol(value);
    else if (key == "trials") cfg.trials = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "thresholds") cfg.thresholds = parse_threshold_list(value);
    else if (key == "constants") {
        if (value.rfind("mc:", 0) == 0) {
            cfg.constants_from_file = false;
            cfg.constants_samples = std::stoull(value.substr(3));
        } else if (value.rfind("file:", 0) == 0) {
            cfg.constants_from_file = true;
            cfg.constants_path = value.substr(5);
        } else {
            throw DomainError("config: constants must be mc:SAMPLES or file:PATH");
        }
    } else if (key == "input") cfg.input_cloud = value;
    else if (key == "out") cfg.out = value;
    else if (key == "format") {
        if (value == "csv") cfg.format = ExperimentConfig::Format::Csv;
        else if (value == "json") cfg.format = ExperimentConfig::Format::Json;
        else throw DomainError("config: format must be csv or json");
    } else if (key == "threads") cfg.threads = std::stoi(value);
    else if (key == "strict") cfg.strict = value != "0" && value != "false";
    else throw DomainError("config: unknown key '" + key + "'");
}

ExperimentConfig parse_config_file(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config: expected key=value, got '" + line + "'");
        apply_config_entry(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

double ks_distance(std::vector<double> sample,
                   const std::function<double(double)>& cdf) {
    if (sample.empty()) return 0.0;
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(i / n - f));
    }
    return d;
}

ComparisonReport run(const ExperimentConfig& requested) {
    ExperimentConfig cfg = requested;
    if (cfg.trials < 1) throw DomainError("run: trials must be >= 1");
    if (!std::is_sorted(cfg.thresholds.begin(), cfg.thresholds.end()))
        throw DomainError("run: thresholds must be ascending");

    ComparisonReport rep;
    double fixture_rho = 0.0;
    if (!cfg.input_cloud.empty()) {
        if (cfg.trials != 1)
            throw DomainError("run: a fixture cloud implies trials=1");
        std::ifstream in(cfg.input_cloud);
        if (!in) throw IoError("cannot read " + cfg.input_cloud);
        PointCloud fixture = read_cloud(in);
        cfg.n = fixture.n;
        cfg.model = fixture.spec.model;
        fixture_rho = fixture.effective_density > 0.0
                          ? fixture.effective_density
                          : static_cast<double>(fixture.points.size()) /
                                sphere_area(fixture.n + 1);
    }
    if (cfg.n < 1) throw DomainError("run: n must be >= 1");
    rep.config = cfg;
    const double area = sphere_area(cfg.n + 1);
    if (!cfg.input_cloud.empty())
        rep.rho = fixture_rho;
    else
        rep.rho = cfg.model == ProcessSpec::Model::Poisson
                      ? cfg.density
                      : static_cast<double>(cfg.count) / area;
    if (!(rep.rho > 0.0)) throw DomainError("run: density must be positive");

    rep.table = cfg.constants_from_file
                    ? [&] {
                          std::ifstream in(cfg.constants_path);
                          if (!in) throw IoError("cannot read " + cfg.constants_path);
                          return table_from_estimates(cfg.n, read_constants_csv(in));
                      }()
                    : mc_table(cfg.n, cfg.constants_samples, cfg.seed, cfg.threads);

    std::vector<TrialResult> trials(cfg.trials);
    parallel_batches(cfg.trials, cfg.threads, [&](std::size_t t) {
        trials[t] = run_trial(cfg, rep.rho, t);
    });

    long redraws = 0;
    for (std::size_t t = 0; t < trials.size(); ++t) {
        const TrialResult& tr = trials[t];
        redraws += tr.redraws;
        rep.trial_log.push_back(TrialLog{t, tr.stream, tr.redraws, tr.points});
        for (std::size_t d = 0; d < tr.discard_reasons.size(); ++d)
            std::cerr << "trial " << t << " stream " << d
                      << " discarded: " << tr.discard_reasons[d] << "\n";
    }
    rep.discarded = redraws;
    rep.trials_done = cfg.trials;
    if (static_cast<double>(redraws) >
        0.01 * static_cast<double>(cfg.trials + redraws))
        throw Error("discard rate above 1%: " + std::to_string(redraws) +
                    " redraws over " + std::to_string(cfg.trials) + " trials");

    double mean_pts = 0.0;
    for (const TrialResult& tr : trials) {
        mean_pts += static_cast<double>(tr.points);
        if (tr.critical_vertices != tr.points) ++rep.critical_vertex_mismatches;
    }
    rep.mean_points = mean_pts / cfg.trials;

    // types present anywhere, plus every theory-backed type
    std::set<std::pair<int, int>> types;
    types.insert({0, 0});
    for (int k = 1; k <= cfg.n; ++k)
        for (int ell = 1; ell <= k; ++ell) types.insert({ell, k});
    for (const TrialResult& tr : trials)
        for (const auto& [key, counts] : tr.type_counts) types.insert(key);

    const double scale = std::pow(rep.rho, -1.0 / cfg.n);
    for (const auto& type : types) {
        auto [ell, k] = type;
        for (std::size_t ti = 0; ti < cfg.thresholds.size(); ++ti) {
            double T = cfg.thresholds[ti];
            RunningStat stat;
            for (const TrialResult& tr : trials) {
                auto it = tr.type_counts.find(type);
                stat.add(it == tr.type_counts.end()
                             ? 0.0
                             : static_cast<double>(it->second[ti]));
            }
            TypeRow row;
            row.ell = ell;
            row.k = k;
            row.threshold = T;
            row.empirical_mean = stat.mean();
            row.empirical_se = stat.stderr_mean();
            if (ell == 0 && k == 0) {
                row.eq5 = row.eq6 = rep.rho * area;  // every point is critical
                row.eq6_se = 0.0;
            } else if (ell >= 1 && rep.table.has(ell, k)) {
                double C = rep.table.value(ell, k);
                double C_se = rep.table.stderr_of(ell, k);
                double theta0 = std::isinf(T) ? 0.5 * M_PI
                                              : std::min(T * scale, 0.5 * M_PI);
                row.eq5 = expected_intervals_exact(ell, k, cfg.n, rep.rho, theta0, C)
                              .value;
                TheoryValue eq6 =
                    expected_intervals_asymptotic(ell, k, cfg.n, rep.rho, T, C);
                row.eq6 = eq6.value;
                row.eq6_se = C > 0.0 ? eq6.value / C * C_se
                                     : rep.rho * area * C_se;
            } else {
                continue;  // observed type without a theory constant
            }
            double combined =
                std::hypot(row.empirical_se, row.eq6_se);
            row.zscore = combined > 0.0 ? (row.empirical_mean - row.eq6) / combined
                                        : 0.0;
            rep.rows.push_back(row);
        }
    }

    // per-dimension simplex counts vs the aggregated interval law
    for (int j = 1; j <= cfg.n; ++j) {
        for (std::size_t ti = 0; ti < cfg.thresholds.size(); ++ti) {
            double T = cfg.thresholds[ti];
            RunningStat stat;
            for (const TrialResult& tr : trials) {
                double dj = 0.0;
                for (const auto& [key, counts] : tr.type_counts) {
                    auto [ell, k] = key;
                    dj += binomial(k - ell, k - j) *
                          static_cast<double>(counts[ti]);
                }
                stat.add(dj);
            }
            SimplexRow row;
            row.j = j;
            row.threshold = T;
            row.empirical_mean = stat.mean();
            row.empirical_se = stat.stderr_mean();
            row.eq8 = expected_simplices(j, cfg.n, rep.rho, T, rep.table).value;
            rep.simplex_rows.push_back(row);
        }
    }

    // typical-radius law per simplex dimension: every j-simplex inherits the
    // radius of its interval, binom(k-ell, k-j) of them per interval
    for (int j = 1; j <= cfg.n; ++j) {
        std::vector<double> pooled;
        for (const TrialResult& tr : trials) {
            for (const auto& [key, radii] : tr.radii) {
                auto [ell, k] = key;
                if (ell < 1) continue;
                long mult = static_cast<long>(binomial(k - ell, k - j));
                for (long m = 0; m < mult; ++m)
                    pooled.insert(pooled.end(), radii.begin(), radii.end());
            }
        }
        KsRow row;
        row.j = j;
        row.pooled = pooled.size();
        row.ks = ks_distance(std::move(pooled), [&](double r) {
            return typical_radius_cdf(j, cfg.n, r, rep.table).value;
        });
        rep.ks_rows.push_back(row);
    }
    return rep;
}

void emit_csv(const ComparisonReport& report, std::ostream& out) {
    out << "n,ell,k,threshold,empirical_mean,empirical_se,eq5,eq6,zscore\n";
    for (const TypeRow& r : report.rows) {
        out << report.config.n << ',' << r.ell << ',' << r.k << ','
            << format_real(r.threshold) << ',' << format_real(r.empirical_mean)
            << ',' << format_real(r.empirical_se) << ',' << format_real(r.eq5)
            << ',' << format_real(r.eq6) << ',' << format_real(r.zscore) << "\n";
    }
    if (!out) throw IoError("emit_csv: stream failure");
}

void emit_simplices_csv(const ComparisonReport& report, std::ostream& out) {
    out << "n,j,threshold,empirical_mean,empirical_se,eq8\n";
    for (const SimplexRow& r : report.simplex_rows) {
        out << report.config.n << ',' << r.j << ',' << format_real(r.threshold)
            << ',' << format_real(r.empirical_mean) << ','
            << format_real(r.empirical_se) << ',' << format_real(r.eq8) << "\n";
    }
    if (!out) throw IoError("emit_simplices_csv: stream failure");
}

void emit_ks_csv(const ComparisonReport& report, std::ostream& out) {
    out << "n,j,pooled,ks\n";
    for (const KsRow& r : report.ks_rows)
        out << report.config.n << ',' << r.j << ',' << r.pooled << ','
            << format_real(r.ks) << "\n";
    if (!out) throw IoError("emit_ks_csv: stream failure");
}

void emit_json(const ComparisonReport& report, std::ostream& out) {
    nlohmann::json j;
    j["n"] = report.config.n;
    j["model"] = report.config.model == ProcessSpec::Model::Poisson ? "poisson"
                                                                    : "uniform";
    j["rho"] = mirror(report.rho);
    j["trials"] = report.trials_done;
    j["discarded"] = report.discarded;
    j["mean_points"] = mirror(report.mean_points);
    j["critical_vertex_mismatches"] = report.critical_vertex_mismatches;
    j["rows"] = nlohmann::json::array();
    for (const TypeRow& r : report.rows) {
        nlohmann::json row;
        row["n"] = report.config.n;
        row["ell"] = r.ell;
        row["k"] = r.k;
        row["threshold"] = std::isinf(r.threshold) ? nlohmann::json("inf")
                                                   : nlohmann::json(mirror(r.threshold));
        row["empirical_mean"] = mirror(r.empirical_mean);
        row["empirical_se"] = mirror(r.empirical_se);
        row["eq5"] = mirror(r.eq5);
        row["eq6"] = mirror(r.eq6);
        row["zscore"] = mirror(r.zscore);
        j["rows"].push_back(row);
    }
    j["simplices"] = nlohmann::json::array();
    for (const SimplexRow& r : report.simplex_rows) {
        nlohmann::json row;
        row["j"] = r.j;
        row["threshold"] = std::isinf(r.threshold) ? nlohmann::json("inf")
                                                   : nlohmann::json(mirror(r.threshold));
        row["empirical_mean"] = mirror(r.empirical_mean);
        row["empirical_se"] = mirror(r.empirical_se);
        row["eq8"] = mirror(r.eq8);
        j["simplices"].push_back(row);
    }
    j["ks"] = nlohmann::json::array();
    for (const KsRow& r : report.ks_rows) {
        nlohmann::json row;
        row["j"] = r.j;
        row["pooled"] = r.pooled;
        row["ks"] = mirror(r.ks);
        j["ks"].push_back(row);
    }
    j["trials_log"] = nlohmann::json::array();
    for (const TrialLog& t : report.trial_log) {
        nlohmann::json row;
        row["trial"] = t.trial;
        row["stream"] = t.stream;
        row["redraws"] = t.redraws;
        row["points"] = t.points;
        j["trials_log"].push_back(row);
    }
    out << j.dump(2) << "\n";
    if (!out) throw IoError("emit_json: stream failure");
}

std::vector<std::string> emit(const ComparisonReport& report) {
    std::vector<std::string> written;
    if (report.config.out.empty()) {
        if (report.config.format == ExperimentConfig::Format::Json)
            emit_json(report, std::cout);
        else
            emit_csv(report, std::cout);
        return written;
    }
    auto open = [&](const std::string& path) {
        std::ofstream f(path);
        if (!f) throw IoError("cannot write " + path);
        return f;
    };
    if (report.config.format == ExperimentConfig::Format::Json) {
        std::string path = report.config.out + ".json";
        auto f = open(path);
        emit_json(report, f);
        written.push_back(path);
    } else {
        std::string main_path = report.config.out + ".csv";
        auto f = open(main_path);
        emit_csv(report, f);
        written.push_back(main_path);
        std::string spath = report.config.out + "_simplices.csv";
        auto fs = open(spath);
        emit_simplices_csv(report, fs);
        written.push_back(spath);
        std::string kpath = report.config.out + "_ks.csv";
        auto fk = open(kpath);
        emit_ks_csv(report, fk);
        written.push_back(kpath);
    }
    return written;
}

bool report_acceptable(const ComparisonReport& report) {
    for (const TypeRow& r : report.rows)
        if (std::abs(r.zscore) > 3.0) return false;
    for (const KsRow& r : report.ks_rows) {
        if (r.pooled == 0) continue;
        // 0.05 documented bias allowance plus the 1% KS critical value
        double gate = 0.05 + 1.63 / std::sqrt(static_cast<double>(r.pooled));
        if (r.ks > gate) return false;
    }
    return true;
}

void write_intervals_csv(std::ostream& out, const std::vector<MorseInterval>& ivs,
                         double density, int n, bool with_fisher) {
    out << "ell,k,geo_radius,normalized_radius";
    if (with_fisher) out << ",fisher_radius";
    out << "\n";
    const double scale = std::pow(density, 1.0 / n);
    for (const MorseInterval& iv : ivs) {
        out << iv.ell << ',' << iv.k << ',' << format_real(iv.geo_radius) << ','
            << format_real(iv.geo_radius * scale);
        if (with_fisher) out << ',' << format_real(fisher_radius(iv.geo_radius));
        out << "\n";
    }
    if (!out) throw IoError("write_intervals_csv: stream failure");
}

void write_census_csv(std::ostream& out, const IntervalCensus& census) {
    out << "ell,k,count,min_geo_radius,max_geo_radius\n";
    for (const auto& [key, total] : census.type_totals) {
        const auto& radii = census.geo_radii.at(key);
        out << key.first << ',' << key.second << ',' << total << ','
            << format_real(radii.front()) << ',' << format_real(radii.back())
            << "\n";
    }
    if (!out) throw IoError("write_census_csv: stream failure");
}

}  // namespace sdm
