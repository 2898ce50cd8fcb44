#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <limits>
#include <sstream>

#include "sdm/errors.hpp"
#include "sdm/experiment.hpp"
#include "sdm/numeric.hpp"
#include "sdm/specfun.hpp"

using namespace sdm;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("config file parsing") {
    std::stringstream ss;
    ss << "# comment line\n"
       << "n=2\n"
       << "model=uniform\n"
       << "count=500\n"
       << "trials=7\n"
       << "seed=99\n"
       << "thresholds=0.5,1.0,inf\n"
       << "constants=mc:5000\n"
       << "format=json\n"
       << "threads=2\n"
       << "strict=1\n";
    ExperimentConfig cfg = parse_config_file(ss);
    CHECK(cfg.n == 2);
    CHECK(cfg.model == ProcessSpec::Model::Uniform);
    CHECK(cfg.count == 500);
    CHECK(cfg.trials == 7);
    CHECK(cfg.seed == 99);
    REQUIRE(cfg.thresholds.size() == 3);
    CHECK(cfg.thresholds[0] == 0.5);
    CHECK(std::isinf(cfg.thresholds[2]));
    CHECK(cfg.constants_samples == 5000);
    CHECK(cfg.format == ExperimentConfig::Format::Json);
    CHECK(cfg.threads == 2);
    CHECK(cfg.strict);

    std::stringstream bad("nonsense=1\n");
    CHECK_THROWS_AS(parse_config_file(bad), DomainError);
    std::stringstream unsorted("thresholds=2.0,1.0\n");
    CHECK_THROWS_AS(parse_config_file(unsorted), DomainError);
}

TEST_CASE("ks distance on hand cases") {
    // single observation at 0.5 against the identity CDF on [0,1]
    double d = ks_distance({0.5}, [](double t) { return t; });
    CHECK(d == doctest::Approx(0.5));
    // a perfect grid has distance 1/(2N)
    std::vector<double> grid;
    const int N = 100;
    for (int i = 0; i < N; ++i) grid.push_back((i + 0.5) / N);
    CHECK(ks_distance(grid, [](double t) { return t; }) ==
          doctest::Approx(0.5 / N).epsilon(1e-9));
}

TEST_CASE("format_real is locale independent and 12 digits") {
    CHECK(format_real(0.5) == "0.5");
    CHECK(format_real(1.0 / 3.0) == "0.333333333333");
    CHECK(format_real(kInf) == "inf");
    CHECK(format_real(12345.678).find(',') == std::string::npos);
}

TEST_CASE("small comparison run: identities and determinism") {
    ExperimentConfig cfg;
    cfg.n = 1;
    cfg.model = ProcessSpec::Model::Uniform;
    cfg.count = 40;
    cfg.trials = 5;
    cfg.seed = 31337;
    cfg.thresholds = {1.0, kInf};
    cfg.constants_samples = 4000;
    cfg.threads = 2;

    ComparisonReport rep = run(cfg);
    CHECK(rep.trials_done == 5);
    CHECK(rep.mean_points == doctest::Approx(40.0));
    CHECK(rep.critical_vertex_mismatches == 0);  // critical vertices == |X| per trial

    // the (0,0) row carries the exact per-point law
    bool found00 = false;
    for (const TypeRow& r : rep.rows) {
        if (r.ell == 0 && r.k == 0 && std::isinf(r.threshold)) {
            found00 = true;
            CHECK(r.empirical_mean == doctest::Approx(40.0));
            CHECK(r.eq6 == doctest::Approx(rep.rho * sphere_area(2)).epsilon(1e-12));
        }
        if (r.ell == 1 && r.k == 1 && std::isinf(r.threshold)) {
            // on the circle every trial has exactly N critical edges
            CHECK(r.empirical_mean == doctest::Approx(40.0));
            CHECK(r.empirical_se == doctest::Approx(0.0));
        }
    }
    CHECK(found00);

    // rerun is byte-identical
    ComparisonReport rep2 = run(cfg);
    std::stringstream a, b;
    emit_csv(rep, a);
    emit_csv(rep2, b);
    CHECK(a.str() == b.str());
    std::stringstream ja, jb;
    emit_json(rep, ja);
    emit_json(rep2, jb);
    CHECK(ja.str() == jb.str());
}

TEST_CASE("emit: empty report and row round trip") {
    ComparisonReport rep;
    rep.config.n = 2;
    std::stringstream ss;
    emit_csv(rep, ss);
    CHECK(ss.str() == "n,ell,k,threshold,empirical_mean,empirical_se,eq5,eq6,zscore\n");

    TypeRow row;
    row.ell = 1;
    row.k = 2;
    row.threshold = 0.75;
    row.empirical_mean = 123.456;
    row.empirical_se = 1.25;
    row.eq5 = 122.9;
    row.eq6 = 123.4;
    row.zscore = 0.045;
    rep.rows.push_back(row);
    std::stringstream one;
    emit_csv(rep, one);
    std::string header, line;
    std::getline(one, header);
    std::getline(one, line);
    std::stringstream parse(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(parse, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 9);
    CHECK(std::stoi(cells[0]) == 2);
    CHECK(std::stoi(cells[1]) == 1);
    CHECK(std::stoi(cells[2]) == 2);
    CHECK(std::stod(cells[3]) == doctest::Approx(0.75));
    CHECK(std::stod(cells[4]) == doctest::Approx(123.456));
    CHECK(std::stod(cells[8]) == doctest::Approx(0.045));
}

TEST_CASE("intervals and census serialization") {
    MorseInterval iv;
    iv.lower = Face{{2}};
    iv.upper = Face{{2, 5}};
    iv.ell = 0;
    iv.k = 1;
    iv.geo_radius = 0.25;
    std::stringstream ss;
    write_intervals_csv(ss, {iv}, 4.0, 2, true);
    std::string header, line;
    std::getline(ss, header);
    CHECK(header == "ell,k,geo_radius,normalized_radius,fisher_radius");
    std::getline(ss, line);
    CHECK(line.rfind("0,1,0.25,0.5,", 0) == 0);  // 0.25 * 4^(1/2) = 0.5

    IntervalCensus cen = census({iv}, 4.0, 2);
    std::stringstream cs;
    write_census_csv(cs, cen);
    std::getline(cs, header);
    CHECK(header == "ell,k,count,min_geo_radius,max_geo_radius");
    std::getline(cs, line);
    CHECK(line == "0,1,1,0.25,0.25");
}

TEST_CASE("threshold list parsing") {
    auto ts = parse_threshold_list("0.1,0.5,inf");
    REQUIRE(ts.size() == 3);
    CHECK(std::isinf(ts[2]));
    CHECK_THROWS_AS(parse_threshold_list("1.0,0.5"), DomainError);
}

TEST_CASE("fixture cloud: the tetrahedron report matches the hand census") {
    double s = 1.0 / std::sqrt(3.0);
    PointCloud cloud;
    cloud.n = 2;
    cloud.points = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
    cloud.spec.n = 2;
    cloud.spec.model = ProcessSpec::Model::Uniform;
    cloud.spec.count = 4;
    cloud.effective_density = 4.0 / sphere_area(3);
    const std::string path = "/tmp/sdm_test_tetra_cloud.txt";
    {
        std::ofstream f(path);
        REQUIRE(f);
        write_cloud(f, cloud);
    }
    ExperimentConfig cfg;
    cfg.n = 2;
    cfg.trials = 1;
    cfg.input_cloud = path;
    cfg.thresholds = {kInf};
    cfg.constants_samples = 2000;
    ComparisonReport rep = run(cfg);
    CHECK(rep.mean_points == doctest::Approx(4.0));
    std::map<std::pair<int, int>, double> means;
    for (const TypeRow& r : rep.rows) means[{r.ell, r.k}] = r.empirical_mean;
    CHECK(means.at({0, 0}) == doctest::Approx(4.0));
    CHECK(means.at({1, 1}) == doctest::Approx(6.0));
    CHECK(means.at({2, 2}) == doctest::Approx(4.0));
    CHECK(means.at({1, 2}) == doctest::Approx(0.0));
    std::remove(path.c_str());
    // a fixture with more than one trial is rejected
    cfg.trials = 2;
    CHECK_THROWS_AS(run(cfg), DomainError);
}

TEST_CASE("n=3 counts match the finite-density formula across all types") {
    // at ~59 points per trial the asymptotic law is 15-30% off, but the
    // integral formula must land inside the Monte Carlo error bars
    ExperimentConfig cfg;
    cfg.n = 3;
    cfg.model = ProcessSpec::Model::Poisson;
    cfg.density = 3.0;
    cfg.trials = 20;
    cfg.seed = 17;
    cfg.thresholds = {1.0, kInf};
    cfg.constants_samples = 300000;
    cfg.threads = 2;
    ComparisonReport rep = run(cfg);
    int rows_checked = 0;
    for (const TypeRow& r : rep.rows) {
        if (r.ell < 1) continue;
        double c_se = rep.table.stderr_of(r.ell, r.k);
        double c = rep.table.value(r.ell, r.k);
        double eq5_se = c > 0.0 ? r.eq5 / c * c_se : 0.0;
        double combined = std::hypot(r.empirical_se, eq5_se);
        REQUIRE(combined > 0.0);
        CHECK(std::abs(r.empirical_mean - r.eq5) <= 3.5 * combined);
        ++rows_checked;
    }
    CHECK(rows_checked == 12);  // six types, two thresholds
}

TEST_CASE("two-path check on the circle at E[N] = 2000") {
    // n = 1: C(1,1) = 1 analytically and every trial has exactly N critical
    // edges, so the comparison is pinned by Poisson noise alone. Crowded
    // circles hit the on-plane/boundary tolerances a few times per draw, so
    // this drives the pipeline directly with its own redraw loop.
    ProcessSpec spec;
    spec.n = 1;
    spec.model = ProcessSpec::Model::Poisson;
    spec.density = 2000.0 / sphere_area(2);
    spec.seed = 909;
    const int trials = 8;
    RunningStat edges;
    for (int t = 0; t < trials; ++t) {
        for (std::uint32_t stream = 0;; ++stream) {
            REQUIRE(stream < 200);
            try {
                PointCloud cloud = sample(spec, t, stream);
                Mosaic m = build_mosaic(build_hull(cloud.points));
                std::vector<MorseInterval> ivs = radius_and_intervals(m);
                long crit_edges = 0, crit_vertices = 0;
                for (const MorseInterval& iv : ivs) {
                    if (iv.k == 1 && iv.ell == 1) ++crit_edges;
                    if (iv.k == 0) ++crit_vertices;
                }
                CHECK(crit_vertices == static_cast<long>(cloud.points.size()));
                CHECK(crit_edges == crit_vertices);  // the circle pairs them up
                edges.add(static_cast<double>(crit_edges));
                break;
            } catch (const Error& e) {
                if (!is_resample_event(e)) throw;
            }
        }
    }
    // empirical mean / (rho sigma_2) vs C(1,1) = 1 within 3 SE
    double per_point = edges.mean() / 2000.0;
    double se = edges.stderr_mean() / 2000.0;
    CHECK(std::abs(per_point - 1.0) <= 3.0 * se);
}
