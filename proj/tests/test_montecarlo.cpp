#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "risnoma/baselines.hpp"
#include "risnoma/io.hpp"
#include "risnoma/montecarlo.hpp"
#include "risnoma/scheduler.hpp"
#include "risnoma/topology.hpp"

using namespace risnoma;

namespace {

NetworkConfig quick_config() {
    NetworkConfig cfg;
    cfg.num_ues = 12;
    cfg.num_rbs = 4;
    cfg.num_ris = 4;
    cfg.elements_per_block = 8;
    return cfg;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

TEST_CASE("trials are reproducible") {
    const auto cfg = quick_config();
    const auto a = run_trial(cfg, 42);
    const auto b = run_trial(cfg, 42);
    CHECK(a.sum_rate == b.sum_rate);
    CHECK(a.qos_violations == b.qos_violations);
    CHECK(a.constraints_ok);
    const auto c = run_trial(cfg, 43);
    CHECK(c.sum_rate != a.sum_rate);
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}

TEST_CASE("without RIS the proposed scheme is SGF on its own clusters") {
    const auto cfg = quick_config();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        TrialOptions opts;
        opts.use_ris = false;
        const auto t = run_trial(cfg, seed, opts);

        const RandomStream root(seed);
        RandomStream topo = root.split(0);
        RandomStream chan = root.split(1);
        const auto ch = generate_channels(generate_topology(cfg, topo), cfg, chan);
        SchedulerOptions sopts;
        sopts.use_ris = false;
        const auto joint = run_joint_clustering(ch, cfg, sopts);
        ClusterList clusters;
        for (std::size_t r = 0; r < cfg.num_rbs; ++r) clusters.push_back(joint.state.members(r));
        const double sgf = sgf_noma_rate(clusters, ch, cfg).sum_rate_bps;
        CHECK(t.rate(Scheme::proposed) == doctest::Approx(sgf).epsilon(1e-12));
    }
}

TEST_CASE("estimate") {
    const std::vector<double> v{3.0, 1.0, 2.0, 6.0};
    const auto e = estimate(v);
    CHECK(e.mean == 3.0);
    const double s = std::sqrt((0.0 + 4.0 + 1.0 + 9.0) / 3.0);
    CHECK(e.ci95 == doctest::Approx(1.959963984540054 * s / 2.0).epsilon(1e-14));
    CHECK(e.count == 4);

    std::vector<double> big;
    RandomStream rng(1);
    for (int i = 0; i < 1000; ++i) big.push_back(rng.uniform() * 1e6 + 1e-3 * i);
    const auto e1 = estimate(big);
    std::reverse(big.begin(), big.end());
    std::shuffle(big.begin(), big.end(), rng.engine());
    const auto e2 = estimate(big);
    CHECK(e1.mean == e2.mean);
    CHECK(e1.ci95 == e2.ci95);

    const std::vector<double> one{5.0};
    CHECK(estimate(one).mean == 5.0);
    CHECK(estimate(one).ci95 == 0.0);
}

TEST_CASE("sweep with a single trial reports that trial") {
    const auto cfg = quick_config();
    const std::vector<double> values{0.0};
    const auto res = run_sweep(cfg, SweepAxis::none, values, 1);
    const auto t = run_trial(cfg, trial_seed(cfg.seed, 0));
    for (std::size_t s = 0; s < kNumSchemes; ++s) {
        CHECK(res.at(0, static_cast<Scheme>(s)).mean == t.sum_rate[s]);
        CHECK(res.at(0, static_cast<Scheme>(s)).ci95 == 0.0);
    }
}

TEST_CASE("sweep output") {
    auto cfg = quick_config();
    const std::vector<double> values{4.0, 8.0, 16.0};
    const auto res = run_sweep(cfg, SweepAxis::elements, values, 3);
    REQUIRE(res.points.size() == 3);

    // Baseline schemes see identical channels at every N.
    for (std::size_t t = 0; t < 3; ++t) {
        CHECK(res.points[0].trials[t].rate(Scheme::sgf) == res.points[2].trials[t].rate(Scheme::sgf));
        CHECK(res.points[0].trials[t].rate(Scheme::mgf) == res.points[2].trials[t].rate(Scheme::mgf));
    }

    std::ostringstream csv;
    write_sweep_csv(csv, res);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "axis_value,scheme,mean_bps,ci95_bps,trials");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const auto cells = split(line, ',');
        REQUIRE(cells.size() == 5);
        const std::size_t point = rows / kNumSchemes;
        const std::size_t scheme = rows % kNumSchemes;
        CHECK(std::stod(cells[0]) == values[point]);
        CHECK(cells[1] == kSchemeNames[scheme]);
        CHECK(std::stod(cells[2]) == res.points[point].stats[scheme].mean);
        CHECK(std::stod(cells[3]) == res.points[point].stats[scheme].ci95);
        CHECK(cells[4] == "3");
        ++rows;
    }
    CHECK(rows == 12);

    CHECK_THROWS(run_sweep(cfg, SweepAxis::elements, std::vector<double>{8.0, 4.0}, 1));
}

TEST_CASE("results do not depend on the thread count") {
    const auto cfg = quick_config();
    const std::vector<double> values{8.0, 12.0};
    SweepOptions one, four;
    four.threads = 4;
    const auto a = run_sweep(cfg, SweepAxis::num_ues, values, 4, one);
    const auto b = run_sweep(cfg, SweepAxis::num_ues, values, 4, four);
    std::ostringstream ca, cb;
    write_trials_csv(ca, a);
    write_trials_csv(cb, b);
    CHECK(ca.str() == cb.str());
}

TEST_CASE("sweep axes") {
    CHECK(parse_axis("U") == SweepAxis::num_ues);
    CHECK(parse_axis("D_out") == SweepAxis::ris_outer);
    CHECK(parse_axis("N") == SweepAxis::elements);
    CHECK(parse_axis("none") == SweepAxis::none);
    CHECK_THROWS(parse_axis("K"));
    CHECK(apply_axis(NetworkConfig{}, SweepAxis::elements, 30.0).elements_per_block == 30);
    CHECK(apply_axis(NetworkConfig{}, SweepAxis::ris_outer, 250.0).ris_outer_m == 250.0);
    CHECK(apply_axis(NetworkConfig{}, SweepAxis::num_ues, 50.0).num_ues == 50);
}
