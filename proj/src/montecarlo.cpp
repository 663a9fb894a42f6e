#include "risnoma/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "risnoma/baselines.hpp"
#include "risnoma/channel.hpp"
#include "risnoma/phy.hpp"
#include "risnoma/rng.hpp"
#include "risnoma/scheduler.hpp"
#include "risnoma/topology.hpp"

namespace risnoma {

std::uint64_t trial_seed(std::uint64_t master, std::size_t index) { return mix_seed(master, 1000 + index); }

ChannelSet trial_channels(const NetworkConfig& cfg, std::uint64_t seed) {
    const RandomStream root(seed);
    RandomStream topo_rng = root.split(0);
    RandomStream chan_rng = root.split(1);
    const Placement placement = generate_topology(cfg, topo_rng);
    return generate_channels(placement, cfg, chan_rng);
}

TrialResult run_trial(const NetworkConfig& cfg, std::uint64_t seed, const TrialOptions& opts) {
    cfg.validate();
    const ChannelSet ch = trial_channels(cfg, seed);

    SchedulerOptions sopts;
    sopts.use_ris = opts.use_ris;
    sopts.compare_exact = opts.compare_exact;
    sopts.trace = opts.trace;
    const JointResult joint = run_joint_clustering(ch, cfg, sopts);

    TrialResult t;
    t.seed = seed;
    t.sum_rate[0] = joint.evaluation.sum_rate_bps;
    t.qos_violations[0] = joint.qos.violations;
    t.constraints_ok = check_constraints(joint.state, cfg, &joint.qos).structural_ok();
    t.assignment_value = joint.stats.assignment_value;
    t.greedy_value = joint.stats.greedy_value;
    t.exact_value = joint.stats.exact_value;
    t.cross_block_fraction = joint.evaluation.cross_block_fraction;
    t.zero_phase_elements = joint.stats.zero_phase_elements;

    const auto structure = derive_structure(cfg);
    const ClusterList clusters = benchmark_clusters(ch, structure.clusters, structure.max_cluster);
    const SchemeOutcome opt = opt_pdnoma_rate(clusters, ch, cfg);
    const SchemeOutcome mgf = mgf_noma_rate(ch, cfg);
    const SchemeOutcome sgf = sgf_noma_rate(clusters, ch, cfg);
    t.sum_rate[1] = opt.sum_rate_bps;
    t.sum_rate[2] = mgf.sum_rate_bps;
    t.sum_rate[3] = sgf.sum_rate_bps;
    t.qos_violations[1] = opt.qos_violations;
    t.qos_violations[2] = mgf.qos_violations;
    t.qos_violations[3] = sgf.qos_violations;
    t.opt_infeasible_clusters = opt.infeasible_clusters;
    return t;
}

Estimate estimate(std::span<const double> values) {
    Estimate e;
    e.count = values.size();
    if (values.empty()) return e;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    // Neumaier summation over the sorted values.
    auto sum = [](const std::vector<double>& xs) {
        double s = 0.0, c = 0.0;
        for (double x : xs) {
            const double t = s + x;
            c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
            s = t;
        }
        return s + c;
    };
    const double n = static_cast<double>(sorted.size());
    e.mean = sum(sorted) / n;
    if (sorted.size() >= 2) {
        std::vector<double> sq(sorted.size());
        for (std::size_t i = 0; i < sorted.size(); ++i) sq[i] = (sorted[i] - e.mean) * (sorted[i] - e.mean);
        std::sort(sq.begin(), sq.end());
        const double var = sum(sq) / (n - 1.0);
        e.ci95 = 1.959963984540054 * std::sqrt(var / n);
    }
    return e;
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "U") return SweepAxis::num_ues;
    if (name == "D_out") return SweepAxis::ris_outer;
    if (name == "N") return SweepAxis::elements;
    if (name == "none" || name.empty()) return SweepAxis::none;
    throw std::invalid_argument("unknown sweep axis '" + name + "' (expected U, D_out or N)");
}

std::string axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::num_ues: return "U";
        case SweepAxis::ris_outer: return "D_out";
        case SweepAxis::elements: return "N";
        case SweepAxis::none: break;
    }
    return "none";
}

NetworkConfig apply_axis(NetworkConfig cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::num_ues: cfg.num_ues = static_cast<std::size_t>(std::llround(value)); break;
        case SweepAxis::ris_outer: cfg.ris_outer_m = value; break;
        case SweepAxis::elements: cfg.elements_per_block = static_cast<std::size_t>(std::llround(value)); break;
        case SweepAxis::none: break;
    }
    return cfg;
}

SweepResult run_sweep(const NetworkConfig& cfg, SweepAxis axis, std::span<const double> values, std::size_t trials,
                      const SweepOptions& opts) {
    if (!std::is_sorted(values.begin(), values.end())) throw std::invalid_argument("run_sweep: values must be ascending");
    SweepResult out;
    out.axis = axis;
    out.values.assign(values.begin(), values.end());
    out.trials = trials;
    out.master_seed = cfg.seed;

    std::vector<NetworkConfig> configs;
    for (double v : values) {
        configs.push_back(apply_axis(cfg, axis, v));
        configs.back().validate();
    }
    out.points.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.points[i].value = values[i];
        out.points[i].trials.resize(trials);
    }

    // Jobs are (value, trial) pairs; each writes only its own slot.
    const std::size_t jobs = values.size() * trials;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs) return;
            const std::size_t vi = j / trials;
            const std::size_t ti = j % trials;
            try {
                TrialOptions topts = opts.trial;
                if (opts.threads > 1) topts.trace = nullptr;
                TrialResult r = run_trial(configs[vi], trial_seed(cfg.seed, ti), topts);
                r.trial = ti;
                out.points[vi].trials[ti] = r;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(jobs);
            }
        }
    };
    const std::size_t n_threads = std::max<std::size_t>(1, std::min(opts.threads, jobs));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (auto& point : out.points) {
        for (std::size_t s = 0; s < kNumSchemes; ++s) {
            std::vector<double> xs;
            xs.reserve(point.trials.size());
            for (const auto& t : point.trials) xs.push_back(t.sum_rate[s]);
            point.stats[s] = estimate(xs);
        }
    }
    return out;
}

}  // namespace risnoma
