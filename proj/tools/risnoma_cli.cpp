// Command-line front end: trials, sweeps, solver benchmarks and invariant checks.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "risnoma/assignment.hpp"
#include "risnoma/io.hpp"
#include "risnoma/montecarlo.hpp"
#include "risnoma/phy.hpp"
#include "risnoma/scheduler.hpp"

using namespace risnoma;

namespace {

struct RunRequest {
    std::string config_path;
    std::string out_dir = "out";
    std::size_t trials = 200;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 1;
    bool verbose = false;
    std::string axis = "none";
    std::vector<double> values;
    std::string dump_channels;
    // solver-bench
    std::size_t instances = 100;
    std::size_t size = 5;
};

std::string command_line(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += ' ';
        out += argv[i];
    }
    return out;
}

NetworkConfig resolve_config(const RunRequest& req) {
    NetworkConfig cfg = req.config_path.empty() ? NetworkConfig{} : load_config(req.config_path);
    if (req.seed) cfg.seed = *req.seed;
    cfg.validate();
    return cfg;
}

void print_summary(const SweepResult& res) {
    for (std::size_t i = 0; i < res.points.size(); ++i) {
        if (res.axis != SweepAxis::none) std::printf("%s = %s\n", axis_name(res.axis).c_str(), format_number(res.values[i]).c_str());
        for (std::size_t s = 0; s < kNumSchemes; ++s) {
            const auto& e = res.points[i].stats[s];
            std::printf("  %-9s %12.4f Mb/s  +/- %.4f\n", kSchemeNames[s], e.mean / 1e6, e.ci95 / 1e6);
        }
    }
}

// Counts trials whose proposed output failed C2..C7.
std::size_t constraint_failures(const SweepResult& res) {
    std::size_t n = 0;
    for (const auto& p : res.points)
        for (const auto& t : p.trials) n += t.constraints_ok ? 0 : 1;
    return n;
}

int finish(const SweepResult& res, const NetworkConfig& cfg, const RunRequest& req, const std::string& cmd) {
    emit_results(res, cfg, cmd, req.out_dir);
    print_summary(res);
    const std::size_t bad = constraint_failures(res);
    if (bad) {
        std::fprintf(stderr, "error: %zu trials violated C2-C7\n", bad);
        return 1;
    }
    return 0;
}

int run_trials(const RunRequest& req, const std::string& cmd) {
    const NetworkConfig cfg = resolve_config(req);
    if (!req.dump_channels.empty()) {
        std::ofstream os(req.dump_channels);
        if (!os) throw std::runtime_error("cannot open '" + req.dump_channels + "' for writing");
        write_channels(os, trial_channels(cfg, trial_seed(cfg.seed, 0)));
        if (!os) throw std::runtime_error("write to '" + req.dump_channels + "' failed");
    }
    SweepOptions opts;
    opts.threads = req.verbose ? 1 : req.threads;
    if (req.verbose) opts.trial.trace = &std::cerr;
    const std::vector<double> values{0.0};
    return finish(run_sweep(cfg, SweepAxis::none, values, req.trials, opts), cfg, req, cmd);
}

int run_sweep_command(const RunRequest& req, const std::string& cmd) {
    const NetworkConfig cfg = resolve_config(req);
    const SweepAxis axis = parse_axis(req.axis);
    std::vector<double> values = req.values;
    if (axis == SweepAxis::none) values = {0.0};
    if (values.empty()) throw std::invalid_argument("--values: required for a sweep axis");
    for (double v : values) apply_axis(cfg, axis, v).validate();
    SweepOptions opts;
    opts.threads = req.verbose ? 1 : req.threads;
    if (req.verbose) opts.trial.trace = &std::cerr;
    return finish(run_sweep(cfg, axis, values, req.trials, opts), cfg, req, cmd);
}

int solver_bench(const RunRequest& req) {
    if (req.size == 0 || req.size > 8) throw std::invalid_argument("--size: must be in [1, 8]");
    RandomStream rng(req.seed.value_or(1));
    std::vector<double> gap_heur, gap_greedy;
    double t_exact = 0.0, t_heur = 0.0, t_greedy = 0.0;
    using Clock = std::chrono::steady_clock;
    auto timed = [](double& acc, auto&& fn) {
        const auto t0 = Clock::now();
        auto r = fn();
        acc += std::chrono::duration<double>(Clock::now() - t0).count();
        return r;
    };
    const std::size_t v = req.size;
    for (std::size_t i = 0; i < req.instances; ++i) {
        CostTensor q(v, v, v);
        for (std::size_t r = 0; r < v; ++r)
            for (std::size_t u = 0; u < v; ++u)
                for (std::size_t b = 0; b < v; ++b) q.q(r, u, b) = rng.uniform();
        const double opt = timed(t_exact, [&] { return solve_exact(q); }).value;
        gap_heur.push_back(timed(t_heur, [&] { return solve_heuristic(q); }).value / opt);
        gap_greedy.push_back(timed(t_greedy, [&] { return solve_greedy(q); }).value / opt);
    }
    auto line = [&](const char* name, std::vector<double>& ratios, double secs) {
        std::sort(ratios.begin(), ratios.end());
        const auto within = std::count_if(ratios.begin(), ratios.end(), [](double r) { return r >= 0.95; });
        const auto e = estimate(ratios);
        std::printf("%-9s mean %.4f  min %.4f  >=0.95 on %zu/%zu  %.3f ms/instance\n", name, e.mean,
                    ratios.empty() ? 0.0 : ratios.front(), static_cast<std::size_t>(within), ratios.size(),
                    1e3 * secs / static_cast<double>(std::max<std::size_t>(1, req.instances)));
    };
    std::printf("%zu random %zux%zux%zu instances, ratio to exact optimum\n", req.instances, v, v, v);
    line("heuristic", gap_heur, t_heur);
    line("greedy", gap_greedy, t_greedy);
    std::printf("exact     %.3f ms/instance\n", 1e3 * t_exact / static_cast<double>(std::max<std::size_t>(1, req.instances)));
    return 0;
}

bool suite(const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    return ok;
}

int validate(const RunRequest& req) {
    RandomStream rng(req.seed.value_or(7));
    bool all = true;

    double worst = 0.0;
    for (std::size_t n : {1u, 8u, 256u}) {
        for (int i = 0; i < 200; ++i) {
            std::vector<cd> g(n), h(n);
            for (auto& x : g) x = rng.complex_normal();
            for (auto& x : h) x = rng.complex_normal();
            const auto phi = align_phases(rng.complex_normal(), g, h);
            double ref = 0.0;
            for (std::size_t k = 0; k < n; ++k) ref += std::abs(g[k]) * std::abs(h[k]);
            worst = std::max(worst, std::abs(std::abs(cascade_gain(g, phi, h)) - ref) / ref);
        }
    }
    all &= suite("phase coherence", worst <= 1e-9, "max relative error " + format_number(worst));

    // Exact solver against enumeration of every permutation pair.
    std::size_t matched = 0;
    const std::size_t cases = 30;
    for (std::size_t i = 0; i < cases; ++i) {
        CostTensor q(4, 4, 4);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t u = 0; u < 4; ++u)
                for (std::size_t b = 0; b < 4; ++b) q.q(r, u, b) = rng.uniform();
        std::vector<std::size_t> pu{0, 1, 2, 3};
        double best = 0.0;
        do {
            std::vector<std::size_t> pb{0, 1, 2, 3};
            do {
                double s = 0.0;
                for (std::size_t r = 0; r < 4; ++r) s += q.q(r, pu[r], pb[r]);
                best = std::max(best, s);
            } while (std::next_permutation(pb.begin(), pb.end()));
        } while (std::next_permutation(pu.begin(), pu.end()));
        const auto a = solve_exact(q);
        if (std::abs(a.value - best) <= 1e-12 * best) ++matched;
    }
    all &= suite("3D-AA oracle", matched == cases, std::to_string(matched) + "/" + std::to_string(cases) + " instances");

    const NetworkConfig cfg = resolve_config(req);
    std::size_t ok = 0;
    const std::size_t trials = std::min<std::size_t>(req.trials, 10);
    for (std::size_t i = 0; i < trials; ++i) {
        const auto ch = trial_channels(cfg, trial_seed(cfg.seed, i));
        const auto res = run_joint_clustering(ch, cfg);
        ok += check_constraints(res.state, cfg, &res.qos).structural_ok() ? 1 : 0;
    }
    all &= suite("constraint checks", ok == trials, std::to_string(ok) + "/" + std::to_string(trials) + " trials satisfy C2-C7");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted grant-free NOMA simulator"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    RunRequest req;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", req.config_path, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", req.seed, "master seed (overrides the config)");
        sub->add_flag("--verbose", req.verbose, "print per-pass scheduler traces to stderr");
    };
    auto running = [&](CLI::App* sub) {
        common(sub);
        sub->add_option("--out", req.out_dir, "output directory")->capture_default_str();
        sub->add_option("--trials", req.trials, "trials per value")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--threads", req.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    };

    auto* trial = app.add_subcommand("trial", "run seeded trials of one configuration");
    running(trial);
    trial->add_option("--dump-channels", req.dump_channels, "write the first trial's channels to this file");

    auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
    running(sweep);
    sweep->add_option("--sweep", req.axis, "axis: U, D_out, N or none")->capture_default_str();
    sweep->add_option("--values", req.values, "comma-separated axis values, ascending")->delimiter(',');

    auto* bench = app.add_subcommand("solver-bench", "3D assignment gap and runtime on random tensors");
    bench->add_option("--instances", req.instances, "number of tensors")->capture_default_str();
    bench->add_option("--size", req.size, "tensor side V (at most 8)")->capture_default_str();
    bench->add_option("--seed", req.seed, "seed");

    auto* val = app.add_subcommand("validate", "run the invariant suites");
    common(val);
    val->add_option("--trials", req.trials, "trials for the constraint suite (at most 10)");

    CLI11_PARSE(app, argc, argv);

    const std::string cmd = command_line(argc, argv);
    try {
        if (trial->parsed()) return run_trials(req, cmd);
        if (sweep->parsed()) return run_sweep_command(req, cmd);
        if (bench->parsed()) return solver_bench(req);
        if (val->parsed()) return validate(req);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
