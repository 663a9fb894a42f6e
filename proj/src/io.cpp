#include "risnoma/io.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#ifndef RISNOMA_VERSION
#define RISNOMA_VERSION "unknown"
#endif

namespace risnoma {

namespace {

using json = nlohmann::json;

template <typename T>
T read_number(const json& value, const std::string& key) {
    if (!value.is_number()) throw ConfigError(key + ": expected a number");
    if constexpr (std::is_integral_v<T>) {
        if (!value.is_number_integer() || value.get<long long>() < 0) {
            throw ConfigError(key + ": expected a non-negative integer");
        }
        return static_cast<T>(value.get<unsigned long long>());
    } else {
        return value.get<T>();
    }
}

// key -> (reader, writer) over NetworkConfig.
struct Field {
    std::function<void(NetworkConfig&, const json&, const std::string&)> read;
    std::function<json(const NetworkConfig&)> write;
};

template <typename T>
Field field(T NetworkConfig::*member) {
    return {[member](NetworkConfig& cfg, const json& v, const std::string& key) {
                if constexpr (std::is_same_v<T, bool>) {
                    if (!v.is_boolean()) throw ConfigError(key + ": expected true or false");
                    cfg.*member = v.get<bool>();
                } else {
                    cfg.*member = read_number<T>(v, key);
                }
            },
            [member](const NetworkConfig& cfg) { return json(cfg.*member); }};
}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> table{
        {"U", field(&NetworkConfig::num_ues)},
        {"R", field(&NetworkConfig::num_rbs)},
        {"M", field(&NetworkConfig::num_ris)},
        {"G", field(&NetworkConfig::blocks_per_ris)},
        {"N", field(&NetworkConfig::elements_per_block)},
        {"p_id", field(&NetworkConfig::p_id_dbm)},
        {"W", field(&NetworkConfig::bandwidth_hz)},
        {"q_u", field(&NetworkConfig::qos_bps)},
        {"N0", field(&NetworkConfig::noise_psd_dbm_hz)},
        {"f_c", field(&NetworkConfig::carrier_hz)},
        {"D", field(&NetworkConfig::cell_radius_m)},
        {"D_in", field(&NetworkConfig::ris_inner_m)},
        {"D_out", field(&NetworkConfig::ris_outer_m)},
        {"P_max", field(&NetworkConfig::p_max_dbm)},
        {"P_min", field(&NetworkConfig::p_min_dbm)},
        {"K_los", field(&NetworkConfig::k_los)},
        {"bs_height", field(&NetworkConfig::bs_height_m)},
        {"ue_height", field(&NetworkConfig::ue_height_m)},
        {"ris_height", field(&NetworkConfig::ris_height_m)},
        {"seed", field(&NetworkConfig::seed)},
        {"force_ris_bs_los", field(&NetworkConfig::force_ris_bs_los)},
        {"coherent_combining", field(&NetworkConfig::coherent_combining)},
        {"relaxation_rounds", field(&NetworkConfig::relaxation_rounds)},
    };
    return table;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return os;
}

void close_checked(std::ofstream& os, const std::filesystem::path& path) {
    os.close();
    if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

const char* version() { return RISNOMA_VERSION; }

NetworkConfig parse_config(const std::string& text) {
    NetworkConfig cfg;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        cfg.validate();
        return cfg;
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    const auto& table = fields();
    for (const auto& [key, value] : doc.items()) {
        const auto it = table.find(key);
        if (it == table.end()) throw ConfigError(key + ": unknown configuration key");
        it->second.read(cfg, value, key);
    }
    cfg.validate();
    return cfg;
}

NetworkConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open config '" + path.string() + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const NetworkConfig& cfg) {
    json doc = json::object();
    for (const auto& [key, f] : fields()) doc[key] = f.write(cfg);
    return doc.dump(2) + "\n";
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "axis_value,scheme,mean_bps,ci95_bps,trials\n";
    for (const auto& point : result.points) {
        for (std::size_t s = 0; s < kNumSchemes; ++s) {
            os << (result.axis == SweepAxis::none ? std::string() : format_number(point.value)) << ','
               << kSchemeNames[s] << ',' << format_number(point.stats[s].mean) << ','
               << format_number(point.stats[s].ci95) << ',' << point.stats[s].count << '\n';
        }
    }
}

void write_trials_csv(std::ostream& os, const SweepResult& result) {
    os << "axis_value,trial,seed";
    for (const char* name : kSchemeNames) os << ',' << name << "_bps";
    for (const char* name : kSchemeNames) os << ',' << name << "_qos_violations";
    os << ",opt_infeasible_clusters,constraints_ok,cross_block_fraction\n";
    for (const auto& point : result.points) {
        for (const auto& t : point.trials) {
            os << (result.axis == SweepAxis::none ? std::string() : format_number(point.value)) << ',' << t.trial
               << ',' << t.seed;
            for (double r : t.sum_rate) os << ',' << format_number(r);
            for (std::size_t v : t.qos_violations) os << ',' << v;
            os << ',' << t.opt_infeasible_clusters << ',' << (t.constraints_ok ? 1 : 0) << ','
               << format_number(t.cross_block_fraction) << '\n';
        }
    }
}

void emit_results(const SweepResult& result, const NetworkConfig& cfg, const std::string& command,
                  const std::filesystem::path& outdir) {
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + outdir.string() + "': " + ec.message());

    const auto sweep_path = outdir / "sweep.csv";
    auto sweep = open_out(sweep_path);
    write_sweep_csv(sweep, result);
    close_checked(sweep, sweep_path);

    const auto trials_path = outdir / "trials.csv";
    auto trials = open_out(trials_path);
    write_trials_csv(trials, result);
    close_checked(trials, trials_path);

    const auto meta_path = outdir / "run_meta";
    auto meta = open_out(meta_path);
    meta << "version=" << version() << '\n'
         << "command=" << command << '\n'
         << "master_seed=" << result.master_seed << '\n'
         << "axis=" << axis_name(result.axis) << '\n'
         << "values=";
    for (std::size_t i = 0; i < result.values.size(); ++i) meta << (i ? "," : "") << format_number(result.values[i]);
    meta << '\n' << "trials=" << result.trials << '\n' << "config=\n" << serialize_config(cfg);
    close_checked(meta, meta_path);
}

void write_channels(std::ostream& os, const ChannelSet& ch) {
    os << ch.num_ues() << ' ' << ch.num_blocks() << ' ' << ch.num_elements() << '\n';
    auto line = [&](char kind, std::size_t i, std::size_t j, std::size_t n, cd c) {
        os << kind << ' ' << i << ' ' << j << ' ' << n << ' ' << format_number(c.real()) << ' '
           << format_number(c.imag()) << '\n';
    };
    for (std::size_t u = 0; u < ch.num_ues(); ++u) line('f', u, 0, 0, ch.f(u));
    for (std::size_t b = 0; b < ch.num_blocks(); ++b)
        for (std::size_t n = 0; n < ch.num_elements(); ++n) line('g', b, 0, n, ch.g(b)[n]);
    for (std::size_t u = 0; u < ch.num_ues(); ++u)
        for (std::size_t b = 0; b < ch.num_blocks(); ++b)
            for (std::size_t n = 0; n < ch.num_elements(); ++n) line('h', u, b, n, ch.h(u, b)[n]);
}

}  // namespace risnoma
