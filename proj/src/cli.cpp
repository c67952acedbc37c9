// SPDX-License-Identifier: Apache-2.0
//
// beamalign: beam-alignment training analysis and simulation
// Copyright (C) 2026 The beamalign authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "beamalign/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "beamalign/experiment.hpp"
#include "beamalign/ldp_analysis.hpp"

namespace beamalign::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

const std::map<std::string, std::string>& aliases()
{
    static const std::map<std::string, std::string> a{
        {"strategy", "strategies"},
        {"n_tot", "budgets"},
        {"gain", "level_gain"},
        {"base_seed", "seed"},
    };
    return a;
}

std::string canonical_key(const std::string& key)
{
    auto it = aliases().find(key);
    std::string k = it == aliases().end() ? key : it->second;
    const auto& known = known_keys();
    if (std::find(known.begin(), known.end(), k) == known.end())
        throw ConfigError("unknown configuration key '" + key + "'");
    return k;
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        if (!trim(item).empty())
            out.push_back(trim(item));
    return out;
}

template <class T>
std::string join(const std::vector<T>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (i)
            out += ',';
        if constexpr (std::is_same_v<T, std::string>)
            out += v[i];
        else
            out += std::to_string(v[i]);
    }
    return out;
}

double parse_double(const std::string& text, const std::string& key)
{
    std::string t = trim(text);
    double v = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
        throw ConfigError("invalid number '" + text + "' for key '" + key + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& key)
{
    std::string t = trim(text);
    std::uint64_t v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
        throw ConfigError("invalid non-negative integer '" + text + "' for key '" + key + "'");
    return v;
}

unsigned parse_unsigned(const std::string& text, const std::string& key)
{
    auto v = parse_u64(text, key);
    if (v > std::numeric_limits<unsigned>::max())
        throw ConfigError("value '" + text + "' out of range for key '" + key + "'");
    return unsigned(v);
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key)
{
    std::vector<double> out;
    for (const auto& item : split(text, ','))
        out.push_back(parse_double(item, key));
    return out;
}

const std::string& need(const KeyValues& keys, const std::string& key)
{
    auto it = keys.find(key);
    if (it == keys.end())
        throw ConfigError("missing configuration key '" + key + "'");
    return it->second;
}

KeyValues keys_from_preset(const FigurePreset& p)
{
    KeyValues k;
    std::vector<std::string> strategies;
    for (auto s : p.strategies)
        strategies.push_back(to_string(s));
    k["name"] = p.id;
    k["strategies"] = join(strategies);
    k["channel"] = to_string(p.spec.channel.model);
    k["k_factor_db"] = format_double(p.spec.channel.k_factor_db);
    k["mean_paths"] = format_double(p.spec.channel.mean_paths);
    k["aod_lo_deg"] = format_double(p.spec.channel.aod.lo_deg);
    k["aod_hi_deg"] = format_double(p.spec.channel.aod.hi_deg);
    k["aoa_lo_deg"] = format_double(p.spec.channel.aoa.lo_deg);
    k["aoa_hi_deg"] = format_double(p.spec.channel.aoa.hi_deg);
    k["snr_db"] = format_double(p.spec.snr_db);
    k["budgets"] = join(p.spec.budgets);
    k["trials"] = std::to_string(p.spec.trials);
    k["seed"] = std::to_string(p.spec.base_seed);
    k["n_tx"] = std::to_string(p.setup.n_tx);
    k["n_rx"] = std::to_string(p.setup.n_rx);
    k["tx_sizes"] = join(p.setup.tx_sizes);
    k["rx_sizes"] = join(p.setup.rx_sizes);
    k["synthesis"] = to_string(p.setup.synthesis);
    k["level_pairs"] = std::to_string(p.level_pairs);
    k["level_gain"] = format_double(p.level_gain);
    k["xi"] = "";
    k["pilots"] = "1:100";
    k["tol"] = format_double(kDefaultCdfTol);
    k["cdf_budgets"] = join(p.cdf_budgets);
    return k;
}

struct Resolved
{
    std::string name;
    std::vector<Strategy> strategies;
    SweepSpec spec;
    SystemSetup setup;
    unsigned level_pairs;
    double level_gain;
    std::vector<double> xi;
    std::vector<unsigned> pilots;
    double tol;
    std::vector<unsigned> cdf_budgets;
};

Resolved interpret(const KeyValues& k)
{
    Resolved r;
    r.name = need(k, "name");
    if (r.name.empty() || r.name.find_first_of("/\\") != std::string::npos)
        throw ConfigError("invalid value '" + r.name + "' for key 'name'");
    try
    {
        for (const auto& s : split(need(k, "strategies"), ','))
            r.strategies.push_back(strategy_from_string(s));
        r.spec.channel.model = channel_model_from_string(need(k, "channel"));
        r.setup.synthesis = synthesis_from_string(need(k, "synthesis"));
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(e.what());
    }
    r.spec.channel.k_factor_db = parse_double(need(k, "k_factor_db"), "k_factor_db");
    r.spec.channel.mean_paths = parse_double(need(k, "mean_paths"), "mean_paths");
    r.spec.channel.aod = {parse_double(need(k, "aod_lo_deg"), "aod_lo_deg"),
                          parse_double(need(k, "aod_hi_deg"), "aod_hi_deg")};
    r.spec.channel.aoa = {parse_double(need(k, "aoa_lo_deg"), "aoa_lo_deg"),
                          parse_double(need(k, "aoa_hi_deg"), "aoa_hi_deg")};
    r.spec.snr_db = parse_double(need(k, "snr_db"), "snr_db");
    r.spec.budgets = parse_uint_list(need(k, "budgets"), "budgets");
    r.spec.trials = parse_unsigned(need(k, "trials"), "trials");
    r.spec.base_seed = parse_u64(need(k, "seed"), "seed");
    r.setup.n_tx = parse_unsigned(need(k, "n_tx"), "n_tx");
    r.setup.n_rx = parse_unsigned(need(k, "n_rx"), "n_rx");
    r.setup.tx_sizes = parse_uint_list(need(k, "tx_sizes"), "tx_sizes");
    r.setup.rx_sizes = parse_uint_list(need(k, "rx_sizes"), "rx_sizes");
    r.level_pairs = parse_unsigned(need(k, "level_pairs"), "level_pairs");
    r.level_gain = parse_double(need(k, "level_gain"), "level_gain");
    r.xi = parse_double_list(need(k, "xi"), "xi");
    r.pilots = parse_uint_list(need(k, "pilots"), "pilots");
    r.tol = parse_double(need(k, "tol"), "tol");
    r.cdf_budgets = parse_uint_list(need(k, "cdf_budgets"), "cdf_budgets");

    if (r.spec.trials < 1)
        throw ConfigError("invalid value '0' for key 'trials'");
    if (!std::is_sorted(r.spec.budgets.begin(), r.spec.budgets.end()))
        throw ConfigError("key 'budgets' must be sorted ascending");
    if (!std::is_sorted(r.pilots.begin(), r.pilots.end()) ||
        std::find(r.pilots.begin(), r.pilots.end(), 0u) != r.pilots.end())
        throw ConfigError("key 'pilots' must be positive and ascending");
    if (r.level_pairs < 1)
        throw ConfigError("invalid value '0' for key 'level_pairs'");
    return r;
}

LevelGainProfile level_profile(const Resolved& r)
{
    if (!r.xi.empty())
        return LevelGainProfile::from_xi(r.xi);
    auto snr = calibrate_snr(r.spec.snr_db);
    return LevelGainProfile::ideal(r.level_pairs,
                                   xi_from_gain(r.level_gain, snr.transmit_power, snr.noise_power));
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("cannot write '" + path.string() + "'");
    os.imbue(std::locale::classic());
    return os;
}

void write_bounds(const fs::path& path, const LevelGainProfile& profile,
                  const std::vector<unsigned>& pilots, double tol)
{
    auto os = open_output(path);
    os << "N,p_up,p_low,ldp_approx,p_low_clamped\n";
    for (unsigned n : pilots)
    {
        auto b = bound_report(profile, n, tol);
        os << n << ',' << format_double(b.p_up) << ',' << format_double(b.p_low) << ','
           << format_double(b.ldp_approx) << ',' << format_double(b.p_low_clamped()) << '\n';
    }
}

void write_cdf(const fs::path& path, const std::vector<double>& samples)
{
    auto os = open_output(path);
    os << "quantile,se\n";
    EmpiricalCdf cdf(samples);
    for (int i = 0; i <= 1000; ++i)
    {
        double q = i / 1000.0;
        os << format_double(q) << ',' << format_double(cdf.quantile(q)) << '\n';
    }
}

json config_to_json(const KeyValues& keys)
{
    json j = json::object();
    for (const auto& [k, v] : keys)
        j[k] = v;
    return j;
}

} // namespace

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys{
        "name",       "strategies", "channel",     "k_factor_db", "mean_paths", "aod_lo_deg",
        "aod_hi_deg", "aoa_lo_deg", "aoa_hi_deg",  "snr_db",      "budgets",    "trials",
        "seed",       "n_tx",       "n_rx",        "tx_sizes",    "rx_sizes",   "synthesis",
        "level_pairs", "level_gain", "xi",         "pilots",      "tol",        "cdf_budgets",
    };
    return keys;
}

std::vector<unsigned> parse_uint_list(const std::string& text, const std::string& key)
{
    std::vector<unsigned> out;
    for (const auto& item : split(text, ','))
    {
        auto parts = split(item, ':');
        if (parts.size() == 1 && item.find(':') == std::string::npos)
        {
            out.push_back(parse_unsigned(item, key));
            continue;
        }
        if (parts.size() < 2 || parts.size() > 3)
            throw ConfigError("invalid range '" + item + "' for key '" + key + "'");
        unsigned lo = parse_unsigned(parts[0], key);
        unsigned hi = parse_unsigned(parts[1], key);
        unsigned step = parts.size() == 3 ? parse_unsigned(parts[2], key) : 1;
        if (step == 0 || hi < lo)
            throw ConfigError("invalid range '" + item + "' for key '" + key + "'");
        for (std::uint64_t v = lo; v <= hi; v += step)
            out.push_back(unsigned(v));
    }
    return out;
}

KeyValues default_keys(const std::string& subcommand, const std::string& figure_id)
{
    if (subcommand == "figure")
    {
        try
        {
            return keys_from_preset(figure_preset(figure_id));
        }
        catch (const std::invalid_argument& e)
        {
            throw ConfigError(e.what());
        }
    }
    if (subcommand == "bounds")
    {
        auto k = keys_from_preset(figure_preset("fig2"));
        k["name"] = "bounds";
        return k;
    }
    if (subcommand == "simulate" || subcommand == "sweep")
    {
        auto k = keys_from_preset(figure_preset("fig3"));
        k["name"] = subcommand;
        if (subcommand == "simulate")
            k["strategies"] = "exhaustive";
        return k;
    }
    throw ConfigError("unknown subcommand '" + subcommand + "'");
}

KeyValues read_config_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    KeyValues keys;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::exception& e)
        {
            throw ConfigError("malformed JSON in '" + path + "': " + e.what());
        }
        const json& cfg = j.contains("config") ? j["config"] : j;
        if (!cfg.is_object())
            throw ConfigError("config in '" + path + "' is not an object");
        for (auto it = cfg.begin(); it != cfg.end(); ++it)
        {
            std::string value;
            if (it->is_string())
                value = it->get<std::string>();
            else if (it->is_array())
            {
                std::vector<std::string> items;
                for (const auto& e : *it)
                    items.push_back(e.is_string() ? e.get<std::string>() : e.dump());
                value = join(items);
            }
            else if (it->is_number() || it->is_boolean())
                value = it->dump();
            else
                throw ConfigError("unsupported value for key '" + it.key() + "' in '" + path + "'");
            keys[canonical_key(it.key())] = value;
        }
        return keys;
    }

    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line))
    {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value, got '" +
                              trim(line) + "'");
        keys[canonical_key(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
    }
    return keys;
}

void apply_override(KeyValues& keys, const std::string& assignment)
{
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    keys[canonical_key(trim(assignment.substr(0, eq)))] = trim(assignment.substr(eq + 1));
}

KeyValues resolve_keys(const RunConfig& cfg)
{
    auto keys = default_keys(cfg.subcommand, cfg.figure_id);
    if (cfg.config_path)
        for (const auto& [k, v] : read_config_file(*cfg.config_path))
            keys[k] = v;
    for (const auto& o : cfg.overrides)
        apply_override(keys, o);
    if (cfg.seed)
        keys["seed"] = std::to_string(*cfg.seed);
    if (cfg.trials)
        keys["trials"] = std::to_string(*cfg.trials);
    return keys;
}

int run(const RunConfig& cfg, std::ostream& log)
{
    auto start = std::chrono::steady_clock::now();
    auto keys = resolve_keys(cfg);
    auto r = interpret(keys);
    unsigned threads = default_thread_count();

    fs::path out_dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir))
        throw ConfigError("cannot create output directory '" + cfg.out_dir + "'");

    json results = json::object();
    std::vector<std::string> artifacts;
    bool any_feasible = true;
    bool single_level = cfg.subcommand == "bounds" || (cfg.subcommand == "figure" && cfg.figure_id == "fig2");

    if (single_level)
    {
        auto profile = level_profile(r);
        std::string bounds_name = cfg.subcommand == "bounds" ? r.name : r.name + "_bounds";
        write_bounds(out_dir / (bounds_name + ".csv"), profile, r.pilots, r.tol);
        artifacts.push_back(bounds_name + ".csv");
        if (cfg.subcommand == "figure")
        {
            auto rows = simulate_level(profile, r.pilots, r.spec.trials, r.spec.base_seed, threads);
            auto os = open_output(out_dir / (r.name + ".csv"));
            write_estimates_csv(os, rows);
            artifacts.push_back(r.name + ".csv");
        }
    }
    else
    {
        if (r.strategies.empty())
            throw ConfigError("key 'strategies' is empty");
        if (r.spec.budgets.empty())
            throw ConfigError("key 'budgets' is empty");
        std::vector<SweepResult> sweeps;
        try
        {
            sweeps = run_sweeps(r.strategies, r.spec, r.setup, threads);
        }
        catch (const std::invalid_argument& e)
        {
            throw ConfigError(e.what());
        }
        any_feasible = false;
        for (const auto& sw : sweeps)
        {
            std::string base = sweeps.size() == 1 ? r.name : r.name + "_" + to_string(sw.strategy);
            auto os = open_output(out_dir / (base + ".csv"));
            write_estimates_csv(os, sw.rows);
            artifacts.push_back(base + ".csv");

            json per_budget = json::array();
            for (std::size_t b = 0; b < sw.rows.size(); ++b)
            {
                const auto& row = sw.rows[b];
                if (row.feasible)
                    any_feasible = true;
                else
                    log << "beamalign: " << to_string(sw.strategy) << " is infeasible at N_tot = "
                        << row.budget << "\n";
                per_budget.push_back({{"budget", row.budget},
                                      {"feasible", row.feasible},
                                      {"p_miss_global", format_double(row.p_miss_global)}});
                if (row.feasible && std::find(r.cdf_budgets.begin(), r.cdf_budgets.end(), row.budget) !=
                                        r.cdf_budgets.end())
                {
                    std::string cdf_name = base + "_cdf_" + std::to_string(row.budget) + ".csv";
                    write_cdf(out_dir / cdf_name, sw.se_samples[b]);
                    artifacts.push_back(cdf_name);
                }
            }
            results[to_string(sw.strategy)] = per_budget;
        }
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest{
        {"tool", "beamalign"},
        {"version", BEAMALIGN_VERSION},
        {"subcommand", cfg.subcommand},
        {"figure", cfg.figure_id},
        {"config", config_to_json(keys)},
        {"seed", r.spec.base_seed},
        {"trials", r.spec.trials},
        {"threads", threads},
        {"wall_time_s", wall},
        {"artifacts", artifacts},
        {"results", results},
    };
    auto os = open_output(out_dir / (r.name + ".manifest.json"));
    os << manifest.dump(2) << '\n';

    if (!any_feasible)
    {
        log << "beamalign: every budget is infeasible for the requested strategies\n";
        return exit_infeasible;
    }
    return exit_ok;
}

int main_entry(int argc, char** argv)
{
    CLI::App app{"Beam-alignment training analysis and Monte Carlo simulation", "beamalign"};
    app.set_version_flag("--version", std::string(BEAMALIGN_VERSION));
    RunConfig cfg;
    std::string config_path;
    std::uint64_t seed = 0;
    unsigned trials = 0;
    app.add_option("subcommand", cfg.subcommand, "bounds | simulate | sweep | figure")
        ->required()
        ->check(CLI::IsMember({"bounds", "simulate", "sweep", "figure"}));
    app.add_option("id", cfg.figure_id, "figure id (fig2 .. fig7) for the figure subcommand");
    auto* config_opt = app.add_option("--config", config_path, "key = value file or JSON manifest");
    app.add_option("--set", cfg.overrides, "key=value override, repeatable")->allow_extra_args(false);
    app.add_option("--out", cfg.out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "base seed");
    auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }
    if (*config_opt)
        cfg.config_path = config_path;
    if (*seed_opt)
        cfg.seed = seed;
    if (*trials_opt)
        cfg.trials = trials;
    if (cfg.subcommand == "figure" && cfg.figure_id.empty())
    {
        std::cerr << "beamalign: the figure subcommand needs an id (fig2 .. fig7)\n";
        return exit_config_error;
    }
    if (cfg.subcommand != "figure" && !cfg.figure_id.empty())
    {
        std::cerr << "beamalign: unexpected argument '" << cfg.figure_id << "'\n";
        return exit_config_error;
    }

    try
    {
        return run(cfg, std::cerr);
    }
    catch (const ConfigError& e)
    {
        std::cerr << "beamalign: " << e.what() << "\n";
        return exit_config_error;
    }
    catch (const std::exception& e)
    {
        std::cerr << "beamalign: " << e.what() << "\n";
        return exit_config_error;
    }
}

} // namespace beamalign::cli
