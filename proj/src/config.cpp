// SPDX-License-Identifier: Apache-2.0
//
// falawn — fluid-antenna base-station simulator and transmit-power optimizer
// Copyright (C) 2026 the falawn authors
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

#include "falawn/config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace falawn {

std::vector<double> default_lqr_grid() {
    const double lo = 0.4, hi = 60.0;
    const int count = 6;
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    return grid;
}

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.sweep.lqr_cost_values = default_lqr_grid();
    return cfg;
}

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error([&issues] {
          std::string msg = "configuration errors:";
          for (const auto &issue : issues)
              msg += "\n  " + issue;
          return msg;
      }()),
      issues_(std::move(issues)) {}

namespace {

struct Parser {
    RunConfig cfg = default_run_config();
    std::vector<std::string> issues;
    std::string origin;
    int line_no = 0;

    void fail(const std::string &what) {
        std::ostringstream os;
        os << origin << ":" << line_no << ": " << what;
        issues.push_back(os.str());
    }

    bool parse_double(const std::string &key, const std::string &raw, double &out) {
        try {
            std::size_t used = 0;
            out = std::stod(raw, &used);
            if (used != raw.size())
                throw std::invalid_argument(raw);
            return true;
        } catch (const std::exception &) {
            fail("key '" + key + "': cannot parse '" + raw + "' as a number");
            return false;
        }
    }

    bool parse_int(const std::string &key, const std::string &raw, int &out) {
        double v = 0.0;
        if (!parse_double(key, raw, v))
            return false;
        if (v != std::floor(v)) {
            fail("key '" + key + "': expected an integer, got '" + raw + "'");
            return false;
        }
        out = static_cast<int>(v);
        return true;
    }

    bool parse_u64(const std::string &key, const std::string &raw,
                   std::uint64_t &out) {
        try {
            std::size_t used = 0;
            out = std::stoull(raw, &used);
            if (used != raw.size())
                throw std::invalid_argument(raw);
            return true;
        } catch (const std::exception &) {
            fail("key '" + key + "': cannot parse '" + raw +
                 "' as an unsigned integer");
            return false;
        }
    }

    bool parse_bool(const std::string &key, const std::string &raw, bool &out) {
        if (raw == "true" || raw == "1" || raw == "yes") {
            out = true;
            return true;
        }
        if (raw == "false" || raw == "0" || raw == "no") {
            out = false;
            return true;
        }
        fail("key '" + key + "': cannot parse '" + raw + "' as a boolean");
        return false;
    }

    bool parse_list(const std::string &key, const std::string &raw,
                    std::vector<double> &out) {
        std::vector<double> values;
        std::stringstream ss(raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto begin = item.find_first_not_of(" \t");
            const auto end = item.find_last_not_of(" \t");
            if (begin == std::string::npos) {
                fail("key '" + key + "': empty list entry");
                return false;
            }
            item = item.substr(begin, end - begin + 1);
            double v = 0.0;
            if (!parse_double(key, item, v))
                return false;
            values.push_back(v);
        }
        if (values.empty()) {
            fail("key '" + key + "': empty list");
            return false;
        }
        out = std::move(values);
        return true;
    }

    bool dispatch(const std::string &section, const std::string &key,
                  const std::string &value);
};

bool Parser::dispatch(const std::string &section, const std::string &key,
                      const std::string &value) {
    auto &sc = cfg.scenario;
    auto &ps = cfg.pso;
    auto &sw = cfg.sweep;
    auto &ou = cfg.output;

    if (section == "run") {
        if (key == "seed")
            return parse_u64(key, value, cfg.seed);
    } else if (section == "scenario") {
        if (key == "wavelength_m")
            return parse_double(key, value, sc.wavelength_m);
        if (key == "noise_dbm")
            return parse_double(key, value, sc.noise_dbm);
        if (key == "ref_gain_db")
            return parse_double(key, value, sc.ref_gain_db);
        if (key == "num_tx")
            return parse_int(key, value, sc.num_tx);
        if (key == "num_users")
            return parse_int(key, value, sc.num_users);
        if (key == "num_targets")
            return parse_int(key, value, sc.num_targets);
        if (key == "num_plants")
            return parse_int(key, value, sc.num_plants);
        if (key == "rate_bps_hz")
            return parse_double(key, value, sc.rate_bps_hz);
        if (key == "target_gain_dbm")
            return parse_double(key, value, sc.target_gain_dbm);
        if (key == "lqr_cost_max")
            return parse_double(key, value, sc.lqr_cost_max);
        if (key == "kappa")
            return parse_double(key, value, sc.kappa);
        if (key == "user_distance_min_m")
            return parse_double(key, value, sc.user_distance_min_m);
        if (key == "user_distance_max_m")
            return parse_double(key, value, sc.user_distance_max_m);
        if (key == "pathloss_exponent")
            return parse_double(key, value, sc.pathloss_exponent);
        if (key == "paths_per_link")
            return parse_int(key, value, sc.paths_per_link);
        if (key == "nlos_gain_variance")
            return parse_double(key, value, sc.nlos_gain_variance);
        if (key == "region_small_wl")
            return parse_double(key, value, sc.region_small_wl);
        if (key == "region_large_wl")
            return parse_double(key, value, sc.region_large_wl);
        if (key == "min_spacing_wl")
            return parse_double(key, value, sc.min_spacing_wl);
    } else if (section == "pso") {
        if (key == "swarm_size")
            return parse_int(key, value, ps.swarm_size);
        if (key == "iterations")
            return parse_int(key, value, ps.iterations);
        if (key == "inertia_start")
            return parse_double(key, value, ps.inertia_start);
        if (key == "inertia_end")
            return parse_double(key, value, ps.inertia_end);
        if (key == "cognitive")
            return parse_double(key, value, ps.cognitive);
        if (key == "social")
            return parse_double(key, value, ps.social);
        if (key == "velocity_cap")
            return parse_double(key, value, ps.velocity_cap);
        if (key == "penalty_weight")
            return parse_double(key, value, ps.penalty_weight);
        if (key == "infeasible_fitness")
            return parse_double(key, value, ps.infeasible_fitness);
        if (key == "stall_rounds")
            return parse_int(key, value, ps.stall_rounds);
    } else if (section == "sweep") {
        if (key == "num_seeds")
            return parse_int(key, value, sw.num_seeds);
        if (key == "rate_values")
            return parse_list(key, value, sw.rate_values);
        if (key == "beampattern_values_dbm")
            return parse_list(key, value, sw.beampattern_values_dbm);
        if (key == "lqr_cost_values")
            return parse_list(key, value, sw.lqr_cost_values);
    } else if (section == "output") {
        if (key == "directory") {
            ou.directory = value;
            return true;
        }
        if (key == "plot")
            return parse_bool(key, value, ou.plot);
        if (key == "timestamp")
            return parse_bool(key, value, ou.timestamp);
    } else {
        fail("unknown section [" + section + "]");
        return false;
    }
    fail("unknown key '" + key + "' in section [" + section + "]");
    return false;
}

std::string trimmed(const std::string &s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

RunConfig parse_config_text(const std::string &text, const std::string &origin) {
    Parser parser;
    parser.origin = origin;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    while (std::getline(in, raw)) {
        ++parser.line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trimmed(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                parser.fail("malformed section header '" + line + "'");
                continue;
            }
            section = trimmed(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            parser.fail("expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        if (section.empty()) {
            parser.fail("key '" + key + "' appears before any [section]");
            continue;
        }
        if (key.empty()) {
            parser.fail("empty key");
            continue;
        }
        parser.dispatch(section, key, value);
    }

    if (!parser.issues.empty())
        throw ConfigError(std::move(parser.issues));
    return parser.cfg;
}

RunConfig parse_config_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError({"cannot open config file: " + path});
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

std::vector<std::string> validate_run_config(const RunConfig &config) {
    std::vector<std::string> issues;
    for (const auto &v : config.scenario.validate())
        issues.push_back("scenario." + v);

    try {
        config.pso.check();
    } catch (const std::invalid_argument &e) {
        issues.push_back(std::string("pso: ") + e.what());
    }
    if (config.pso.swarm_size < 1)
        issues.push_back("pso.swarm_size: must be >= 1");

    const auto check_grid = [&](const char *name, const std::vector<double> &grid) {
        if (grid.empty()) {
            issues.push_back(std::string("sweep.") + name + ": must be non-empty");
            return;
        }
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1])) {
                issues.push_back(std::string("sweep.") + name +
                                 ": values must be strictly increasing");
                return;
            }
    };
    check_grid("rate_values", config.sweep.rate_values);
    check_grid("beampattern_values_dbm", config.sweep.beampattern_values_dbm);
    check_grid("lqr_cost_values", config.sweep.lqr_cost_values);
    if (!config.sweep.lqr_cost_values.empty() &&
        config.sweep.lqr_cost_values.front() <= 0.0)
        issues.push_back("sweep.lqr_cost_values: costs must be > 0");
    if (config.sweep.num_seeds < 1)
        issues.push_back("sweep.num_seeds: must be >= 1");
    if (config.output.directory.empty())
        issues.push_back("output.directory: must be non-empty");
    return issues;
}

namespace {

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string list_str(const std::vector<double> &values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            s += ",";
        s += num(values[i]);
    }
    return s;
}

} // namespace

void print_effective_config(const RunConfig &config, std::ostream &out) {
    const RunConfig defaults = default_run_config();

    struct Line {
        std::string section, key, value, default_value, base_tag;
    };
    std::vector<Line> lines;
    const auto add = [&](const std::string &section, const std::string &key,
                         const std::string &value, const std::string &def,
                         const std::string &tag) {
        lines.push_back({section, key, value, def, tag});
    };

    const char *kStudy = "[case-study]";
    const char *kChosen = "[chosen-default]";

    add("run", "seed", std::to_string(config.seed), std::to_string(defaults.seed),
        kChosen);

    const auto &s = config.scenario;
    const auto &ds = defaults.scenario;
    add("scenario", "wavelength_m", num(s.wavelength_m), num(ds.wavelength_m), kChosen);
    add("scenario", "noise_dbm", num(s.noise_dbm), num(ds.noise_dbm), kStudy);
    add("scenario", "ref_gain_db", num(s.ref_gain_db), num(ds.ref_gain_db), kStudy);
    add("scenario", "num_tx", num(s.num_tx), num(ds.num_tx), kStudy);
    add("scenario", "num_users", num(s.num_users), num(ds.num_users), kStudy);
    add("scenario", "num_targets", num(s.num_targets), num(ds.num_targets), kStudy);
    add("scenario", "num_plants", num(s.num_plants), num(ds.num_plants), kStudy);
    add("scenario", "rate_bps_hz", num(s.rate_bps_hz), num(ds.rate_bps_hz), kStudy);
    add("scenario", "target_gain_dbm", num(s.target_gain_dbm), num(ds.target_gain_dbm),
        kStudy);
    add("scenario", "lqr_cost_max", num(s.lqr_cost_max), num(ds.lqr_cost_max), kStudy);
    add("scenario", "kappa", num(s.kappa), num(ds.kappa), kChosen);
    add("scenario", "user_distance_min_m", num(s.user_distance_min_m),
        num(ds.user_distance_min_m), kChosen);
    add("scenario", "user_distance_max_m", num(s.user_distance_max_m),
        num(ds.user_distance_max_m), kChosen);
    add("scenario", "pathloss_exponent", num(s.pathloss_exponent),
        num(ds.pathloss_exponent), kChosen);
    add("scenario", "paths_per_link", num(s.paths_per_link), num(ds.paths_per_link),
        kChosen);
    add("scenario", "nlos_gain_variance", num(s.nlos_gain_variance),
        num(ds.nlos_gain_variance), kChosen);
    add("scenario", "region_small_wl", num(s.region_small_wl), num(ds.region_small_wl),
        kStudy);
    add("scenario", "region_large_wl", num(s.region_large_wl), num(ds.region_large_wl),
        kStudy);
    add("scenario", "min_spacing_wl", num(s.min_spacing_wl), num(ds.min_spacing_wl),
        kChosen);

    const auto &p = config.pso;
    const auto &dp = defaults.pso;
    add("pso", "swarm_size", num(p.swarm_size), num(dp.swarm_size), kChosen);
    add("pso", "iterations", num(p.iterations), num(dp.iterations), kChosen);
    add("pso", "inertia_start", num(p.inertia_start), num(dp.inertia_start), kChosen);
    add("pso", "inertia_end", num(p.inertia_end), num(dp.inertia_end), kChosen);
    add("pso", "cognitive", num(p.cognitive), num(dp.cognitive), kChosen);
    add("pso", "social", num(p.social), num(dp.social), kChosen);
    add("pso", "velocity_cap", num(p.velocity_cap), num(dp.velocity_cap), kChosen);
    add("pso", "penalty_weight", num(p.penalty_weight), num(dp.penalty_weight), kChosen);
    add("pso", "infeasible_fitness", num(p.infeasible_fitness),
        num(dp.infeasible_fitness), kChosen);
    add("pso", "stall_rounds", num(p.stall_rounds), num(dp.stall_rounds), kChosen);

    const auto &w = config.sweep;
    const auto &dw = defaults.sweep;
    add("sweep", "num_seeds", num(w.num_seeds), num(dw.num_seeds), kChosen);
    add("sweep", "rate_values", list_str(w.rate_values), list_str(dw.rate_values),
        kChosen);
    add("sweep", "beampattern_values_dbm", list_str(w.beampattern_values_dbm),
        list_str(dw.beampattern_values_dbm), kChosen);
    add("sweep", "lqr_cost_values", list_str(w.lqr_cost_values),
        list_str(dw.lqr_cost_values), kChosen);

    add("output", "directory", config.output.directory, defaults.output.directory,
        kChosen);
    add("output", "plot", config.output.plot ? "true" : "false",
        defaults.output.plot ? "true" : "false", kChosen);
    add("output", "timestamp", config.output.timestamp ? "true" : "false",
        defaults.output.timestamp ? "true" : "false", kChosen);

    std::string section;
    for (const auto &line : lines) {
        if (line.section != section) {
            section = line.section;
            out << "[" << section << "]\n";
        }
        const bool overridden = line.value != line.default_value;
        out << "  " << line.key << " = " << line.value << "  "
            << (overridden ? "[override]" : line.base_tag) << "\n";
    }
}

} // namespace falawn
