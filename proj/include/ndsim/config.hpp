#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndsim/csv.hpp"
#include "ndsim/scenario.hpp"
#include "ndsim/simulator.hpp"

namespace ndsim {

struct SweepConfig {
    bool active = false;
    std::string parameter;  // transmit_prob | channel_count | node_count | algorithm
    std::vector<std::string> values;
};

struct OutputConfig {
    std::string dir = "out";
    std::string format = "csv";  // csv | json
};

struct HarnessConfig {
    ScenarioParams scenario;
    SimConfig sim;
    SweepConfig sweep;
    OutputConfig output;
};

// all configuration problems for one load, reported together
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
    const std::vector<std::string>& issues() const { return issues_; }

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "configuration errors:";
        for (const auto& e : v) {
            s += "\n  - ";
            s += e;
        }
        return s;
    }
    std::vector<std::string> issues_;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

template <typename T>
inline bool parse_int_like(const std::string& s, T& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc{} && ptr == t.data() + t.size();
}

inline bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    try {
        std::size_t used = 0;
        out = std::stod(t, &used);
        return used == t.size();
    } catch (...) {
        return false;
    }
}

inline bool parse_bool(const std::string& s, bool& out) {
    const std::string t = trim(s);
    if (t == "true" || t == "1" || t == "yes" || t == "on") {
        out = true;
        return true;
    }
    if (t == "false" || t == "0" || t == "no" || t == "off") {
        out = false;
        return true;
    }
    return false;
}

inline bool parse_algorithm(const std::string& s, Algorithm& out) {
    const std::string t = trim(s);
    if (t == "cra") out = Algorithm::Cra;
    else if (t == "sba") out = Algorithm::Sba;
    else if (t == "gossip") out = Algorithm::Gossip;
    else if (t == "gsimnd") out = Algorithm::GsimNd;
    else return false;
    return true;
}

inline bool parse_completeness(const std::string& s, CompletenessCriterion& out) {
    const std::string t = trim(s);
    if (t == "strict") out = CompletenessCriterion::NeighborhoodCovered;
    else if (t == "mild") out = CompletenessCriterion::NodeInSensingRange;
    else return false;
    return true;
}

inline std::string canonical_sweep_parameter(const std::string& raw) {
    if (raw == "p_t" || raw == "transmit_prob") return "transmit_prob";
    if (raw == "k" || raw == "channel_count") return "channel_count";
    if (raw == "M" || raw == "node_count") return "node_count";
    if (raw == "algorithm") return "algorithm";
    return "";
}

}  // namespace detail

// flat `section.key = value` lines; '#' begins a comment; unknown keys are
// errors, and every problem in the text is reported in one exception
inline std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::vector<std::string> issues;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) {
            issues.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (kv.count(key)) {
            issues.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            continue;
        }
        kv[key] = value;
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return kv;
}

inline void apply_key_values(HarnessConfig& cfg, const std::map<std::string, std::string>& kv) {
    std::vector<std::string> issues;
    auto bad = [&](const std::string& key, const std::string& value, const char* want) {
        issues.push_back("key '" + key + "': cannot parse '" + value + "' as " + want);
    };

    for (const auto& [key, value] : kv) {
        if (key == "scenario.road_length") {
            if (!detail::parse_double(value, cfg.scenario.road_length)) bad(key, value, "number");
        } else if (key == "scenario.road_width") {
            if (!detail::parse_double(value, cfg.scenario.road_width)) bad(key, value, "number");
        } else if (key == "scenario.comm_radius") {
            if (!detail::parse_double(value, cfg.scenario.comm_radius)) bad(key, value, "number");
        } else if (key == "scenario.rsu_spacing") {
            if (!detail::parse_double(value, cfg.scenario.rsu_spacing)) bad(key, value, "number");
        } else if (key == "scenario.node_count") {
            if (!detail::parse_int_like(value, cfg.scenario.node_count)) bad(key, value, "integer");
        } else if (key == "scenario.beam_count") {
            if (!detail::parse_int_like(value, cfg.scenario.beam_count)) bad(key, value, "integer");
            else if (cfg.scenario.beam_count > 0)
                cfg.scenario.beam_width = 2.0 * std::numbers::pi / cfg.scenario.beam_count;
        } else if (key == "scenario.seed") {
            if (!detail::parse_int_like(value, cfg.scenario.seed)) bad(key, value, "unsigned integer");
        } else if (key == "sim.algorithm") {
            if (!detail::parse_algorithm(value, cfg.sim.algorithm))
                bad(key, value, "one of cra|sba|gossip|gsimnd");
        } else if (key == "sim.channel_count" || key == "sim.k") {
            if (!detail::parse_int_like(value, cfg.sim.channel_count)) bad(key, value, "integer");
        } else if (key == "sim.transmit_prob" || key == "sim.p_t") {
            if (!detail::parse_double(value, cfg.sim.transmit_prob)) bad(key, value, "number");
        } else if (key == "sim.max_slots") {
            if (!detail::parse_int_like(value, cfg.sim.max_slots)) bad(key, value, "integer");
        } else if (key == "sim.warmup_slots") {
            if (!detail::parse_int_like(value, cfg.sim.warmup_slots)) bad(key, value, "integer");
        } else if (key == "sim.trials") {
            if (!detail::parse_int_like(value, cfg.sim.trials)) bad(key, value, "integer");
        } else if (key == "sim.seed") {
            if (!detail::parse_int_like(value, cfg.sim.seed)) bad(key, value, "unsigned integer");
        } else if (key == "sim.completeness") {
            if (!detail::parse_completeness(value, cfg.sim.completeness))
                bad(key, value, "one of strict|mild");
        } else if (key == "sim.restrict_partial_sensing") {
            if (!detail::parse_bool(value, cfg.sim.restrict_partial_sensing)) bad(key, value, "bool");
        } else if (key == "sim.record_slot_series") {
            if (!detail::parse_bool(value, cfg.sim.record_slot_series)) bad(key, value, "bool");
        } else if (key == "sim.fraction_targets") {
            std::vector<double> targets;
            bool ok = true;
            for (const auto& item : detail::split_list(value)) {
                double d = 0.0;
                if (!detail::parse_double(item, d)) ok = false;
                targets.push_back(d);
            }
            if (!ok || targets.empty()) bad(key, value, "comma list of numbers");
            else cfg.sim.fraction_targets = std::move(targets);
        } else if (key == "sweep.parameter") {
            const std::string canon = detail::canonical_sweep_parameter(detail::trim(value));
            if (canon.empty()) bad(key, value, "one of p_t|k|M|algorithm");
            else {
                cfg.sweep.parameter = canon;
                cfg.sweep.active = true;
            }
        } else if (key == "sweep.values") {
            cfg.sweep.values = detail::split_list(value);
            cfg.sweep.active = true;
        } else if (key == "output.dir") {
            cfg.output.dir = detail::trim(value);
        } else if (key == "output.format") {
            const std::string v = detail::trim(value);
            if (v != "csv" && v != "json") bad(key, value, "one of csv|json");
            else cfg.output.format = v;
        } else {
            issues.push_back("unknown key '" + key + "'");
        }
    }

    // semantic validation, still collected exhaustively
    try {
        cfg.scenario.validate();
    } catch (const std::exception& e) {
        issues.push_back(std::string("scenario: ") + e.what());
    }
    try {
        cfg.sim.validate();
    } catch (const std::exception& e) {
        issues.push_back(std::string("sim: ") + e.what());
    }
    if (cfg.sweep.active) {
        if (cfg.sweep.parameter.empty())
            issues.push_back("sweep.values given without sweep.parameter");
        if (cfg.sweep.values.empty())
            issues.push_back("sweep over '" + cfg.sweep.parameter + "' has an empty value list");
        for (const auto& v : cfg.sweep.values) {
            if (cfg.sweep.parameter == "transmit_prob") {
                double d;
                if (!detail::parse_double(v, d) || !(d > 0.0 && d < 1.0))
                    issues.push_back("sweep value '" + v + "' is not a transmit probability in (0,1)");
            } else if (cfg.sweep.parameter == "channel_count") {
                int i;
                if (!detail::parse_int_like(v, i) || i < 1)
                    issues.push_back("sweep value '" + v + "' is not a channel count >= 1");
            } else if (cfg.sweep.parameter == "node_count") {
                int i;
                if (!detail::parse_int_like(v, i) || i < 1)
                    issues.push_back("sweep value '" + v + "' is not a node count >= 1");
            } else if (cfg.sweep.parameter == "algorithm") {
                Algorithm a;
                if (!detail::parse_algorithm(v, a))
                    issues.push_back("sweep value '" + v + "' is not an algorithm name");
            }
        }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

inline HarnessConfig parse_config_text(const std::string& text) {
    HarnessConfig cfg;
    apply_key_values(cfg, parse_key_values(text));
    return cfg;
}

// `key=value` override strings (e.g. from --set flags) applied on top
inline void apply_overrides(HarnessConfig& cfg, const std::vector<std::string>& overrides) {
    std::string text;
    for (const auto& o : overrides) {
        text += o;
        text += '\n';
    }
    apply_key_values(cfg, parse_key_values(text));
}

// experiment identity only: output destination and format are excluded so the
// same run written elsewhere hashes alike
inline std::string canonical_text(const HarnessConfig& cfg) {
    std::ostringstream os;
    os << "scenario.beam_count = " << cfg.scenario.beam_count << "\n";
    os << "scenario.comm_radius = " << format_number(cfg.scenario.comm_radius) << "\n";
    os << "scenario.node_count = " << cfg.scenario.node_count << "\n";
    os << "scenario.road_length = " << format_number(cfg.scenario.road_length) << "\n";
    os << "scenario.road_width = " << format_number(cfg.scenario.road_width) << "\n";
    os << "scenario.rsu_spacing = " << format_number(cfg.scenario.rsu_spacing) << "\n";
    os << "scenario.seed = " << cfg.scenario.seed << "\n";
    os << "sim.algorithm = " << algorithm_name(cfg.sim.algorithm) << "\n";
    os << "sim.channel_count = " << cfg.sim.channel_count << "\n";
    os << "sim.completeness = "
       << (cfg.sim.completeness == CompletenessCriterion::NeighborhoodCovered ? "strict" : "mild")
       << "\n";
    os << "sim.fraction_targets = ";
    for (std::size_t i = 0; i < cfg.sim.fraction_targets.size(); ++i)
        os << (i ? "," : "") << format_number(cfg.sim.fraction_targets[i]);
    os << "\n";
    os << "sim.max_slots = " << cfg.sim.max_slots << "\n";
    os << "sim.record_slot_series = " << (cfg.sim.record_slot_series ? "true" : "false") << "\n";
    os << "sim.restrict_partial_sensing = " << (cfg.sim.restrict_partial_sensing ? "true" : "false")
       << "\n";
    os << "sim.seed = " << cfg.sim.seed << "\n";
    os << "sim.transmit_prob = " << format_number(cfg.sim.transmit_prob) << "\n";
    os << "sim.trials = " << cfg.sim.trials << "\n";
    os << "sim.warmup_slots = " << cfg.sim.warmup_slots << "\n";
    if (cfg.sweep.active) {
        os << "sweep.parameter = " << cfg.sweep.parameter << "\n";
        os << "sweep.values = ";
        for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i)
            os << (i ? "," : "") << cfg.sweep.values[i];
        os << "\n";
    }
    return os.str();
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string config_hash_hex(const HarnessConfig& cfg) {
    std::uint64_t h = fnv1a64(canonical_text(cfg));
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

}  // namespace ndsim
