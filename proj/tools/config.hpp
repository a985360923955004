#pragma once

// Flat `key = value` scenario configs with `#` comments and CLI-flag
// overrides. Natural-unit scenarios take plain numbers only; SI scenarios
// require an explicit unit suffix on every physical input (`T_r = 1e-4 s`),
// which keeps the two regimes from silently mixing.

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mtcav/errors.hpp"
#include "mtcav/units.hpp"

namespace mtcav::cli {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::map<std::string, std::string> parse_flat_config(std::istream& in,
                                                            const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected `key = value`, got `" + line + "`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = value; // later lines override earlier ones
    }
    return kv;
}

inline std::map<std::string, std::string> load_config(const std::string& path,
                                                      const std::vector<std::string>& overrides) {
    std::map<std::string, std::string> kv;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        kv = parse_flat_config(in, path);
    }
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got `" + ov + "`");
        kv[trim(ov.substr(0, eq))] = trim(ov.substr(eq + 1));
    }
    return kv;
}

inline double parse_plain_number(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0')
        throw ConfigError("key `" + key + "`: expected a plain number (natural units, no unit "
                          "suffix), got `" + text + "`");
    return v;
}

// Unit table for SI scenarios. Energy-like units use the rounded elementary
// charge 1.6e-19 C so config numbers match the published arithmetic.
inline const std::map<std::string, Quantity>& unit_table() {
    static const std::map<std::string, Quantity> table = [] {
        std::map<std::string, Quantity> u;
        u["m"] = Quantity{1.0, si::dim_length};
        u["nm"] = Quantity{1e-9, si::dim_length};
        u["um"] = Quantity{1e-6, si::dim_length};
        u["A"] = Quantity{1e-10, si::dim_length};
        u["Angstrom"] = Quantity{1e-10, si::dim_length};
        u["s"] = Quantity{1.0, si::dim_time};
        u["ms"] = Quantity{1e-3, si::dim_time};
        u["us"] = Quantity{1e-6, si::dim_time};
        u["ns"] = Quantity{1e-9, si::dim_time};
        u["Hz"] = Quantity{1.0, si::dim_frequency};
        u["kHz"] = Quantity{1e3, si::dim_frequency};
        u["MHz"] = Quantity{1e6, si::dim_frequency};
        u["GHz"] = Quantity{1e9, si::dim_frequency};
        u["THz"] = Quantity{1e12, si::dim_frequency};
        u["1/s"] = Quantity{1.0, si::dim_frequency};
        u["rad/s"] = Quantity{1.0, si::dim_frequency};
        u["J"] = Quantity{1.0, si::dim_energy};
        u["eV"] = Quantity{1.6e-19, si::dim_energy};
        u["meV"] = Quantity{1.6e-22, si::dim_energy};
        u["C"] = Quantity{1.0, si::dim_charge};
        u["e"] = Quantity{1.6e-19, si::dim_charge};
        u["C*m"] = Quantity{1.0, si::dim_dipole};
        u["V/m"] = Quantity{1.0, si::dim_efield};
        u["m/s"] = Quantity{1.0, si::dim_speed};
        u["km/s"] = Quantity{1e3, si::dim_speed};
        u["m^3"] = Quantity{1.0, si::dim_volume};
        u["kg*m^2"] = Quantity{1.0, si::dim_moment_inertia};
        return u;
    }();
    return table;
}

inline Quantity parse_quantity(const std::string& key, const std::string& text,
                               const Dimension& expected) {
    const std::string t = trim(text);
    const auto space = t.find_first_of(" \t");
    if (space == std::string::npos)
        throw ConfigError("key `" + key + "`: requires an explicit unit suffix (e.g. `1e-4 s`), "
                          "got `" + text + "`");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str())
        throw ConfigError("key `" + key + "`: cannot parse number in `" + text + "`");
    const std::string unit = trim(t.substr(space));
    const auto it = unit_table().find(unit);
    if (it == unit_table().end())
        throw ConfigError("key `" + key + "`: unknown unit `" + unit + "`");
    const Quantity q = v * it->second;
    if (!(q.dim() == expected))
        throw ConfigError("key `" + key + "`: unit `" + unit + "` has dimensions [" +
                          q.dim().str() + "], expected [" + expected.str() + "]");
    return q;
}

// Tracks which keys a scenario consumed so leftovers are rejected by name.
class ConfigView {
public:
    explicit ConfigView(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    double natural(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        used_.insert(key);
        return parse_plain_number(key, kv_.at(key));
    }
    double natural_required(const std::string& key) {
        require(key);
        used_.insert(key);
        return parse_plain_number(key, kv_.at(key));
    }
    int integer(const std::string& key, int fallback) {
        const double v = natural(key, fallback);
        const int i = static_cast<int>(v);
        if (v != i) throw ConfigError("key `" + key + "`: expected an integer");
        return i;
    }
    bool flag(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        used_.insert(key);
        const std::string v = kv_.at(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("key `" + key + "`: expected true/false");
    }
    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        used_.insert(key);
        return kv_.at(key);
    }
    std::vector<double> number_list(const std::string& key) {
        require(key);
        used_.insert(key);
        std::vector<double> out;
        std::stringstream ss(kv_.at(key));
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_plain_number(key, item));
        if (out.empty()) throw ConfigError("key `" + key + "`: empty list");
        return out;
    }
    Quantity quantity(const std::string& key, const Dimension& expected, const Quantity& fallback) {
        if (!has(key)) return fallback;
        used_.insert(key);
        return parse_quantity(key, kv_.at(key), expected);
    }

    // Raw token access (for sweep passthrough).
    const std::map<std::string, std::string>& raw() const { return kv_; }
    void mark_used(const std::string& key) { used_.insert(key); }

    void done() const {
        std::string unknown;
        for (const auto& [k, v] : kv_)
            if (!used_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
        if (!unknown.empty())
            throw ConfigError("unknown config key(s): " + unknown);
    }

private:
    void require(const std::string& key) const {
        if (!has(key)) throw ConfigError("missing required config key `" + key + "`");
    }

    std::map<std::string, std::string> kv_;
    std::set<std::string> used_;
};

} // namespace mtcav::cli
