#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <iostream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>

#include "dft.hpp"
#include "error.hpp"

namespace smt {

/// Size of the circulant a Toeplitz matrix is embedded in for fast products.
enum class Embedding { tight, next_pow2 };

inline std::size_t embedding_size(Embedding e, std::size_t rows, std::size_t cols) {
    const std::size_t tight = rows + cols - 1;
    return e == Embedding::tight ? tight : next_pow2(tight);
}

inline const char* to_string(Embedding e) { return e == Embedding::tight ? "tight" : "pow2"; }

enum class Display { compact, full };

/// Numeric policy.  Constructors read it when called and bake the relevant
/// fields into the values they return.
struct Config {
    Embedding embedding = Embedding::next_pow2;
    bool toeprem = true;    // eager embedding eigenvalues for Toeplitz values
    bool intsolve = true;   // built-in Levinson solver for square Toeplitz systems
    bool intsolvels = true; // built-in least-squares solver for tall Toeplitz systems
    bool warnings = true;
    Display display = Display::full;

    friend bool operator==(const Config&, const Config&) = default;
};

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool parse_switch(const std::string& key, const std::string& value) {
    const std::string v = lower(value);
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw InvalidArgument("config: invalid value '" + value + "' for key '" + key + "' (expected on|off)");
}

struct ConfigStore {
    std::shared_mutex mutex;
    Config value;
};

inline ConfigStore& config_store() {
    static ConfigStore store;
    return store;
}

inline void warn(const Config& cfg, const std::string& msg) {
    if (cfg.warnings) std::clog << "smt warning: " << msg << '\n';
}

} // namespace detail

/// Returns `cfg` with one key changed.  Keys: embedding (tight|pow2),
/// toeprem, intsolve, intsolvels, warnings (on|off), display (compact|full).
inline Config with_setting(Config cfg, const std::string& key, const std::string& value) {
    const std::string k = detail::lower(detail::trim(key));
    const std::string v = detail::trim(value);
    if (k == "embedding") {
        const std::string lv = detail::lower(v);
        if (lv == "tight")
            cfg.embedding = Embedding::tight;
        else if (lv == "pow2" || lv == "nextpow2" || lv == "next_pow2")
            cfg.embedding = Embedding::next_pow2;
        else
            throw InvalidArgument("config: invalid embedding '" + v + "' (expected tight|pow2)");
    } else if (k == "toeprem") {
        cfg.toeprem = detail::parse_switch(k, v);
    } else if (k == "intsolve") {
        cfg.intsolve = detail::parse_switch(k, v);
    } else if (k == "intsolvels") {
        cfg.intsolvels = detail::parse_switch(k, v);
    } else if (k == "warnings") {
        cfg.warnings = detail::parse_switch(k, v);
    } else if (k == "display") {
        const std::string lv = detail::lower(v);
        if (lv == "compact" || lv == "off")
            cfg.display = Display::compact;
        else if (lv == "full" || lv == "on")
            cfg.display = Display::full;
        else
            throw InvalidArgument("config: invalid display '" + v + "' (expected compact|full)");
    } else {
        throw InvalidArgument("config: unknown key '" + key + "'");
    }
    return cfg;
}

/// Snapshot of the process-wide configuration.
inline Config config_get() {
    auto& s = detail::config_store();
    std::shared_lock lock(s.mutex);
    return s.value;
}

/// Updates the process-wide configuration and returns the new snapshot.
/// Values already constructed are not affected.
inline Config config_set(const std::string& key, const std::string& value) {
    auto& s = detail::config_store();
    std::unique_lock lock(s.mutex);
    s.value = with_setting(s.value, key, value);
    return s.value;
}

inline Config config_replace(const Config& cfg) {
    auto& s = detail::config_store();
    std::unique_lock lock(s.mutex);
    s.value = cfg;
    return s.value;
}

inline Config config_reset() { return config_replace(Config{}); }

/// Applies `key=value` lines.  Blank lines and lines starting with '#' are skipped.
inline Config parse_config(std::istream& in, Config cfg = {}) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
        try {
            cfg = with_setting(cfg, t.substr(0, eq), t.substr(eq + 1));
        } catch (const InvalidArgument& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return cfg;
}

inline Config load_config_file(const std::string& path, Config cfg = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    return parse_config(in, cfg);
}

inline std::map<std::string, std::string> describe(const Config& cfg) {
    auto sw = [](bool b) { return std::string(b ? "on" : "off"); };
    return {
        {"embedding", to_string(cfg.embedding)},
        {"toeprem", sw(cfg.toeprem)},
        {"intsolve", sw(cfg.intsolve)},
        {"intsolvels", sw(cfg.intsolvels)},
        {"warnings", sw(cfg.warnings)},
        {"display", cfg.display == Display::full ? "full" : "compact"},
    };
}

} // namespace smt
