#include "stagflow/config.hpp"

#include <fstream>
#include <set>

namespace stagflow {
namespace harness {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
    }
}

} // namespace

ConvectionScheme parse_scheme(const std::string& s) {
    if (s == "upwind") return ConvectionScheme::upwind;
    if (s == "centered") return ConvectionScheme::centered;
    if (s == "muscl") return ConvectionScheme::muscl;
    throw ConfigError("unknown scheme '" + s + "' (upwind|centered|muscl)");
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    ConfigMap out;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section at line " +
                                  std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || section.empty())
            throw ConfigError("config: expected key = value at line " +
                              std::to_string(lineno));
        out[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

Case load_case(const std::optional<std::string>& config_path,
               const std::optional<std::string>& preset, const Overrides& cli) {
    Overrides eff = cli;
    std::optional<std::string> preset_name = preset;
    std::optional<std::string> mass_type, energy_type, time_stepping;
    std::optional<bool> correction;
    std::optional<double> mu, steady_tol;

    if (config_path) {
        static const std::map<std::string, std::set<std::string>> known = {
            {"case", {"preset", "final_time", "dt", "snapshots", "nx", "ny", "steady_tol"}},
            {"scheme",
             {"type", "xi_plus", "xi_minus", "nu", "mass_type", "energy_type", "correction"}},
            {"model", {"mu", "time_stepping"}},
        };
        const ConfigMap cfg = parse_config_file(*config_path);
        for (const auto& [section, entries] : cfg) {
            const auto ks = known.find(section);
            if (ks == known.end())
                throw ConfigError("config: unknown section [" + section + "]");
            for (const auto& [key, value] : entries)
                if (!ks->second.count(key))
                    throw ConfigError("config: unknown key '" + key + "' in [" + section +
                                      "]");
        }
        auto get = [&](const char* sec, const char* key) -> std::optional<std::string> {
            const auto s = cfg.find(sec);
            if (s == cfg.end()) return std::nullopt;
            const auto k = s->second.find(key);
            if (k == s->second.end()) return std::nullopt;
            return k->second;
        };
        if (auto v = get("case", "preset"); v && !preset_name) preset_name = *v;
        if (auto v = get("case", "final_time"); v && !eff.final_time)
            eff.final_time = to_double("final_time", *v);
        if (auto v = get("case", "dt"); v && !eff.dt) eff.dt = to_double("dt", *v);
        if (auto v = get("case", "snapshots"); v && !eff.snapshots)
            eff.snapshots = to_int("snapshots", *v);
        if (auto v = get("case", "nx"); v && !eff.nx) eff.nx = to_int("nx", *v);
        if (auto v = get("case", "ny"); v && !eff.ny) eff.ny = to_int("ny", *v);
        if (auto v = get("case", "steady_tol")) steady_tol = to_double("steady_tol", *v);
        if (auto v = get("scheme", "type"); v && !eff.scheme) eff.scheme = *v;
        if (auto v = get("scheme", "xi_plus"); v && !eff.xi_plus)
            eff.xi_plus = to_double("xi_plus", *v);
        if (auto v = get("scheme", "xi_minus"); v && !eff.xi_minus)
            eff.xi_minus = to_double("xi_minus", *v);
        if (auto v = get("scheme", "nu"); v && !eff.nu) eff.nu = to_double("nu", *v);
        if (auto v = get("scheme", "mass_type")) mass_type = *v;
        if (auto v = get("scheme", "energy_type")) energy_type = *v;
        if (auto v = get("scheme", "correction")) {
            if (*v != "on" && *v != "off")
                throw ConfigError("config: correction expects on|off");
            correction = *v == "on";
        }
        if (auto v = get("model", "mu")) mu = to_double("mu", *v);
        if (auto v = get("model", "time_stepping")) time_stepping = *v;
    }
    if (!preset_name)
        throw ConfigError("no preset selected (use --preset or [case] preset = ...)");
    Case c = make_preset(*preset_name);

    if (eff.nx) {
        if (c.rescale) c.rescale(c, *eff.nx);
        else c.cells[0] = *eff.nx;
    }
    if (eff.ny) c.cells[1] = *eff.ny;
    if (eff.scheme) c.model.scheme.scheme = parse_scheme(*eff.scheme);
    if (eff.xi_plus) c.model.scheme.xi_plus = *eff.xi_plus;
    if (eff.xi_minus) c.model.scheme.xi_minus = *eff.xi_minus;
    if (eff.nu) c.model.scheme.nu = *eff.nu;
    if (eff.dt) c.model.scheme.dt = *eff.dt;
    if (eff.final_time) c.final_time = *eff.final_time;
    if (eff.snapshots) c.snapshots = *eff.snapshots;
    if (steady_tol) c.steady_tol = *steady_tol;
    if (mass_type) c.model.mass_scheme = parse_scheme(*mass_type);
    if (energy_type) c.model.energy_scheme = parse_scheme(*energy_type);
    if (correction) c.model.euler_correction = *correction;
    if (mu) c.model.mu = *mu;
    if (time_stepping) {
        if (*time_stepping == "forward_euler") c.model.stepping = TimeStepping::forward_euler;
        else if (*time_stepping == "heun") c.model.stepping = TimeStepping::heun;
        else throw ConfigError("config: time_stepping expects forward_euler|heun");
    }
    return c;
}

} // namespace harness
} // namespace stagflow
