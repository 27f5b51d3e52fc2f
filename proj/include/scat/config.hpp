#pragma once

// Run configuration: a flat key = value text file (one potential per run),
// parsed into RunConfig. The canonicalized text is hashed (FNV-1a) so every
// output file can carry the config fingerprint that produced it.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scat/potential.hpp"

namespace scat {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // Potential
    std::string potential_kind = "gaussian";
    double g = -2.0;          // coupling (Gaussian/Yukawa strength, well depth V0)
    double a = 1.0;           // width / well radius
    double mu = 1.0;          // Yukawa screening
    Vec3 center = Vec3::Zero();
    std::string table_path;   // TabulatedRadial sample file

    // Energies
    std::vector<double> lambdas{1.0};

    // Grids
    int n_r = 24;
    int n_theta = 12;
    int n_phi = 24;
    double r_max = 0.0; // 0: use the potential support radius

    // Radial solver
    int l_max = 12;
    double radial_step = 0.0; // 0: automatic
    double tail_tol = 1e-6;

    // Bound-state scan
    double kappa_min = 0.05;
    double kappa_max = 2.5;
    int kappa_samples = 24;

    // Numerics
    double exceptional_threshold = 1e-8;

    // Verification thresholds (cmd_verify)
    double tol_ergodic = 1e-10;
    double tol_parseval = 1e-10;
    double tol_unitarity = 1e-3;
    double tol_correspondence = 1e-2;
    double tol_sigma_ratio = 1e-2;
    double tol_pw_consistency = 1e-8;

    std::uint64_t hash = 0;

    Potential make_potential() const
    {
        if (potential_kind == "gaussian")
            return Potential::gaussian(g, a);
        if (potential_kind == "yukawa")
            return Potential::yukawa(g, mu);
        if (potential_kind == "squarewell")
            return Potential::square_well(g, a);
        if (potential_kind == "gaussian_offcenter")
            return Potential::gaussian_off_center(g, a, center);
        if (potential_kind == "tabulated")
            return Potential::tabulated_from_file(table_path);
        if (potential_kind == "zero")
            return Potential::gaussian(0.0, a);
        throw ConfigError("unknown potential kind '" + potential_kind + "'");
    }

    double grid_r_max() const
    {
        return r_max > 0.0 ? r_max : make_potential().support_radius();
    }
};

inline std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline RunConfig parse_config_text(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos)
            line.erase(hash_pos);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    RunConfig cfg;
    auto get_double = [&](const std::string& key, double& out) {
        auto it = kv.find(key);
        if (it == kv.end())
            return;
        std::size_t pos = 0;
        out = std::stod(it->second, &pos);
        kv.erase(it);
    };
    auto get_int = [&](const std::string& key, int& out) {
        auto it = kv.find(key);
        if (it == kv.end())
            return;
        out = std::stoi(it->second);
        kv.erase(it);
    };
    auto get_string = [&](const std::string& key, std::string& out) {
        auto it = kv.find(key);
        if (it == kv.end())
            return;
        out = it->second;
        kv.erase(it);
    };

    get_string("potential", cfg.potential_kind);
    get_double("g", cfg.g);
    get_double("a", cfg.a);
    get_double("mu", cfg.mu);
    get_double("center_x", cfg.center.x());
    get_double("center_y", cfg.center.y());
    get_double("center_z", cfg.center.z());
    get_string("table", cfg.table_path);

    // lambda: explicit list ("lambda = 0.5 1 2") or range triple
    // ("lambda_range = start stop step"), one of the two.
    if (auto it = kv.find("lambda"); it != kv.end()) {
        cfg.lambdas.clear();
        std::istringstream ls(it->second);
        double v;
        while (ls >> v)
            cfg.lambdas.push_back(v);
        if (cfg.lambdas.empty())
            throw ConfigError("lambda: expected one or more values");
        kv.erase(it);
    }
    if (auto it = kv.find("lambda_range"); it != kv.end()) {
        std::istringstream ls(it->second);
        double start, stop, step;
        if (!(ls >> start >> stop >> step) || step <= 0.0)
            throw ConfigError("lambda_range: expected 'start stop step' with step > 0");
        cfg.lambdas.clear();
        for (double v = start; v <= stop + 1e-12 * step; v += step)
            cfg.lambdas.push_back(v);
        kv.erase(it);
    }

    get_int("n_r", cfg.n_r);
    get_int("n_theta", cfg.n_theta);
    get_int("n_phi", cfg.n_phi);
    get_double("r_max", cfg.r_max);
    get_int("l_max", cfg.l_max);
    get_double("radial_step", cfg.radial_step);
    get_double("tail_tol", cfg.tail_tol);
    get_double("kappa_min", cfg.kappa_min);
    get_double("kappa_max", cfg.kappa_max);
    get_int("kappa_samples", cfg.kappa_samples);
    get_double("exceptional_threshold", cfg.exceptional_threshold);
    get_double("tol_ergodic", cfg.tol_ergodic);
    get_double("tol_parseval", cfg.tol_parseval);
    get_double("tol_unitarity", cfg.tol_unitarity);
    get_double("tol_correspondence", cfg.tol_correspondence);
    get_double("tol_sigma_ratio", cfg.tol_sigma_ratio);
    get_double("tol_pw_consistency", cfg.tol_pw_consistency);

    if (!kv.empty())
        throw ConfigError("unknown config key '" + kv.begin()->first + "'");

    if (cfg.n_phi % 2 != 0)
        throw ConfigError("n_phi must be even (antipodal closure)");
    for (double l : cfg.lambdas)
        if (l <= 0.0)
            throw ConfigError("all lambda values must be positive");
    if (!(cfg.kappa_min > 0.0 && cfg.kappa_max > cfg.kappa_min))
        throw ConfigError("kappa range must satisfy 0 < kappa_min < kappa_max");

    cfg.hash = fnv1a(text);
    return cfg;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace scat
