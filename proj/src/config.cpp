#include "psdyn/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace psdyn {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw Error(ErrorKind::config, key + ": not a number: '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw Error(ErrorKind::config, key + ": not an integer: '" + v + "'");
    }
}

std::vector<double> parse_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const std::string& tok : split(v, ',')) out.push_back(parse_double(key, tok));
    return out;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (!(hbar > 0)) throw Error(ErrorKind::config, "hbar: must be positive");
    if (dim != 1) throw Error(ErrorKind::config, "dim: only 1 is supported by the scenario runner");
    if (times.empty()) throw Error(ErrorKind::config, "times: need at least one time");
    for (size_t k = 0; k < times.size(); ++k) {
        if (times[k] < 0) throw Error(ErrorKind::config, "times: must be non-negative");
        if (k > 0 && times[k] < times[k - 1]) throw Error(ErrorKind::config, "times: must be sorted");
    }
    grid.validate();
    if (methods.empty()) throw Error(ErrorKind::config, "methods: need at least one method");
    if (!(dt > 0)) throw Error(ErrorKind::config, "dt: must be positive");
    if (beam_rays < 2) throw Error(ErrorKind::config, "beam_rays: need at least 2");
    if (!(tube_radius > 0)) throw Error(ErrorKind::config, "tube_radius: must be positive");
    if (!(alpha_max > alpha_min)) throw Error(ErrorKind::config, "alpha_box: max must exceed min");
    if (potential == HamiltonianKind::polynomial && coefficients.empty())
        throw Error(ErrorKind::config, "coefficients: required for the polynomial potential");
    if (potential == HamiltonianKind::custom)
        throw Error(ErrorKind::config, "potential: custom models cannot be configured from file");
}

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::config, "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) throw Error(ErrorKind::config, key + ": empty value");

        if (key == "potential") {
            if (val == "free") cfg.potential = HamiltonianKind::free;
            else if (val == "linear_field") cfg.potential = HamiltonianKind::linear_field;
            else if (val == "harmonic") cfg.potential = HamiltonianKind::harmonic;
            else if (val == "polynomial") cfg.potential = HamiltonianKind::polynomial;
            else throw Error(ErrorKind::config, "potential: unknown kind '" + val + "'");
        } else if (key == "coefficients") {
            cfg.coefficients = parse_doubles(key, val);
        } else if (key == "hbar") {
            cfg.hbar = parse_double(key, val);
        } else if (key == "dim") {
            cfg.dim = parse_int(key, val);
        } else if (key == "times") {
            cfg.times = parse_doubles(key, val);
        } else if (key == "grid") {
            const auto v = parse_doubles(key, val);
            if (v.size() != 6) throw Error(ErrorKind::config, "grid: expected qmin,qmax,pmin,pmax,nq,np");
            cfg.grid = GridSpec{v[0], v[1], v[2], v[3], static_cast<int>(v[4]), static_cast<int>(v[5])};
        } else if (key == "methods") {
            cfg.methods.clear();
            for (const std::string& m : split(val, ',')) cfg.methods.push_back(method_from_name(m));
        } else if (key == "quad_box") {
            if (val != "auto") {
                const auto v = parse_doubles(key, val);
                if (v.size() != 4) throw Error(ErrorKind::config, "quad_box: expected qmin,qmax,pmin,pmax");
                cfg.quad.qmin = v[0];
                cfg.quad.qmax = v[1];
                cfg.quad.pmin = v[2];
                cfg.quad.pmax = v[3];
            }
        } else if (key == "quad_spacing") {
            if (val != "auto") cfg.quad.spacing = parse_double(key, val);
        } else if (key == "quad_prune") {
            cfg.quad.prune_rel = parse_double(key, val);
        } else if (key == "cache_dt") {
            cfg.quad.cache_dt = parse_double(key, val);
        } else if (key == "dt") {
            cfg.dt = parse_double(key, val);
        } else if (key == "beam_rays") {
            cfg.beam_rays = parse_int(key, val);
        } else if (key == "tube_radius") {
            cfg.tube_radius = parse_double(key, val);
        } else if (key == "alpha_box") {
            const auto v = parse_doubles(key, val);
            if (v.size() != 2) throw Error(ErrorKind::config, "alpha_box: expected min,max");
            cfg.alpha_min = v[0];
            cfg.alpha_max = v[1];
        } else if (key == "out_dir") {
            cfg.out_dir = val;
        } else if (key == "out_formats") {
            cfg.write_csv = false;
            cfg.write_bin = false;
            for (const std::string& f : split(val, ',')) {
                if (f == "csv") cfg.write_csv = true;
                else if (f == "bin") cfg.write_bin = true;
                else throw Error(ErrorKind::config, "out_formats: unknown format '" + f + "'");
            }
        } else if (key == "threads") {
            cfg.threads = parse_int(key, val);
        } else {
            throw Error(ErrorKind::config, "unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace psdyn
