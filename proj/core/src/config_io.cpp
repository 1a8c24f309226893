#include "gfnoma/config_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gfnoma/errors.hpp"

namespace gfnoma {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw ConfigError("bad integer value for " + key + ": '" + value + "'");
    return static_cast<int>(v);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_kv_text(
    const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              " is not key=value: '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) +
                              " has an empty key or value");
        out.emplace_back(key, value);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> read_kv_file(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kv_text(buf.str());
}

void apply_config_entry(NetworkConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "n_devices") cfg.n_devices = parse_int(key, value);
    else if (key == "preamble_len") cfg.preamble_len = parse_int(key, value);
    else if (key == "data_symbols") cfg.data_symbols = parse_int(key, value);
    else if (key == "d0_m") cfg.d0_m = parse_double(key, value);
    else if (key == "d1_m") cfg.d1_m = parse_double(key, value);
    else if (key == "alpha") cfg.alpha = parse_double(key, value);
    else if (key == "noise_dbm") cfg.noise_w = dbm_to_watts(parse_double(key, value));
    else if (key == "tx_power_dbm") cfg.tx_power_w = dbm_to_watts(parse_double(key, value));
    else if (key == "p_act") cfg.p_act = parse_double(key, value);
    else if (key == "c1") cfg.c1 = parse_double(key, value);
    else if (key == "c2") cfg.c2 = parse_double(key, value);
    else if (key == "c3") cfg.c3 = parse_double(key, value);
    else if (key == "p_static_mw") cfg.p_static_w = 1e-3 * parse_double(key, value);
    else if (key == "p_dynamic_mw") cfg.p_dynamic_w = 1e-3 * parse_double(key, value);
    else if (key == "antenna_eff") cfg.antenna_eff = parse_double(key, value);
    else if (key == "m_subbands") cfg.m_subbands = parse_int(key, value);
    else if (key == "eps_tail") cfg.eps_tail = parse_double(key, value);
    else throw ConfigError("unknown config key: " + key);
}

NetworkConfig parse_config_text(const std::string& text) {
    NetworkConfig cfg;
    for (const auto& [key, value] : parse_kv_text(text))
        apply_config_entry(cfg, key, value);
    cfg.validate();
    return cfg;
}

NetworkConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string config_to_text(const NetworkConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "n_devices = " << cfg.n_devices << "\n"
        << "preamble_len = " << cfg.preamble_len << "\n"
        << "data_symbols = " << cfg.data_symbols << "\n"
        << "d0_m = " << cfg.d0_m << "\n"
        << "d1_m = " << cfg.d1_m << "\n"
        << "alpha = " << cfg.alpha << "\n"
        << "noise_dbm = " << watts_to_dbm(cfg.noise_w) << "\n"
        << "tx_power_dbm = " << watts_to_dbm(cfg.tx_power_w) << "\n"
        << "p_act = " << cfg.p_act << "\n"
        << "c1 = " << cfg.c1 << "\n"
        << "c2 = " << cfg.c2 << "\n"
        << "c3 = " << cfg.c3 << "\n"
        << "p_static_mw = " << cfg.p_static_w * 1e3 << "\n"
        << "p_dynamic_mw = " << cfg.p_dynamic_w * 1e3 << "\n"
        << "antenna_eff = " << cfg.antenna_eff << "\n"
        << "m_subbands = " << cfg.m_subbands << "\n"
        << "eps_tail = " << cfg.eps_tail << "\n";
    return out.str();
}

}  // namespace gfnoma
