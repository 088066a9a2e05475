#include "config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace qstcli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": expected number, got '" + v + "'");
    }
    if (pos != v.size() || !std::isfinite(x))
        throw ConfigError("line " + std::to_string(line) + ": expected number, got '" + v + "'");
    return x;
}

int parse_int(const std::string& v, int line) {
    const double x = parse_double(v, line);
    const int k = static_cast<int>(x);
    if (k != x)
        throw ConfigError("line " + std::to_string(line) + ": expected integer, got '" + v + "'");
    return k;
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, line));
    }
    if (out.empty())
        throw ConfigError("line " + std::to_string(line) + ": empty list");
    return out;
}

const std::vector<std::string> kModels = {"qbm", "qubit"};
const std::vector<std::string> kProtocols = {"linear", "exponential", "optimal", "limit",
                                             "static"};
const std::vector<std::string> kLimitCases = {"ht-under", "ht-over", "lt-under", "lt-over"};
const std::vector<std::string> kScenarios = {"validate", "evolve", "fcs", "excess-work",
                                             "geodesic"};

void check_enum(const std::string& v, const std::vector<std::string>& allowed,
                const std::string& key, int line) {
    for (const auto& a : allowed)
        if (v == a) return;
    throw ConfigError("line " + std::to_string(line) + ": invalid value '" + v +
                      "' for key '" + key + "'");
}

}  // namespace

void RunConfig::validate_numbers() const {
    auto pos = [](double x, const char* name) {
        if (!(x > 0) || !std::isfinite(x))
            throw ConfigError(std::string("config: ") + name + " must be positive and finite");
    };
    pos(mass, "mass");
    pos(kappa, "kappa");
    pos(beta, "beta");
    pos(omega0, "omega0");
    pos(omega1, "omega1");
    pos(qubit_omega, "qubit_omega");
    pos(qubit_gamma, "qubit_gamma");
    pos(tau, "tau");
    pos(rtol, "rtol");
    pos(tau_min, "tau_min");
    pos(tau_max, "tau_max");
    if (dim < 2 || dim > 4096) throw ConfigError("config: dim out of range [2, 4096]");
    if (n_samples < 2) throw ConfigError("config: n_samples must be >= 2");
    if (u_points < 2) throw ConfigError("config: u_points must be >= 2");
    if (tau_points < 1) throw ConfigError("config: tau_points must be >= 1");
    if (workers < 1 || workers > 256) throw ConfigError("config: workers out of range");
    if (!(u_min < u_max)) throw ConfigError("config: need u_min < u_max");
    for (double b : bath_betas) pos(b, "bath_betas entry");
    for (double t : tau_list) pos(t, "tau_list entry");
    for (double b : beta_list) pos(b, "beta_list entry");
    for (int d : dim_list)
        if (d < 2 || d > 4096) throw ConfigError("config: dim_list entry out of range");
    int axes = 0;
    axes += !tau_list.empty();
    axes += !beta_list.empty();
    axes += !dim_list.empty();
    if (axes > 3) throw ConfigError("config: at most 3 sweep axes");
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    RunConfig c;
    using Setter = std::function<void(RunConfig&, const std::string&, int)>;
    const std::map<std::string, Setter> schema = {
        {"model", [](RunConfig& c, const std::string& v, int l) {
             check_enum(v, kModels, "model", l); c.model = v; }},
        {"mass", [](RunConfig& c, const std::string& v, int l) { c.mass = parse_double(v, l); }},
        {"kappa", [](RunConfig& c, const std::string& v, int l) { c.kappa = parse_double(v, l); }},
        {"beta", [](RunConfig& c, const std::string& v, int l) { c.beta = parse_double(v, l); }},
        {"omega0", [](RunConfig& c, const std::string& v, int l) { c.omega0 = parse_double(v, l); }},
        {"omega1", [](RunConfig& c, const std::string& v, int l) { c.omega1 = parse_double(v, l); }},
        {"qubit_omega", [](RunConfig& c, const std::string& v, int l) { c.qubit_omega = parse_double(v, l); }},
        {"qubit_gamma", [](RunConfig& c, const std::string& v, int l) { c.qubit_gamma = parse_double(v, l); }},
        {"bath_betas", [](RunConfig& c, const std::string& v, int l) { c.bath_betas = parse_list(v, l); }},
        {"protocol", [](RunConfig& c, const std::string& v, int l) {
             check_enum(v, kProtocols, "protocol", l); c.protocol = v; }},
        {"limit_case", [](RunConfig& c, const std::string& v, int l) {
             check_enum(v, kLimitCases, "limit_case", l); c.limit_case = v; }},
        {"tau", [](RunConfig& c, const std::string& v, int l) { c.tau = parse_double(v, l); }},
        {"dim", [](RunConfig& c, const std::string& v, int l) { c.dim = parse_int(v, l); }},
        {"rtol", [](RunConfig& c, const std::string& v, int l) { c.rtol = parse_double(v, l); }},
        {"n_samples", [](RunConfig& c, const std::string& v, int l) { c.n_samples = parse_int(v, l); }},
        {"u_min", [](RunConfig& c, const std::string& v, int l) { c.u_min = parse_double(v, l); }},
        {"u_max", [](RunConfig& c, const std::string& v, int l) { c.u_max = parse_double(v, l); }},
        {"u_points", [](RunConfig& c, const std::string& v, int l) { c.u_points = parse_int(v, l); }},
        {"tau_min", [](RunConfig& c, const std::string& v, int l) { c.tau_min = parse_double(v, l); }},
        {"tau_max", [](RunConfig& c, const std::string& v, int l) { c.tau_max = parse_double(v, l); }},
        {"tau_points", [](RunConfig& c, const std::string& v, int l) { c.tau_points = parse_int(v, l); }},
        {"tau_list", [](RunConfig& c, const std::string& v, int l) { c.tau_list = parse_list(v, l); }},
        {"beta_list", [](RunConfig& c, const std::string& v, int l) { c.beta_list = parse_list(v, l); }},
        {"dim_list", [](RunConfig& c, const std::string& v, int l) {
             c.dim_list.clear();
             for (double d : parse_list(v, l)) {
                 if (d != static_cast<int>(d))
                     throw ConfigError("line " + std::to_string(l) + ": dim_list needs integers");
                 c.dim_list.push_back(static_cast<int>(d));
             } }},
        {"scenario", [](RunConfig& c, const std::string& v, int l) {
             check_enum(v, kScenarios, "scenario", l); c.scenario = v; }},
        {"workers", [](RunConfig& c, const std::string& v, int l) { c.workers = parse_int(v, l); }},
    };

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
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = schema.find(key);
        if (it == schema.end())
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        it->second(c, value, lineno);
    }
    c.validate_numbers();
    return c;
}

std::string canonical_config(const RunConfig& c) {
    std::ostringstream os;
    auto num = [&](const char* k, double v) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << k << "=" << buf << "\n";
    };
    auto str = [&](const char* k, const std::string& v) { os << k << "=" << v << "\n"; };
    auto list = [&](const char* k, const auto& xs) {
        os << k << "=";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(xs[i]));
            os << (i ? "," : "") << buf;
        }
        os << "\n";
    };
    str("model", c.model);
    num("mass", c.mass); num("kappa", c.kappa); num("beta", c.beta);
    num("omega0", c.omega0); num("omega1", c.omega1);
    num("qubit_omega", c.qubit_omega); num("qubit_gamma", c.qubit_gamma);
    list("bath_betas", c.bath_betas);
    str("protocol", c.protocol); str("limit_case", c.limit_case);
    num("tau", c.tau);
    num("dim", c.dim); num("rtol", c.rtol); num("n_samples", c.n_samples);
    num("u_min", c.u_min); num("u_max", c.u_max); num("u_points", c.u_points);
    num("tau_min", c.tau_min); num("tau_max", c.tau_max); num("tau_points", c.tau_points);
    list("tau_list", c.tau_list); list("beta_list", c.beta_list); list("dim_list", c.dim_list);
    str("scenario", c.scenario);
    num("workers", c.workers);
    return os.str();
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qstcli
