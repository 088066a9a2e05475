#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qstcli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat run configuration. Parsed from key=value lines with a strict
/// schema; CLI flags may override dim / rtol / workers afterwards.
struct RunConfig {
    std::string model = "qbm";           // qbm | qubit

    // qbm block
    double mass = 1.0;
    double kappa = 1.0;
    double beta = 1.0;
    double omega0 = 0.2;
    double omega1 = 5.0;

    // qubit block
    double qubit_omega = 1.0;
    double qubit_gamma = 1.0;
    std::vector<double> bath_betas;      // empty = single bath at beta

    // protocol
    std::string protocol = "linear";     // linear | exponential | optimal |
                                         // limit | static
    std::string limit_case = "ht-under"; // ht-under | ht-over | lt-under | lt-over
    double tau = 10.0;

    // numerics
    int dim = 60;
    double rtol = 1e-8;
    int n_samples = 101;

    // fcs grid
    double u_min = -2.5;
    double u_max = 0.5;
    int u_points = 31;

    // excess-work / sweep axes
    double tau_min = 1.0;
    double tau_max = 200.0;
    int tau_points = 8;
    std::vector<double> tau_list;
    std::vector<double> beta_list;
    std::vector<int> dim_list;

    std::string scenario;                // payload scenario for `sweep`
    int workers = 1;

    void validate_numbers() const;
};

RunConfig parse_config_file(const std::string& path);

/// Canonical serialization of every resolved field, used both for the
/// manifest and for hashing. Deterministic field order.
std::string canonical_config(const RunConfig& c);

/// FNV-1a 64-bit hex digest.
std::string fnv1a_hex(const std::string& text);

}  // namespace qstcli
