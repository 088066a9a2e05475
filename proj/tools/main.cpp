#include <cstdio>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "qst/integrate.hpp"
#include "scenarios.hpp"

namespace {

// exit categories: 0 ok, 2 config/parse, 3 numeric, 4 invariant/threshold
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInvariant = 4;

bool mentions_invariant(const std::string& msg) {
    return msg.find("violated") != std::string::npos ||
           msg.find("invariant") != std::string::npos ||
           msg.find("uncertainty") != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Open-system thermodynamics toolbox: Lindblad evolution, counting "
                 "statistics, reduced moments, optimal driving"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int dim_override = 0;
    double rtol_override = 0;
    int workers_override = 0;

    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--dim", dim_override, "override truncation dimension");
    app.add_option("--rtol", rtol_override, "override integrator tolerance");
    app.add_option("--workers", workers_override, "override sweep worker count");

    for (const char* name :
         {"validate", "evolve", "fcs", "excess-work", "geodesic", "sweep"})
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);
    const std::string scenario = app.get_subcommands().front()->get_name();

    try {
        qstcli::RunConfig config;
        if (!config_path.empty()) config = qstcli::parse_config_file(config_path);
        if (dim_override > 0) config.dim = dim_override;
        if (rtol_override > 0) config.rtol = rtol_override;
        if (workers_override > 0) config.workers = workers_override;
        config.validate_numbers();

        qstcli::ScenarioResult result;
        if (scenario == "sweep")
            result = qstcli::run_sweep(config, out_dir);
        else
            result = qstcli::run_scenario(scenario, config, out_dir);
        qstcli::write_manifest(out_dir, scenario, config, result);

        for (const auto& [k, v] : result.summary)
            std::printf("%s = %.12g\n", k.c_str(), v);
        if (!result.thresholds_ok) {
            std::fprintf(stderr, "%s: thresholds exceeded, see %s\n", scenario.c_str(),
                         out_dir.c_str());
            return kExitInvariant;
        }
        return 0;
    } catch (const qstcli::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitParse;
    } catch (const qst::IntegrationError& e) {
        std::fprintf(stderr, "numeric error at t = %g: %s\n", e.t, e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        const bool inv = mentions_invariant(e.what());
        std::fprintf(stderr, "%s error: %s\n", inv ? "invariant" : "numeric", e.what());
        return inv ? kExitInvariant : kExitNumeric;
    }
}
