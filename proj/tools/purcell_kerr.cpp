// purcell_kerr: Purcell spectra, Kerr coefficients and enhancement maps.
//
//   purcell_kerr ldos     --config run.ini --out results
//   purcell_kerr chi3     --preset qw_gaas_225K
//   purcell_kerr map      --config run.ini --threads 4
//   purcell_kerr validate
//   purcell_kerr oracle
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "purcell/config.hpp"
#include "purcell/errors.hpp"
#include "purcell/io.hpp"
#include "purcell/pipeline.hpp"
#include "purcell/validation.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::string out_dir;
    std::optional<double> resolution;
    std::optional<int> threads;
    std::string preset;
};

purcell::config::RunConfig load(const Overrides& o)
{
    using purcell::ConfigError;
    purcell::config::RunConfig cfg;
    if (!o.config_path.empty()) {
        try {
            cfg = purcell::config::parse_config(purcell::io::read_file(o.config_path));
        } catch (const ConfigError& e) {
            throw ConfigError(o.config_path + ": " + e.what());
        }
    }
    if (!o.out_dir.empty()) cfg.output_directory = o.out_dir;
    if (o.resolution) cfg.simulation.resolution = *o.resolution;
    if (o.threads) cfg.simulation.solver.threads = *o.threads;
    if (!o.preset.empty()) {
        cfg.material.preset = o.preset;
        if (o.preset != "inline") cfg.material.has_gamma_phase = false;
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("after command-line overrides: ") + e.what());
    }
    return cfg;
}

void report(const std::vector<std::string>& files)
{
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Purcell-modified Kerr nonlinearity of two-level emitters"};
    app.require_subcommand(1);

    Overrides o;
    app.add_option("--config", o.config_path, "run configuration file (INI)");
    app.add_option("--out", o.out_dir, "output directory (overrides [output] directory)");
    app.add_option("--resolution", o.resolution, "grid cells per lattice constant");
    app.add_option("--threads", o.threads, "worker threads");
    app.add_option("--preset", o.preset, "material preset name, or inline");

    auto* ldos = app.add_subcommand("ldos", "Purcell spectrum from a structure run and a vacuum run");
    auto* chi3 = app.add_subcommand("chi3", "Kerr coefficient and susceptibility over a detuning sweep");
    auto* map = app.add_subcommand("map", "Kerr enhancement over probe and transition frequencies");
    auto* validate = app.add_subcommand("validate", "run the analytic self-check suite");
    auto* oracle = app.add_subcommand("oracle", "steady-state Bloch integration against the closed form");
    for (auto* sub : {ldos, chi3, map, validate, oracle}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) {
            const auto results = purcell::validation::run_analytic_checks();
            std::cout << purcell::validation::format_table(results);
            for (const auto& r : results) {
                if (!r.passed) return 2;
            }
            return 0;
        }
        const auto cfg = load(o);
        if (ldos->parsed()) report(purcell::pipeline::run_ldos(cfg));
        if (chi3->parsed()) report(purcell::pipeline::run_chi3(cfg));
        if (oracle->parsed()) report(purcell::pipeline::run_oracle(cfg));
        if (map->parsed()) report(purcell::pipeline::run_map(cfg));
        return 0;
    } catch (const purcell::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const purcell::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const purcell::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
