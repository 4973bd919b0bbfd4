#pragma once

// End-to-end jobs behind the command-line subcommands. Every function is
// deterministic in its configuration; thread counts only affect speed.

#include <optional>
#include <string>

#include "purcell/config.hpp"
#include "purcell/fdtd.hpp"
#include "purcell/map.hpp"

namespace purcell::pipeline {

struct SpectrumResult {
    fdtd::PurcellSpectrum spectrum;
    std::optional<fdtd::FrequencyWindow> gap;
    bool structure_decayed = true;
    bool vacuum_decayed = true;
    double dt = 0.0;
    long steps = 0;
    std::size_t nx = 0;
    std::size_t ny = 0;
};

/// Structure permittivity for the configured run.
geometry::RasterGrid structure_grid(const config::RunConfig& cfg);

/// Runs the structure and vacuum simulations (concurrently when threads > 1)
/// and forms the Purcell spectrum.
SpectrumResult compute_spectrum(const config::RunConfig& cfg);

/// delta,re_chi3,im_chi3,re_chi3_large_detuning,figure_of_merit,re_chi,im_chi
std::string chi3_table(const config::RunConfig& cfg);

/// delta,rabi,re_chi_ode,im_chi_ode,re_chi_closed,im_chi_closed,rel_error
std::string oracle_table(const config::RunConfig& cfg);

map::EnhancementMap compute_map(const config::RunConfig& cfg, const fdtd::PurcellSpectrum& spectrum);

/// JSON sidecars: configuration echo, hashes and run summaries.
std::string spectrum_sidecar(const config::RunConfig& cfg, const SpectrumResult& r);
std::string map_sidecar(const config::RunConfig& cfg, const map::EnhancementMap& m);
std::string table_sidecar(const config::RunConfig& cfg, const std::string& kind);

/// Subcommand drivers. Each writes its outputs atomically under `out_dir` and
/// returns the list of files written.
std::vector<std::string> run_ldos(const config::RunConfig& cfg);
std::vector<std::string> run_chi3(const config::RunConfig& cfg);
std::vector<std::string> run_oracle(const config::RunConfig& cfg);
std::vector<std::string> run_map(const config::RunConfig& cfg);

} // namespace purcell::pipeline
