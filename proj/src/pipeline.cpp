#include "purcell/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <future>
#include <sstream>

#include <json.hpp>

#include "purcell/bloch.hpp"
#include "purcell/errors.hpp"
#include "purcell/io.hpp"

namespace purcell::pipeline {

using config::RunConfig;
using nlohmann::ordered_json;

namespace {

std::string fmt(double v) { return io::format_double(v == 0.0 ? 0.0 : v); }

std::string path_in(const RunConfig& cfg, const std::string& name)
{
    return (std::filesystem::path(cfg.output_directory) / name).string();
}

// Canonical config as nested JSON; values kept as their canonical text.
ordered_json config_json(const RunConfig& cfg)
{
    ordered_json out = ordered_json::object();
    std::istringstream in(config::serialize(cfg));
    std::string line;
    std::string section;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '[') {
            section = line.substr(1, line.size() - 2);
            out[section] = ordered_json::object();
            continue;
        }
        const auto eq = line.find(" = ");
        out[section][line.substr(0, eq)] = line.substr(eq + 3);
    }
    return out;
}

ordered_json base_sidecar(const RunConfig& cfg, const std::string& kind)
{
    ordered_json j;
    j["kind"] = kind;
    j["config_hash"] = config::config_hash(cfg);
    j["config"] = config_json(cfg);
    return j;
}

std::vector<double> delta_grid(const config::Chi3Config& c)
{
    if (c.count == 1) return {c.delta_min};
    return map::linear_grid(c.delta_min, c.delta_max, c.count);
}

bloch::Lifetimes emitter_lifetimes(const RunConfig& cfg)
{
    try {
        return bloch::lifetimes_from_rates(config::resolve_material(cfg.material).rates_vac);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("material: ") + e.what());
    }
}

} // namespace

geometry::RasterGrid structure_grid(const RunConfig& cfg)
{
    const auto crystal = geometry::rasterize(cfg.geometry, cfg.simulation.resolution, cfg.raster);
    switch (cfg.simulation.structure) {
    case config::Structure::crystal: return crystal;
    case config::Structure::vacuum: return geometry::uniform_like(crystal, 1.0);
    case config::Structure::uniform: return geometry::uniform_like(crystal, cfg.simulation.uniform_eps);
    }
    return crystal;
}

SpectrumResult compute_spectrum(const RunConfig& cfg)
{
    cfg.validate();
    const auto grid = structure_grid(cfg);
    const auto vacuum = geometry::uniform_like(grid, 1.0);

    fdtd::SolverOptions opts = cfg.simulation.solver;
    const bool concurrent = opts.threads >= 2;
    if (concurrent) opts.threads = std::max(1, opts.threads / 2);

    auto run = [&](const geometry::RasterGrid& g) {
        return fdtd::run_dipole(g, cfg.source, cfg.analysis.window, cfg.simulation.runtime, opts,
                                cfg.simulation.apodization);
    };
    fdtd::DipoleRecord rs;
    fdtd::DipoleRecord rv;
    if (concurrent) {
        auto fs = std::async(std::launch::async, run, std::cref(grid));
        rv = run(vacuum);
        rs = fs.get();
    } else {
        rs = run(grid);
        rv = run(vacuum);
    }

    SpectrumResult r;
    r.spectrum = fdtd::ldos_ratio(rs, rv);
    r.spectrum.metadata.geometry_hash = config::geometry_hash(cfg);
    r.spectrum.metadata.config_hash = config::config_hash(cfg);
    r.gap = fdtd::detect_gap(r.spectrum, cfg.analysis.gap_threshold);
    r.structure_decayed = rs.decayed;
    r.vacuum_decayed = rv.decayed;
    r.dt = rs.dt;
    r.steps = rs.steps;
    r.nx = rs.nx;
    r.ny = rs.ny;
    return r;
}

std::string chi3_table(const RunConfig& cfg)
{
    const auto lt = emitter_lifetimes(cfg);
    const auto& c = cfg.chi3;
    std::string out = "# config_hash=" + config::config_hash(cfg) + "\n";
    out += "# t1=" + fmt(lt.t1) + " t2=" + fmt(lt.t2) + "\n";
    out += "delta,re_chi3,im_chi3,re_chi3_large_detuning,figure_of_merit,re_chi,im_chi\n";
    for (const double d : delta_grid(c)) {
        const auto k = bloch::kerr_chi3(d, lt, c.mu, c.n_density);
        const auto chi = bloch::total_chi(d, c.e_field_sq, 0.0, lt, c.mu, c.n_density);
        const std::string large = d == 0.0 ? "nan" : fmt(bloch::kerr_chi3_large_detuning(d, lt, c.mu, c.n_density));
        out += fmt(d) + ',' + fmt(k.real()) + ',' + fmt(k.imag()) + ',' + large + ',' +
               fmt(bloch::figure_of_merit(k, c.wavelength)) + ',' + fmt(chi.real()) + ',' + fmt(chi.imag()) + '\n';
    }
    return out;
}

std::string oracle_table(const RunConfig& cfg)
{
    const auto lt = emitter_lifetimes(cfg);
    const auto& c = cfg.chi3;
    std::string out = "# config_hash=" + config::config_hash(cfg) + "\n";
    out += "delta,rabi,re_chi_ode,im_chi_ode,re_chi_closed,im_chi_closed,rel_error\n";
    for (const double d : delta_grid(c)) {
        for (const double rabi : c.rabi_values) {
            const auto s = bloch::bloch_steady_state_ode({rabi, 0.0}, d, lt);
            const auto ode = bloch::chi_from_coherence(s.rho_ba, {rabi, 0.0}, c.mu, c.n_density);
            const double e_sq = rabi * rabi / (c.mu * c.mu);
            const auto closed = bloch::total_chi(d, e_sq, 0.0, lt, c.mu, c.n_density);
            const double err = std::abs(ode - closed) / std::abs(closed);
            out += fmt(d) + ',' + fmt(rabi) + ',' + fmt(ode.real()) + ',' + fmt(ode.imag()) + ',' +
                   fmt(closed.real()) + ',' + fmt(closed.imag()) + ',' + fmt(err) + '\n';
        }
    }
    return out;
}

map::EnhancementMap compute_map(const RunConfig& cfg, const fdtd::PurcellSpectrum& spectrum)
{
    const auto preset = config::resolve_material(cfg.material);
    const auto& m = cfg.map;
    try {
        const auto ph = m.ph_count == 1 ? std::vector<double>{m.ph_min} : map::linear_grid(m.ph_min, m.ph_max, m.ph_count);
        const auto el = m.elec_count == 1 ? std::vector<double>{m.elec_min}
                                          : map::linear_grid(m.elec_min, m.elec_max, m.elec_count);
        map::MapOptions opts;
        opts.rate_unit = m.rate_unit;
        opts.mask_factor = m.mask_factor;
        opts.threads = cfg.simulation.solver.threads;
        return map::build_map(spectrum, preset, ph, el, opts);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("map: ") + e.what());
    }
}

std::string spectrum_sidecar(const RunConfig& cfg, const SpectrumResult& r)
{
    auto j = base_sidecar(cfg, "ldos");
    j["geometry_hash"] = r.spectrum.metadata.geometry_hash;
    j["grid"] = {{"nx", r.nx}, {"ny", r.ny}, {"dt", r.dt}, {"steps", r.steps}};
    j["residual_energy"] = {{"structure", r.spectrum.metadata.residual_energy_structure},
                            {"vacuum", r.spectrum.metadata.residual_energy_vacuum}};
    j["decayed"] = {{"structure", r.structure_decayed}, {"vacuum", r.vacuum_decayed}};
    j["excluded_frequencies"] = r.spectrum.metadata.excluded_frequencies;
    if (r.gap) {
        j["gap"] = {{"threshold", cfg.analysis.gap_threshold}, {"lo", r.gap->lo}, {"hi", r.gap->hi}};
    } else {
        j["gap"] = nullptr;
    }
    return j.dump(2) + "\n";
}

std::string map_sidecar(const RunConfig& cfg, const map::EnhancementMap& m)
{
    auto j = base_sidecar(cfg, "map");
    j["spectrum_hash"] = m.spectrum_hash;
    j["material"] = {{"name", m.material.name},
                     {"gamma_rad_vac", m.material.rates_vac.gamma_rad_eff},
                     {"gamma_nr", m.material.rates_vac.gamma_nr},
                     {"gamma_phase", m.material.rates_vac.gamma_phase},
                     {"enhancement_limit", m.material.rates_vac.gamma_nr > 0.0
                                               ? ordered_json(bloch::enhancement_max(m.material.rates_vac))
                                               : ordered_json(nullptr)}};
    double peak = -1.0;
    std::size_t pe = 0;
    std::size_t pp = 0;
    std::size_t masked = 0;
    for (std::size_t e = 0; e < m.omega_elec_grid.size(); ++e) {
        for (std::size_t p = 0; p < m.omega_ph_grid.size(); ++p) {
            if (m.masked[m.index(e, p)]) {
                ++masked;
                continue;
            }
            if (m.at(e, p) > peak) {
                peak = m.at(e, p);
                pe = e;
                pp = p;
            }
        }
    }
    j["masked_cells"] = masked;
    if (peak >= 0.0) {
        j["peak"] = {{"eta", peak}, {"omega_ph", m.omega_ph_grid[pp]}, {"omega_elec", m.omega_elec_grid[pe]}};
    } else {
        j["peak"] = nullptr;
    }
    return j.dump(2) + "\n";
}

std::string table_sidecar(const RunConfig& cfg, const std::string& kind)
{
    auto j = base_sidecar(cfg, kind);
    const auto lt = emitter_lifetimes(cfg);
    j["lifetimes"] = {{"t1", lt.t1}, {"t2", lt.t2}};
    return j.dump(2) + "\n";
}

std::vector<std::string> run_ldos(const RunConfig& cfg)
{
    const auto r = compute_spectrum(cfg);
    const std::string csv = path_in(cfg, "spectrum.csv");
    const std::string json = path_in(cfg, "spectrum.json");
    io::write_atomic(csv, fdtd::spectrum_to_csv(r.spectrum));
    io::write_atomic(json, spectrum_sidecar(cfg, r));
    return {csv, json};
}

std::vector<std::string> run_chi3(const RunConfig& cfg)
{
    const std::string csv = path_in(cfg, "chi3.csv");
    const std::string json = path_in(cfg, "chi3.json");
    io::write_atomic(csv, chi3_table(cfg));
    io::write_atomic(json, table_sidecar(cfg, "chi3"));
    return {csv, json};
}

std::vector<std::string> run_oracle(const RunConfig& cfg)
{
    const std::string csv = path_in(cfg, "oracle.csv");
    const std::string json = path_in(cfg, "oracle.json");
    io::write_atomic(csv, oracle_table(cfg));
    io::write_atomic(json, table_sidecar(cfg, "oracle"));
    return {csv, json};
}

std::vector<std::string> run_map(const RunConfig& cfg)
{
    std::vector<std::string> written;
    fdtd::PurcellSpectrum spectrum;
    if (cfg.map.spectrum_file.empty()) {
        written = run_ldos(cfg);
        spectrum = fdtd::spectrum_from_csv(io::read_file(written.front()));
    } else {
        spectrum = fdtd::spectrum_from_csv(io::read_file(cfg.map.spectrum_file));
    }
    const auto m = compute_map(cfg, spectrum);
    const std::string csv = path_in(cfg, "map.csv");
    const std::string json = path_in(cfg, "map.json");
    io::write_atomic(csv, map::map_to_csv(m, config::config_hash(cfg)));
    io::write_atomic(json, map_sidecar(cfg, m));
    written.push_back(csv);
    written.push_back(json);
    return written;
}

} // namespace purcell::pipeline
