#pragma once

// Run configuration: an INI-style text file of [section] headers and
// `key = value` lines. '#' and ';' start comments. Every key is optional
// unless noted; unknown sections and keys are rejected.

#include <string>
#include <vector>

#include "purcell/bloch.hpp"
#include "purcell/fdtd.hpp"
#include "purcell/geometry.hpp"
#include "purcell/map.hpp"

namespace purcell::config {

enum class Structure { crystal, vacuum, uniform };

std::string to_string(Structure s);

struct SimulationConfig {
    double resolution = 20.0;
    double runtime = 400.0;      ///< recorded time after the source switches off
    double apodization = 100.0;  ///< 0 disables the transform taper
    Structure structure = Structure::crystal;
    double uniform_eps = 13.0;   ///< used when structure = uniform
    fdtd::SolverOptions solver{};

    friend bool operator==(const SimulationConfig& a, const SimulationConfig& b);
};

struct AnalysisConfig {
    fdtd::AnalysisWindow window{};
    double gap_threshold = 0.5;

    friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

/// `preset = inline` takes gamma_rad, gamma_nr and gamma_phase (all required).
/// A named preset accepts a gamma_phase override only.
struct MaterialConfig {
    std::string preset = "qw_gaas_200K";
    bool has_gamma_phase = false;
    double gamma_rad = 1.0;
    double gamma_nr = 0.0;
    double gamma_phase = 0.0;

    friend bool operator==(const MaterialConfig&, const MaterialConfig&) = default;
};

struct Chi3Config {
    double delta_min = -20.0;
    double delta_max = 20.0;
    std::size_t count = 81;
    double e_field_sq = 0.0;
    double mu = 1.0;
    double n_density = 1.0;
    double wavelength = 1.0;
    std::vector<double> rabi_values{0.01, 0.1, 0.5, 1.0};

    friend bool operator==(const Chi3Config&, const Chi3Config&) = default;
};

struct MapConfig {
    std::string spectrum_file;  ///< empty: compute the spectrum in the same run
    double ph_min = 0.25;
    double ph_max = 0.75;
    std::size_t ph_count = 201;
    double elec_min = 0.25;
    double elec_max = 0.75;
    std::size_t elec_count = 201;
    double rate_unit = 1e-4;
    double mask_factor = 2.0;

    friend bool operator==(const MapConfig&, const MapConfig&) = default;
};

struct RunConfig {
    geometry::CrystalGeometry geometry{};
    geometry::RasterOptions raster{};
    fdtd::SourceSpec source{};
    SimulationConfig simulation{};
    AnalysisConfig analysis{};
    MaterialConfig material{};
    Chi3Config chi3{};
    MapConfig map{};
    std::string output_directory = "out";

    /// Throws ConfigError naming the offending field.
    void validate() const;

    friend bool operator==(const RunConfig& a, const RunConfig& b);
};

/// Parses and validates. Throws ConfigError with "line N: [section] key: ..." context.
RunConfig parse_config(const std::string& text);

/// Canonical text form: every key, fixed order, shortest round-trip numbers.
std::string serialize(const RunConfig& cfg);

/// Hash of the canonical form.
std::string config_hash(const RunConfig& cfg);

/// Hash of everything that determines the rasterized structure.
std::string geometry_hash(const RunConfig& cfg);

/// Material preset after resolving `inline` and overrides.
map::MaterialPreset resolve_material(const MaterialConfig& m);

} // namespace purcell::config
