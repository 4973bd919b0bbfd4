#pragma once

// Kerr-enhancement maps: combine a measured Purcell spectrum with the
// two-level Kerr coefficient over a grid of probe and transition frequencies.

#include <cstdint>
#include <string>
#include <vector>

#include "purcell/bloch.hpp"
#include "purcell/fdtd.hpp"

namespace purcell::map {

struct MaterialPreset {
    std::string name;
    bloch::DecayRates rates_vac;  ///< gamma_rad_eff holds the vacuum radiative rate (normally 1)
    std::string description;
};

/// qw_gaas_200K, qw_gaas_225K, qw_gaas_285K, nanocrystal_cdse, bulk_nanocrystal.
const std::vector<MaterialPreset>& builtin_presets();

/// Throws std::invalid_argument for unknown names.
MaterialPreset find_preset(const std::string& name);

/// (F gamma_rad_vac, gamma_nr, gamma_phase).
bloch::DecayRates purcell_to_rates(double purcell_factor, const MaterialPreset& preset);

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes),
/// constant beyond the end samples.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

struct MapOptions {
    /// Vacuum radiative rate expressed as an angular rate in c/a units. Detuning
    /// in rate units is 2 pi (f_ph - f_elec) / rate_unit.
    double rate_unit = 1e-4;
    /// Cells with |detuning| T2,vac < mask_factor are masked.
    double mask_factor = 2.0;
    int threads = 1;
};

struct EnhancementMap {
    std::vector<double> omega_ph_grid;
    std::vector<double> omega_elec_grid;
    std::vector<double> purcell_factor;  ///< F at each omega_elec
    std::vector<double> eta;             ///< row-major: eta[e * n_ph + p]; NaN where masked
    std::vector<std::uint8_t> masked;
    MaterialPreset material;
    MapOptions options;
    std::string spectrum_hash;

    std::size_t index(std::size_t elec, std::size_t ph) const { return elec * omega_ph_grid.size() + ph; }
    double at(std::size_t elec, std::size_t ph) const { return eta[index(elec, ph)]; }
    /// Detuning times the vacuum T2 for a cell.
    double detuning_t2_vac(std::size_t elec, std::size_t ph) const;
    /// Detuning times the Purcell-modified T2 for a cell.
    double detuning_t2(std::size_t elec, std::size_t ph) const;
};

/// Evenly spaced grid, inclusive of both ends.
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

/// Throws std::invalid_argument when a grid is not strictly increasing or
/// leaves the spectrum's frequency coverage, and NumericalError when a cell
/// would need an infinite T1 (F = 0 with no non-radiative decay).
EnhancementMap build_map(const fdtd::PurcellSpectrum& spectrum, const MaterialPreset& preset,
                         const std::vector<double>& omega_ph_grid,
                         const std::vector<double>& omega_elec_grid, const MapOptions& opts = {});

/// Long format: omega_ph,omega_elec,eta,masked. Preceded by '#' provenance lines.
std::string map_to_csv(const EnhancementMap& m, const std::string& config_hash);

} // namespace purcell::map
