#include "purcell/map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "purcell/errors.hpp"
#include "purcell/io.hpp"

namespace purcell::map {

const std::vector<MaterialPreset>& builtin_presets()
{
    static const std::vector<MaterialPreset> presets{
        {"qw_gaas_200K", {1.0, 0.1, 10.0},
         "GaAs-AlGaAs single quantum well near 200 K: gamma_phase = 10 gamma_rad = 100 gamma_nr"},
        {"qw_gaas_225K", {1.0, 1.0, 10.0},
         "GaAs-AlGaAs single quantum well near 225 K: gamma_nr = gamma_rad, gamma_phase = 10 gamma_rad"},
        {"qw_gaas_285K", {1.0, 10.0, 10.0},
         "GaAs-AlGaAs single quantum well near room temperature: gamma_nr = 10 gamma_rad"},
        {"nanocrystal_cdse", {1.0, 1.0 / 39.0, 10.0},
         "single CdSe/ZnS core-shell nanocrystal: gamma_rad = 39 gamma_nr; gamma_phase is a guess"},
        {"bulk_nanocrystal", {1.0, 1.0, 10.0},
         "bulk nanocrystal film: gamma_rad = gamma_nr; gamma_phase is a guess"},
    };
    return presets;
}

MaterialPreset find_preset(const std::string& name)
{
    for (const auto& p : builtin_presets()) {
        if (p.name == name) return p;
    }
    std::string known;
    for (const auto& p : builtin_presets()) known += (known.empty() ? "" : ", ") + p.name;
    throw std::invalid_argument("unknown material preset '" + name + "' (known: " + known + ")");
}

bloch::DecayRates purcell_to_rates(double purcell_factor, const MaterialPreset& preset)
{
    if (!(purcell_factor >= 0.0) || !std::isfinite(purcell_factor)) {
        throw std::invalid_argument("Purcell factor must be finite and non-negative");
    }
    preset.rates_vac.validate();
    return {purcell_factor * preset.rates_vac.gamma_rad_eff, preset.rates_vac.gamma_nr,
            preset.rates_vac.gamma_phase};
}

// ---------------------------------------------------------------- interpolation

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y))
{
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("interpolation needs >= 2 matching samples");
    for (std::size_t k = 1; k < n; ++k) {
        if (!(x_[k] > x_[k - 1])) throw std::invalid_argument("interpolation abscissae must strictly increase");
    }
    std::vector<double> h(n - 1);
    std::vector<double> d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x_[k + 1] - x_[k];
        d[k] = (y_[k + 1] - y_[k]) / h[k];
    }
    slope_.assign(n, 0.0);
    if (n == 2) {
        slope_[0] = slope_[1] = d[0];
        return;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (d[k - 1] * d[k] <= 0.0) continue;
        const double w1 = 2.0 * h[k] + h[k - 1];
        const double w2 = h[k] + 2.0 * h[k - 1];
        slope_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
    }
    auto edge = [](double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return m;
    };
    slope_[0] = edge(h[0], h[1], d[0], d[1]);
    slope_[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

double MonotoneCubic::operator()(double x) const
{
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[k] + h10 * h * slope_[k] + h01 * y_[k + 1] + h11 * h * slope_[k + 1];
}

// ---------------------------------------------------------------------- maps

std::vector<double> linear_grid(double lo, double hi, std::size_t count)
{
    if (count == 0) throw std::invalid_argument("grid needs at least one point");
    if (count == 1) return {lo};
    if (!(hi > lo)) throw std::invalid_argument("grid needs hi > lo");
    std::vector<double> g(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) g[k] = lo + step * static_cast<double>(k);
    g.back() = hi;
    return g;
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_grid(const std::vector<double>& g, const fdtd::PurcellSpectrum& s, const char* name)
{
    if (g.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
    for (std::size_t k = 1; k < g.size(); ++k) {
        if (!(g[k] > g[k - 1])) throw std::invalid_argument(std::string(name) + " grid must strictly increase");
    }
    if (g.front() < s.frequencies.front() || g.back() > s.frequencies.back()) {
        throw std::invalid_argument(std::string(name) + " grid leaves the spectrum coverage [" +
                                    io::format_double(s.frequencies.front()) + ", " +
                                    io::format_double(s.frequencies.back()) + "]");
    }
}

} // namespace

double EnhancementMap::detuning_t2_vac(std::size_t elec, std::size_t ph) const
{
    const double delta = two_pi * (omega_ph_grid[ph] - omega_elec_grid[elec]) / options.rate_unit;
    return delta * bloch::lifetimes_from_rates(material.rates_vac).t2;
}

double EnhancementMap::detuning_t2(std::size_t elec, std::size_t ph) const
{
    const double delta = two_pi * (omega_ph_grid[ph] - omega_elec_grid[elec]) / options.rate_unit;
    return delta * bloch::lifetimes_from_rates(purcell_to_rates(purcell_factor[elec], material)).t2;
}

EnhancementMap build_map(const fdtd::PurcellSpectrum& spectrum, const MaterialPreset& preset,
                         const std::vector<double>& omega_ph_grid,
                         const std::vector<double>& omega_elec_grid, const MapOptions& opts)
{
    spectrum.validate();
    if (spectrum.frequencies.size() < 2) throw std::invalid_argument("spectrum needs at least two samples");
    if (!(opts.rate_unit > 0.0)) throw std::invalid_argument("rate_unit must be positive");
    if (!(opts.mask_factor >= 0.0)) throw std::invalid_argument("mask_factor must be non-negative");
    if (opts.threads < 1) throw std::invalid_argument("threads must be >= 1");
    preset.rates_vac.validate();
    check_grid(omega_ph_grid, spectrum, "omega_ph");
    check_grid(omega_elec_grid, spectrum, "omega_elec");

    EnhancementMap m;
    m.omega_ph_grid = omega_ph_grid;
    m.omega_elec_grid = omega_elec_grid;
    m.material = preset;
    m.options = opts;
    m.spectrum_hash = io::hash_hex(fdtd::spectrum_to_csv(spectrum));

    const MonotoneCubic purcell(spectrum.frequencies, spectrum.gamma_ratio);
    const std::size_t ne = omega_elec_grid.size();
    const std::size_t np = omega_ph_grid.size();
    m.purcell_factor.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        m.purcell_factor[e] = std::max(0.0, purcell(omega_elec_grid[e]));
        const auto rates = purcell_to_rates(m.purcell_factor[e], preset);
        if (!(rates.gamma_rad_eff + rates.gamma_nr > 0.0)) {
            throw NumericalError("infinite T1 at omega_elec = " + io::format_double(omega_elec_grid[e]) +
                                 " (F = 0 with no non-radiative decay)");
        }
    }
    m.eta.assign(ne * np, std::numeric_limits<double>::quiet_NaN());
    m.masked.assign(ne * np, 0);

    bloch::EmitterParams hom;
    hom.rates = preset.rates_vac;
    const double t2_vac = bloch::lifetimes_from_rates(preset.rates_vac).t2;

    auto fill_rows = [&](std::size_t e_begin, std::size_t e_end) {
        for (std::size_t e = e_begin; e < e_end; ++e) {
            bloch::EmitterParams pur = hom;
            pur.rates = purcell_to_rates(m.purcell_factor[e], preset);
            for (std::size_t p = 0; p < np; ++p) {
                const double delta = two_pi * (omega_ph_grid[p] - omega_elec_grid[e]) / opts.rate_unit;
                const std::size_t k = m.index(e, p);
                if (std::abs(delta) * t2_vac < opts.mask_factor || delta == 0.0) {
                    m.masked[k] = 1;
                    continue;
                }
                m.eta[k] = bloch::enhancement_exact(delta, pur, hom);
            }
        }
    };

    const auto nthreads = static_cast<std::size_t>(std::min<int>(opts.threads, static_cast<int>(ne)));
    if (nthreads <= 1) {
        fill_rows(0, ne);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) {
            pool.emplace_back(fill_rows, ne * t / nthreads, ne * (t + 1) / nthreads);
        }
    }
    return m;
}

std::string map_to_csv(const EnhancementMap& m, const std::string& config_hash)
{
    std::string out;
    out += "# config_hash=" + config_hash + "\n";
    out += "# spectrum_hash=" + m.spectrum_hash + "\n";
    out += "# material=" + m.material.name + "\n";
    out += "omega_ph,omega_elec,eta,masked\n";
    for (std::size_t e = 0; e < m.omega_elec_grid.size(); ++e) {
        for (std::size_t p = 0; p < m.omega_ph_grid.size(); ++p) {
            const std::size_t k = m.index(e, p);
            out += io::format_double(m.omega_ph_grid[p]) + ',' + io::format_double(m.omega_elec_grid[e]) + ',';
            out += m.masked[k] ? std::string("nan") : io::format_double(m.eta[k]);
            out += m.masked[k] ? ",1\n" : ",0\n";
        }
    }
    return out;
}

} // namespace purcell::map
