#pragma once

// 2D TM (Ez, Hx, Hy) finite-difference time-domain solver on a staggered
// Yee layout, used to measure the power radiated by a point current at the
// grid centre. Units: c = eps0 = mu0 = 1, lengths in lattice constants,
// frequencies f in c/a (the phase of a component is exp(-i 2 pi f t)).

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "purcell/geometry.hpp"

namespace purcell::fdtd {

using Complex = std::complex<double>;

/// Gaussian-enveloped sine current J_z(t) at the source cell:
///   J(t) = amplitude exp(-(t - t0)^2 / (2 s^2)) sin(2 pi f0 (t - t0)),
/// s = 1 / (2 pi bandwidth), t0 = 6 s + time_shift, and J = 0 for t > t0 + 6 s.
struct SourceSpec {
    double center_frequency = 0.5;
    double bandwidth = 0.12;  ///< standard deviation of the spectral envelope, c/a
    double amplitude = 1.0;
    double time_shift = 0.0;

    void validate() const;
    double sigma_t() const;
    double peak_time() const;
    double end_time() const;
    double current(double t) const;
    /// Continuum spectral magnitude relative to its peak.
    double relative_spectrum(double f) const;

    friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

/// Analysis frequencies, evenly spaced and inclusive of both ends.
struct AnalysisWindow {
    double f_min = 0.2;
    double f_max = 0.8;
    std::size_t count = 500;

    void validate() const;
    std::vector<double> frequencies() const;

    friend bool operator==(const AnalysisWindow&, const AnalysisWindow&) = default;
};

struct SolverOptions {
    double courant = 0.5;         ///< dt = courant * dx (c = 1)
    int stencil_order = 4;        ///< 2: standard Yee differences, 4: staggered fourth order
    bool absorber = true;         ///< false: closed box with perfectly conducting walls
    double pml_reflection = 1e-6; ///< normal-incidence design reflection in vacuum
    double pml_grading = 3.0;     ///< polynomial order of the conductivity profile
    int threads = 1;
    int stability_check_interval = 64;

    void validate() const;
};

/// Largest stable Courant number for the chosen stencil.
double max_courant(int stencil_order);

struct FieldState {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> ez;  ///< (i, j) at cell centres
    std::vector<double> hx;  ///< (i, j + 1/2); index j * nx + i, j < ny - 1
    std::vector<double> hy;  ///< (i + 1/2, j); index j * nx + i, i < nx - 1
    long time_step_index = 0;
};

class Solver {
public:
    Solver(const geometry::RasterGrid& grid, const SolverOptions& opts);
    ~Solver();
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    /// One leapfrog update: H to n + 1/2, then Ez to n + 1 with the current
    /// density `source_current` (J at n + 1/2) deposited in the source cell.
    /// Throws InstabilityError when fields blow up.
    void step(double source_current);

    const FieldState& state() const { return state_; }
    FieldState& state() { return state_; }
    const geometry::RasterGrid& grid() const { return grid_; }
    double dt() const { return dt_; }
    double time() const { return static_cast<double>(state_.time_step_index) * dt_; }
    double source_ez() const;

    /// eps Ez^2 + Hx^2 + Hy^2 summed over the grid, times the cell area.
    double field_energy() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    geometry::RasterGrid grid_;
    SolverOptions opts_;
    FieldState state_;
    double dt_ = 0.0;
};

/// Running DFTs recorded at the source cell during a dipole run.
struct DipoleRecord {
    std::vector<double> frequencies;
    std::vector<Complex> ez;       ///< sum_n Ez^n exp(i 2 pi f n dt) dt
    std::vector<Complex> current;  ///< sum_n J^{n+1/2} exp(i 2 pi f (n + 1/2) dt) dt
    double resolution = 0.0;
    double dt = 0.0;
    double total_time = 0.0;
    double runtime_after_source = 0.0;
    double apodization = 0.0;
    long steps = 0;
    double residual_energy_ratio = 0.0;  ///< final / peak field energy
    bool decayed = true;                 ///< residual_energy_ratio < 1e-6
    std::size_t nx = 0;
    std::size_t ny = 0;
};

/// Runs one simulation with the source switched on at t = 0 and recorded for
/// `runtime` time units after it switches off. Insufficient field decay is
/// reported via `decayed` / `residual_energy_ratio`, not thrown.
///
/// With `apodization` = tau > 0, samples later than the pulse peak t0 are
/// weighted by exp(-(t - t0)^2 / (2 tau^2)) in both transforms. This turns the
/// truncated transform of slowly decaying (in-gap, high-Q) ringing into a
/// Gaussian-smoothed spectrum of resolution 1 / (2 pi tau); tau = 0 disables it.
DipoleRecord run_dipole(const geometry::RasterGrid& grid, const SourceSpec& source,
                        const AnalysisWindow& window, double runtime, const SolverOptions& opts,
                        double apodization = 0.0);

struct SpectrumMetadata {
    double resolution = 0.0;
    double runtime = 0.0;
    std::string geometry_hash;
    std::string config_hash;
    double residual_energy_structure = 0.0;
    double residual_energy_vacuum = 0.0;
    std::size_t excluded_frequencies = 0;
};

struct PurcellSpectrum {
    std::vector<double> frequencies;
    std::vector<double> gamma_ratio;
    SpectrumMetadata metadata;

    /// Throws std::invalid_argument unless frequencies strictly increase and ratios are >= 0.
    void validate() const;
};

/// -Re(E J*) at each recorded frequency.
std::vector<double> radiated_power(const DipoleRecord& rec);

/// Per-frequency ratio of radiated work at the source point, structure over
/// vacuum. Frequencies where the source spectrum is below 1e-3 of its peak are
/// dropped. Throws NumericalError if the vacuum power is not positive, or if
/// the two records were not produced on the same grid and frequencies.
PurcellSpectrum ldos_ratio(const DipoleRecord& structure, const DipoleRecord& vacuum);

struct FrequencyWindow {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

/// Widest contiguous run of samples with gamma_ratio < threshold, reported by
/// its first and last sample frequency.
std::optional<FrequencyWindow> detect_gap(const PurcellSpectrum& spectrum, double threshold);

/// Intersection over union of two windows.
double window_overlap(const FrequencyWindow& a, const FrequencyWindow& b);

std::string spectrum_to_csv(const PurcellSpectrum& s);
PurcellSpectrum spectrum_from_csv(const std::string& text);

} // namespace purcell::fdtd
