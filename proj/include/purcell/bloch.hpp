#pragma once

// Two-level emitter response: steady-state susceptibility to all orders,
// the degenerate Kerr coefficient, its asymptotic forms, and the
// enhancement / figure-of-merit ratios built from them.
//
// Units are reduced: hbar = 1, and every rate is measured in units of a
// reference rate (by convention the vacuum radiative rate). Times are the
// inverse of that rate. The optical field convention is
//     E(t) = E exp(-i omega t) + c.c.,   Omega = -mu E / hbar,
// so Im chi > 0 is absorption and P = chi(1) E + 3 chi(3) |E|^2 E.

#include <complex>
#include <cstddef>
#include <utility>

namespace purcell::bloch {

using Complex = std::complex<double>;

/// Dissipation channels of the upper level. Rates share one reference unit.
struct DecayRates {
    double gamma_rad_eff = 1.0;  ///< radiative rate in the actual photonic environment
    double gamma_nr = 0.0;       ///< non-radiative population decay
    double gamma_phase = 0.0;    ///< pure dephasing

    /// Throws std::invalid_argument on negative or non-finite rates.
    void validate() const;

    friend bool operator==(const DecayRates&, const DecayRates&) = default;
};

struct Lifetimes {
    double t1 = 1.0;  ///< population lifetime
    double t2 = 2.0;  ///< coherence lifetime

    /// Throws std::invalid_argument unless t1 > 0, t2 > 0 and t2 <= 2 t1.
    void validate() const;
};

struct EmitterParams {
    double omega_ba = 1.0;
    double mu = 1.0;
    double n_density = 1.0;
    DecayRates rates{};

    void validate() const;
};

/// Rotating-frame state: rho_ba = sigma exp(-i omega t), w = rho_bb - rho_aa.
struct BlochState {
    Complex rho_ba{};
    double w = -1.0;
};

struct OdeOptions {
    double tolerance = 1e-10;          ///< relative residual of the right-hand sides
    std::size_t max_steps = 10'000'000;
};

/// 1/T1 = gamma_rad_eff + gamma_nr;  1/T2 = (1/2)(1/T1) + gamma_phase.
/// Throws std::invalid_argument("infinite T1") when both population rates vanish.
Lifetimes lifetimes_from_rates(const DecayRates& rates);

/// All-orders steady-state susceptibility at probe frequency `omega` and
/// field intensity |E|^2 = `e_field_sq`.
Complex total_chi(double omega, double e_field_sq, const EmitterParams& p);
Complex total_chi(double omega, double e_field_sq, double omega_ba, const Lifetimes& lt,
                  double mu = 1.0, double n_density = 1.0);

/// Degenerate Kerr coefficient at detuning delta = omega - omega_ba.
Complex kerr_chi3(double delta, const EmitterParams& p);
Complex kerr_chi3(double delta, const Lifetimes& lt, double mu = 1.0, double n_density = 1.0);

/// Leading large-detuning term of Re chi(3), valid for |delta| T2 >> 1.
/// Throws std::invalid_argument at delta = 0.
double kerr_chi3_large_detuning(double delta, const EmitterParams& p);
double kerr_chi3_large_detuning(double delta, const Lifetimes& lt, double mu = 1.0,
                                double n_density = 1.0);

/// Reduced band-to-band semiconductor form of Re chi(3), with the electron
/// charge folded into `p_matrix` and `delta` = omega_gap - omega > 0.
double kerr_chi3_semiconductor(double delta, double omega, double p_matrix, double m_r,
                               const DecayRates& rates);

/// Integrates the rotating-frame Bloch equations from the ground state with
/// an A-stable implicit Euler scheme and geometrically growing steps until the
/// relative residual drops below `opts.tolerance`. The fixed point of the
/// scheme is the exact steady state, so step growth does not bias the result.
/// Throws ConvergenceError (carrying the last residual) if the step budget is spent.
BlochState bloch_steady_state_ode(Complex rabi, double delta, const Lifetimes& lt,
                                  const OdeOptions& opts = {});

/// Right-hand sides of the rotating-frame equations, (d rho_ba/dt, dw/dt).
std::pair<Complex, double> bloch_rhs(const BlochState& s, Complex rabi, double delta,
                                     const Lifetimes& lt);

/// chi = N mu rho_ba / E with E = -hbar rabi / mu.
Complex chi_from_coherence(Complex rho_ba, Complex rabi, double mu = 1.0,
                           double n_density = 1.0);

/// Re chi(3)(delta; purcell) / Re chi(3)(delta; hom).
/// Throws std::invalid_argument("undefined at resonance") at delta = 0.
double enhancement_exact(double delta, const EmitterParams& p_purcell, const EmitterParams& p_hom);

/// Large-detuning enhancement with radiative decay fully suppressed.
/// Throws std::invalid_argument("enhancement unbounded") when gamma_nr = 0.
double enhancement_max(const DecayRates& rates_vac);

/// Large-detuning ratio (T1,pur T2,hom) / (T1,hom T2,pur) for arbitrary rates.
double enhancement_asymptote(const DecayRates& purcell, const DecayRates& hom);

/// xi = Re chi(3) / (lambda Im chi(3)). Throws std::invalid_argument when Im = 0.
double figure_of_merit(Complex chi3, double wavelength);

} // namespace purcell::bloch
