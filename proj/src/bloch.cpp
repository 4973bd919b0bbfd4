#include "purcell/bloch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "purcell/errors.hpp"

namespace purcell::bloch {

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

// Solves the 3x3 system m x = rhs in place by Gaussian elimination with
// partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> rhs)
{
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        std::swap(m[col], m[piv]);
        std::swap(rhs[col], rhs[piv]);
        if (m[col][col] == 0.0) throw NumericalError("singular implicit Bloch step");
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double acc = rhs[r];
        for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * x[c];
        x[r] = acc / m[r][r];
    }
    return x;
}

} // namespace

void DecayRates::validate() const
{
    if (!finite_nonneg(gamma_rad_eff) || !finite_nonneg(gamma_nr) || !finite_nonneg(gamma_phase)) {
        throw std::invalid_argument("decay rates must be finite and non-negative");
    }
}

void Lifetimes::validate() const
{
    if (!(t1 > 0.0) || !(t2 > 0.0) || !std::isfinite(t1) || !std::isfinite(t2)) {
        throw std::invalid_argument("lifetimes must be positive and finite");
    }
    // 1/T2 >= 1/(2 T1); allow one ulp-scale slack from the reciprocal round trip.
    if (t2 > 2.0 * t1 * (1.0 + 1e-14)) {
        throw std::invalid_argument("T2 exceeds 2 T1");
    }
}

void EmitterParams::validate() const
{
    if (!(omega_ba > 0.0) || !(mu > 0.0) || !(n_density > 0.0)) {
        throw std::invalid_argument("omega_ba, mu and n_density must be positive");
    }
    rates.validate();
}

Lifetimes lifetimes_from_rates(const DecayRates& rates)
{
    rates.validate();
    const double population = rates.gamma_rad_eff + rates.gamma_nr;
    if (!(population > 0.0)) throw std::invalid_argument("infinite T1");
    return Lifetimes{1.0 / population, 1.0 / (0.5 * population + rates.gamma_phase)};
}

Complex total_chi(double omega, double e_field_sq, double omega_ba, const Lifetimes& lt,
                  double mu, double n_density)
{
    if (!(e_field_sq >= 0.0)) throw std::invalid_argument("|E|^2 must be non-negative");
    lt.validate();
    const double delta = omega - omega_ba;
    const double t2 = lt.t2;
    const Complex num = -n_density * mu * mu * Complex(delta, -1.0 / t2) * t2 * t2;
    const double den = 1.0 + delta * delta * t2 * t2 + 4.0 * mu * mu * e_field_sq * lt.t1 * t2;
    return num / den;
}

Complex total_chi(double omega, double e_field_sq, const EmitterParams& p)
{
    p.validate();
    return total_chi(omega, e_field_sq, p.omega_ba, lifetimes_from_rates(p.rates), p.mu,
                     p.n_density);
}

Complex kerr_chi3(double delta, const Lifetimes& lt, double mu, double n_density)
{
    lt.validate();
    const double t1 = lt.t1;
    const double t2 = lt.t2;
    const double mu4 = mu * mu * mu * mu;
    const double den = 1.0 + delta * delta * t2 * t2;
    const double scale = (4.0 / 3.0) * n_density * mu4 * t1 * t2 * t2 / (den * den);
    return scale * Complex(delta * t2, -1.0);
}

Complex kerr_chi3(double delta, const EmitterParams& p)
{
    p.validate();
    return kerr_chi3(delta, lifetimes_from_rates(p.rates), p.mu, p.n_density);
}

double kerr_chi3_large_detuning(double delta, const Lifetimes& lt, double mu, double n_density)
{
    if (delta == 0.0) throw std::invalid_argument("large-detuning form divides by zero detuning");
    lt.validate();
    const double inv = 1.0 / delta;
    return (4.0 / 3.0) * n_density * mu * mu * mu * mu * inv * inv * inv * (lt.t1 / lt.t2);
}

double kerr_chi3_large_detuning(double delta, const EmitterParams& p)
{
    p.validate();
    return kerr_chi3_large_detuning(delta, lifetimes_from_rates(p.rates), p.mu, p.n_density);
}

double kerr_chi3_semiconductor(double delta, double omega, double p_matrix, double m_r,
                               const DecayRates& rates)
{
    if (!(delta > 0.0)) throw std::invalid_argument("probe must lie below the gap (delta > 0)");
    if (!(omega > 0.0)) throw std::invalid_argument("probe frequency must be positive");
    if (!(m_r > 0.0)) throw std::invalid_argument("reduced mass must be positive");
    const Lifetimes lt = lifetimes_from_rates(rates);
    const double ratio = p_matrix / omega;
    return -(1.0 / (30.0 * std::numbers::pi)) * std::pow(ratio, 4) *
           std::pow(2.0 * m_r / delta, 1.5) * (lt.t1 / lt.t2);
}

std::pair<Complex, double> bloch_rhs(const BlochState& s, Complex rabi, double delta,
                                     const Lifetimes& lt)
{
    const Complex drho = Complex(-1.0 / lt.t2, delta) * s.rho_ba + Complex(0.0, 1.0) * rabi * s.w;
    const double dw = -(s.w + 1.0) / lt.t1 + 4.0 * std::imag(rabi * std::conj(s.rho_ba));
    return {drho, dw};
}

BlochState bloch_steady_state_ode(Complex rabi, double delta, const Lifetimes& lt,
                                  const OdeOptions& opts)
{
    lt.validate();
    const double wr = rabi.real();
    const double wi = rabi.imag();
    const double g2 = 1.0 / lt.t2;
    const double g1 = 1.0 / lt.t1;

    // x = (Re rho_ba, Im rho_ba, w);  dx/dt = a x + b.
    const std::array<std::array<double, 3>, 3> a{{
        {-g2, -delta, -wi},
        {delta, -g2, wr},
        {4.0 * wi, -4.0 * wr, -g1},
    }};
    const std::array<double, 3> b{0.0, 0.0, -g1};

    double a_norm = 0.0;
    for (const auto& row : a) {
        a_norm = std::max(a_norm, std::abs(row[0]) + std::abs(row[1]) + std::abs(row[2]));
    }

    auto residual = [&](const std::array<double, 3>& x) {
        double r = 0.0;
        double xn = 0.0;
        for (int i = 0; i < 3; ++i) {
            r = std::max(r, std::abs(a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2] + b[i]));
            xn = std::max(xn, std::abs(x[i]));
        }
        return r / (a_norm * xn + g1);
    };

    std::array<double, 3> x{0.0, 0.0, -1.0};
    double h = 0.01 * std::min(lt.t1, lt.t2);
    const double h_max = 1e8 * std::max(lt.t1, lt.t2);
    double res = residual(x);
    for (std::size_t step = 0; step < opts.max_steps; ++step) {
        if (res < opts.tolerance) return BlochState{Complex(x[0], x[1]), x[2]};
        std::array<std::array<double, 3>, 3> m{};
        std::array<double, 3> rhs{};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m[i][j] = (i == j ? 1.0 : 0.0) - h * a[i][j];
            rhs[i] = x[i] + h * b[i];
        }
        x = solve3(m, rhs);
        res = residual(x);
        h = std::min(2.0 * h, h_max);
    }
    if (res < opts.tolerance) return BlochState{Complex(x[0], x[1]), x[2]};
    throw ConvergenceError("Bloch steady state not reached within " +
                               std::to_string(opts.max_steps) + " steps (residual " +
                               std::to_string(res) + ")",
                           res);
}

Complex chi_from_coherence(Complex rho_ba, Complex rabi, double mu, double n_density)
{
    if (rabi == Complex{}) throw std::invalid_argument("chi undefined at zero drive");
    return -n_density * mu * mu * rho_ba / rabi;
}

double enhancement_exact(double delta, const EmitterParams& p_purcell, const EmitterParams& p_hom)
{
    if (delta == 0.0) throw std::invalid_argument("undefined at resonance");
    const double num = kerr_chi3(delta, p_purcell).real();
    const double den = kerr_chi3(delta, p_hom).real();
    if (den == 0.0) throw std::invalid_argument("homogeneous Re chi3 vanishes");
    return num / den;
}

double enhancement_max(const DecayRates& rates_vac)
{
    rates_vac.validate();
    const double rad = rates_vac.gamma_rad_eff;
    const double nr = rates_vac.gamma_nr;
    const double ph = rates_vac.gamma_phase;
    if (nr == 0.0) throw std::invalid_argument("enhancement unbounded");
    return (0.5 * nr + ph) / (0.5 * (nr + rad) + ph) * ((rad + nr) / nr);
}

double enhancement_asymptote(const DecayRates& purcell, const DecayRates& hom)
{
    const Lifetimes p = lifetimes_from_rates(purcell);
    const Lifetimes h = lifetimes_from_rates(hom);
    return (p.t1 * h.t2) / (h.t1 * p.t2);
}

double figure_of_merit(Complex chi3, double wavelength)
{
    if (chi3.imag() == 0.0) throw std::invalid_argument("figure of merit needs Im chi3 != 0");
    if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
    return chi3.real() / (wavelength * chi3.imag());
}

} // namespace purcell::bloch
