#include "purcell/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "purcell/bloch.hpp"
#include "purcell/map.hpp"

namespace purcell::validation {

namespace {

using bloch::Complex;
using bloch::DecayRates;
using bloch::Lifetimes;

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = lo * std::pow(hi / lo, double(k) / (n - 1));
    return g;
}

// d chi / d|E|^2 at zero field from forward differences in |E|^2 with two
// Richardson levels.
Complex zero_field_slope(double delta, const Lifetimes& lt)
{
    const double scale = (1.0 + delta * delta * lt.t2 * lt.t2) / (4.0 * lt.t1 * lt.t2);
    const Complex chi0 = bloch::total_chi(delta, 0.0, 0.0, lt);
    auto d = [&](double x) { return (bloch::total_chi(delta, x, 0.0, lt) - chi0) / x; };
    const double x = 1e-3 * scale;
    auto r1 = [&](double h) { return 2.0 * d(h / 2.0) - d(h); };
    return (4.0 * r1(x / 2.0) - r1(x)) / 3.0;
}

CheckResult check_eq9()
{
    const struct { DecayRates r; double expected; } cases[] = {
        {{1.0, 0.1, 10.0}, 10.478}, {{1.0, 1.0, 10.0}, 1.909}, {{1.0, 10.0, 10.0}, 1.064}};
    CheckResult res{"enhancement limit values", true, ""};
    for (const auto& c : cases) {
        const double v = bloch::enhancement_max(c.r);
        res.passed = res.passed && std::abs(v - c.expected) < 0.01;
        res.detail += (res.detail.empty() ? "" : ", ") + num(v);
    }
    return res;
}

CheckResult check_dephasing_cancellation()
{
    double worst = 0.0;
    for (double rad : log_grid(0.01, 100.0, 10)) {
        for (double nr : log_grid(0.01, 100.0, 10)) {
            worst = std::max(worst, std::abs(bloch::enhancement_max({rad, nr, 0.0}) - 1.0));
        }
    }
    return {"zero dephasing gives unit enhancement", worst <= 1e-12, "max |eta - 1| = " + num(worst)};
}

CheckResult check_expansion()
{
    double worst = 0.0;
    int points = 0;
    for (double delta : log_grid(0.01, 100.0, 5)) {
        for (double t1 : log_grid(0.01, 100.0, 5)) {
            for (double t2 : log_grid(0.01, 100.0, 5)) {
                if (t2 > 2.0 * t1) continue;
                const Lifetimes lt{t1, t2};
                const Complex expect = 3.0 * bloch::kerr_chi3(delta, lt);
                worst = std::max(worst, std::abs(zero_field_slope(delta, lt) - expect) / std::abs(expect));
                ++points;
            }
        }
    }
    return {"weak-field slope equals 3 chi3", worst < 1e-6,
            std::to_string(points) + " points, max rel err " + num(worst)};
}

CheckResult check_ode()
{
    double worst = 0.0;
    for (double t1 : {0.1, 1.0, 10.0}) {
        for (double f : {0.05, 0.5, 1.0}) {
            const Lifetimes lt{t1, 2.0 * f * t1};
            for (double s : {0.01, 0.3, 3.0}) {
                const double rabi = s / std::sqrt(lt.t1 * lt.t2);
                for (double x : {-4.0, 0.0, 0.7, 20.0}) {
                    const double delta = x / lt.t2;
                    const auto st = bloch::bloch_steady_state_ode({rabi, 0.0}, delta, lt);
                    const Complex ode = bloch::chi_from_coherence(st.rho_ba, {rabi, 0.0});
                    const Complex ref = bloch::total_chi(delta, rabi * rabi, 0.0, lt);
                    worst = std::max(worst, std::abs(ode - ref) / std::abs(ref));
                }
            }
        }
    }
    return {"Bloch steady state matches closed form", worst < 1e-4, "max rel err " + num(worst)};
}

CheckResult check_large_detuning()
{
    const Lifetimes lt{1.0, 0.5};
    bool ok = true;
    std::string detail;
    for (double x : {10.0, 30.0, 100.0}) {
        const double delta = x / lt.t2;
        const double exact = bloch::kerr_chi3(delta, lt).real();
        const double gap = std::abs(bloch::kerr_chi3_large_detuning(delta, lt) - exact) / exact;
        ok = ok && gap < 3.0 / (x * x);
        detail += (detail.empty() ? "" : ", ") + num(gap * x * x) + "/x^2";
    }
    return {"large-detuning form within 3/(delta T2)^2", ok, detail};
}

CheckResult check_figure_of_merit()
{
    double worst = 0.0;
    bool ordered = true;
    for (const auto& preset : map::builtin_presets()) {
        const auto lv = bloch::lifetimes_from_rates(preset.rates_vac);
        for (int k = 0; k < 20; ++k) {
            const double f = k / 20.0;
            const auto lp = bloch::lifetimes_from_rates(map::purcell_to_rates(f, preset));
            for (double delta : {-30.0, -1.0, 0.5, 7.0, 200.0}) {
                const double ratio = bloch::figure_of_merit(bloch::kerr_chi3(delta, lp), 1.0) /
                                     bloch::figure_of_merit(bloch::kerr_chi3(delta, lv), 1.0);
                const double expect = lp.t2 / lv.t2;
                worst = std::max(worst, std::abs(ratio - expect) / expect);
                ordered = ordered && ratio >= 1.0 - 1e-10;
            }
        }
    }
    return {"figure of merit ratio equals T2 ratio >= 1", ordered && worst < 1e-10,
            "max rel err " + num(worst)};
}

CheckResult check_chi3_example()
{
    const Complex v = bloch::kerr_chi3(5.0, Lifetimes{1.0, 0.5});
    const bool ok = std::abs(v - Complex(0.015855, -0.0063417)) < 5e-6;
    return {"chi3 at delta = 5, T1 = 1, T2 = 0.5", ok, num(v.real()) + " " + num(v.imag()) + "i"};
}

CheckResult check_lifetimes()
{
    const auto a = bloch::lifetimes_from_rates({1.0, 0.0, 0.0});
    const auto b = bloch::lifetimes_from_rates({1.0, 0.1, 10.0});
    const bool ok = a.t1 == 1.0 && a.t2 == 2.0 && std::abs(b.t1 - 0.90909) < 1e-5 && std::abs(b.t2 - 0.094787) < 1e-6;
    return {"lifetimes from rates", ok, "T2 = " + num(b.t2)};
}

} // namespace

std::vector<CheckResult> run_analytic_checks()
{
    return {check_lifetimes(),       check_chi3_example(), check_eq9(),
            check_dephasing_cancellation(), check_expansion(), check_ode(),
            check_large_detuning(),  check_figure_of_merit()};
}

std::string format_table(const std::vector<CheckResult>& results)
{
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    std::string out;
    for (const auto& r : results) {
        out += (r.passed ? "PASS  " : "FAIL  ") + r.name + std::string(width - r.name.size() + 2, ' ') + r.detail + "\n";
    }
    return out;
}

} // namespace purcell::validation
