#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "purcell/errors.hpp"
#include "purcell/map.hpp"

using namespace purcell;
using namespace purcell::map;

namespace {

fdtd::PurcellSpectrum flat_spectrum(double value, double lo = 0.2, double hi = 0.8, std::size_t n = 121)
{
    fdtd::PurcellSpectrum s;
    s.frequencies = linear_grid(lo, hi, n);
    s.gamma_ratio.assign(n, value);
    return s;
}

// Smooth synthetic spectrum with a deep dip and edge peaks.
fdtd::PurcellSpectrum dip_spectrum()
{
    fdtd::PurcellSpectrum s;
    s.frequencies = linear_grid(0.2, 0.8, 301);
    for (double f : s.frequencies) {
        const double x = (f - 0.5) / 0.06;
        s.gamma_ratio.push_back(1.0 + 0.8 * std::exp(-std::pow((std::abs(x) - 1.3) / 0.3, 2)) -
                                (1.0 - 1e-6) * std::exp(-std::pow(x, 8)));
    }
    return s;
}

MaterialPreset preset(double rad, double nr, double ph)
{
    return {"test", {rad, nr, ph}, ""};
}

} // namespace

TEST_CASE("builtin presets")
{
    CHECK(builtin_presets().size() == 5);
    CHECK(find_preset("qw_gaas_200K").rates_vac == bloch::DecayRates{1.0, 0.1, 10.0});
    CHECK(find_preset("qw_gaas_225K").rates_vac == bloch::DecayRates{1.0, 1.0, 10.0});
    CHECK(find_preset("qw_gaas_285K").rates_vac == bloch::DecayRates{1.0, 10.0, 10.0});
    CHECK(find_preset("nanocrystal_cdse").rates_vac.gamma_nr == doctest::Approx(1.0 / 39.0));
    CHECK(find_preset("bulk_nanocrystal").rates_vac.gamma_nr == 1.0);
    for (const auto& p : builtin_presets()) CHECK(p.rates_vac.gamma_rad_eff == 1.0);
    CHECK_THROWS_AS(find_preset("qw_gaas_300K"), std::invalid_argument);
}

TEST_CASE("Purcell factor scales only the radiative rate")
{
    const auto p = find_preset("qw_gaas_200K");
    CHECK(purcell_to_rates(1.0, p) == p.rates_vac);
    const auto r0 = purcell_to_rates(0.0, p);
    const auto lt = bloch::lifetimes_from_rates(r0);
    CHECK(lt.t1 == doctest::Approx(10.0));
    CHECK(lt.t2 == doctest::Approx(1.0 / 10.05));
    CHECK(bloch::enhancement_asymptote(r0, p.rates_vac) == doctest::Approx(10.478).epsilon(1e-4));

    const auto r2 = purcell_to_rates(2.0, p);
    CHECK(r2.gamma_rad_eff == 2.0);
    CHECK(bloch::enhancement_asymptote(r2, p.rates_vac) < 1.0);
    CHECK_THROWS_AS(purcell_to_rates(-0.1, p), std::invalid_argument);
}

TEST_CASE("monotone cubic interpolation")
{
    const MonotoneCubic line({0.0, 1.0, 2.5, 4.0}, {1.0, 3.0, 6.0, 9.0});
    CHECK(line(0.5) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(line(3.2) == doctest::Approx(7.4).epsilon(1e-14));
    CHECK(line(-1.0) == 1.0);
    CHECK(line(5.0) == 9.0);
    CHECK_THROWS_AS(MonotoneCubic({0.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneCubic({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);

    testgen::Gen g(41);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = g.integer(3, 30);
        std::vector<double> x(1, 0.0);
        std::vector<double> y(1, g.uniform(0.0, 1.0));
        for (int k = 1; k < n; ++k) {
            x.push_back(x.back() + g.log_uniform(0.01, 1.0));
            y.push_back(y.back() + (g.coin() ? 0.0 : g.log_uniform(1e-4, 1.0)));
        }
        const MonotoneCubic m(x, y);
        double prev = m(x.front());
        bool monotone = true;
        for (int s = 0; s <= 2000; ++s) {
            const double v = m(x.front() + (x.back() - x.front()) * s / 2000.0);
            monotone = monotone && v >= prev - 1e-14;
            prev = v;
        }
        CHECK(monotone);
        for (int k = 0; k < n; ++k) CHECK(m(x[static_cast<std::size_t>(k)]) == doctest::Approx(y[static_cast<std::size_t>(k)]).epsilon(1e-13));
    }

    // Non-negative data stays non-negative.
    const MonotoneCubic pos({0, 1, 2, 3, 4}, {1.0, 1e-6, 0.0, 1e-6, 2.0});
    for (int s = 0; s <= 400; ++s) CHECK(pos(s / 100.0) >= 0.0);
}

TEST_CASE("uniform environment gives unit enhancement")
{
    const auto s = flat_spectrum(1.0);
    const auto m = build_map(s, find_preset("qw_gaas_200K"), linear_grid(0.3, 0.7, 41), linear_grid(0.3, 0.7, 41));
    for (std::size_t k = 0; k < m.eta.size(); ++k) {
        if (m.masked[k]) continue;
        CHECK(m.eta[k] == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (std::size_t e = 0; e < 41; ++e) CHECK(m.masked[m.index(e, e)] == 1);
    CHECK(std::isnan(m.at(7, 7)));
}

TEST_CASE("deep suppression reaches the enhancement limit")
{
    const auto s = dip_spectrum();
    for (const char* name : {"qw_gaas_200K", "qw_gaas_225K", "qw_gaas_285K"}) {
        const auto p = find_preset(name);
        const auto m = build_map(s, p, linear_grid(0.25, 0.75, 101), {0.5});
        CHECK(m.purcell_factor[0] < 1e-5);
        const double limit = bloch::enhancement_max(p.rates_vac);
        for (std::size_t ph = 0; ph < m.omega_ph_grid.size(); ++ph) {
            if (std::abs(m.detuning_t2(0, ph)) > 100.0) {
                CHECK(m.at(0, ph) == doctest::Approx(limit).epsilon(2e-3));
            }
        }
    }
}

TEST_CASE("map grid checks")
{
    const auto s = flat_spectrum(0.5, 0.3, 0.7);
    const auto p = find_preset("qw_gaas_225K");
    CHECK_THROWS_AS(build_map(s, p, linear_grid(0.25, 0.6, 5), linear_grid(0.3, 0.6, 5)), std::invalid_argument);
    CHECK_THROWS_AS(build_map(s, p, linear_grid(0.3, 0.6, 5), linear_grid(0.4, 0.75, 5)), std::invalid_argument);
    CHECK_THROWS_AS(build_map(s, p, {0.5, 0.4}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(build_map(s, p, {0.4, 0.4}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(build_map(flat_spectrum(0.0), preset(1.0, 0.0, 1.0), {0.5}, {0.4}), NumericalError);
    CHECK_THROWS_AS(linear_grid(0.5, 0.4, 3), std::invalid_argument);
}

TEST_CASE("rows depend on the transition frequency only through F")
{
    fdtd::PurcellSpectrum s;
    s.frequencies = {0.125, 0.25, 0.5, 0.75};
    s.gamma_ratio = {0.3, 0.7, 0.7, 0.3};
    MapOptions o;
    o.mask_factor = 0.0;
    // Binary-exact offsets give identical detunings for both rows.
    const auto a = build_map(s, find_preset("qw_gaas_200K"), {0.375, 0.4375}, {0.25}, o);
    const auto b = build_map(s, find_preset("qw_gaas_200K"), {0.625, 0.6875}, {0.5}, o);
    CHECK(a.purcell_factor[0] == b.purcell_factor[0]);
    CHECK(a.eta == b.eta);
}

TEST_CASE("enhancement decreases with the Purcell factor at large detuning")
{
    testgen::Gen g(42);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = preset(1.0, g.log_uniform(0.01, 10.0), g.log_uniform(0.01, 100.0));
        bloch::EmitterParams hom;
        hom.rates = p.rates_vac;
        const double t2 = bloch::lifetimes_from_rates(p.rates_vac).t2;
        const double delta = g.sign() * 1e3 / t2;
        double prev = 1e300;
        for (double f : {0.0, 0.1, 0.5, 1.0, 2.0, 10.0}) {
            bloch::EmitterParams pur = hom;
            pur.rates = purcell_to_rates(f, p);
            const double eta = bloch::enhancement_exact(delta, pur, hom);
            CHECK(eta < prev);
            prev = eta;
        }
    }
}

TEST_CASE("large-detuning cells match the lifetime ratio")
{
    const auto s = dip_spectrum();
    const auto p = find_preset("qw_gaas_225K");
    const auto m = build_map(s, p, linear_grid(0.2, 0.8, 121), linear_grid(0.3, 0.7, 41));
    int checked = 0;
    for (std::size_t e = 0; e < m.omega_elec_grid.size(); ++e) {
        const double asym = bloch::enhancement_asymptote(purcell_to_rates(m.purcell_factor[e], p), p.rates_vac);
        for (std::size_t ph = 0; ph < m.omega_ph_grid.size(); ++ph) {
            if (std::abs(m.detuning_t2(e, ph)) <= 100.0) continue;
            CHECK(std::abs(m.at(e, ph) - asym) / m.at(e, ph) < 1e-3);
            ++checked;
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("radiative-only emitter shows no enhancement")
{
    testgen::Gen g(43);
    const auto p = preset(1.0, 0.0, 0.0);
    bloch::EmitterParams hom;
    hom.rates = p.rates_vac;
    for (int trial = 0; trial < 100; ++trial) {
        const double f = g.log_uniform(1e-4, 100.0);
        bloch::EmitterParams pur = hom;
        pur.rates = purcell_to_rates(f, p);
        const double t2 = std::min(bloch::lifetimes_from_rates(pur.rates).t2, 2.0);
        const double eta = bloch::enhancement_exact(g.sign() * 1e5 / t2, pur, hom);
        CHECK(eta == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("map output is independent of thread count and deterministic")
{
    const auto s = dip_spectrum();
    const auto p = find_preset("qw_gaas_200K");
    MapOptions one;
    MapOptions four;
    four.threads = 4;
    const auto a = build_map(s, p, linear_grid(0.3, 0.7, 60), linear_grid(0.3, 0.7, 37), one);
    const auto b = build_map(s, p, linear_grid(0.3, 0.7, 60), linear_grid(0.3, 0.7, 37), four);
    const std::string ca = map_to_csv(a, "abc");
    CHECK(ca == map_to_csv(b, "abc"));
    CHECK(ca.find("# config_hash=abc\n") == 0);
    CHECK(ca.find("omega_ph,omega_elec,eta,masked\n") != std::string::npos);
    CHECK(ca.find(",nan,1\n") != std::string::npos);
    CHECK(a.spectrum_hash.size() == 16);
}
