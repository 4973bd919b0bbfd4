#include <doctest.h>

#include "gen.hpp"
#include "purcell/config.hpp"
#include "purcell/errors.hpp"

using namespace purcell;
using namespace purcell::config;

namespace {

std::string error_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

RunConfig random_config(testgen::Gen& g)
{
    RunConfig c;
    c.geometry.lattice_constant = g.uniform(0.5, 2.0);
    c.geometry.hole_radius = c.geometry.lattice_constant * g.uniform(0.05, 0.49);
    c.geometry.eps_background = g.uniform(1.0, 20.0);
    c.geometry.eps_hole = g.uniform(1.0, 3.0);
    c.geometry.num_periods = g.integer(1, 9);
    c.geometry.defect = g.coin() ? geometry::Defect::none : geometry::Defect::central_site_removed;
    c.raster.padding = g.uniform(0.0, 3.0);
    c.raster.absorber_thickness = g.uniform(0.0, 3.0);
    c.raster.subsamples = g.integer(1, 20);
    c.source.center_frequency = g.uniform(0.1, 1.0);
    c.source.bandwidth = g.uniform(0.01, 0.3);
    c.source.amplitude = g.sign() * g.log_uniform(1e-3, 1e3);
    c.source.time_shift = g.uniform(0.0, 10.0);
    c.simulation.resolution = g.integer(10, 80);
    c.simulation.runtime = g.uniform(0.0, 1000.0);
    c.simulation.apodization = g.uniform(0.0, 300.0);
    c.simulation.structure = static_cast<Structure>(g.integer(0, 2));
    c.simulation.uniform_eps = g.uniform(1.0, 15.0);
    c.simulation.solver.stencil_order = g.coin() ? 2 : 4;
    c.simulation.solver.courant = g.uniform(0.05, 0.99) * fdtd::max_courant(c.simulation.solver.stencil_order);
    c.simulation.solver.absorber = g.coin();
    c.simulation.solver.pml_reflection = g.log_uniform(1e-9, 0.1);
    c.simulation.solver.pml_grading = g.uniform(1.0, 4.0);
    c.simulation.solver.threads = g.integer(1, 16);
    c.analysis.window.f_min = g.uniform(0.05, 0.3);
    c.analysis.window.f_max = g.uniform(0.6, 1.2);
    c.analysis.window.count = static_cast<std::size_t>(g.integer(2, 2000));
    c.analysis.gap_threshold = g.uniform(0.01, 0.99);
    switch (g.integer(0, 2)) {
    case 0:
        c.material.preset = "inline";
        c.material.gamma_rad = g.uniform(0.0, 5.0);
        c.material.gamma_nr = g.uniform(0.01, 5.0);
        c.material.gamma_phase = g.uniform(0.0, 50.0);
        c.material.has_gamma_phase = true;
        break;
    case 1:
        c.material.preset = "nanocrystal_cdse";
        c.material.gamma_phase = g.uniform(0.0, 50.0);
        c.material.has_gamma_phase = true;
        break;
    default:
        c.material.preset = "qw_gaas_285K";
    }
    c.chi3.delta_min = -g.uniform(0.0, 100.0);
    c.chi3.delta_max = g.uniform(0.0, 100.0);
    c.chi3.count = static_cast<std::size_t>(g.integer(2, 500));
    c.chi3.e_field_sq = g.uniform(0.0, 2.0);
    c.chi3.mu = g.uniform(0.1, 3.0);
    c.chi3.n_density = g.uniform(0.1, 3.0);
    c.chi3.wavelength = g.uniform(0.1, 3.0);
    c.chi3.rabi_values.clear();
    for (int k = g.integer(1, 5); k > 0; --k) c.chi3.rabi_values.push_back(g.log_uniform(1e-3, 10.0));
    c.map.spectrum_file = g.coin() ? "" : "results/spectrum.csv";
    c.map.ph_min = c.analysis.window.f_min + 0.01;
    c.map.ph_max = c.analysis.window.f_max - g.uniform(0.0, 0.1);
    c.map.ph_count = static_cast<std::size_t>(g.integer(2, 300));
    c.map.elec_min = c.analysis.window.f_min + g.uniform(0.0, 0.1);
    c.map.elec_max = c.analysis.window.f_max;
    c.map.elec_count = static_cast<std::size_t>(g.integer(2, 300));
    c.map.rate_unit = g.log_uniform(1e-6, 1e-2);
    c.map.mask_factor = g.uniform(0.0, 5.0);
    c.output_directory = g.coin() ? "out" : "runs/case 7";
    return c;
}

} // namespace

TEST_CASE("empty configuration yields documented defaults")
{
    const RunConfig c = parse_config("");
    CHECK(c == RunConfig{});
    CHECK(c.geometry.hole_radius == 0.45);
    CHECK(c.geometry.eps_background == 13.0);
    CHECK(c.geometry.num_periods == 5);
    CHECK(c.geometry.defect == geometry::Defect::central_site_removed);
    CHECK(c.simulation.resolution == 20.0);
    CHECK(c.simulation.solver.courant == 0.5);
    CHECK(c.simulation.structure == Structure::crystal);
    CHECK(c.material.preset == "qw_gaas_200K");
    CHECK(c.map.rate_unit == 1e-4);
    CHECK(c.map.mask_factor == 2.0);
    CHECK(c.output_directory == "out");
}

TEST_CASE("values, comments and whitespace")
{
    const auto c = parse_config(
        "# comment\n"
        "[geometry]\n"
        "  hole_radius = 0.4   ; trailing comment\n"
        "defect=none\n"
        "\n"
        "[simulation]\n"
        "structure = uniform\n"
        "uniform_eps = 13\n"
        "absorber = false\n"
        "[chi3]\n"
        "rabi_values = 0.1, 1e-2,3\n"
        "[material]\n"
        "preset = inline\n"
        "gamma_rad = 1\n"
        "gamma_nr = 0.5\n"
        "gamma_phase = 0\n");
    CHECK(c.geometry.hole_radius == 0.4);
    CHECK(c.geometry.defect == geometry::Defect::none);
    CHECK(c.simulation.structure == Structure::uniform);
    CHECK(!c.simulation.solver.absorber);
    CHECK(c.chi3.rabi_values == std::vector<double>{0.1, 0.01, 3.0});
    const auto m = resolve_material(c.material);
    CHECK(m.rates_vac == bloch::DecayRates{1.0, 0.5, 0.0});

    const auto d = parse_config("[material]\npreset = nanocrystal_cdse\ngamma_phase = 4\n");
    CHECK(resolve_material(d.material).rates_vac.gamma_phase == 4.0);
    CHECK(resolve_material(d.material).rates_vac.gamma_nr == doctest::Approx(1.0 / 39.0));
}

TEST_CASE("diagnostics name the line and field")
{
    CHECK(error_of("[geometry]\nhole_radius = 0.6\n").find("line 2: geometry.hole_radius") == 0);
    CHECK(error_of("[geometry]\nhole_radus = 0.3\n").find("line 2: unknown key 'hole_radus'") == 0);
    CHECK(error_of("[geometri]\n").find("line 1: unknown section") == 0);
    CHECK(error_of("hole_radius = 0.3\n").find("line 1:") == 0);
    CHECK(error_of("[geometry]\nhole_radius = 0.3x\n").find("line 2: geometry.hole_radius: expected a finite number") == 0);
    CHECK(error_of("[geometry]\nnum_periods = 2.5\n").find("expected an integer") != std::string::npos);
    CHECK(error_of("[geometry]\nhole_radius = 0.3\nhole_radius = 0.2\n").find("line 3:") == 0);
    CHECK(error_of("[geometry]\nhole_radius\n").find("line 2: expected 'key = value'") == 0);
    CHECK(error_of("[material]\npreset = inline\ngamma_rad = 1\ngamma_nr = 0\n").find("material.gamma_phase: missing required key") == 0);
    CHECK(error_of("[material]\npreset = qw_gaas_200K\ngamma_nr = 3\n").find("line 3: material.gamma_nr") == 0);
    CHECK(error_of("[material]\npreset = gaas\n").find("line 2: material.preset") == 0);
    CHECK(error_of("[simulation]\ncourant = 0.65\n").find("line 2: simulation.courant") == 0);
    CHECK(error_of("[simulation]\nresolution = 8\n").find("line 2: simulation.resolution") == 0);
    CHECK(error_of("[simulation]\nabsorber = yes\n").find("expected true or false") != std::string::npos);
    CHECK(error_of("[map]\nph_min = 0.1\n").find("line 2: map.ph_min") == 0);
    CHECK(error_of("[analysis]\ngap_threshold = 1.5\n").find("line 2: analysis.gap_threshold") == 0);
}

TEST_CASE("serialization round trip")
{
    testgen::Gen g(51);
    for (int trial = 0; trial < 200; ++trial) {
        const RunConfig c = random_config(g);
        REQUIRE_NOTHROW(c.validate());
        const std::string text = serialize(c);
        const RunConfig back = parse_config(text);
        CHECK(back == c);
        CHECK(serialize(back) == text);
        CHECK(config_hash(back) == config_hash(c));
    }
}

TEST_CASE("hashes")
{
    RunConfig a;
    RunConfig b = a;
    b.simulation.solver.threads = 8;
    b.output_directory = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    CHECK(geometry_hash(a) == geometry_hash(b));
    b.map.rate_unit = 2e-4;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(geometry_hash(a) == geometry_hash(b));
    b.geometry.hole_radius = 0.44;
    CHECK(geometry_hash(a) != geometry_hash(b));
    b = a;
    b.simulation.resolution = 40.0;
    CHECK(geometry_hash(a) != geometry_hash(b));
    CHECK(config_hash(a).size() == 16);
}
