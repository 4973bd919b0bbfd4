#include <doctest.h>

#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "purcell/errors.hpp"
#include "purcell/io.hpp"
#include "purcell/pipeline.hpp"
#include "purcell/validation.hpp"

using namespace purcell;
using config::RunConfig;

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    for (const auto& line : io::split(text, '\n')) {
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(io::split(line, ','));
    }
    return rows;
}

std::string body(const std::string& text)
{
    std::string out;
    for (const auto& line : io::split(text, '\n')) {
        if (!line.empty() && line[0] != '#') out += line + "\n";
    }
    return out;
}

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto p = std::filesystem::temp_directory_path() / ("purcell_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

RunConfig small_run()
{
    RunConfig c;
    c.geometry.num_periods = 2;
    c.raster.padding = 0.5;
    c.simulation.resolution = 10.0;
    c.simulation.runtime = 40.0;
    c.simulation.apodization = 20.0;
    c.analysis.window.count = 61;
    return c;
}

} // namespace

TEST_CASE("chi3 table")
{
    RunConfig c;
    c.chi3.delta_min = -2.0;
    c.chi3.delta_max = 2.0;
    c.chi3.count = 5;
    const auto rows = csv_rows(pipeline::chi3_table(c));
    REQUIRE(rows.size() == 6);
    CHECK(rows[0][0] == "delta");
    REQUIRE(rows[3][0] == "0");
    CHECK(rows[3][1] == "0");
    CHECK(std::stod(rows[3][2]) < 0.0);
    CHECK(rows[3][3] == "nan");
    CHECK(std::stod(rows[5][1]) > 0.0);
    CHECK(std::stod(rows[1][1]) == doctest::Approx(-std::stod(rows[5][1])));
}

TEST_CASE("oracle table agrees with the closed form")
{
    RunConfig c;
    c.chi3.count = 21;
    const auto rows = csv_rows(pipeline::oracle_table(c));
    REQUIRE(rows.size() == 1 + 21 * c.chi3.rabi_values.size());
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(std::stod(rows[k][6]) < 1e-4);
}

TEST_CASE("vacuum structure gives a unit spectrum")
{
    auto c = small_run();
    c.simulation.structure = config::Structure::vacuum;
    const auto r = pipeline::compute_spectrum(c);
    REQUIRE(!r.spectrum.gamma_ratio.empty());
    for (double g : r.spectrum.gamma_ratio) CHECK(std::abs(g - 1.0) <= 1e-6);
    CHECK(!r.gap.has_value());
    CHECK(r.spectrum.metadata.config_hash == config::config_hash(c));
}

TEST_CASE("structure and vacuum runs may run concurrently")
{
    auto c = small_run();
    const auto a = pipeline::compute_spectrum(c);
    c.simulation.solver.threads = 4;
    const auto b = pipeline::compute_spectrum(c);
    CHECK(a.spectrum.gamma_ratio == b.spectrum.gamma_ratio);
    CHECK(fdtd::spectrum_to_csv(a.spectrum) == fdtd::spectrum_to_csv(b.spectrum));
}

TEST_CASE("subcommand outputs are written with provenance and are reproducible")
{
    const auto dir = scratch_dir("run");
    auto c = small_run();
    c.output_directory = dir.string();
    c.map.ph_count = 41;
    c.map.elec_count = 31;

    const auto files = pipeline::run_map(c);
    REQUIRE(files.size() == 4);
    for (const auto& f : files) CHECK(std::filesystem::exists(f));
    const std::string hash = config::config_hash(c);
    const std::string map1 = io::read_file((dir / "map.csv").string());
    CHECK(map1.find("# config_hash=" + hash) == 0);
    CHECK(io::read_file((dir / "spectrum.csv").string()).find("config_hash=" + hash) != std::string::npos);

    const auto side = nlohmann::json::parse(io::read_file((dir / "map.json").string()));
    CHECK(side["config_hash"] == hash);
    CHECK(side["config"]["geometry"]["num_periods"] == "2");
    CHECK(side["material"]["name"] == "qw_gaas_200K");

    // Reusing the written spectrum gives the same map.
    auto cached = c;
    cached.map.spectrum_file = (dir / "spectrum.csv").string();
    cached.output_directory = (dir / "cached").string();
    pipeline::run_map(cached);
    CHECK(body(io::read_file((dir / "cached" / "map.csv").string())) == body(map1));

    pipeline::run_chi3(c);
    pipeline::run_oracle(c);
    CHECK(io::read_file((dir / "chi3.csv").string()).find("# config_hash=" + hash) == 0);
    CHECK(io::read_file((dir / "oracle.csv").string()).find("# config_hash=" + hash) == 0);
    CHECK(!std::filesystem::exists(dir / "map.csv.tmp"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("map errors")
{
    const auto dir = scratch_dir("errors");
    auto c = small_run();
    c.output_directory = dir.string();
    c.map.spectrum_file = (dir / "missing.csv").string();
    CHECK_THROWS_AS(pipeline::run_map(c), IoError);

    fdtd::PurcellSpectrum s;
    s.frequencies = {0.3, 0.5};
    s.gamma_ratio = {1.0, 1.0};
    CHECK_THROWS_AS(pipeline::compute_map(c, s), ConfigError);
}

TEST_CASE("analytic self-checks pass")
{
    const auto results = validation::run_analytic_checks();
    CHECK(results.size() >= 8);
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
    }
    CHECK(validation::format_table(results).find("PASS") == 0);
}
