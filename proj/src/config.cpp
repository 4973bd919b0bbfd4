#include "purcell/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "purcell/errors.hpp"
#include "purcell/io.hpp"

namespace purcell::config {

std::string to_string(Structure s)
{
    switch (s) {
    case Structure::crystal: return "crystal";
    case Structure::vacuum: return "vacuum";
    case Structure::uniform: return "uniform";
    }
    return "crystal";
}

bool operator==(const SimulationConfig& a, const SimulationConfig& b)
{
    return a.resolution == b.resolution && a.runtime == b.runtime && a.apodization == b.apodization &&
           a.structure == b.structure && a.uniform_eps == b.uniform_eps &&
           a.solver.courant == b.solver.courant && a.solver.stencil_order == b.solver.stencil_order &&
           a.solver.absorber == b.solver.absorber && a.solver.pml_reflection == b.solver.pml_reflection &&
           a.solver.pml_grading == b.solver.pml_grading && a.solver.threads == b.solver.threads &&
           a.solver.stability_check_interval == b.solver.stability_check_interval;
}

bool operator==(const RunConfig& a, const RunConfig& b)
{
    return a.geometry == b.geometry && a.raster.padding == b.raster.padding &&
           a.raster.absorber_thickness == b.raster.absorber_thickness &&
           a.raster.subsamples == b.raster.subsamples && a.source == b.source &&
           a.simulation == b.simulation && a.analysis == b.analysis && a.material == b.material &&
           a.chi3 == b.chi3 && a.map == b.map && a.output_directory == b.output_directory;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg)
{
    throw ConfigError(field + ": " + msg);
}

void require(bool ok, const std::string& field, const std::string& msg)
{
    if (!ok) fail(field, msg);
}

// ------------------------------------------------------------ value parsing

double parse_double(const std::string& v)
{
    double out = 0.0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw ConfigError("expected a finite number, got '" + v + "'");
    }
    return out;
}

long long parse_integer(const std::string& v)
{
    long long out = 0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError("expected an integer, got '" + v + "'");
    return out;
}

int parse_int(const std::string& v)
{
    const long long x = parse_integer(v);
    if (x < -1'000'000'000LL || x > 1'000'000'000LL) throw ConfigError("integer out of range: '" + v + "'");
    return static_cast<int>(x);
}

std::size_t parse_count(const std::string& v)
{
    const long long x = parse_integer(v);
    if (x < 0) throw ConfigError("expected a non-negative integer, got '" + v + "'");
    return static_cast<std::size_t>(x);
}

bool parse_bool(const std::string& v)
{
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("expected true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v)
{
    std::vector<double> out;
    for (const auto& item : io::split(v, ',')) out.push_back(parse_double(io::trim(item)));
    return out;
}

Structure parse_structure(const std::string& v)
{
    if (v == "crystal") return Structure::crystal;
    if (v == "vacuum") return Structure::vacuum;
    if (v == "uniform") return Structure::uniform;
    throw ConfigError("expected crystal, vacuum or uniform, got '" + v + "'");
}

std::string fmt(double v) { return io::format_double(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

std::string fmt(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + fmt(v[k]);
    return out;
}

// ------------------------------------------------------------- field table

struct Field {
    std::string section;
    std::string key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
    std::function<bool(const RunConfig&)> emitted = [](const RunConfig&) { return true; };
};

#define PK_DOUBLE(sec, name, member)                                                   \
    Field{sec, name, [](RunConfig& c, const std::string& v) { c.member = parse_double(v); }, \
          [](const RunConfig& c) { return fmt(c.member); }}
#define PK_INT(sec, name, member)                                                      \
    Field{sec, name, [](RunConfig& c, const std::string& v) { c.member = parse_int(v); },    \
          [](const RunConfig& c) { return std::to_string(c.member); }}
#define PK_COUNT(sec, name, member)                                                    \
    Field{sec, name, [](RunConfig& c, const std::string& v) { c.member = parse_count(v); },  \
          [](const RunConfig& c) { return std::to_string(c.member); }}

bool is_inline(const RunConfig& c) { return c.material.preset == "inline"; }

const std::vector<Field>& fields()
{
    static const std::vector<Field> table{
        PK_DOUBLE("geometry", "lattice_constant", geometry.lattice_constant),
        PK_DOUBLE("geometry", "hole_radius", geometry.hole_radius),
        PK_DOUBLE("geometry", "eps_background", geometry.eps_background),
        PK_DOUBLE("geometry", "eps_hole", geometry.eps_hole),
        PK_INT("geometry", "num_periods", geometry.num_periods),
        Field{"geometry", "defect",
              [](RunConfig& c, const std::string& v) {
                  try {
                      c.geometry.defect = geometry::defect_from_string(v);
                  } catch (const std::invalid_argument& e) {
                      throw ConfigError(e.what());
                  }
              },
              [](const RunConfig& c) { return geometry::to_string(c.geometry.defect); }},

        PK_DOUBLE("raster", "padding", raster.padding),
        PK_DOUBLE("raster", "absorber_thickness", raster.absorber_thickness),
        PK_INT("raster", "subsamples", raster.subsamples),

        PK_DOUBLE("source", "center_frequency", source.center_frequency),
        PK_DOUBLE("source", "bandwidth", source.bandwidth),
        PK_DOUBLE("source", "amplitude", source.amplitude),
        PK_DOUBLE("source", "time_shift", source.time_shift),

        PK_DOUBLE("simulation", "resolution", simulation.resolution),
        PK_DOUBLE("simulation", "runtime", simulation.runtime),
        PK_DOUBLE("simulation", "apodization", simulation.apodization),
        Field{"simulation", "structure",
              [](RunConfig& c, const std::string& v) { c.simulation.structure = parse_structure(v); },
              [](const RunConfig& c) { return to_string(c.simulation.structure); }},
        PK_DOUBLE("simulation", "uniform_eps", simulation.uniform_eps),
        PK_DOUBLE("simulation", "courant", simulation.solver.courant),
        PK_INT("simulation", "stencil_order", simulation.solver.stencil_order),
        Field{"simulation", "absorber",
              [](RunConfig& c, const std::string& v) { c.simulation.solver.absorber = parse_bool(v); },
              [](const RunConfig& c) { return fmt(c.simulation.solver.absorber); }},
        PK_DOUBLE("simulation", "pml_reflection", simulation.solver.pml_reflection),
        PK_DOUBLE("simulation", "pml_grading", simulation.solver.pml_grading),
        PK_INT("simulation", "threads", simulation.solver.threads),

        PK_DOUBLE("analysis", "f_min", analysis.window.f_min),
        PK_DOUBLE("analysis", "f_max", analysis.window.f_max),
        PK_COUNT("analysis", "count", analysis.window.count),
        PK_DOUBLE("analysis", "gap_threshold", analysis.gap_threshold),

        Field{"material", "preset", [](RunConfig& c, const std::string& v) { c.material.preset = v; },
              [](const RunConfig& c) { return c.material.preset; }},
        Field{"material", "gamma_rad",
              [](RunConfig& c, const std::string& v) { c.material.gamma_rad = parse_double(v); },
              [](const RunConfig& c) { return fmt(c.material.gamma_rad); }, is_inline},
        Field{"material", "gamma_nr",
              [](RunConfig& c, const std::string& v) { c.material.gamma_nr = parse_double(v); },
              [](const RunConfig& c) { return fmt(c.material.gamma_nr); }, is_inline},
        Field{"material", "gamma_phase",
              [](RunConfig& c, const std::string& v) {
                  c.material.gamma_phase = parse_double(v);
                  c.material.has_gamma_phase = true;
              },
              [](const RunConfig& c) { return fmt(c.material.gamma_phase); },
              [](const RunConfig& c) { return c.material.has_gamma_phase; }},

        PK_DOUBLE("chi3", "delta_min", chi3.delta_min),
        PK_DOUBLE("chi3", "delta_max", chi3.delta_max),
        PK_COUNT("chi3", "count", chi3.count),
        PK_DOUBLE("chi3", "e_field_sq", chi3.e_field_sq),
        PK_DOUBLE("chi3", "mu", chi3.mu),
        PK_DOUBLE("chi3", "n_density", chi3.n_density),
        PK_DOUBLE("chi3", "wavelength", chi3.wavelength),
        Field{"chi3", "rabi_values",
              [](RunConfig& c, const std::string& v) { c.chi3.rabi_values = parse_list(v); },
              [](const RunConfig& c) { return fmt(c.chi3.rabi_values); }},

        Field{"map", "spectrum_file", [](RunConfig& c, const std::string& v) { c.map.spectrum_file = v; },
              [](const RunConfig& c) { return c.map.spectrum_file; },
              [](const RunConfig& c) { return !c.map.spectrum_file.empty(); }},
        PK_DOUBLE("map", "ph_min", map.ph_min),
        PK_DOUBLE("map", "ph_max", map.ph_max),
        PK_COUNT("map", "ph_count", map.ph_count),
        PK_DOUBLE("map", "elec_min", map.elec_min),
        PK_DOUBLE("map", "elec_max", map.elec_max),
        PK_COUNT("map", "elec_count", map.elec_count),
        PK_DOUBLE("map", "rate_unit", map.rate_unit),
        PK_DOUBLE("map", "mask_factor", map.mask_factor),

        Field{"output", "directory", [](RunConfig& c, const std::string& v) { c.output_directory = v; },
              [](const RunConfig& c) { return c.output_directory; }},
    };
    return table;
}

#undef PK_DOUBLE
#undef PK_INT
#undef PK_COUNT

std::string strip_comment(const std::string& line)
{
    const auto pos = line.find_first_of("#;");
    return pos == std::string::npos ? line : line.substr(0, pos);
}

} // namespace

// ------------------------------------------------------------------ validate

void RunConfig::validate() const
{
    const auto& g = geometry;
    require(g.lattice_constant > 0.0, "geometry.lattice_constant", "must be positive");
    require(g.hole_radius > 0.0 && g.hole_radius < 0.5 * g.lattice_constant, "geometry.hole_radius",
            "must lie in (0, lattice_constant/2), got " + fmt(g.hole_radius));
    require(g.eps_background >= 1.0, "geometry.eps_background", "must be >= 1");
    require(g.eps_hole >= 1.0, "geometry.eps_hole", "must be >= 1");
    require(g.num_periods >= 1 && g.num_periods <= 100, "geometry.num_periods", "must lie in [1, 100]");

    require(raster.padding >= 0.0, "raster.padding", "must be non-negative");
    require(raster.absorber_thickness >= 0.0, "raster.absorber_thickness", "must be non-negative");
    require(raster.subsamples >= 1 && raster.subsamples <= 100, "raster.subsamples", "must lie in [1, 100]");

    require(source.center_frequency > 0.0, "source.center_frequency", "must be positive");
    require(source.bandwidth > 0.0, "source.bandwidth", "must be positive");
    require(source.amplitude != 0.0, "source.amplitude", "must be nonzero");
    require(source.time_shift >= 0.0, "source.time_shift", "must be non-negative");

    const auto& s = simulation;
    require(s.resolution >= 10.0, "simulation.resolution", "must be at least 10 cells per lattice constant");
    require(s.runtime >= 0.0, "simulation.runtime", "must be non-negative");
    require(s.apodization >= 0.0, "simulation.apodization", "must be non-negative");
    require(s.uniform_eps >= 1.0, "simulation.uniform_eps", "must be >= 1");
    require(s.solver.stencil_order == 2 || s.solver.stencil_order == 4, "simulation.stencil_order",
            "must be 2 or 4");
    require(s.solver.courant > 0.0 && s.solver.courant < fdtd::max_courant(s.solver.stencil_order),
            "simulation.courant",
            "must lie in (0, " + fmt(fdtd::max_courant(s.solver.stencil_order)) + ") for this stencil");
    require(s.solver.pml_reflection > 0.0 && s.solver.pml_reflection < 1.0, "simulation.pml_reflection",
            "must lie in (0, 1)");
    require(s.solver.pml_grading >= 1.0, "simulation.pml_grading", "must be >= 1");
    require(s.solver.threads >= 1 && s.solver.threads <= 1024, "simulation.threads", "must lie in [1, 1024]");

    const auto& a = analysis;
    require(a.window.f_min > 0.0, "analysis.f_min", "must be positive");
    require(a.window.f_max > a.window.f_min, "analysis.f_max", "must exceed f_min");
    require(a.window.count >= 2, "analysis.count", "must be at least 2");
    require(a.gap_threshold > 0.0 && a.gap_threshold < 1.0, "analysis.gap_threshold", "must lie in (0, 1)");

    if (material.preset == "inline") {
        require(material.gamma_rad >= 0.0, "material.gamma_rad", "must be non-negative");
        require(material.gamma_nr >= 0.0, "material.gamma_nr", "must be non-negative");
        require(material.gamma_rad + material.gamma_nr > 0.0, "material.gamma_nr",
                "gamma_rad + gamma_nr must be positive");
    } else {
        try {
            map::find_preset(material.preset);
        } catch (const std::invalid_argument& e) {
            fail("material.preset", e.what());
        }
    }
    if (material.has_gamma_phase) require(material.gamma_phase >= 0.0, "material.gamma_phase", "must be non-negative");

    require(chi3.delta_max >= chi3.delta_min, "chi3.delta_max", "must be >= delta_min");
    require(chi3.count >= 1, "chi3.count", "must be at least 1");
    require(chi3.count >= 2 || chi3.delta_max == chi3.delta_min, "chi3.count",
            "a single point needs delta_min = delta_max");
    require(chi3.e_field_sq >= 0.0, "chi3.e_field_sq", "must be non-negative");
    require(chi3.mu > 0.0, "chi3.mu", "must be positive");
    require(chi3.n_density > 0.0, "chi3.n_density", "must be positive");
    require(chi3.wavelength > 0.0, "chi3.wavelength", "must be positive");
    require(!chi3.rabi_values.empty(), "chi3.rabi_values", "must list at least one value");
    for (double r : chi3.rabi_values) require(r > 0.0, "chi3.rabi_values", "values must be positive");

    require(map.ph_count >= 1, "map.ph_count", "must be at least 1");
    require(map.elec_count >= 1, "map.elec_count", "must be at least 1");
    require(map.ph_count == 1 ? map.ph_max == map.ph_min : map.ph_max > map.ph_min, "map.ph_max",
            "must exceed ph_min");
    require(map.elec_count == 1 ? map.elec_max == map.elec_min : map.elec_max > map.elec_min, "map.elec_max",
            "must exceed elec_min");
    require(map.ph_min >= a.window.f_min && map.ph_max <= a.window.f_max, "map.ph_min",
            "probe grid must lie inside the analysis window");
    require(map.elec_min >= a.window.f_min && map.elec_max <= a.window.f_max, "map.elec_min",
            "transition grid must lie inside the analysis window");
    require(map.rate_unit > 0.0, "map.rate_unit", "must be positive");
    require(map.mask_factor >= 0.0, "map.mask_factor", "must be non-negative");

    require(!output_directory.empty(), "output.directory", "must not be empty");
}

// ------------------------------------------------------------------- parsing

RunConfig parse_config(const std::string& text)
{
    RunConfig cfg;
    std::map<std::string, int> seen;  // "section.key" -> line
    std::set<std::string> sections;
    for (const auto& f : fields()) sections.insert(f.section);

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = io::trim(strip_comment(raw));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header '" + line + "'");
            section = io::trim(line.substr(1, line.size() - 2));
            if (!sections.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value', got '" + line + "'");
        const std::string key = io::trim(line.substr(0, eq));
        const std::string value = io::trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(where + "key '" + key + "' appears before any [section]");
        const std::string name = section + "." + key;
        const Field* field = nullptr;
        for (const auto& f : fields()) {
            if (f.section == section && f.key == key) field = &f;
        }
        if (!field) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
        if (seen.count(name)) {
            throw ConfigError(where + name + ": duplicate key (first set on line " + std::to_string(seen[name]) + ")");
        }
        seen[name] = line_no;
        try {
            field->set(cfg, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + name + ": " + e.what());
        }
    }

    if (cfg.material.preset == "inline") {
        for (const char* k : {"gamma_rad", "gamma_nr", "gamma_phase"}) {
            if (!seen.count(std::string("material.") + k)) {
                throw ConfigError(std::string("material.") + k + ": missing required key (preset = inline)");
            }
        }
    } else {
        for (const char* k : {"gamma_rad", "gamma_nr"}) {
            const std::string name = std::string("material.") + k;
            if (seen.count(name)) {
                throw ConfigError("line " + std::to_string(seen[name]) + ": " + name +
                                  ": only allowed with preset = inline");
            }
        }
    }

    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        const std::string name = msg.substr(0, msg.find(':'));
        const auto it = seen.find(name);
        if (it != seen.end()) throw ConfigError("line " + std::to_string(it->second) + ": " + msg);
        throw;
    }
    return cfg;
}

std::string serialize(const RunConfig& cfg)
{
    std::string out;
    std::string section;
    for (const auto& f : fields()) {
        if (f.section != section) {
            out += (section.empty() ? "[" : "\n[") + f.section + "]\n";
            section = f.section;
        }
        if (f.emitted(cfg)) out += f.key + " = " + f.get(cfg) + "\n";
    }
    return out;
}

std::string config_hash(const RunConfig& cfg)
{
    // Thread count and output location do not change any result.
    RunConfig c = cfg;
    c.simulation.solver.threads = 1;
    c.output_directory = "out";
    return io::hash_hex(serialize(c));
}

std::string geometry_hash(const RunConfig& cfg)
{
    RunConfig c;
    c.geometry = cfg.geometry;
    c.raster = cfg.raster;
    c.simulation.resolution = cfg.simulation.resolution;
    c.simulation.structure = cfg.simulation.structure;
    c.simulation.uniform_eps = cfg.simulation.uniform_eps;
    std::string text = serialize(c);
    text = text.substr(0, text.find("[source]"));
    return io::hash_hex(text + "resolution = " + io::format_double(c.simulation.resolution) +
                        "\nstructure = " + to_string(c.simulation.structure) +
                        "\nuniform_eps = " + io::format_double(c.simulation.uniform_eps) + "\n");
}

map::MaterialPreset resolve_material(const MaterialConfig& m)
{
    map::MaterialPreset p;
    if (m.preset == "inline") {
        p.name = "inline";
        p.rates_vac = {m.gamma_rad, m.gamma_nr, m.gamma_phase};
        p.description = "inline rates";
    } else {
        try {
            p = map::find_preset(m.preset);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("material.preset: ") + e.what());
        }
        if (m.has_gamma_phase) p.rates_vac.gamma_phase = m.gamma_phase;
    }
    return p;
}

} // namespace purcell::config
