#include "purcell/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>

#include "purcell/io.hpp"

namespace purcell::geometry {

std::string to_string(Defect d)
{
    switch (d) {
    case Defect::none: return "none";
    case Defect::central_site_removed: return "central_site_removed";
    }
    return "none";
}

Defect defect_from_string(const std::string& s)
{
    if (s == "none") return Defect::none;
    if (s == "central_site_removed") return Defect::central_site_removed;
    throw std::invalid_argument("unknown defect '" + s + "' (expected none|central_site_removed)");
}

void CrystalGeometry::validate() const
{
    if (!(lattice_constant > 0.0)) throw std::invalid_argument("lattice_constant must be positive");
    if (!(hole_radius > 0.0) || !(hole_radius < 0.5 * lattice_constant)) {
        throw std::invalid_argument("hole_radius must lie in (0, a/2)");
    }
    if (!(eps_background >= 1.0) || !(eps_hole >= 1.0)) {
        throw std::invalid_argument("permittivities must be >= 1");
    }
    if (num_periods < 1) throw std::invalid_argument("num_periods must be >= 1");
}

std::vector<Point> build_triangular_lattice(const CrystalGeometry& spec)
{
    spec.validate();
    const double a = spec.lattice_constant;
    const double row_height = std::sqrt(3.0) / 2.0;
    const int n = spec.num_periods;
    std::vector<Point> centers;
    // Axial coordinates (p, q): site = p a1 + q a2, hexagonal ring index
    // max(|p|, |q|, |p + q|).
    for (int q = -n; q <= n; ++q) {
        for (int p = -n; p <= n; ++p) {
            const int ring = std::max({std::abs(p), std::abs(q), std::abs(p + q)});
            if (ring > n) continue;
            if (ring == 0 && spec.defect == Defect::central_site_removed) continue;
            centers.push_back(Point{a * (p + 0.5 * q), a * (q * row_height)});
        }
    }
    return centers;
}

RasterGrid rasterize(const CrystalGeometry& spec, double resolution, const RasterOptions& opts)
{
    spec.validate();
    if (!(resolution >= 10.0)) throw std::invalid_argument("resolution must be at least 10 cells per a");
    if (opts.subsamples < 1) throw std::invalid_argument("subsamples must be >= 1");
    if (!(opts.padding >= 0.0) || !(opts.absorber_thickness >= 0.0)) {
        throw std::invalid_argument("padding and absorber thickness must be non-negative");
    }

    const double a = spec.lattice_constant;
    const double r = spec.hole_radius;
    const double half_x = spec.num_periods * a + r + opts.padding + opts.absorber_thickness;
    const double half_y =
        spec.num_periods * a * std::sqrt(3.0) / 2.0 + r + opts.padding + opts.absorber_thickness;

    RasterGrid g;
    g.resolution = resolution;
    g.dx = a / resolution;
    const auto hx = static_cast<long>(std::ceil(half_x / g.dx));
    const auto hy = static_cast<long>(std::ceil(half_y / g.dx));
    g.nx = static_cast<std::size_t>(2 * hx + 1);
    g.ny = static_cast<std::size_t>(2 * hy + 1);
    g.source_i = static_cast<std::size_t>(hx);
    g.source_j = static_cast<std::size_t>(hy);
    g.absorber_cells = static_cast<std::size_t>(std::ceil(opts.absorber_thickness / g.dx));
    g.eps.assign(g.nx * g.ny, spec.eps_background);

    // Subsample positions are odd integer multiples of h = dx / (2 S) from the
    // centre, so mirrored samples have exactly negated coordinates.
    const long s = opts.subsamples;
    const double h = g.dx / static_cast<double>(2 * s);
    const double r2 = r * r;
    std::vector<std::int32_t> counts(g.nx * g.ny, 0);

    for (const Point& c : build_triangular_lattice(spec)) {
        const long i0 = std::max<long>(0, static_cast<long>(std::floor((c.x - r) / g.dx)) + hx - 1);
        const long i1 = std::min<long>(static_cast<long>(g.nx) - 1,
                                       static_cast<long>(std::ceil((c.x + r) / g.dx)) + hx + 1);
        const long j0 = std::max<long>(0, static_cast<long>(std::floor((c.y - r) / g.dx)) + hy - 1);
        const long j1 = std::min<long>(static_cast<long>(g.ny) - 1,
                                       static_cast<long>(std::ceil((c.y + r) / g.dx)) + hy + 1);
        for (long j = j0; j <= j1; ++j) {
            for (long i = i0; i <= i1; ++i) {
                std::int32_t inside = 0;
                for (long sj = 0; sj < s; ++sj) {
                    const double y = static_cast<double>(2 * s * (j - hy) + 2 * sj + 1 - s) * h;
                    const double dy = y - c.y;
                    for (long si = 0; si < s; ++si) {
                        const double x = static_cast<double>(2 * s * (i - hx) + 2 * si + 1 - s) * h;
                        const double dxp = x - c.x;
                        if (dxp * dxp + dy * dy <= r2) ++inside;
                    }
                }
                counts[static_cast<std::size_t>(j) * g.nx + static_cast<std::size_t>(i)] += inside;
            }
        }
    }

    const double per_cell = static_cast<double>(s * s);
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) continue;
        const double fill = std::min(1.0, counts[k] / per_cell);
        g.eps[k] = spec.eps_background + fill * (spec.eps_hole - spec.eps_background);
    }
    return g;
}

RasterGrid uniform_like(const RasterGrid& grid, double eps)
{
    if (!(eps >= 1.0)) throw std::invalid_argument("permittivity must be >= 1");
    RasterGrid g = grid;
    std::fill(g.eps.begin(), g.eps.end(), eps);
    return g;
}

void write_raster_csv(const RasterGrid& grid, const std::string& path)
{
    std::string body = "x,y,eps\n";
    for (std::size_t j = 0; j < grid.ny; ++j) {
        const double y = (static_cast<double>(j) - static_cast<double>(grid.source_j)) * grid.dx;
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double x = (static_cast<double>(i) - static_cast<double>(grid.source_i)) * grid.dx;
            body += io::format_double(x) + ',' + io::format_double(y) + ',' +
                    io::format_double(grid.at(i, j)) + '\n';
        }
    }
    io::write_atomic(path, body);
}

} // namespace purcell::geometry
