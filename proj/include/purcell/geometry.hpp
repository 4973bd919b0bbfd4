#pragma once

// Finite triangular lattice of circular holes in a dielectric background,
// and its rasterization onto a uniform cell-centred grid.

#include <cstddef>
#include <string>
#include <vector>

namespace purcell::geometry {

enum class Defect { none, central_site_removed };

std::string to_string(Defect d);
Defect defect_from_string(const std::string& s);

/// Lengths are in units of the lattice constant.
struct CrystalGeometry {
    double lattice_constant = 1.0;
    double hole_radius = 0.45;
    double eps_background = 13.0;
    double eps_hole = 1.0;
    int num_periods = 5;
    Defect defect = Defect::central_site_removed;

    /// Throws std::invalid_argument on invariant violations.
    void validate() const;

    friend bool operator==(const CrystalGeometry&, const CrystalGeometry&) = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Row-major permittivity raster. Cell (i, j) is centred at
/// ((i - center_i) dx, (j - center_j) dx); i runs along x.
struct RasterGrid {
    double resolution = 20.0;  ///< cells per lattice constant
    double dx = 0.05;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> eps;
    std::size_t source_i = 0;
    std::size_t source_j = 0;
    std::size_t absorber_cells = 0;  ///< thickness reserved at each edge for the absorber

    double width() const { return static_cast<double>(nx) * dx; }
    double height() const { return static_cast<double>(ny) * dx; }
    double at(std::size_t i, std::size_t j) const { return eps[j * nx + i]; }
    double& at(std::size_t i, std::size_t j) { return eps[j * nx + i]; }
};

struct RasterOptions {
    double padding = 1.0;            ///< background margin around the outermost holes
    double absorber_thickness = 1.0; ///< extra margin for the absorbing layer
    int subsamples = 10;             ///< subpixel samples per cell edge
};

/// Hole centres of all lattice sites within `num_periods` hexagonal rings of
/// the origin. Lattice vectors a (1, 0) and a (1/2, sqrt(3)/2).
std::vector<Point> build_triangular_lattice(const CrystalGeometry& spec);

/// Area-weighted rasterization. The grid has an odd cell count along each axis
/// so the emitter cell sits exactly at the geometric centre, and the raster is
/// exactly inversion-symmetric about it. Rejects resolution < 10.
RasterGrid rasterize(const CrystalGeometry& spec, double resolution, const RasterOptions& opts = {});

/// Same grid layout as `rasterize`, filled uniformly with `eps`.
RasterGrid uniform_like(const RasterGrid& grid, double eps);

/// Writes the raster as CSV rows (x, y, eps).
void write_raster_csv(const RasterGrid& grid, const std::string& path);

} // namespace purcell::geometry
