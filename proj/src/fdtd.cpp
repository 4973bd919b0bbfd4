#include "purcell/fdtd.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "purcell/errors.hpp"
#include "purcell/io.hpp"

namespace purcell::fdtd {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double blowup_limit = 1e10;

// Staggered difference weights: f'(x) ~ [c1 (f(x+h/2) - f(x-h/2)) + c2 (f(x+3h/2) - f(x-3h/2))] / h.
struct Stencil {
    double c1;
    double c2;
};

Stencil stencil_for(int order)
{
    if (order == 2) return {1.0, 0.0};
    return {9.0 / 8.0, -1.0 / 24.0};
}

// One-dimensional absorber profile sampled on either integer or half-integer
// positions. psi^n = b psi^{n-1} + a d; a = b - 1 (kappa = 1, alpha = 0).
struct Profile {
    std::vector<double> b;
    std::vector<double> a;
    std::size_t left_end = 0;     // indices [0, left_end) carry an absorber
    std::size_t right_begin = 0;  // indices [right_begin, n) carry an absorber
};

Profile make_profile(std::size_t n, std::size_t npml, bool half, double dx, double dt,
                     const SolverOptions& opts)
{
    Profile p;
    p.b.assign(n, 1.0);
    p.a.assign(n, 0.0);
    p.left_end = 0;
    p.right_begin = n;
    if (!opts.absorber || npml == 0) return p;

    const double thickness = static_cast<double>(npml) * dx;
    const double m = opts.pml_grading;
    const double sigma_max = (m + 1.0) * std::log(1.0 / opts.pml_reflection) / (2.0 * thickness);
    const double inner_left = static_cast<double>(npml);
    const double inner_right = static_cast<double>(n - 1 - npml);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) + (half ? 0.5 : 0.0);
        double depth = 0.0;
        if (u < inner_left) depth = (inner_left - u) / static_cast<double>(npml);
        if (u > inner_right) depth = (u - inner_right) / static_cast<double>(npml);
        if (depth <= 0.0) continue;
        depth = std::min(depth, 1.0);
        const double sigma = sigma_max * std::pow(depth, m);
        p.b[i] = std::exp(-sigma * dt);
        p.a[i] = p.b[i] - 1.0;
    }
    while (p.left_end < n && p.b[p.left_end] != 1.0) ++p.left_end;
    while (p.right_begin > 0 && p.b[p.right_begin - 1] != 1.0) --p.right_begin;
    return p;
}

} // namespace

// ---------------------------------------------------------------- SourceSpec

void SourceSpec::validate() const
{
    if (!(center_frequency > 0.0)) throw std::invalid_argument("source center_frequency must be positive");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("source bandwidth must be positive");
    if (!(amplitude != 0.0) || !std::isfinite(amplitude)) throw std::invalid_argument("source amplitude must be finite and nonzero");
    if (!(time_shift >= 0.0)) throw std::invalid_argument("source time_shift must be non-negative");
}

double SourceSpec::sigma_t() const { return 1.0 / (two_pi * bandwidth); }

double SourceSpec::peak_time() const { return 6.0 * sigma_t() + time_shift; }

double SourceSpec::end_time() const { return peak_time() + 6.0 * sigma_t(); }

double SourceSpec::current(double t) const
{
    if (t < 0.0 || t > end_time()) return 0.0;
    const double s = sigma_t();
    const double tau = t - peak_time();
    return amplitude * std::exp(-tau * tau / (2.0 * s * s)) *
           std::sin(two_pi * center_frequency * tau);
}

double SourceSpec::relative_spectrum(double f) const
{
    const double bw2 = 2.0 * bandwidth * bandwidth;
    const double lo = f - center_frequency;
    const double hi = f + center_frequency;
    return std::abs(std::exp(-lo * lo / bw2) - std::exp(-hi * hi / bw2));
}

// ------------------------------------------------------------ AnalysisWindow

void AnalysisWindow::validate() const
{
    if (!(f_min > 0.0) || !(f_max > f_min)) throw std::invalid_argument("analysis window needs 0 < f_min < f_max");
    if (count < 2) throw std::invalid_argument("analysis window needs at least 2 frequencies");
}

std::vector<double> AnalysisWindow::frequencies() const
{
    validate();
    std::vector<double> f(count);
    const double step = (f_max - f_min) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) f[k] = f_min + step * static_cast<double>(k);
    f.back() = f_max;
    return f;
}

// ------------------------------------------------------------- SolverOptions

double max_courant(int stencil_order)
{
    const Stencil s = stencil_for(stencil_order);
    return 1.0 / (std::sqrt(2.0) * (std::abs(s.c1) + std::abs(s.c2)));
}

void SolverOptions::validate() const
{
    if (stencil_order != 2 && stencil_order != 4) throw std::invalid_argument("stencil_order must be 2 or 4");
    if (!(courant > 0.0) || !(courant < max_courant(stencil_order))) {
        throw std::invalid_argument("Courant factor violates the 2D stability bound");
    }
    if (!(pml_reflection > 0.0 && pml_reflection < 1.0)) throw std::invalid_argument("pml_reflection must lie in (0, 1)");
    if (!(pml_grading >= 1.0)) throw std::invalid_argument("pml_grading must be >= 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (stability_check_interval < 1) throw std::invalid_argument("stability_check_interval must be >= 1");
}

// -------------------------------------------------------------------- Solver

struct Solver::Impl {
    Impl(Solver& owner, int nthreads)
        : self(owner), sync(nthreads)
    {
        const std::size_t ny = owner.state_.ny;
        for (int k = 0; k < nthreads; ++k) {
            bounds.push_back(ny * static_cast<std::size_t>(k) / static_cast<std::size_t>(nthreads));
        }
        bounds.push_back(ny);
        for (int k = 1; k < nthreads; ++k) {
            workers.emplace_back([this, k] { worker_loop(k); });
        }
    }

    ~Impl()
    {
        if (!workers.empty()) {
            stop.store(true);
            sync.arrive_and_wait();
            workers.clear();
        }
    }

    void worker_loop(int k)
    {
        for (;;) {
            sync.arrive_and_wait();
            if (stop.load()) return;
            run_rows(bounds[k], bounds[k + 1]);
            sync.arrive_and_wait();
        }
    }

    void run_phase(int which)
    {
        phase = which;
        if (workers.empty()) {
            run_rows(0, self.state_.ny);
            return;
        }
        sync.arrive_and_wait();
        run_rows(bounds[0], bounds[1]);
        sync.arrive_and_wait();
    }

    void run_rows(std::size_t j_begin, std::size_t j_end)
    {
        if (phase == 0) {
            update_h(j_begin, j_end);
        } else {
            update_e(j_begin, j_end);
        }
    }

    void update_h(std::size_t j_begin, std::size_t j_end);
    void update_e(std::size_t j_begin, std::size_t j_end);

    Solver& self;
    Stencil st{};
    double ch = 0.0;             // dt / dx
    std::vector<double> ce;      // dt / (eps dx)
    Profile px_e, px_h, py_e, py_h;
    std::vector<double> psi_hx_y, psi_hy_x, psi_ez_x, psi_ez_y;

    std::vector<std::size_t> bounds;
    std::vector<std::jthread> workers;
    std::barrier<> sync;
    std::atomic<bool> stop{false};
    int phase = 0;
};

void Solver::Impl::update_h(std::size_t j_begin, std::size_t j_end)
{
    FieldState& f = self.state_;
    const std::size_t nx = f.nx;
    const std::size_t ny = f.ny;
    const double c1 = st.c1;
    const double c2 = st.c2;
    const std::size_t i_lo = 2;
    const std::size_t i_hi = nx - 3;  // inclusive

    // Hx(i, j + 1/2), rows 1 .. ny - 3.
    for (std::size_t j = std::max<std::size_t>(j_begin, 1); j < std::min(j_end, ny - 2); ++j) {
        const double* e0 = &f.ez[(j - 1) * nx];
        const double* e1 = &f.ez[j * nx];
        const double* e2 = &f.ez[(j + 1) * nx];
        const double* e3 = &f.ez[(j + 2) * nx];
        double* h = &f.hx[j * nx];
        for (std::size_t i = i_lo; i <= i_hi; ++i) {
            h[i] -= ch * (c1 * (e2[i] - e1[i]) + c2 * (e3[i] - e0[i]));
        }
        if (py_h.b[j] != 1.0) {
            const double b = py_h.b[j];
            const double a = py_h.a[j];
            double* psi = &psi_hx_y[j * nx];
            for (std::size_t i = i_lo; i <= i_hi; ++i) {
                psi[i] = b * psi[i] + a * (c1 * (e2[i] - e1[i]) + c2 * (e3[i] - e0[i]));
                h[i] -= ch * psi[i];
            }
        }
    }

    // Hy(i + 1/2, j), rows 2 .. ny - 3, columns 1 .. nx - 3.
    for (std::size_t j = std::max<std::size_t>(j_begin, 2); j < std::min(j_end, ny - 2); ++j) {
        const double* e = &f.ez[j * nx];
        double* h = &f.hy[j * nx];
        for (std::size_t i = 1; i <= nx - 3; ++i) {
            h[i] += ch * (c1 * (e[i + 1] - e[i]) + c2 * (e[i + 2] - e[i - 1]));
        }
        double* psi = &psi_hy_x[j * nx];
        auto strip = [&](std::size_t from, std::size_t to) {
            for (std::size_t i = std::max<std::size_t>(from, 1); i < std::min(to, nx - 2); ++i) {
                psi[i] = px_h.b[i] * psi[i] +
                         px_h.a[i] * (c1 * (e[i + 1] - e[i]) + c2 * (e[i + 2] - e[i - 1]));
                h[i] += ch * psi[i];
            }
        };
        strip(0, px_h.left_end);
        strip(px_h.right_begin, nx);
    }
}

void Solver::Impl::update_e(std::size_t j_begin, std::size_t j_end)
{
    FieldState& f = self.state_;
    const std::size_t nx = f.nx;
    const std::size_t ny = f.ny;
    const double c1 = st.c1;
    const double c2 = st.c2;

    for (std::size_t j = std::max<std::size_t>(j_begin, 2); j < std::min(j_end, ny - 2); ++j) {
        const double* hxm2 = &f.hx[(j - 2) * nx];
        const double* hxm1 = &f.hx[(j - 1) * nx];
        const double* hx0 = &f.hx[j * nx];
        const double* hxp1 = &f.hx[(j + 1) * nx];
        const double* hy = &f.hy[j * nx];
        const double* coef = &ce[j * nx];
        double* e = &f.ez[j * nx];
        for (std::size_t i = 2; i <= nx - 3; ++i) {
            const double dhy = c1 * (hy[i] - hy[i - 1]) + c2 * (hy[i + 1] - hy[i - 2]);
            const double dhx = c1 * (hx0[i] - hxm1[i]) + c2 * (hxp1[i] - hxm2[i]);
            e[i] += coef[i] * (dhy - dhx);
        }
        if (py_e.b[j] != 1.0) {
            const double b = py_e.b[j];
            const double a = py_e.a[j];
            double* psi = &psi_ez_y[j * nx];
            for (std::size_t i = 2; i <= nx - 3; ++i) {
                const double dhx = c1 * (hx0[i] - hxm1[i]) + c2 * (hxp1[i] - hxm2[i]);
                psi[i] = b * psi[i] + a * dhx;
                e[i] -= coef[i] * psi[i];
            }
        }
        double* psi = &psi_ez_x[j * nx];
        auto strip = [&](std::size_t from, std::size_t to) {
            for (std::size_t i = std::max<std::size_t>(from, 2); i < std::min(to, nx - 2); ++i) {
                const double dhy = c1 * (hy[i] - hy[i - 1]) + c2 * (hy[i + 1] - hy[i - 2]);
                psi[i] = px_e.b[i] * psi[i] + px_e.a[i] * dhy;
                e[i] += coef[i] * psi[i];
            }
        };
        strip(0, px_e.left_end);
        strip(px_e.right_begin, nx);
    }
}

Solver::Solver(const geometry::RasterGrid& grid, const SolverOptions& opts)
    : grid_(grid), opts_(opts)
{
    opts_.validate();
    if (grid_.nx < 7 || grid_.ny < 7) throw std::invalid_argument("grid too small for the stencil");
    if (grid_.eps.size() != grid_.nx * grid_.ny) throw std::invalid_argument("grid permittivity size mismatch");
    if (grid_.source_i < 2 || grid_.source_i > grid_.nx - 3 || grid_.source_j < 2 ||
        grid_.source_j > grid_.ny - 3) {
        throw std::invalid_argument("source cell lies on the frozen boundary band");
    }

    const std::size_t n = grid_.nx * grid_.ny;
    state_.nx = grid_.nx;
    state_.ny = grid_.ny;
    state_.ez.assign(n, 0.0);
    state_.hx.assign(n, 0.0);
    state_.hy.assign(n, 0.0);
    dt_ = opts_.courant * grid_.dx;

    impl_ = std::make_unique<Impl>(*this, std::min<int>(opts_.threads, static_cast<int>(grid_.ny)));
    Impl& im = *impl_;
    im.st = stencil_for(opts_.stencil_order);
    im.ch = dt_ / grid_.dx;
    im.ce.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(grid_.eps[k] >= 1.0)) throw std::invalid_argument("permittivity must be >= 1");
        im.ce[k] = dt_ / (grid_.eps[k] * grid_.dx);
    }
    const std::size_t npml = opts_.absorber ? grid_.absorber_cells : 0;
    im.px_e = make_profile(grid_.nx, npml, false, grid_.dx, dt_, opts_);
    im.px_h = make_profile(grid_.nx, npml, true, grid_.dx, dt_, opts_);
    im.py_e = make_profile(grid_.ny, npml, false, grid_.dx, dt_, opts_);
    im.py_h = make_profile(grid_.ny, npml, true, grid_.dx, dt_, opts_);
    im.psi_hx_y.assign(n, 0.0);
    im.psi_hy_x.assign(n, 0.0);
    im.psi_ez_x.assign(n, 0.0);
    im.psi_ez_y.assign(n, 0.0);
}

Solver::~Solver() = default;

void Solver::step(double source_current)
{
    impl_->run_phase(0);
    impl_->run_phase(1);
    const std::size_t src = grid_.source_j * grid_.nx + grid_.source_i;
    state_.ez[src] -= dt_ / grid_.eps[src] * source_current;
    ++state_.time_step_index;

    if (state_.time_step_index % opts_.stability_check_interval == 0) {
        for (const double v : state_.ez) {
            if (!(std::abs(v) <= blowup_limit)) {
                throw InstabilityError("field blow-up at step " + std::to_string(state_.time_step_index),
                                       state_.time_step_index);
            }
        }
    }
}

double Solver::source_ez() const { return state_.ez[grid_.source_j * grid_.nx + grid_.source_i]; }

double Solver::field_energy() const
{
    double total = 0.0;
    for (std::size_t j = 0; j < state_.ny; ++j) {
        double row = 0.0;
        for (std::size_t i = 0; i < state_.nx; ++i) {
            const std::size_t k = j * state_.nx + i;
            row += grid_.eps[k] * state_.ez[k] * state_.ez[k] + state_.hx[k] * state_.hx[k] +
                   state_.hy[k] * state_.hy[k];
        }
        total += row;
    }
    return total * grid_.dx * grid_.dx;
}

// ---------------------------------------------------------------- run_dipole

DipoleRecord run_dipole(const geometry::RasterGrid& grid, const SourceSpec& source,
                        const AnalysisWindow& window, double runtime, const SolverOptions& opts,
                        double apodization)
{
    source.validate();
    if (!(runtime >= 0.0)) throw std::invalid_argument("runtime must be non-negative");
    if (!(apodization >= 0.0)) throw std::invalid_argument("apodization time must be non-negative");
    // Gaussian taper exp(-s^2 / (2 tau^2)), s = time since the pulse peak.
    const double t_peak = source.peak_time();
    auto taper = [&](double t) {
        if (apodization == 0.0 || t <= t_peak) return 1.0;
        const double s = (t - t_peak) / apodization;
        return std::exp(-0.5 * s * s);
    };
    Solver solver(grid, opts);
    const double dt = solver.dt();

    DipoleRecord rec;
    rec.frequencies = window.frequencies();
    const std::size_t nf = rec.frequencies.size();
    rec.ez.assign(nf, Complex{});
    rec.current.assign(nf, Complex{});
    rec.resolution = grid.resolution;
    rec.dt = dt;
    rec.runtime_after_source = runtime;
    rec.apodization = apodization;
    rec.nx = grid.nx;
    rec.ny = grid.ny;

    const double total = source.end_time() + runtime;
    const auto steps = static_cast<long>(std::ceil(total / dt));
    rec.steps = steps;
    rec.total_time = static_cast<double>(steps) * dt;

    // Ez phasors exp(i 2 pi f (n+1) dt) advanced by rotation, re-seeded exactly
    // every `reseed` steps to bound round-off drift.
    std::vector<Complex> rot(nf);
    std::vector<Complex> phasor(nf);
    for (std::size_t k = 0; k < nf; ++k) rot[k] = std::polar(1.0, two_pi * rec.frequencies[k] * dt);
    constexpr long reseed = 256;

    const long energy_interval = 32;
    double peak_energy = 0.0;
    double last_energy = 0.0;

    for (long n = 0; n < steps; ++n) {
        const double t_half = (static_cast<double>(n) + 0.5) * dt;
        const double j = source.current(t_half);
        solver.step(j);

        if (j != 0.0) {
            for (std::size_t k = 0; k < nf; ++k) {
                rec.current[k] += j * dt * taper(t_half) * std::polar(1.0, two_pi * rec.frequencies[k] * t_half);
            }
        }
        const double ez = solver.source_ez();
        if (n % reseed == 0) {
            const double t = static_cast<double>(n + 1) * dt;
            for (std::size_t k = 0; k < nf; ++k) phasor[k] = std::polar(1.0, two_pi * rec.frequencies[k] * t);
        } else {
            for (std::size_t k = 0; k < nf; ++k) phasor[k] *= rot[k];
        }
        if (ez != 0.0) {
            const double weight = ez * dt * taper(static_cast<double>(n + 1) * dt);
            for (std::size_t k = 0; k < nf; ++k) rec.ez[k] += weight * phasor[k];
        }

        if ((n + 1) % energy_interval == 0 || n + 1 == steps) {
            last_energy = solver.field_energy();
            peak_energy = std::max(peak_energy, last_energy);
        }
    }
    rec.residual_energy_ratio = peak_energy > 0.0 ? last_energy / peak_energy : 0.0;
    rec.decayed = rec.residual_energy_ratio < 1e-6;
    return rec;
}

// ---------------------------------------------------------------- spectra

void PurcellSpectrum::validate() const
{
    if (frequencies.size() != gamma_ratio.size()) throw std::invalid_argument("spectrum column length mismatch");
    for (std::size_t k = 1; k < frequencies.size(); ++k) {
        if (!(frequencies[k] > frequencies[k - 1])) throw std::invalid_argument("spectrum frequencies must strictly increase");
    }
    for (const double g : gamma_ratio) {
        if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("gamma_ratio must be finite and non-negative");
    }
}

std::vector<double> radiated_power(const DipoleRecord& rec)
{
    std::vector<double> p(rec.frequencies.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = -std::real(rec.ez[k] * std::conj(rec.current[k]));
    return p;
}

PurcellSpectrum ldos_ratio(const DipoleRecord& structure, const DipoleRecord& vacuum)
{
    if (structure.frequencies != vacuum.frequencies || structure.nx != vacuum.nx ||
        structure.ny != vacuum.ny || structure.resolution != vacuum.resolution ||
        structure.dt != vacuum.dt || structure.steps != vacuum.steps ||
        structure.apodization != vacuum.apodization) {
        throw NumericalError("structure and vacuum runs were not made on identical grids and sources");
    }
    const std::vector<double> ps = radiated_power(structure);
    const std::vector<double> pv = radiated_power(vacuum);

    double peak = 0.0;
    for (const Complex& j : vacuum.current) peak = std::max(peak, std::abs(j));

    PurcellSpectrum out;
    out.metadata.resolution = structure.resolution;
    out.metadata.runtime = structure.runtime_after_source;
    out.metadata.residual_energy_structure = structure.residual_energy_ratio;
    out.metadata.residual_energy_vacuum = vacuum.residual_energy_ratio;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        if (std::abs(vacuum.current[k]) < 1e-3 * peak) {
            ++out.metadata.excluded_frequencies;
            continue;
        }
        if (!(pv[k] > 0.0)) {
            std::ostringstream msg;
            msg << "vacuum radiated power is not positive at f = " << structure.frequencies[k];
            throw NumericalError(msg.str());
        }
        out.frequencies.push_back(structure.frequencies[k]);
        // Sub-noise negative work deep in a gap is reported as zero emission.
        out.gamma_ratio.push_back(std::max(0.0, ps[k] / pv[k]));
    }
    return out;
}

std::optional<FrequencyWindow> detect_gap(const PurcellSpectrum& spectrum, double threshold)
{
    if (!(threshold > 0.0 && threshold < 1.0)) throw std::invalid_argument("gap threshold must lie in (0, 1)");
    std::optional<FrequencyWindow> best;
    std::size_t k = 0;
    const std::size_t n = spectrum.gamma_ratio.size();
    while (k < n) {
        if (!(spectrum.gamma_ratio[k] < threshold)) {
            ++k;
            continue;
        }
        std::size_t e = k;
        while (e + 1 < n && spectrum.gamma_ratio[e + 1] < threshold) ++e;
        const FrequencyWindow w{spectrum.frequencies[k], spectrum.frequencies[e]};
        if (!best || w.width() > best->width()) best = w;
        k = e + 1;
    }
    return best;
}

double window_overlap(const FrequencyWindow& a, const FrequencyWindow& b)
{
    const double inter = std::max(0.0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
    const double uni = std::max(a.hi, b.hi) - std::min(a.lo, b.lo);
    return uni > 0.0 ? inter / uni : (a.lo == b.lo ? 1.0 : 0.0);
}

std::string spectrum_to_csv(const PurcellSpectrum& s)
{
    std::string out;
    out += "# geometry_hash=" + s.metadata.geometry_hash + "\n";
    out += "# config_hash=" + s.metadata.config_hash + "\n";
    out += "# resolution=" + io::format_double(s.metadata.resolution) + "\n";
    out += "# runtime=" + io::format_double(s.metadata.runtime) + "\n";
    out += "omega_c_over_a,gamma_ratio\n";
    for (std::size_t k = 0; k < s.frequencies.size(); ++k) {
        out += io::format_double(s.frequencies[k]) + ',' + io::format_double(s.gamma_ratio[k]) + '\n';
    }
    return out;
}

PurcellSpectrum spectrum_from_csv(const std::string& text)
{
    PurcellSpectrum s;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = io::trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const auto eq = t.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = io::trim(t.substr(1, eq - 1));
            const std::string value = io::trim(t.substr(eq + 1));
            if (key == "geometry_hash") s.metadata.geometry_hash = value;
            else if (key == "config_hash") s.metadata.config_hash = value;
            else if (key == "resolution") s.metadata.resolution = std::stod(value);
            else if (key == "runtime") s.metadata.runtime = std::stod(value);
            continue;
        }
        if (!header_seen) {
            if (t != "omega_c_over_a,gamma_ratio") {
                throw IoError("spectrum CSV: unexpected header at line " + std::to_string(lineno));
            }
            header_seen = true;
            continue;
        }
        const auto cols = io::split(t, ',');
        if (cols.size() != 2) throw IoError("spectrum CSV: expected 2 columns at line " + std::to_string(lineno));
        try {
            s.frequencies.push_back(std::stod(cols[0]));
            s.gamma_ratio.push_back(std::stod(cols[1]));
        } catch (const std::exception&) {
            throw IoError("spectrum CSV: malformed number at line " + std::to_string(lineno));
        }
    }
    if (!header_seen) throw IoError("spectrum CSV: missing header");
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("spectrum CSV: ") + e.what());
    }
    return s;
}

} // namespace purcell::fdtd
