#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mplc/field.hpp"
#include "mplc/modes.hpp"

// Shared helpers and independent oracles for the test suites. Everything here
// computes expected values without going through the code paths under test.

namespace testsup {

using mplc::Complex;
using mplc::ComplexField;
using mplc::GridSpec;

inline GridSpec small_grid(int n = 256, double pitch = 32e-6) {
    return GridSpec(n, n, pitch, 808e-9);
}

inline GridSpec default_grid() {
    return GridSpec(1024, 1024, 8e-6, 808e-9);
}

// Unit-power Gaussian amplitude at (x, y), waist w, optionally displaced.
inline double gaussian_amp(double x, double y, double w, double x0 = 0.0, double y0 = 0.0) {
    const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
    return std::sqrt(2.0 / M_PI) / w * std::exp(-r2 / (w * w));
}

// Midpoint-rule quadrature of conj(f) * g over the grid extent at `refine`
// times the grid resolution. Independent of mplc::inner_product.
template <typename F, typename G>
Complex quadrature_overlap(const GridSpec& grid, F f, G g, int refine = 4) {
    const double dx = grid.pitch / refine;
    const double x_lo = (-grid.nx / 2) * grid.pitch - grid.pitch / 2.0;
    const double y_lo = (-grid.ny / 2) * grid.pitch - grid.pitch / 2.0;
    Complex acc{0.0, 0.0};
    for (int iy = 0; iy < grid.ny * refine; ++iy) {
        const double y = y_lo + (iy + 0.5) * dx;
        for (int ix = 0; ix < grid.nx * refine; ++ix) {
            const double x = x_lo + (ix + 0.5) * dx;
            acc += std::conj(f(x, y)) * g(x, y);
        }
    }
    return acc * dx * dx;
}

// Random band-limited-ish field: a sum of displaced Gaussian blobs with
// random complex weights. Finite, smooth, deterministic per seed.
inline ComplexField random_field(const GridSpec& grid, std::uint64_t seed, int blobs = 6) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(-0.2 * grid.extent_x(), 0.2 * grid.extent_x());
    std::uniform_real_distribution<double> waist(0.3e-3, 1.2e-3);
    std::uniform_real_distribution<double> re(-1.0, 1.0);
    struct Blob {
        double x0, y0, w;
        Complex c;
    };
    std::vector<Blob> b(blobs);
    for (auto& blob : b)
        blob = {pos(rng), pos(rng), waist(rng), Complex(re(rng), re(rng))};
    std::vector<Complex> amp(grid.samples());
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y_at(iy);
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x_at(ix);
            Complex v{0.0, 0.0};
            for (const auto& blob : b)
                v += blob.c * gaussian_amp(x, y, blob.w, blob.x0, blob.y0);
            amp[static_cast<std::size_t>(iy) * grid.nx + ix] = v;
        }
    }
    return ComplexField(grid, std::move(amp));
}

// Analytic LG mode at propagation distance z (waist at z = 0), in the
// exp(+i k z) convention of the angular-spectrum propagator: a diverging
// beam carries exp(+i k r^2 / (2 R)) and the Gouy phase exp(-i N zeta).
inline ComplexField analytic_lg_at_z(const mplc::ModeSpec& spec, const GridSpec& grid, double z) {
    const int l = spec.index1;
    const int p = spec.index2;
    const int al = std::abs(l);
    const double w0 = spec.waist;
    const double zr = M_PI * w0 * w0 / grid.wavelength;
    const double wz = w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
    const double gouy = (2 * p + al + 1) * std::atan(z / zr);
    const double k = 2.0 * M_PI / grid.wavelength;
    const double inv_2R = z == 0.0 ? 0.0 : z / (2.0 * (z * z + zr * zr));  // 1/(2R)

    const double norm = std::sqrt(2.0 / M_PI) / wz *
                        std::exp(0.5 * (std::lgamma(p + 1.0) - std::lgamma(p + al + 1.0)));
    std::vector<Complex> amp(grid.samples());
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y_at(iy);
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x_at(ix);
            const double r2 = x * x + y * y;
            const double rho = std::sqrt(2.0 * r2) / wz;
            const double radial = norm * std::pow(rho, al) *
                                  std::assoc_laguerre(p, al, 2.0 * r2 / (wz * wz)) *
                                  std::exp(-r2 / (wz * wz));
            const double phase = l * std::atan2(y, x) + k * r2 * inv_2R - gouy;
            amp[static_cast<std::size_t>(iy) * grid.nx + ix] = radial * std::polar(1.0, phase);
        }
    }
    return ComplexField(grid, std::move(amp));
}

}  // namespace testsup
