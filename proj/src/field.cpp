#include "mplc/field.hpp"

#include <cmath>

namespace mplc {

GridSpec::GridSpec(int nx_, int ny_, double pitch_m, double wavelength_m)
    : nx(nx_), ny(ny_), pitch(pitch_m), wavelength(wavelength_m) {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("GridSpec: nx and ny must be >= 2");
    if (nx % 2 != 0 || ny % 2 != 0)
        throw std::invalid_argument("GridSpec: nx and ny must be even");
    if (!(pitch > 0.0))
        throw std::invalid_argument("GridSpec: pitch must be positive");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("GridSpec: wavelength must be positive");
}

ComplexField::ComplexField(const GridSpec& grid, std::vector<Complex> amplitude)
    : grid_(grid), amp_(std::move(amplitude)) {
    if (amp_.size() != grid_.samples())
        throw DimensionError("ComplexField: amplitude size does not match grid");
}

bool ComplexField::finite() const {
    for (const Complex& c : amp_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

PhaseMask::PhaseMask(const GridSpec& grid, std::vector<double> phase)
    : grid_(grid), phase_(std::move(phase)) {
    if (phase_.size() != grid_.samples())
        throw DimensionError("PhaseMask: phase size does not match grid");
    for (double& p : phase_) {
        if (!std::isfinite(p))
            throw std::invalid_argument("PhaseMask: non-finite phase value");
        p = wrap_phase(p);
    }
}

double wrap_phase(double x) {
    constexpr double two_pi = 2.0 * M_PI;
    double y = std::fmod(x + M_PI, two_pi);
    if (y < 0.0) y += two_pi;
    return y - M_PI;
}

Complex inner_product(const ComplexField& a, const ComplexField& b) {
    if (a.grid() != b.grid())
        throw DimensionError("inner_product: grid mismatch");
    Complex acc{0.0, 0.0};
    const auto& va = a.amplitude();
    const auto& vb = b.amplitude();
    for (std::size_t i = 0; i < va.size(); ++i)
        acc += std::conj(va[i]) * vb[i];
    return acc * a.grid().cell_area();
}

double power(const ComplexField& a) {
    double acc = 0.0;
    for (const Complex& c : a.amplitude()) acc += std::norm(c);
    return acc * a.grid().cell_area();
}

ComplexField normalize(const ComplexField& a) {
    const double p = power(a);
    if (!(p > 0.0))
        throw DegenerateFieldError("normalize: zero-power field");
    return scaled(a, Complex{1.0 / std::sqrt(p), 0.0});
}

ComplexField apply_phase(const ComplexField& a, const PhaseMask& m) {
    if (a.grid() != m.grid())
        throw DimensionError("apply_phase: grid mismatch");
    std::vector<Complex> out(a.size());
    const auto& va = a.amplitude();
    const auto& ph = m.phase();
    for (std::size_t i = 0; i < va.size(); ++i)
        out[i] = va[i] * std::polar(1.0, ph[i]);
    return ComplexField(a.grid(), std::move(out));
}

ComplexField scaled(const ComplexField& a, Complex factor) {
    std::vector<Complex> out(a.size());
    const auto& va = a.amplitude();
    for (std::size_t i = 0; i < va.size(); ++i) out[i] = va[i] * factor;
    return ComplexField(a.grid(), std::move(out));
}

double second_moment_width(const ComplexField& a) {
    const GridSpec& g = a.grid();
    double w = 0.0, mx = 0.0, my = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const double inten = std::norm(a.at(ix, iy));
            w += inten;
            mx += inten * g.x_at(ix);
            my += inten * g.y_at(iy);
        }
    }
    if (!(w > 0.0))
        throw DegenerateFieldError("second_moment_width: zero-power field");
    mx /= w;
    my /= w;
    double r2 = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const double dx = g.x_at(ix) - mx;
            const double dy = g.y_at(iy) - my;
            r2 += std::norm(a.at(ix, iy)) * (dx * dx + dy * dy);
        }
    }
    return std::sqrt(2.0 * r2 / w);
}

}  // namespace mplc
