#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mplc {

using Complex = std::complex<double>;

// Two objects that must live on the same grid do not.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Zero-power field, all-zero overlap, or similar input with no usable signal.
struct DegenerateFieldError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A generated mode does not fit on the grid (too much power clipped).
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file contents (bad magic, wrong kind, short read, ...).
struct FormatError : IoError {
    using IoError::IoError;
};

/// Uniform transverse sampling grid with square pixels.
///
/// The grid origin sits at sample (nx/2, ny/2), so symmetric modes land
/// symmetrically on the array. nx and ny must be even.
struct GridSpec {
    int nx = 0;
    int ny = 0;
    double pitch = 0.0;       // meters per sample
    double wavelength = 0.0;  // meters

    GridSpec() = default;
    GridSpec(int nx_, int ny_, double pitch_m, double wavelength_m);

    double x_at(int ix) const { return (ix - nx / 2) * pitch; }
    double y_at(int iy) const { return (iy - ny / 2) * pitch; }
    std::size_t samples() const { return static_cast<std::size_t>(nx) * ny; }
    double cell_area() const { return pitch * pitch; }
    double extent_x() const { return nx * pitch; }
    double extent_y() const { return ny * pitch; }

    bool operator==(const GridSpec&) const = default;
};

/// Sampled complex scalar amplitude on a GridSpec, row-major (index = iy*nx + ix).
/// Values are treated as immutable once constructed; all operations on fields
/// are pure functions returning new fields.
class ComplexField {
  public:
    ComplexField() = default;
    explicit ComplexField(const GridSpec& grid)
        : grid_(grid), amp_(grid.samples(), Complex{0.0, 0.0}) {}
    ComplexField(const GridSpec& grid, std::vector<Complex> amplitude);

    const GridSpec& grid() const { return grid_; }
    const std::vector<Complex>& amplitude() const { return amp_; }
    const Complex& at(int ix, int iy) const { return amp_[static_cast<std::size_t>(iy) * grid_.nx + ix]; }
    std::size_t size() const { return amp_.size(); }
    bool empty() const { return amp_.empty(); }

    /// True when every sample is finite.
    bool finite() const;

  private:
    GridSpec grid_;
    std::vector<Complex> amp_;
};

/// Real transverse phase pattern for one modulation plane, wrapped to [-pi, pi).
class PhaseMask {
  public:
    PhaseMask() = default;
    explicit PhaseMask(const GridSpec& grid)
        : grid_(grid), phase_(grid.samples(), 0.0) {}
    /// Wraps the given values into [-pi, pi).
    PhaseMask(const GridSpec& grid, std::vector<double> phase);

    const GridSpec& grid() const { return grid_; }
    const std::vector<double>& phase() const { return phase_; }
    const double& at(int ix, int iy) const { return phase_[static_cast<std::size_t>(iy) * grid_.nx + ix]; }

  private:
    GridSpec grid_;
    std::vector<double> phase_;
};

/// Wrap an angle into [-pi, pi).
double wrap_phase(double x);

/// Discrete overlap integral  sum conj(a) * b * pitch^2.
/// Conjugate-symmetric: inner_product(a, b) == conj(inner_product(b, a)).
Complex inner_product(const ComplexField& a, const ComplexField& b);

/// Total power, inner_product(a, a).real().
double power(const ComplexField& a);

/// Rescale to unit power. Throws DegenerateFieldError on a zero-power field.
ComplexField normalize(const ComplexField& a);

/// Multiply pointwise by exp(i * phase). Conserves power.
ComplexField apply_phase(const ComplexField& a, const PhaseMask& m);

/// Pointwise scalar multiple.
ComplexField scaled(const ComplexField& a, Complex factor);

/// Width of the intensity distribution: sqrt(2 <r^2>) about the centroid.
/// Equals the 1/e^2 waist for a fundamental Gaussian.
double second_moment_width(const ComplexField& a);

}  // namespace mplc
