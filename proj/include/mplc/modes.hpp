#pragma once

#include <string>
#include <vector>

#include "mplc/field.hpp"

namespace mplc {

enum class ModeFamily { LG, HG };

/// Analytic mode label. For LG, index1 = l (may be negative) and index2 = p >= 0.
/// For HG, index1 = n and index2 = m, both >= 0.
struct ModeSpec {
    ModeFamily family = ModeFamily::LG;
    int index1 = 0;
    int index2 = 0;
    double waist = 0.94e-3;  // meters

    void validate() const;
    /// Compact text token, e.g. "LG:-1,1:0.94" (waist in mm).
    std::string token() const;
    /// Short display label, e.g. "LG(-1,1)".
    std::string label() const;
};

/// Parse "LG:l,p:waist_mm" / "HG:n,m:waist_mm". The waist part may be omitted,
/// in which case default_waist is used.
ModeSpec parse_mode_token(const std::string& token, double default_waist = 0.94e-3);

struct Superposition {
    std::vector<Complex> coefficients;
    std::vector<ModeSpec> specs;
};

/// Parse a JSON list of {re, im, spec} entries.
Superposition parse_superposition_json(const std::string& text, double default_waist = 0.94e-3);

/// Laguerre-Gauss mode at its waist plane, unit power on the grid.
///
/// LG_{l,p}(r, phi) ~ (sqrt(2) r / w)^|l| L_p^{|l|}(2 r^2 / w^2)
///                    exp(-r^2 / w^2) exp(i l phi).
/// Throws TruncationError when more than 1e-4 of the analytic power misses
/// the grid (waist too large, or badly undersampled).
ComplexField lg_mode(const ModeSpec& spec, const GridSpec& grid);

/// Hermite-Gauss mode at its waist plane, unit power on the grid.
///
/// HG_{n,m}(x, y) ~ H_n(sqrt(2) x / w) H_m(sqrt(2) y / w) exp(-r^2 / w^2),
/// so n counts the vertical nodal lines (sign changes along x) and m the
/// horizontal ones.
ComplexField hg_mode(const ModeSpec& spec, const GridSpec& grid);

/// Dispatch on spec.family.
ComplexField generate_mode(const ModeSpec& spec, const GridSpec& grid);

/// Fundamental Gaussian of the given waist (LG 0,0).
ComplexField gaussian_mode(const GridSpec& grid, double waist);

/// Unit-normalized sum of coefficient-weighted modes. All specs must share
/// one waist. Throws DegenerateFieldError when all coefficients are zero.
ComplexField superpose(const Superposition& s, const GridSpec& grid);

/// The nine lowest-order LG modes, l in {-1,0,1} x p in {0,1,2}.
std::vector<ModeSpec> lg9_set(double waist);

/// The nine lowest-order HG modes, n,m in {0,1,2}.
std::vector<ModeSpec> hg9_set(double waist);

}  // namespace mplc
