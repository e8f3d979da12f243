#pragma once

#include <string>
#include <vector>

#include "mplc/field.hpp"
#include "mplc/propagation.hpp"

namespace mplc {

struct WfmConfig {
    int n_planes = 3;
    int max_sweeps = 200;
    double target_overlap = 0.999;
    // Mask extent in samples, centered on the grid; phase stays zero outside.
    // 0 means the whole grid. Set 630 to mimic the hardware mask extent (note
    // that clips up to ~0.6% of the LG p=2 modes' power and caps their
    // conversion overlap below the 0.999 design figure).
    int active_region = 0;
    bool update_offset = true;  // apply the mean-phase offset in the update

    void validate(const GridSpec& grid) const;
};

/// Result of a wavefront-matching run: the mask stack, the spacing after each
/// mask, and bookkeeping. Masks are stored so that applying them with
/// apply_phase (exp(+i phase)) inside forward_pass performs the conversion.
struct ConverterDesign {
    GridSpec grid;
    std::vector<PhaseMask> masks;
    std::vector<double> spacings;       // meters, one after each mask
    std::string input_spec;             // mode token or superposition JSON; set by callers
    double target_waist = 0.0;          // meters
    double achieved_overlap = 0.0;
    int sweeps_used = 0;
    bool converged = false;
    std::vector<double> overlap_history;  // entry 0 = before the first sweep

    int n_planes() const { return static_cast<int>(masks.size()); }
};

/// Pointwise field overlap between the forward mode and the backward target
/// at one plane, including the plane's current phase pattern:
///   o(x,y) = conj(M(x,y)) * G(x,y) * exp(i mask(x,y)).
ComplexField overlap_field(const ComplexField& m, const ComplexField& g, const PhaseMask& mask);

/// Required change of a phase pattern from its overlap field:
///   dPhi(x,y) = -arg(o(x,y) * exp(-i phi)),
/// where phi is the power-weighted mean phase arg(sum o) when apply_offset is
/// set (0 otherwise). Samples with |o| = 0 get dPhi = 0. Throws
/// DegenerateFieldError when o vanishes identically.
PhaseMask phase_update(const ComplexField& o, bool apply_offset);

/// The coupling reference at the output plane: the target (a Gaussian given
/// at the input plane) pushed through the empty system, one hop per spacing.
ComplexField reference_output(const ComplexField& target, const std::vector<double>& spacings);

/// Wavefront matching: iteratively builds phase masks that convert `input`
/// into `target` (both unit-power fields at the input plane; the output-plane
/// reference is reference_output(target, spacings)).
///
/// Each sweep walks the backward field from the output plane to plane 1,
/// updating every mask from the overlap with the recorded forward fields, and
/// then re-records the forward fields through the new masks. Sweeps stop when
/// the conversion overlap reaches cfg.target_overlap or after cfg.max_sweeps;
/// an unconverged design is returned with converged = false, not thrown.
ConverterDesign design_converter(const ComplexField& input, const ComplexField& target,
                                 const WfmConfig& cfg, const std::vector<double>& spacings);

/// |<reference_output(target), forward_pass(input) final field>|^2.
double conversion_overlap(const ConverterDesign& design, const ComplexField& input,
                          const ComplexField& target);

}  // namespace mplc
