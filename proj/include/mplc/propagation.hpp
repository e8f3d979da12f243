#pragma once

#include <memory>
#include <vector>

#include "mplc/field.hpp"

namespace mplc {

/// Precomputed angular-spectrum transfer for one (grid, distance) pair.
///
/// The transfer phase is exp(i 2 pi z sqrt(1/lambda^2 - fx^2 - fy^2)).
/// Evanescent components are zeroed, as are frequencies beyond the grid's
/// band limit 1/(lambda sqrt((2 dF z)^2 + 1)) per axis, which keeps the
/// sampled transfer phase alias-free. Within the passband the transfer has
/// unit modulus, so propagation is unitary there.
class PropagationPlan {
  public:
    PropagationPlan(const GridSpec& grid, double distance);

    const GridSpec& grid() const { return grid_; }
    double distance() const { return distance_; }

    /// Propagate by +distance.
    ComplexField apply(const ComplexField& a) const;
    /// Propagate by -distance (conjugated transfer, exact inverse of apply).
    ComplexField apply_inverse(const ComplexField& a) const;

    /// In-place variants used by the optimizer's inner loop.
    void apply_inplace(std::vector<Complex>& amp, bool inverse = false) const;

  private:
    GridSpec grid_;
    double distance_ = 0.0;
    std::shared_ptr<const std::vector<Complex>> transfer_;
};

/// Free-space propagation over a signed distance (0 is the identity).
ComplexField propagate(const ComplexField& a, double distance);

/// Push a field through masks and spacings (mask t, then spacing t).
/// Returns the field just before each mask plus the output-plane field,
/// masks.size() + 1 entries in all. Masks are applied via apply_phase.
std::vector<ComplexField> forward_pass(const ComplexField& a,
                                       const std::vector<PhaseMask>& masks,
                                       const std::vector<double>& spacings);

/// Mirror of forward_pass: starts from the output-plane field g and walks
/// back towards plane 1, applying each mask (via apply_phase) on arrival.
/// Entries are returned in plane order, result[t] at the same plane as
/// forward_pass's result[t] and result.back() == g. Running it on a forward
/// output with sign-flipped masks reproduces the forward entries.
std::vector<ComplexField> backward_pass(const ComplexField& g,
                                        const std::vector<PhaseMask>& masks,
                                        const std::vector<double>& spacings);

}  // namespace mplc
