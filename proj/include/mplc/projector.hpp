#pragma once

#include <string>
#include <vector>

#include "mplc/modes.hpp"
#include "mplc/wfm.hpp"

namespace mplc {

/// Optional deviations from the nominal measurement, for studying the gap
/// between the designed and the experimentally achievable projection.
struct ProjectionPerturbation {
    int shift_x_px = 0;        // lateral mask shift, whole pixels
    int shift_y_px = 0;
    double waist_scale = 1.0;  // fiber-mode waist mismatch factor

    bool any() const { return shift_x_px != 0 || shift_y_px != 0 || waist_scale != 1.0; }
};

/// Coupling probability of a field into the converter's fiber mode:
/// |<fiber reference, forward output>|^2.
double project(const ConverterDesign& design, const ComplexField& field,
               const ProjectionPerturbation& pert = {});

struct LabeledMode {
    std::string label;
    ComplexField field;
};

/// d x d coupling-probability matrix, C[i][j] = coupling of mode j into the
/// projector designed for mode i.
struct CrosstalkMatrix {
    std::vector<std::string> labels;
    std::vector<double> values;       // row-major d x d
    std::vector<bool> row_converged;  // per projector design

    int dimension() const { return static_cast<int>(labels.size()); }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * labels.size() + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * labels.size() + j]; }
};

/// Design one converter per mode and measure every mode against every
/// projector. With require_orthogonal set, the mode set must have Gram
/// off-diagonals below 1e-3 (the regime where the column sums of C are
/// bounded by unitarity).
CrosstalkMatrix crosstalk_matrix(const std::vector<LabeledMode>& modes, const WfmConfig& cfg,
                                 const std::vector<double>& spacings, double target_waist,
                                 bool require_orthogonal = true,
                                 const ProjectionPerturbation& pert = {});

/// Same measurement with prebuilt designs (design i projects onto mode i).
CrosstalkMatrix crosstalk_from_designs(const std::vector<ConverterDesign>& designs,
                                       const std::vector<LabeledMode>& modes,
                                       const ProjectionPerturbation& pert = {});

/// V = sum_i C_ii / sum_ij C_ij. Throws DegenerateFieldError on an all-zero matrix.
double visibility(const CrosstalkMatrix& c);

/// Scalar detection-efficiency model: the SLM diffraction efficiency per
/// plane times the fiber coupling. Kept separate from CrosstalkMatrix, which
/// holds the unitary-physics cross talk only.
struct ThroughputModel {
    double per_plane_efficiency = 0.75;
    int n_planes = 3;
    double fiber_coupling = 1.0;

    void validate() const;
};

/// per_plane_efficiency^n_planes * fiber_coupling.
double throughput(const ThroughputModel& model);

}  // namespace mplc
