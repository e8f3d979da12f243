#include "mplc/projector.hpp"

#include <cmath>

namespace mplc {

namespace {

PhaseMask shifted_mask(const PhaseMask& mask, int dx, int dy) {
    const GridSpec& g = mask.grid();
    std::vector<double> out(g.samples(), 0.0);
    for (int iy = 0; iy < g.ny; ++iy) {
        const int sy = iy - dy;
        if (sy < 0 || sy >= g.ny) continue;
        for (int ix = 0; ix < g.nx; ++ix) {
            const int sx = ix - dx;
            if (sx < 0 || sx >= g.nx) continue;
            out[static_cast<std::size_t>(iy) * g.nx + ix] = mask.at(sx, sy);
        }
    }
    return PhaseMask(g, std::move(out));
}

}  // namespace

double project(const ConverterDesign& design, const ComplexField& field,
               const ProjectionPerturbation& pert) {
    if (field.grid() != design.grid)
        throw DimensionError("project: field grid does not match design grid");

    const std::vector<PhaseMask>* masks = &design.masks;
    std::vector<PhaseMask> shifted;
    if (pert.shift_x_px != 0 || pert.shift_y_px != 0) {
        shifted.reserve(design.masks.size());
        for (const PhaseMask& m : design.masks)
            shifted.push_back(shifted_mask(m, pert.shift_x_px, pert.shift_y_px));
        masks = &shifted;
    }

    const ComplexField fiber =
        gaussian_mode(design.grid, design.target_waist * pert.waist_scale);
    const ComplexField reference = reference_output(fiber, design.spacings);
    const auto planes = forward_pass(field, *masks, design.spacings);
    return std::norm(inner_product(reference, planes.back()));
}

CrosstalkMatrix crosstalk_matrix(const std::vector<LabeledMode>& modes, const WfmConfig& cfg,
                                 const std::vector<double>& spacings, double target_waist,
                                 bool require_orthogonal, const ProjectionPerturbation& pert) {
    if (modes.empty())
        throw std::invalid_argument("crosstalk_matrix: empty mode set");
    if (require_orthogonal) {
        for (std::size_t i = 0; i < modes.size(); ++i)
            for (std::size_t j = i + 1; j < modes.size(); ++j)
                if (std::abs(inner_product(modes[i].field, modes[j].field)) >= 1e-3)
                    throw std::invalid_argument("crosstalk_matrix: modes '" + modes[i].label +
                                                "' and '" + modes[j].label +
                                                "' are not orthogonal on this grid");
    }
    const GridSpec& grid = modes.front().field.grid();
    const ComplexField target = gaussian_mode(grid, target_waist);
    std::vector<ConverterDesign> designs;
    designs.reserve(modes.size());
    for (const LabeledMode& m : modes) {
        designs.push_back(design_converter(m.field, target, cfg, spacings));
        designs.back().input_spec = m.label;
    }
    return crosstalk_from_designs(designs, modes, pert);
}

CrosstalkMatrix crosstalk_from_designs(const std::vector<ConverterDesign>& designs,
                                       const std::vector<LabeledMode>& modes,
                                       const ProjectionPerturbation& pert) {
    if (designs.size() != modes.size())
        throw std::invalid_argument("crosstalk_from_designs: designs and modes differ in length");
    const int d = static_cast<int>(modes.size());
    CrosstalkMatrix c;
    c.values.assign(static_cast<std::size_t>(d) * d, 0.0);
    c.row_converged.resize(d);
    for (const LabeledMode& m : modes) c.labels.push_back(m.label);
    for (int i = 0; i < d; ++i) {
        c.row_converged[i] = designs[i].converged;
        for (int j = 0; j < d; ++j)
            c.at(i, j) = project(designs[i], modes[j].field, pert);
    }
    return c;
}

double visibility(const CrosstalkMatrix& c) {
    const int d = c.dimension();
    if (d == 0)
        throw std::invalid_argument("visibility: empty matrix");
    double trace = 0.0, total = 0.0;
    for (int i = 0; i < d; ++i) {
        trace += c.at(i, i);
        for (int j = 0; j < d; ++j) {
            if (c.at(i, j) < 0.0)
                throw std::invalid_argument("visibility: negative matrix entry");
            total += c.at(i, j);
        }
    }
    if (!(total > 0.0))
        throw DegenerateFieldError("visibility: all-zero matrix");
    return trace / total;
}

void ThroughputModel::validate() const {
    if (!(per_plane_efficiency > 0.0) || per_plane_efficiency > 1.0)
        throw std::invalid_argument("ThroughputModel: per_plane_efficiency must be in (0, 1]");
    if (!(fiber_coupling > 0.0) || fiber_coupling > 1.0)
        throw std::invalid_argument("ThroughputModel: fiber_coupling must be in (0, 1]");
    if (n_planes < 0)
        throw std::invalid_argument("ThroughputModel: n_planes must be >= 0");
}

double throughput(const ThroughputModel& model) {
    model.validate();
    return std::pow(model.per_plane_efficiency, model.n_planes) * model.fiber_coupling;
}

}  // namespace mplc
