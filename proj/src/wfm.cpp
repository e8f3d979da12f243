#include "mplc/wfm.hpp"

#include <algorithm>
#include <cmath>

namespace mplc {

namespace {

constexpr double kNormTolerance = 1e-6;

struct ActiveRect {
    int x0, x1, y0, y1;  // half-open
};

ActiveRect active_rect(const GridSpec& grid, int extent) {
    if (extent == 0) return ActiveRect{0, grid.nx, 0, grid.ny};
    ActiveRect r;
    r.x0 = grid.nx / 2 - extent / 2;
    r.x1 = r.x0 + extent;
    r.y0 = grid.ny / 2 - extent / 2;
    r.y1 = r.y0 + extent;
    return r;
}

Complex overlap_amplitude(const std::vector<Complex>& reference,
                          const std::vector<Complex>& out, double cell_area) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < reference.size(); ++i)
        acc += std::conj(reference[i]) * out[i];
    return acc * cell_area;
}

}  // namespace

void WfmConfig::validate(const GridSpec& grid) const {
    if (n_planes < 1)
        throw std::invalid_argument("WfmConfig: n_planes must be >= 1");
    if (max_sweeps < 1)
        throw std::invalid_argument("WfmConfig: max_sweeps must be >= 1");
    if (!(target_overlap > 0.0) || target_overlap > 1.0)
        throw std::invalid_argument("WfmConfig: target_overlap must be in (0, 1]");
    if (active_region != 0 &&
        (active_region < 2 || active_region > std::min(grid.nx, grid.ny)))
        throw std::invalid_argument("WfmConfig: active_region must be 0 (whole grid) or fit on the grid");
}

ComplexField overlap_field(const ComplexField& m, const ComplexField& g, const PhaseMask& mask) {
    if (m.grid() != g.grid() || m.grid() != mask.grid())
        throw DimensionError("overlap_field: grid mismatch");
    std::vector<Complex> o(m.size());
    const auto& vm = m.amplitude();
    const auto& vg = g.amplitude();
    const auto& ph = mask.phase();
    for (std::size_t i = 0; i < o.size(); ++i)
        o[i] = std::conj(vm[i]) * vg[i] * std::polar(1.0, ph[i]);
    return ComplexField(m.grid(), std::move(o));
}

PhaseMask phase_update(const ComplexField& o, bool apply_offset) {
    const auto& vo = o.amplitude();
    double phi = 0.0;
    if (apply_offset) {
        Complex total{0.0, 0.0};
        for (const Complex& c : vo) total += c;
        if (total != Complex{0.0, 0.0}) phi = std::arg(total);
    }
    std::vector<double> delta(vo.size(), 0.0);
    bool any = false;
    for (std::size_t i = 0; i < vo.size(); ++i) {
        if (vo[i] == Complex{0.0, 0.0}) continue;  // no information, leave at 0
        any = true;
        delta[i] = -(std::arg(vo[i]) - phi);
    }
    if (!any)
        throw DegenerateFieldError("phase_update: overlap field is identically zero");
    return PhaseMask(o.grid(), std::move(delta));
}

ComplexField reference_output(const ComplexField& target, const std::vector<double>& spacings) {
    ComplexField g = target;
    for (double z : spacings) g = PropagationPlan(target.grid(), z).apply(g);
    return g;
}

ConverterDesign design_converter(const ComplexField& input, const ComplexField& target,
                                 const WfmConfig& cfg, const std::vector<double>& spacings) {
    const GridSpec& grid = input.grid();
    cfg.validate(grid);
    if (target.grid() != grid)
        throw DimensionError("design_converter: input and target grids differ");
    if (static_cast<int>(spacings.size()) != cfg.n_planes)
        throw std::invalid_argument("design_converter: spacings length must equal n_planes");
    if (std::abs(power(input) - 1.0) > kNormTolerance ||
        std::abs(power(target) - 1.0) > kNormTolerance)
        throw std::invalid_argument("design_converter: input and target must be unit-normalized");

    const int n = cfg.n_planes;
    const ActiveRect act = active_rect(grid, cfg.active_region);

    std::vector<PropagationPlan> plans;
    plans.reserve(n);
    for (double z : spacings) plans.emplace_back(grid, z);

    const ComplexField target_out = reference_output(target, spacings);

    // Internal mask sign: the backward field picks up exp(+i beta) at each
    // plane, the forward field exp(-i beta). The stored design negates beta so
    // that forward_pass/apply_phase (exp(+i phase)) performs the conversion.
    std::vector<std::vector<double>> beta(n, std::vector<double>(grid.samples(), 0.0));
    std::vector<std::vector<Complex>> phasor(n, std::vector<Complex>(grid.samples(), Complex{1.0, 0.0}));

    std::vector<std::vector<Complex>> fwd(n);  // forward field just before each mask
    std::vector<std::vector<Complex>> bwd(n);  // backward field at each plane, before its mask
    std::vector<Complex> work;

    // Fused form of phase_update(overlap_field(m, g, beta_t), update_offset)
    // accumulated into beta_t over the active region; keeps the exp(i beta)
    // phasor cache in sync.
    auto update_plane = [&](int t, const std::vector<Complex>& m, const std::vector<Complex>& g) {
        auto& b = beta[t];
        auto& ph = phasor[t];
        Complex total{0.0, 0.0};
        bool any = false;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const Complex o = std::conj(m[i]) * g[i] * ph[i];
            any = any || o != Complex{0.0, 0.0};
            total += o;
        }
        if (!any)
            throw DegenerateFieldError("design_converter: overlap field is identically zero");
        const double phi =
            cfg.update_offset && total != Complex{0.0, 0.0} ? std::arg(total) : 0.0;
        for (int iy = act.y0; iy < act.y1; ++iy) {
            const std::size_t row = static_cast<std::size_t>(iy) * grid.nx;
            for (int ix = act.x0; ix < act.x1; ++ix) {
                const std::size_t i = row + ix;
                const Complex o = std::conj(m[i]) * g[i] * ph[i];
                if (o != Complex{0.0, 0.0})
                    b[i] = wrap_phase(b[i] - (std::arg(o) - phi));
                ph[i] = std::polar(1.0, b[i]);
            }
        }
    };

    auto record_forward = [&]() {
        work = input.amplitude();
        for (int t = 0; t < n; ++t) {
            fwd[t] = work;
            const auto& ph = phasor[t];
            for (std::size_t i = 0; i < work.size(); ++i) work[i] *= std::conj(ph[i]);
            plans[t].apply_inplace(work);
        }
    };

    record_forward();
    double overlap = std::norm(overlap_amplitude(target_out.amplitude(), work, grid.cell_area()));

    ConverterDesign design;
    design.grid = grid;
    design.spacings = spacings;
    design.target_waist = second_moment_width(target);
    design.overlap_history.push_back(overlap);

    int sweeps = 0;
    bool converged = false;
    while (sweeps < cfg.max_sweeps && !converged) {
        // Backward half-sweep: update masks n..1 against the recorded forward
        // fields, imprinting each updated mask on the backward field before it
        // continues towards plane 1.
        work = target_out.amplitude();
        for (int t = n - 1; t >= 0; --t) {
            plans[t].apply_inplace(work, /*inverse=*/true);
            bwd[t] = work;
            update_plane(t, fwd[t], bwd[t]);
            const auto& ph = phasor[t];
            for (std::size_t i = 0; i < work.size(); ++i) work[i] *= ph[i];
        }

        // Forward half-sweep: the matching is repeated in the forward
        // direction, updating masks 1..n against the recorded backward fields
        // while re-recording the forward fields.
        work = input.amplitude();
        for (int t = 0; t < n; ++t) {
            fwd[t] = work;
            update_plane(t, fwd[t], bwd[t]);
            const auto& ph = phasor[t];
            for (std::size_t i = 0; i < work.size(); ++i) work[i] *= std::conj(ph[i]);
            plans[t].apply_inplace(work);
        }
        overlap = std::norm(overlap_amplitude(target_out.amplitude(), work, grid.cell_area()));
        design.overlap_history.push_back(overlap);
        ++sweeps;
        converged = overlap >= cfg.target_overlap;
    }

    design.masks.reserve(n);
    for (int t = 0; t < n; ++t) {
        std::vector<double> stored(beta[t].size());
        for (std::size_t i = 0; i < stored.size(); ++i) stored[i] = -beta[t][i];
        design.masks.emplace_back(grid, std::move(stored));
    }
    design.sweeps_used = sweeps;
    design.converged = converged;
    // Recompute through the public path so the stored value is reproducible
    // from the stored masks.
    design.achieved_overlap = conversion_overlap(design, input, target);
    return design;
}

double conversion_overlap(const ConverterDesign& design, const ComplexField& input,
                          const ComplexField& target) {
    if (input.grid() != target.grid())
        throw DimensionError("conversion_overlap: input and target grids differ");
    if (!design.masks.empty() && design.masks.front().grid() != input.grid())
        throw DimensionError("conversion_overlap: design grid mismatch");
    const ComplexField reference = reference_output(target, design.spacings);
    const auto planes = forward_pass(input, design.masks, design.spacings);
    return std::norm(inner_product(reference, planes.back()));
}

}  // namespace mplc
