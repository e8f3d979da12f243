#include "mplc/propagation.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace mplc {

namespace {

// One pair of in-place c2c plans per grid shape. Plan creation is not
// thread-safe in FFTW, execution with caller buffers is.
class FftEngine {
  public:
    FftEngine(int nx, int ny) : nx_(nx), ny_(ny) {
        std::vector<Complex> scratch(static_cast<std::size_t>(nx) * ny);
        auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_MEASURE | FFTW_UNALIGNED;
        fwd_ = fftw_plan_dft_2d(ny, nx, p, p, FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft_2d(ny, nx, p, p, FFTW_BACKWARD, flags);
    }
    ~FftEngine() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    void forward(std::vector<Complex>& data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(fwd_, p, p);
    }
    // Unnormalized; callers fold the 1/(nx*ny) scale into the transfer pass.
    void backward(std::vector<Complex>& data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(bwd_, p, p);
    }

  private:
    int nx_, ny_;
    fftw_plan fwd_, bwd_;
};

const FftEngine& engine_for(const GridSpec& grid) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<FftEngine>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(grid.nx, grid.ny);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<FftEngine>(grid.nx, grid.ny)).first;
    return *it->second;
}

std::shared_ptr<const std::vector<Complex>> make_transfer(const GridSpec& grid, double z) {
    auto transfer = std::make_shared<std::vector<Complex>>(grid.samples());
    if (z == 0.0) {
        transfer->assign(grid.samples(), Complex{1.0, 0.0});
        return transfer;
    }
    const double lambda = grid.wavelength;
    const double inv_l2 = 1.0 / (lambda * lambda);
    const double dfx = 1.0 / grid.extent_x();
    const double dfy = 1.0 / grid.extent_y();
    // Band limit of the sampled transfer function (Matsushima-style, per axis).
    const double fx_lim = 1.0 / (lambda * std::sqrt(4.0 * dfx * dfx * z * z + 1.0));
    const double fy_lim = 1.0 / (lambda * std::sqrt(4.0 * dfy * dfy * z * z + 1.0));

    for (int iy = 0; iy < grid.ny; ++iy) {
        const double fy = dfy * (iy <= grid.ny / 2 ? iy : iy - grid.ny);
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double fx = dfx * (ix <= grid.nx / 2 ? ix : ix - grid.nx);
            const double arg = inv_l2 - fx * fx - fy * fy;
            Complex h{0.0, 0.0};
            if (arg > 0.0 && std::abs(fx) <= fx_lim && std::abs(fy) <= fy_lim)
                h = std::polar(1.0, 2.0 * M_PI * z * std::sqrt(arg));
            (*transfer)[static_cast<std::size_t>(iy) * grid.nx + ix] = h;
        }
    }
    return transfer;
}

// Transfers are reused heavily by sweeps and projections; keep a small cache.
std::shared_ptr<const std::vector<Complex>> transfer_for(const GridSpec& grid, double z) {
    struct Key {
        int nx, ny;
        double pitch, wavelength, z;
        auto operator<=>(const Key&) const = default;
    };
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const std::vector<Complex>>> cache;
    const Key key{grid.nx, grid.ny, grid.pitch, grid.wavelength, z};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto transfer = make_transfer(grid, z);
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 64) cache.clear();
    return cache.emplace(key, std::move(transfer)).first->second;
}

}  // namespace

PropagationPlan::PropagationPlan(const GridSpec& grid, double distance)
    : grid_(grid), distance_(distance), transfer_(transfer_for(grid, distance)) {
    engine_for(grid);  // force plan creation up front
}

void PropagationPlan::apply_inplace(std::vector<Complex>& amp, bool inverse) const {
    const FftEngine& fft = engine_for(grid_);
    fft.forward(amp);
    const double scale = 1.0 / static_cast<double>(grid_.samples());
    const auto& h = *transfer_;
    if (inverse) {
        for (std::size_t i = 0; i < amp.size(); ++i) amp[i] *= std::conj(h[i]) * scale;
    } else {
        for (std::size_t i = 0; i < amp.size(); ++i) amp[i] *= h[i] * scale;
    }
    fft.backward(amp);
}

ComplexField PropagationPlan::apply(const ComplexField& a) const {
    if (a.grid() != grid_)
        throw DimensionError("PropagationPlan::apply: grid mismatch");
    std::vector<Complex> amp = a.amplitude();
    apply_inplace(amp, false);
    return ComplexField(grid_, std::move(amp));
}

ComplexField PropagationPlan::apply_inverse(const ComplexField& a) const {
    if (a.grid() != grid_)
        throw DimensionError("PropagationPlan::apply_inverse: grid mismatch");
    std::vector<Complex> amp = a.amplitude();
    apply_inplace(amp, true);
    return ComplexField(grid_, std::move(amp));
}

ComplexField propagate(const ComplexField& a, double distance) {
    return PropagationPlan(a.grid(), distance).apply(a);
}

std::vector<ComplexField> forward_pass(const ComplexField& a,
                                       const std::vector<PhaseMask>& masks,
                                       const std::vector<double>& spacings) {
    if (masks.size() != spacings.size())
        throw DimensionError("forward_pass: masks and spacings differ in length");
    for (const PhaseMask& m : masks)
        if (m.grid() != a.grid())
            throw DimensionError("forward_pass: mask grid mismatch");

    std::vector<ComplexField> planes;
    planes.reserve(masks.size() + 1);
    planes.push_back(a);
    for (std::size_t t = 0; t < masks.size(); ++t) {
        PropagationPlan plan(a.grid(), spacings[t]);
        planes.push_back(plan.apply(apply_phase(planes.back(), masks[t])));
    }
    return planes;
}

std::vector<ComplexField> backward_pass(const ComplexField& g,
                                        const std::vector<PhaseMask>& masks,
                                        const std::vector<double>& spacings) {
    if (masks.size() != spacings.size())
        throw DimensionError("backward_pass: masks and spacings differ in length");
    for (const PhaseMask& m : masks)
        if (m.grid() != g.grid())
            throw DimensionError("backward_pass: mask grid mismatch");

    std::vector<ComplexField> planes(masks.size() + 1);
    planes[masks.size()] = g;
    for (std::size_t t = masks.size(); t-- > 0;) {
        PropagationPlan plan(g.grid(), spacings[t]);
        planes[t] = apply_phase(plan.apply_inverse(planes[t + 1]), masks[t]);
    }
    return planes;
}

}  // namespace mplc
