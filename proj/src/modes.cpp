#include "mplc/modes.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mplc {

namespace {

// Power on the grid may fall short of the analytic unit power by truncation
// (tails clipped) or undersampling; both are rejected past this fraction.
constexpr double kTruncationTolerance = 1e-4;

ComplexField finish_mode(const GridSpec& grid, std::vector<Complex> amp, const std::string& what) {
    ComplexField raw(grid, std::move(amp));
    const double p = power(raw);
    if (!(p > 0.0) || !raw.finite())
        throw TruncationError(what + ": mode vanished on the grid");
    if (std::abs(p - 1.0) > kTruncationTolerance)
        throw TruncationError(what + ": grid captures power " + std::to_string(p) +
                              ", outside 1 +/- 1e-4 (waist too large for grid or undersampled)");
    return scaled(raw, Complex{1.0 / std::sqrt(p), 0.0});
}

}  // namespace

void ModeSpec::validate() const {
    if (!(waist > 0.0))
        throw std::invalid_argument("ModeSpec: waist must be positive");
    if (family == ModeFamily::LG) {
        if (index2 < 0)
            throw std::invalid_argument("ModeSpec: LG radial index p must be >= 0");
    } else {
        if (index1 < 0 || index2 < 0)
            throw std::invalid_argument("ModeSpec: HG indices must be >= 0");
    }
}

std::string ModeSpec::token() const {
    std::ostringstream os;
    os << (family == ModeFamily::LG ? "LG:" : "HG:") << index1 << ',' << index2
       << ':' << waist * 1e3;
    return os.str();
}

std::string ModeSpec::label() const {
    std::ostringstream os;
    os << (family == ModeFamily::LG ? "LG(" : "HG(") << index1 << ',' << index2 << ')';
    return os.str();
}

ModeSpec parse_mode_token(const std::string& token, double default_waist) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : token) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() < 2 || parts.size() > 3)
        throw std::invalid_argument("mode token must look like FAMILY:i,j[:waist_mm]: " + token);

    ModeSpec spec;
    if (parts[0] == "LG" || parts[0] == "lg")
        spec.family = ModeFamily::LG;
    else if (parts[0] == "HG" || parts[0] == "hg")
        spec.family = ModeFamily::HG;
    else
        throw std::invalid_argument("unknown mode family '" + parts[0] + "' in token " + token);

    const auto comma = parts[1].find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("mode token indices must be 'i,j': " + token);
    try {
        spec.index1 = std::stoi(parts[1].substr(0, comma));
        spec.index2 = std::stoi(parts[1].substr(comma + 1));
        spec.waist = parts.size() == 3 ? std::stod(parts[2]) * 1e-3 : default_waist;
    } catch (const std::exception&) {
        throw std::invalid_argument("could not parse numbers in mode token: " + token);
    }
    spec.validate();
    return spec;
}

Superposition parse_superposition_json(const std::string& text, double default_waist) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("superposition: invalid JSON: ") + e.what());
    }
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("superposition: expected a non-empty JSON array");
    Superposition s;
    for (const auto& entry : j) {
        if (!entry.contains("spec"))
            throw std::invalid_argument("superposition: entry missing 'spec'");
        s.coefficients.emplace_back(entry.value("re", 0.0), entry.value("im", 0.0));
        s.specs.push_back(parse_mode_token(entry["spec"].get<std::string>(), default_waist));
    }
    return s;
}

ComplexField lg_mode(const ModeSpec& spec, const GridSpec& grid) {
    if (spec.family != ModeFamily::LG)
        throw std::invalid_argument("lg_mode: spec is not an LG mode");
    spec.validate();
    const int l = spec.index1;
    const int p = spec.index2;
    const int al = std::abs(l);
    const double w = spec.waist;
    // sqrt(2 p! / (pi (p+|l|)!)) / w, via lgamma to stay finite for large indices
    const double norm = std::sqrt(2.0 / M_PI) / w *
                        std::exp(0.5 * (std::lgamma(p + 1.0) - std::lgamma(p + al + 1.0)));

    std::vector<Complex> amp(grid.samples());
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y_at(iy);
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x_at(ix);
            const double r2 = x * x + y * y;
            const double rho = std::sqrt(2.0 * r2) / w;
            const double radial = norm * std::pow(rho, al) *
                                  std::assoc_laguerre(p, al, 2.0 * r2 / (w * w)) *
                                  std::exp(-r2 / (w * w));
            const double phi = std::atan2(y, x);
            amp[static_cast<std::size_t>(iy) * grid.nx + ix] = radial * std::polar(1.0, l * phi);
        }
    }
    return finish_mode(grid, std::move(amp), "lg_mode " + spec.label());
}

ComplexField hg_mode(const ModeSpec& spec, const GridSpec& grid) {
    if (spec.family != ModeFamily::HG)
        throw std::invalid_argument("hg_mode: spec is not an HG mode");
    spec.validate();
    const int n = spec.index1;
    const int m = spec.index2;
    const double w = spec.waist;
    const double norm = std::sqrt(2.0 / M_PI) / w *
                        std::exp(-0.5 * ((n + m) * std::log(2.0) +
                                         std::lgamma(n + 1.0) + std::lgamma(m + 1.0)));

    // Separable: precompute the 1-D Hermite factors per axis.
    std::vector<double> fx(grid.nx), fy(grid.ny);
    for (int ix = 0; ix < grid.nx; ++ix) {
        const double x = grid.x_at(ix);
        fx[ix] = std::hermite(n, std::sqrt(2.0) * x / w) * std::exp(-x * x / (w * w));
    }
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y_at(iy);
        fy[iy] = std::hermite(m, std::sqrt(2.0) * y / w) * std::exp(-y * y / (w * w));
    }

    std::vector<Complex> amp(grid.samples());
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
            amp[static_cast<std::size_t>(iy) * grid.nx + ix] = Complex{norm * fx[ix] * fy[iy], 0.0};
    return finish_mode(grid, std::move(amp), "hg_mode " + spec.label());
}

ComplexField generate_mode(const ModeSpec& spec, const GridSpec& grid) {
    return spec.family == ModeFamily::LG ? lg_mode(spec, grid) : hg_mode(spec, grid);
}

ComplexField gaussian_mode(const GridSpec& grid, double waist) {
    return lg_mode(ModeSpec{ModeFamily::LG, 0, 0, waist}, grid);
}

ComplexField superpose(const Superposition& s, const GridSpec& grid) {
    if (s.coefficients.size() != s.specs.size())
        throw std::invalid_argument("superpose: coefficients and specs differ in length");
    if (s.specs.empty())
        throw std::invalid_argument("superpose: empty superposition");
    double total = 0.0;
    for (const Complex& c : s.coefficients) total += std::norm(c);
    if (!(total > 0.0))
        throw DegenerateFieldError("superpose: all coefficients are zero");
    const double waist = s.specs.front().waist;
    for (const ModeSpec& spec : s.specs)
        if (spec.waist != waist)
            throw std::invalid_argument("superpose: all specs must share one waist");

    std::vector<Complex> acc(grid.samples(), Complex{0.0, 0.0});
    for (std::size_t k = 0; k < s.specs.size(); ++k) {
        if (s.coefficients[k] == Complex{0.0, 0.0}) continue;
        const ComplexField mode = generate_mode(s.specs[k], grid);
        const auto& va = mode.amplitude();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s.coefficients[k] * va[i];
    }
    return normalize(ComplexField(grid, std::move(acc)));
}

std::vector<ModeSpec> lg9_set(double waist) {
    std::vector<ModeSpec> out;
    for (int l = -1; l <= 1; ++l)
        for (int p = 0; p <= 2; ++p)
            out.push_back(ModeSpec{ModeFamily::LG, l, p, waist});
    return out;
}

std::vector<ModeSpec> hg9_set(double waist) {
    std::vector<ModeSpec> out;
    for (int n = 0; n <= 2; ++n)
        for (int m = 0; m <= 2; ++m)
            out.push_back(ModeSpec{ModeFamily::HG, n, m, waist});
    return out;
}

}  // namespace mplc
