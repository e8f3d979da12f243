#include "mplc/quantum.hpp"

#include <cmath>
#include <random>

namespace mplc {

namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

void require_prime(int d, const char* who) {
    if (!is_prime(d))
        throw std::invalid_argument(std::string(who) +
                                    ": dimension must be prime (got " + std::to_string(d) + ")");
}

void check_density(const DensityMatrix& rho, const char* who) {
    if (rho.rows() != rho.cols() || rho.rows() < 1)
        throw std::invalid_argument(std::string(who) + ": density matrix must be square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument(std::string(who) + ": density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-6 || std::abs(rho.trace().imag()) > 1e-8)
        throw std::invalid_argument(std::string(who) + ": density matrix trace is not 1");
}

}  // namespace

ModeBasis default_mode_basis(double waist) {
    ModeBasis b;
    b.dimension = 7;
    const int lp[7][2] = {{-1, 1}, {-1, 0}, {0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}};
    for (const auto& idx : lp)
        b.modes.push_back(ModeSpec{ModeFamily::LG, idx[0], idx[1], waist});
    return b;
}

MubSet mub_states(int d) {
    require_prime(d, "mub_states");
    MubSet set;
    set.dimension = d;
    set.bases.resize(d + 1);

    std::vector<StateVector>& comp = set.bases[0];
    comp.resize(d);
    for (int n = 0; n < d; ++n) {
        comp[n] = StateVector::Zero(d);
        comp[n](n) = 1.0;
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 1; k <= d; ++k) {
        set.bases[k].resize(d);
        for (int n = 0; n < d; ++n) {
            StateVector v(d);
            for (int m = 0; m < d; ++m) {
                long long num;
                long long den;
                if (d == 2) {
                    // Odd-prime exponent construction degenerates at d = 2;
                    // use the standard X (k=1) and Y (k=2) bases instead.
                    num = 2LL * n * m + static_cast<long long>(k - 1) * m;
                    den = 4;
                } else {
                    num = (static_cast<long long>(n) * m +
                           static_cast<long long>(k - 1) * m * m) % d;
                    den = d;
                }
                v(m) = scale * std::polar(1.0, 2.0 * M_PI * static_cast<double>(num) /
                                                   static_cast<double>(den));
            }
            set.bases[k][n] = v;
        }
    }
    return set;
}

double shannon_entropy_d(double x, int d) {
    if (d < 2)
        throw std::domain_error("shannon_entropy_d: d must be >= 2");
    if (!(x >= 0.0) || x > 1.0)
        throw std::domain_error("shannon_entropy_d: x must be in [0, 1]");
    double h = 0.0;
    if (x > 0.0) h -= x * std::log2(x / (d - 1));
    if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
    return h;
}

double secret_key_rate(double error_rate, int d) {
    return std::log2(static_cast<double>(d)) - 2.0 * shannon_entropy_d(error_rate, d);
}

std::vector<double> born_probabilities(const StateVector& psi,
                                       const std::vector<StateVector>& basis) {
    const int d = static_cast<int>(psi.size());
    if (std::abs(psi.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("born_probabilities: state is not unit-norm");
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
        if (basis[i].size() != d)
            throw std::invalid_argument("born_probabilities: basis dimension mismatch");
        for (int j = i; j < static_cast<int>(basis.size()); ++j) {
            const double g = std::abs(Complex(basis[i].dot(basis[j])) - (i == j ? 1.0 : 0.0));
            if (g > 1e-8)
                throw std::invalid_argument("born_probabilities: basis is not orthonormal");
        }
    }
    std::vector<double> p(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        p[i] = std::norm(Complex(basis[i].dot(psi)));
    return p;
}

CrosstalkMatrix ideal_bb84_channel(int d) {
    require_prime(d, "ideal_bb84_channel");
    CrosstalkMatrix c;
    const int two_d = 2 * d;
    c.values.assign(static_cast<std::size_t>(two_d) * two_d, 0.0);
    c.row_converged.assign(two_d, true);
    for (int b = 0; b < 2; ++b)
        for (int n = 0; n < d; ++n)
            c.labels.push_back((b == 0 ? "comp" : "fourier") + std::to_string(n));
    for (int i = 0; i < two_d; ++i)
        for (int j = 0; j < two_d; ++j) {
            const bool same_basis = (i / d) == (j / d);
            c.at(i, j) = same_basis ? (i == j ? 1.0 : 0.0) : 1.0 / d;
        }
    return c;
}

Bb84Result simulate_bb84(const CrosstalkMatrix& channel, std::int64_t n_rounds,
                         std::uint64_t seed) {
    if (n_rounds <= 0)
        throw std::invalid_argument("simulate_bb84: n_rounds must be positive");
    const int two_d = channel.dimension();
    if (two_d < 4 || two_d % 2 != 0)
        throw std::invalid_argument("simulate_bb84: channel must cover 2*d states");
    const int d = two_d / 2;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_basis(0, 1);
    std::uniform_int_distribution<int> pick_state(0, d - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Bb84Result r;
    r.dimension = d;
    r.rounds = n_rounds;
    for (std::int64_t round = 0; round < n_rounds; ++round) {
        const int basis_a = pick_basis(rng);
        const int state_a = pick_state(rng);
        const int basis_b = pick_basis(rng);
        const int state_b = pick_state(rng);
        const double coupling = channel.at(basis_b * d + state_b, basis_a * d + state_a);
        const bool fired = unit(rng) < coupling;
        if (basis_a != basis_b || !fired) continue;
        ++r.sifted;
        if (state_b != state_a) ++r.errors;
    }
    if (r.sifted == 0)
        throw std::runtime_error("simulate_bb84: no sifted detections");
    r.sifted_fraction = static_cast<double>(r.sifted) / static_cast<double>(n_rounds);
    r.error_rate = static_cast<double>(r.errors) / static_cast<double>(r.sifted);
    r.key_rate = secret_key_rate(r.error_rate, d);
    return r;
}

double bb84_expected_error_rate(const CrosstalkMatrix& channel) {
    const int two_d = channel.dimension();
    if (two_d < 4 || two_d % 2 != 0)
        throw std::invalid_argument("bb84_expected_error_rate: channel must cover 2*d states");
    const int d = two_d / 2;
    double err = 0.0, kept = 0.0;
    for (int b = 0; b < 2; ++b)
        for (int s = 0; s < d; ++s)
            for (int r = 0; r < d; ++r) {
                const double c = channel.at(b * d + r, b * d + s);
                kept += c;
                if (r != s) err += c;
            }
    if (!(kept > 0.0))
        throw DegenerateFieldError("bb84_expected_error_rate: channel never fires");
    return err / kept;
}

DensityMatrix reconstruct_density(const Eigen::MatrixXd& probabilities, const MubSet& mubs) {
    const int d = mubs.dimension;
    if (probabilities.rows() != d + 1 || probabilities.cols() != d)
        throw std::invalid_argument("reconstruct_density: probabilities must be (d+1) x d");
    for (int k = 0; k <= d; ++k)
        if (std::abs(probabilities.row(k).sum() - 1.0) > 1e-6)
            throw std::invalid_argument("reconstruct_density: basis " + std::to_string(k) +
                                        " probabilities do not sum to 1");
    DensityMatrix rho = DensityMatrix::Zero(d, d);
    for (int k = 0; k <= d; ++k)
        for (int n = 0; n < d; ++n) {
            const StateVector& v = mubs.bases[k][n];
            rho += probabilities(k, n) * (v * v.adjoint());
        }
    rho -= DensityMatrix::Identity(d, d);
    // Symmetrize away rounding noise; the construction is Hermitian.
    rho = (rho + rho.adjoint().eval()) / 2.0;
    return rho;
}

double fidelity(const DensityMatrix& rho_exp, const DensityMatrix& rho_th) {
    check_density(rho_exp, "fidelity");
    check_density(rho_th, "fidelity");
    if (rho_exp.rows() != rho_th.rows())
        throw std::invalid_argument("fidelity: dimension mismatch");

    auto purity = [](const DensityMatrix& r) { return (r * r).trace().real(); };
    auto pure_overlap = [](const DensityMatrix& pure, const DensityMatrix& other) {
        Eigen::SelfAdjointEigenSolver<DensityMatrix> es(pure);
        const int top = static_cast<int>(pure.rows()) - 1;  // eigenvalues ascend
        const StateVector psi = es.eigenvectors().col(top);
        return (psi.adjoint() * other * psi)(0, 0).real();
    };

    double f;
    if (std::abs(purity(rho_th) - 1.0) <= 1e-10) {
        f = pure_overlap(rho_th, rho_exp);
    } else if (std::abs(purity(rho_exp) - 1.0) <= 1e-10) {
        f = pure_overlap(rho_exp, rho_th);
    } else {
        Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho_exp);
        Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
        const DensityMatrix sqrt_exp = es.eigenvectors() *
                                       lam.cwiseSqrt().asDiagonal() *
                                       es.eigenvectors().adjoint();
        const DensityMatrix inner = sqrt_exp * rho_th * sqrt_exp;
        Eigen::SelfAdjointEigenSolver<DensityMatrix> es2((inner + inner.adjoint()) / 2.0);
        const double tr = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
        f = tr * tr;
    }
    return std::clamp(f, 0.0, 1.0 + 1e-6);
}

TomographyResult run_tomography(const StateVector& psi, const ModeBasis& basis,
                                const TomographyOptions& opts) {
    const int d = static_cast<int>(psi.size());
    require_prime(d, "run_tomography");
    if (std::abs(psi.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("run_tomography: state is not unit-norm");
    if (basis.dimension != d || static_cast<int>(basis.modes.size()) != d)
        throw std::invalid_argument("run_tomography: mode basis dimension mismatch");

    const MubSet mubs = mub_states(d);
    TomographyResult result;
    result.source = opts.source;
    Eigen::MatrixXd probs(d + 1, d);

    if (opts.source == ProjectorSource::Ideal) {
        for (int k = 0; k <= d; ++k) {
            const auto p = born_probabilities(psi, mubs.bases[k]);
            for (int n = 0; n < d; ++n) probs(k, n) = p[n];
        }
    } else {
        auto field_of = [&](const StateVector& v) {
            Superposition s;
            for (int m = 0; m < d; ++m) {
                s.coefficients.push_back(v(m));
                s.specs.push_back(basis.modes[m]);
            }
            return superpose(s, opts.grid);
        };
        const ComplexField psi_field = field_of(psi);
        const ComplexField target = gaussian_mode(opts.grid, opts.target_waist);
        const int total = d * (d + 1);
        int done = 0;
        for (int k = 0; k <= d; ++k) {
            for (int n = 0; n < d; ++n) {
                ConverterDesign design =
                    design_converter(field_of(mubs.bases[k][n]), target, opts.wfm, opts.spacings);
                result.all_converged = result.all_converged && design.converged;
                probs(k, n) = project(design, psi_field);
                if (opts.progress) opts.progress(++done, total);
            }
            // Single-outcome projectors measure rates; probabilities are
            // rates normalized within each basis.
            const double row = probs.row(k).sum();
            if (!(row > 0.0))
                throw DegenerateFieldError("run_tomography: basis " + std::to_string(k) +
                                           " has zero total coupling");
            probs.row(k) /= row;
        }
    }

    result.probabilities = probs;
    result.rho = reconstruct_density(probs, mubs);
    const DensityMatrix truth = psi * psi.adjoint();
    result.fidelity = fidelity(result.rho, truth);
    return result;
}

StateVector sin_test_state() {
    StateVector psi(7);
    for (int n = 0; n < 7; ++n) psi(n) = std::sin(n * M_PI / 6.0);
    psi /= psi.norm();  // normalization constant sqrt(3)
    return psi;
}

}  // namespace mplc
