#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mplc/modes.hpp"
#include "mplc/projector.hpp"

namespace mplc {

using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

/// The d-dimensional encoding space: qudit level k maps to modes[k].
struct ModeBasis {
    int dimension = 0;
    std::vector<ModeSpec> modes;
};

/// The seven LG modes used for the qudit experiments, in ket order
/// |1>..|7> = (-1,1), (-1,0), (0,0), (0,1), (0,2), (1,0), (1,1).
ModeBasis default_mode_basis(double waist = 0.94e-3);

/// d+1 mutually unbiased bases in prime dimension d. bases[0] is the
/// computational basis; basis k >= 1, state n has components
///   (1/sqrt(d)) omega_d^(n m + (k-1) m^2),  omega_d = exp(2 pi i / d),
/// so k = 1 is the quantum Fourier basis. d = 2 uses the standard X/Y pair
/// (the quadratic-exponent construction needs an odd prime).
struct MubSet {
    int dimension = 0;
    std::vector<std::vector<StateVector>> bases;  // (d+1) x d
};

MubSet mub_states(int d);

/// h_d(x) = -x log2(x / (d-1)) - (1-x) log2(1-x), continuous at 0 and 1.
double shannon_entropy_d(double x, int d);

/// R = log2(d) - 2 h_d(e_b). May be negative (no secure key).
double secret_key_rate(double error_rate, int d);

/// Born-rule probabilities |<basis_i|psi>|^2 for an orthonormal basis.
std::vector<double> born_probabilities(const StateVector& psi,
                                       const std::vector<StateVector>& basis);

struct Bb84Result {
    int dimension = 0;
    std::int64_t rounds = 0;
    std::int64_t sifted = 0;   // basis match and detector fired
    std::int64_t errors = 0;
    double sifted_fraction = 0.0;
    double error_rate = 0.0;
    double key_rate = 0.0;
};

/// The ideal 2d x 2d channel for the two-basis protocol: identity couplings
/// within each basis, 1/d across bases. State order: d computational then
/// d Fourier states.
CrosstalkMatrix ideal_bb84_channel(int d);

/// Sifted-key BB84 with single-outcome projections. Alice draws a uniform
/// (basis, state), Bob a uniform (basis, projector); a round is kept when the
/// bases match and the detector fires with the channel's coupling
/// probability. Deterministic for a fixed seed.
Bb84Result simulate_bb84(const CrosstalkMatrix& channel, std::int64_t n_rounds,
                         std::uint64_t seed);

/// The error rate the channel implies in expectation (uniform state and
/// projector choice within matched bases).
double bb84_expected_error_rate(const CrosstalkMatrix& channel);

/// Direct inversion rho = sum_{k,n} P[k][n] |phi_n^k><phi_n^k| - I.
/// Each row of P must sum to 1 (within 1e-6). The result is Hermitian with
/// unit trace; eigenvalues may be negative for noisy P and are not clipped.
DensityMatrix reconstruct_density(const Eigen::MatrixXd& probabilities, const MubSet& mubs);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2. When either argument is
/// pure this reduces to <psi| other |psi>, which is used directly; the
/// general path clamps negative eigenvalues to zero before the square roots.
double fidelity(const DensityMatrix& rho_exp, const DensityMatrix& rho_th);

enum class ProjectorSource { Ideal, WfmSimulated };

struct TomographyOptions {
    ProjectorSource source = ProjectorSource::Ideal;
    GridSpec grid;                  // required for WFM-simulated projectors
    WfmConfig wfm;
    std::vector<double> spacings;
    double target_waist = 0.94e-3;
    std::function<void(int done, int total)> progress;  // optional
};

struct TomographyResult {
    Eigen::MatrixXd probabilities;  // (d+1) x d, normalized per basis
    DensityMatrix rho;
    double fidelity = 0.0;
    ProjectorSource source = ProjectorSource::Ideal;
    bool all_converged = true;
};

/// Measure psi in all d(d+1) MUB projectors, reconstruct by direct inversion,
/// and report the fidelity against |psi><psi|. With WFM-simulated projectors
/// every MUB state is synthesized as a mode-superposition field, a converter
/// is designed for it, and the coupling of psi's field is used as the raw
/// rate; raw rates are normalized within each basis.
TomographyResult run_tomography(const StateVector& psi, const ModeBasis& basis,
                                const TomographyOptions& opts);

/// The sin-amplitude test state, amplitudes sin(n pi / 6) / sqrt(3), n = 0..6.
StateVector sin_test_state();

}  // namespace mplc
