#pragma once

#include <cstdint>
#include <utility>

#include "stpca/fock.hpp"
#include "stpca/hamiltonian.hpp"
#include "stpca/tensor.hpp"

namespace stpca {

/// Energy-scale summary for one (p, N, n_bos, lambda_bar, ensemble) cell.
/// e_cut is always the midpoint of e_signal and e_max.
struct SpectralThresholds {
    int p = 0;
    int dim = 0;
    int n_bos = 0;
    double lambda_bar = 0.0;
    Field field = Field::real;

    double coupling_j = 0.0; // variance scale of the coupling distribution
    double e_signal = 0.0;   // planted top eigenvalue, leading order
    double e_max = 0.0;      // high-probability bound on the null top eigenvalue
    double e_cut = 0.0;      // decision threshold, (e_signal + e_max)/2
    double xi = 0.0;         // exponential tail scale above e_max
};

SpectralThresholds thresholds(int p, int dim, int n_bos, double lambda_bar, Field field);

/// Inverts the threshold formulas: the lambda_bar for which e_signal = ratio * e_max.
double lambda_for_ratio(int p, int dim, int n_bos, double ratio, Field field);

enum class EigenMethod {
    automatic, // dense below the cap, power iteration above
    power,
    dense,
};

struct EigenResult {
    double value = 0.0;
    FockVector vector;
    std::size_t iterations = 0;
    double residual = 0.0;
};

/// Largest eigenvalue and a unit eigenvector. Power iteration runs on the
/// shifted operator H + sigma I with sigma the cached norm bound, so the top
/// of the spectrum dominates even when the raw spectrum is sign-symmetric.
/// max_iter = 0 selects the default budget 10 * D * ln(D).
EigenResult leading_eigenpair(const HamiltonianOperator& h,
                              double tol = 1e-8,
                              std::size_t max_iter = 0,
                              std::uint64_t seed = 1,
                              EigenMethod method = EigenMethod::automatic);

struct DetectionReport {
    double lambda1 = 0.0;
    SpectralThresholds thresholds;
    bool planted = false;
    std::size_t iterations = 0;
    double residual = 0.0;
};

/// Decision rule: planted iff lambda1 strictly exceeds e_cut.
DetectionReport detect(const DenseTensor& t0, double lambda_bar, int n_bos,
                       std::uint64_t seed = 1,
                       EigenMethod method = EigenMethod::automatic);

/// Samples u = conj(L) z with L the self-adjoint square root of rho and z a
/// standard (complex) Gaussian, then normalizes. A numerically real rho gets
/// real draws. Throws on inputs that are not PSD with unit trace.
Eigen::VectorXcd randomized_rounding(const DensityMatrix& rho, std::uint64_t seed);

struct RecoveryReport {
    bool detection_passed = false;
    double lambda1 = 0.0;
    SpectralThresholds thresholds;
    DensityMatrix rho1;
    double overlap_ratio = 0.0; // <v|rho1|v>/N when the signal is supplied
    Eigen::VectorXcd recovered; // unit vector after the boost step
    double rounded_corr = 0.0;  // correlation of the rounded vector, pre-boost
    double boosted_corr = 0.0;  // correlation of `recovered` with the signal
};

/// Full pipeline: leading eigenpair, density matrix, randomized rounding with
/// retries (keeping the candidate maximizing <w|rho1|w>), one tensor power
/// step, normalization. Correlations are filled when `signal` is non-null.
RecoveryReport recover(const DenseTensor& t0, double lambda_bar, int n_bos,
                       std::uint64_t seed,
                       const SignalVector* signal = nullptr,
                       EigenMethod method = EigenMethod::automatic,
                       int rounding_retries = 8);

} // namespace stpca
