#pragma once

#include <cstdint>
#include <optional>

#include "stpca/fock.hpp"
#include "stpca/hamiltonian.hpp"
#include "stpca/spectral.hpp"

namespace stpca {

enum class WindowShape { hard, erf };

/// Inverse error function (Newton on std::erf); |y| < 1.
double erf_inverse(double y);

/// Spectral-window acceptance model: the filter applied by the measurement
/// step, evaluated exactly on the eigendecomposition of H. q[i] is the
/// acceptance probability of eigenvector i. Below the cut q <= eps; well
/// above the center q >= 1 - eps; q is monotone in the eigenvalue.
struct PhaseEstimationModel {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
    Eigen::VectorXd q;
    SpectralThresholds thresholds;
    double center = 0.0;
    double width = 0.0; // 0 for hard windows
    double epsilon_tilde = 0.0;
    WindowShape shape = WindowShape::hard;
    BasisPtr basis;
};

PhaseEstimationModel pe_model(const HamiltonianOperator& h, const SpectralThresholds& th,
                              double epsilon_tilde, WindowShape shape);

/// sum_i q_i |<v_i|input>|^2 for a normalized pure input.
double success_probability(const PhaseEstimationModel& model, const FockVector& input);

/// Maximally mixed input: sum_i q_i / D.
double success_probability_mixed(const PhaseEstimationModel& model);

/// Empirical frequency over projective draws (eigenbasis sample, then a
/// Bernoulli with that eigenvector's q); oracle for success_probability.
double simulate_success_frequency(const PhaseEstimationModel& model, const FockVector& input,
                                  std::size_t trials, std::uint64_t seed);

/// Post-measurement state conditioned on acceptance; hard windows only.
FockVector project_success(const PhaseEstimationModel& model, const FockVector& input);

struct ChosenInputReport {
    FockVector state;
    double projection_keep = 0.0; // norm^2 retained by the symmetric projection
    bool padded = false;          // boson count not divisible by the order
    // squared overlap with the embedded pure-signal state, when supplied
    std::optional<double> squared_overlap_signal;
};

/// Embeds |t0>^{(n_bos/p copies)} into the occupation basis and normalizes.
/// When p does not divide n_bos the remainder legs are filled with seeded
/// random computational directions and the report is flagged approximate.
ChosenInputReport prepare_chosen_input(const DenseTensor& t0, int n_bos,
                                       bool allow_padding = false, std::uint64_t pad_seed = 0,
                                       const SignalVector* signal = nullptr);

/// Interpolated input family: embeds S = t0 + x*y*Delta + x(1-y)/sqrt(1+x^2) * delta'
/// with Delta a fresh unit-variance draw and delta' a fresh draw with entry
/// deviation x_prime. x = 0 reproduces prepare_chosen_input(t0) exactly.
struct PerturbedInputReport {
    ChosenInputReport chosen;
    double x = 0.0, y = 0.0, x_prime = 0.0;
};

PerturbedInputReport perturbed_input(const DenseTensor& t0, int n_bos, double x, double y,
                                     double x_prime, std::uint64_t seed_delta,
                                     std::uint64_t seed_delta_prime,
                                     bool allow_padding = false, std::uint64_t pad_seed = 0,
                                     const SignalVector* signal = nullptr);

/// ceil(pi / (4 asin(sqrt(p)))): repetitions amplifying success chance p.
int amplification_iterations(double p_success);

enum class CostVariant { classical_power, quantum_unamplified, quantum_amplified,
                         quantum_chosen_input };

struct CostRecord {
    CostVariant variant = CostVariant::classical_power;
    double success_probability = 1.0;
    double oracle_calls = 0.0;     // per-attempt operator applications
    double state_prep_cost = 0.0;  // per-attempt input preparation
    double amplification = 1.0;    // expected repetition factor
    double expected_total_cost = 0.0;
};

struct CostParams {
    int p = 4;
    int dim = 8;
    int n_bos = 4;
    double lambda_bar = 0.0;
    Field field = Field::real;
    double epsilon_tilde = 0.05;
};

/// Closed-form cost accounting on the threshold scales (no sampling):
/// classical power iteration pays dimension * power count; window-filter
/// variants pay 2^s per attempt, s = ceil(log2((e0+emax)/(e0-emax))), with
/// the attempt count set by the raw or amplified success probability.
CostRecord runtime_model(CostVariant variant, const CostParams& params);

} // namespace stpca
