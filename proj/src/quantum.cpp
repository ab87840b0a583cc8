#include "stpca/quantum.hpp"

#include <cmath>

#include "stpca/path_integral.hpp"
#include "stpca/rng.hpp"

namespace stpca {

double erf_inverse(double y) {
    if (!(y > -1.0 && y < 1.0)) throw contract_error("erf_inverse: argument must be in (-1,1)");
    if (y == 0.0) return 0.0;

    // Winitzki-style seed, then Newton on erf
    const double a = 0.147;
    const double ln1 = std::log(1.0 - y * y);
    const double t = 2.0 / (M_PI * a) + 0.5 * ln1;
    double x = std::copysign(std::sqrt(std::sqrt(t * t - ln1 / a) - t), y);
    for (int i = 0; i < 6; ++i) {
        const double err = std::erf(x) - y;
        x -= err * 0.5 * std::sqrt(M_PI) * std::exp(x * x);
    }
    return x;
}

PhaseEstimationModel pe_model(const HamiltonianOperator& h, const SpectralThresholds& th,
                              double epsilon_tilde, WindowShape shape) {
    if (!(epsilon_tilde > 0.0 && epsilon_tilde < 0.5))
        throw contract_error("pe_model: epsilon_tilde must lie in (0, 1/2)");

    PhaseEstimationModel model;
    model.thresholds = th;
    model.epsilon_tilde = epsilon_tilde;
    model.shape = shape;
    model.basis = h.basis();
    model.center = 0.5 * (th.e_signal + th.e_cut);

    const std::size_t D = h.dimension();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.materialize_dense(D));
    model.eigenvalues = es.eigenvalues();
    model.eigenvectors = es.eigenvectors();

    model.q.resize(model.eigenvalues.size());
    if (shape == WindowShape::hard) {
        model.width = 0.0;
        for (Eigen::Index i = 0; i < model.q.size(); ++i)
            model.q[i] = model.eigenvalues[i] > model.center ? 1.0 : 0.0;
        return model;
    }

    if (th.e_signal <= th.e_max)
        throw contract_error("pe_model: smooth window needs e_signal > e_max");
    const double by_center = 0.25 * (th.e_signal - th.e_cut);
    const double by_tail =
        (th.e_signal - th.e_max) / (8.0 * std::sqrt(2.0) * erf_inverse(1.0 - 2.0 * epsilon_tilde));
    model.width = std::min(by_center, by_tail);
    for (Eigen::Index i = 0; i < model.q.size(); ++i) {
        const double z = (model.eigenvalues[i] - model.center) / (model.width * std::sqrt(2.0));
        model.q[i] = 0.5 * (1.0 + std::erf(z));
    }
    return model;
}

namespace {

Eigen::VectorXd overlap_weights(const PhaseEstimationModel& model, const FockVector& input) {
    input.require_normalized();
    if (input.basis->modes() != model.basis->modes()
        || input.basis->bosons() != model.basis->bosons())
        throw contract_error("success_probability: basis mismatch");
    return (model.eigenvectors.adjoint() * input.amplitudes).cwiseAbs2();
}

} // namespace

double success_probability(const PhaseEstimationModel& model, const FockVector& input) {
    return model.q.dot(overlap_weights(model, input));
}

double success_probability_mixed(const PhaseEstimationModel& model) {
    return model.q.sum() / double(model.q.size());
}

double simulate_success_frequency(const PhaseEstimationModel& model, const FockVector& input,
                                  std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw contract_error("simulate_success_frequency: trials must be >= 1");
    const Eigen::VectorXd w = overlap_weights(model, input);
    Eigen::VectorXd cum(w.size());
    double run = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        run += w[i];
        cum[i] = run;
    }

    Rng rng(substream_seed(seed, 0xa11a));
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const double u = rng.uniform() * run;
        Eigen::Index lo = 0, hi = w.size() - 1;
        while (lo < hi) {
            const Eigen::Index mid = (lo + hi) / 2;
            if (cum[mid] >= u) hi = mid;
            else lo = mid + 1;
        }
        if (rng.uniform() < model.q[lo]) ++hits;
    }
    return double(hits) / double(trials);
}

FockVector project_success(const PhaseEstimationModel& model, const FockVector& input) {
    if (model.shape != WindowShape::hard)
        throw contract_error("project_success: defined for hard windows only");
    input.require_normalized();
    Eigen::VectorXcd coeffs = model.eigenvectors.adjoint() * input.amplitudes;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
        if (model.q[i] < 0.5) coeffs[i] = 0.0;
    Eigen::VectorXcd amp = model.eigenvectors * coeffs;
    const double nrm = amp.norm();
    if (nrm < 1e-12) throw contract_error("project_success: no accepted component");
    return FockVector{model.basis, amp / nrm};
}

ChosenInputReport prepare_chosen_input(const DenseTensor& t0, int n_bos, bool allow_padding,
                                       std::uint64_t pad_seed, const SignalVector* signal) {
    const int p = t0.order();
    const int N = t0.dim();
    if (n_bos < 1) throw contract_error("prepare_chosen_input: n_bos must be >= 1");
    const int copies = n_bos / p;
    const int remainder = n_bos % p;
    if (remainder != 0 && !allow_padding)
        throw contract_error("prepare_chosen_input: order must divide the boson count "
                             "unless padding is enabled");
    if (copies < 1)
        throw contract_error("prepare_chosen_input: boson count below the tensor order");

    std::vector<int> pad_modes(remainder);
    if (remainder > 0) {
        Rng rng(substream_seed(pad_seed, 0xbead));
        for (int& m : pad_modes) m = static_cast<int>(rng.integer() % std::uint64_t(N));
    }

    DenseTensor prod(n_bos, N, t0.field());
    std::vector<int> idx(n_bos);
    for (std::size_t flat = 0; flat < prod.size(); ++flat) {
        prod.decode(flat, idx.data());
        std::complex<double> v = 1.0;
        for (int c = 0; c < copies && v != 0.0; ++c)
            v *= t0[t0.flat_index(idx.data() + std::size_t(c) * p)];
        for (int r = 0; r < remainder && v != 0.0; ++r)
            if (idx[copies * p + r] != pad_modes[r]) v = 0.0;
        prod[flat] = v;
    }

    const double full_sq = prod.squared_norm();
    if (full_sq <= 0.0) throw contract_error("prepare_chosen_input: zero input tensor");

    const BasisPtr basis = make_basis(N, n_bos);
    const TensorEmbedding emb = tensor_to_fock(basis, prod);
    if (emb.norm < 1e-150) throw contract_error("prepare_chosen_input: projection annihilated "
                                                "the input");

    ChosenInputReport rep;
    rep.state = FockVector{basis, emb.state.amplitudes / emb.norm};
    rep.projection_keep = (emb.norm * emb.norm) / full_sq;
    rep.padded = remainder != 0;
    if (signal) {
        const FockVector psi_sig = product_state(basis, signal->v);
        rep.squared_overlap_signal = std::norm(psi_sig.dot(rep.state));
    }
    return rep;
}

PerturbedInputReport perturbed_input(const DenseTensor& t0, int n_bos, double x, double y,
                                     double x_prime, std::uint64_t seed_delta,
                                     std::uint64_t seed_delta_prime, bool allow_padding,
                                     std::uint64_t pad_seed, const SignalVector* signal) {
    if (x < 0.0 || x_prime < 0.0)
        throw contract_error("perturbed_input: deviations must be nonnegative");
    if (y < 0.0 || y > 1.0) throw contract_error("perturbed_input: y must lie in [0,1]");

    const Ensemble ens{t0.field(), false};
    const DenseTensor delta = sample_gaussian_tensor(t0.order(), t0.dim(), ens, seed_delta);
    const DenseTensor delta_prime =
        sample_gaussian_tensor(t0.order(), t0.dim(), ens, seed_delta_prime);

    const double a = x * y;
    const double b = x * (1.0 - y) / std::sqrt(1.0 + x * x) * x_prime;
    DenseTensor s = t0;
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = t0[i] + a * delta[i] + b * delta_prime[i];

    PerturbedInputReport rep;
    rep.chosen = prepare_chosen_input(s, n_bos, allow_padding, pad_seed, signal);
    rep.x = x;
    rep.y = y;
    rep.x_prime = x_prime;
    return rep;
}

int amplification_iterations(double p_success) {
    if (!(p_success > 0.0) || p_success > 1.0)
        throw contract_error("amplification_iterations: probability must lie in (0,1]");
    const double angle = std::asin(std::sqrt(p_success));
    const int it = static_cast<int>(std::ceil(M_PI / (4.0 * angle)));
    return std::max(1, it);
}

CostRecord runtime_model(CostVariant variant, const CostParams& params) {
    const SpectralThresholds th =
        thresholds(params.p, params.dim, params.n_bos, params.lambda_bar, params.field);
    const double D = double(OccupationBasis::dimension_for(params.dim, params.n_bos));

    CostRecord rec;
    rec.variant = variant;

    if (variant == CostVariant::classical_power) {
        const int m = default_power_count(th, std::size_t(D));
        rec.success_probability = 1.0;
        rec.oracle_calls = D * m;
        rec.state_prep_cost = 0.0;
        rec.amplification = 1.0;
        rec.expected_total_cost = rec.oracle_calls;
        return rec;
    }

    if (th.e_signal <= th.e_max)
        throw contract_error("runtime_model: window variants need e_signal > e_max");
    const double s =
        std::ceil(std::log2((th.e_signal + th.e_max) / (th.e_signal - th.e_max)));
    rec.oracle_calls = std::pow(2.0, s);
    rec.state_prep_cost = 1.0;

    double p_succ = 1.0 / D; // one target state out of D for the mixed input
    if (variant == CostVariant::quantum_chosen_input) {
        const double c_scale = params.lambda_bar * std::pow(double(params.dim), params.p / 4.0);
        p_succ = std::min(1.0, std::pow(c_scale, 2.0 * params.n_bos / params.p)
                                   * std::pow(double(params.dim), -params.n_bos / 2.0));
    }
    rec.success_probability = p_succ;

    const double per_attempt = rec.state_prep_cost + rec.oracle_calls;
    if (variant == CostVariant::quantum_unamplified) {
        rec.amplification = 1.0 / p_succ;
    } else {
        rec.amplification = std::max(1.0, (M_PI / 4.0) / std::sqrt(p_succ));
    }
    rec.expected_total_cost = per_attempt * rec.amplification;
    return rec;
}

} // namespace stpca
