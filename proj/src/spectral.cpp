#include "stpca/spectral.hpp"

#include <cmath>

#include "stpca/rng.hpp"

namespace stpca {

namespace {

constexpr std::size_t dense_method_cap = 4000;

double factorial(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// variance scale for an even-order coupling: q!over2 = (q/2)
double coupling_scale(int q, int n_bos, Field field) {
    const int h = q / 2;
    double j = factorial(h) * binomial(n_bos, h) / std::pow(double(n_bos), h);
    if (field == Field::complex_) j *= 2.0;
    return j;
}

} // namespace

SpectralThresholds thresholds(int p, int dim, int n_bos, double lambda_bar, Field field) {
    if (p < 2) throw contract_error("thresholds: order must be >= 2");
    const bool even = (p % 2 == 0);
    if (even && n_bos < p / 2)
        throw contract_error("thresholds: n_bos must be >= p/2 for even order");
    if (!even && n_bos < p - 1)
        throw contract_error("thresholds: n_bos must be >= p-1 for odd order");

    SpectralThresholds t;
    t.p = p;
    t.dim = dim;
    t.n_bos = n_bos;
    t.lambda_bar = lambda_bar;
    t.field = field;

    const double n = n_bos, N = dim;
    const double lnN = std::log(N);
    if (even) {
        const int h = p / 2;
        t.coupling_j = coupling_scale(p, n_bos, field);
        t.e_signal = lambda_bar * factorial(h) * binomial(n_bos, h) * std::pow(N, h);
        t.e_max = std::sqrt(2.0 * t.coupling_j * lnN) * std::pow(n, p / 4.0 + 0.5)
                  * std::pow(N, p / 4.0);
        t.xi = std::sqrt(t.coupling_j) * std::pow(n, p / 4.0 - 0.5) * std::pow(N, p / 4.0)
               / std::sqrt(2.0 * lnN);
    } else {
        t.coupling_j = coupling_scale(2 * (p - 1), n_bos, field);
        t.e_signal = lambda_bar * lambda_bar * factorial(p - 1) * binomial(n_bos, p - 1)
                     * std::pow(N, p);
        t.e_max = 2.0 * std::sqrt(t.coupling_j * lnN) * std::pow(n, p / 2.0)
                  * std::pow(N, p / 2.0);
        t.xi = std::sqrt(t.coupling_j) * std::pow(n, p / 2.0 - 1.0) * std::pow(N, p / 2.0)
               / std::sqrt(lnN);
    }
    t.e_cut = 0.5 * (t.e_signal + t.e_max);
    return t;
}

double lambda_for_ratio(int p, int dim, int n_bos, double ratio, Field field) {
    if (ratio <= 0.0) throw contract_error("lambda_for_ratio: ratio must be positive");
    const SpectralThresholds base = thresholds(p, dim, n_bos, 0.0, field);
    const double target = ratio * base.e_max;
    if (p % 2 == 0) {
        const int h = p / 2;
        return target / (factorial(h) * binomial(n_bos, h) * std::pow(double(dim), h));
    }
    return std::sqrt(target
                     / (factorial(p - 1) * binomial(n_bos, p - 1) * std::pow(double(dim), p)));
}

EigenResult leading_eigenpair(const HamiltonianOperator& h, double tol, std::size_t max_iter,
                              std::uint64_t seed, EigenMethod method) {
    const std::size_t D = h.dimension();
    if (D == 0) throw contract_error("leading_eigenpair: empty basis");

    if (method == EigenMethod::automatic)
        method = (D <= dense_method_cap) ? EigenMethod::dense : EigenMethod::power;

    if (method == EigenMethod::dense) {
        const Eigen::MatrixXcd m = h.materialize_dense(D);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        const Eigen::Index top = static_cast<Eigen::Index>(D) - 1;
        EigenResult r;
        r.value = es.eigenvalues()(top);
        r.vector = FockVector{h.basis(), es.eigenvectors().col(top)};
        r.iterations = 0;
        r.residual = (m * r.vector.amplitudes - r.value * r.vector.amplitudes).norm();
        return r;
    }

    if (max_iter == 0) {
        const double d = static_cast<double>(D);
        max_iter = static_cast<std::size_t>(std::ceil(10.0 * d * std::max(std::log(d), 1.0)));
    }

    Rng rng(substream_seed(seed, 0x9f5e));
    FockVector v = zero_fock(h.basis());
    for (std::size_t i = 0; i < D; ++i) v.amplitudes[i] = rng.complex_gaussian();
    v.amplitudes.normalize();

    const double sigma = h.norm_bound();
    double best = 0.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        FockVector hv = h.apply(v);
        const double lam = v.dot(hv).real();
        const double res = (hv.amplitudes - lam * v.amplitudes).norm();
        best = lam;
        if (res <= tol * std::max(std::abs(lam), 1e-300)) {
            EigenResult r;
            r.value = lam;
            r.vector = std::move(v);
            r.iterations = it;
            r.residual = res;
            return r;
        }
        hv.amplitudes += sigma * v.amplitudes;
        const double nrm = hv.amplitudes.norm();
        if (nrm < 1e-300)
            throw convergence_error("leading_eigenpair: iterate collapsed", best,
                                    static_cast<int>(it));
        v.amplitudes = hv.amplitudes / nrm;
    }
    throw convergence_error("leading_eigenpair: power iteration exhausted its budget", best,
                            static_cast<int>(max_iter));
}

DetectionReport detect(const DenseTensor& t0, double lambda_bar, int n_bos, std::uint64_t seed,
                       EigenMethod method) {
    const BasisPtr basis = make_basis(t0.dim(), n_bos);
    const HamiltonianOperator h = build_hamiltonian(t0, basis);
    const SpectralThresholds th = thresholds(t0.order(), t0.dim(), n_bos, lambda_bar, t0.field());

    const EigenResult eig = leading_eigenpair(h, 1e-8, 0, seed, method);
    DetectionReport r;
    r.lambda1 = eig.value;
    r.thresholds = th;
    r.planted = eig.value > th.e_cut;
    r.iterations = eig.iterations;
    r.residual = eig.residual;
    return r;
}

Eigen::VectorXcd randomized_rounding(const DensityMatrix& rho, std::uint64_t seed) {
    const Eigen::Index n = rho.m.rows();
    if (n == 0 || rho.m.cols() != n)
        throw contract_error("randomized_rounding: density matrix must be square");
    if (std::abs(rho.trace_real() - 1.0) > 1e-6)
        throw contract_error("randomized_rounding: trace must be 1");
    if (rho.hermiticity_defect() > 1e-8)
        throw contract_error("randomized_rounding: matrix must be Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.m);
    const Eigen::VectorXd evals = es.eigenvalues();
    if (evals.minCoeff() < -1e-8)
        throw contract_error("randomized_rounding: matrix must be PSD");

    Eigen::VectorXd roots = evals.cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd L =
        es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();

    const bool real_case = rho.m.imag().cwiseAbs().maxCoeff() <= 1e-12;
    Rng rng(substream_seed(seed, 0x707e));
    Eigen::VectorXcd u(n);
    for (int attempt = 0; attempt < 64; ++attempt) {
        if (real_case) {
            Eigen::VectorXd z(n);
            for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.gaussian();
            u = L.real() * z;
        } else {
            Eigen::VectorXcd z(n);
            for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.complex_gaussian();
            u = L.conjugate() * z;
        }
        const double nrm = u.norm();
        if (nrm > 1e-12) return u / nrm;
    }
    throw contract_error("randomized_rounding: sampled vector has negligible norm");
}

RecoveryReport recover(const DenseTensor& t0, double lambda_bar, int n_bos, std::uint64_t seed,
                       const SignalVector* signal, EigenMethod method, int rounding_retries) {
    if (rounding_retries < 1) throw contract_error("recover: retries must be >= 1");

    const BasisPtr basis = make_basis(t0.dim(), n_bos);
    const HamiltonianOperator h = build_hamiltonian(t0, basis);
    const SpectralThresholds th = thresholds(t0.order(), t0.dim(), n_bos, lambda_bar, t0.field());
    const EigenResult eig = leading_eigenpair(h, 1e-8, 0, seed, method);

    RecoveryReport r;
    r.lambda1 = eig.value;
    r.thresholds = th;
    r.detection_passed = eig.value > th.e_cut;
    r.rho1 = single_particle_density_matrix(eig.vector);

    const int N = t0.dim();
    if (signal) {
        const Eigen::VectorXcd vc = signal->v.cast<std::complex<double>>();
        r.overlap_ratio = (vc.adjoint() * r.rho1.m * vc).real()(0) / N;
    }

    Eigen::VectorXcd best_w;
    double best_proxy = -1.0;
    for (int k = 0; k < rounding_retries; ++k) {
        const Eigen::VectorXcd w = randomized_rounding(r.rho1, substream_seed(seed, 100 + k));
        const double proxy = (w.adjoint() * r.rho1.m * w).real()(0);
        if (proxy > best_proxy) {
            best_proxy = proxy;
            best_w = w;
        }
    }

    // remove the global phase so the real part carries the candidate
    std::complex<double> square_sum = 0.0;
    for (Eigen::Index i = 0; i < best_w.size(); ++i) square_sum += best_w[i] * best_w[i];
    if (std::abs(square_sum) > 1e-12)
        best_w *= std::exp(std::complex<double>(0.0, -0.5 * std::arg(square_sum)));

    if (signal) r.rounded_corr = correlation(best_w, signal->v.cast<std::complex<double>>());

    Eigen::VectorXd boosted = tensor_power_step(t0, best_w);
    const double bn = boosted.norm();
    if (bn > 1e-12) {
        r.recovered = (boosted / bn).cast<std::complex<double>>();
    } else {
        r.recovered = best_w; // degenerate boost, keep the rounded candidate
    }
    if (signal)
        r.boosted_corr = correlation(r.recovered, signal->v.cast<std::complex<double>>());
    return r;
}

} // namespace stpca
