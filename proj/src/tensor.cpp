#include "stpca/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stpca/rng.hpp"

namespace stpca {

namespace {

std::size_t checked_size(int order, int dim) {
    if (order < 1) throw contract_error("tensor order must be >= 1");
    if (dim < 1) throw contract_error("tensor dim must be >= 1");
    std::size_t n = 1;
    for (int a = 0; a < order; ++a) {
        if (n > DenseTensor::max_entries / static_cast<std::size_t>(dim))
            throw size_error("dense tensor exceeds the desk-scale entry cap");
        n *= static_cast<std::size_t>(dim);
    }
    return n;
}

} // namespace

DenseTensor::DenseTensor(int order, int dim, Field field)
    : order_(order), dim_(dim), field_(field), entries_(checked_size(order, dim)) {}

std::size_t DenseTensor::flat_index(const int* idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < order_; ++a) flat = flat * dim_ + static_cast<std::size_t>(idx[a]);
    return flat;
}

void DenseTensor::decode(std::size_t flat, int* idx) const {
    for (int a = order_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % dim_);
        flat /= dim_;
    }
}

double DenseTensor::abs_sum() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::abs(e);
    return s;
}

double DenseTensor::squared_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e);
    return s;
}

DenseTensor sample_gaussian_tensor(int order, int dim, const Ensemble& ensemble,
                                   std::uint64_t seed) {
    DenseTensor t(order, dim, ensemble.field);
    Rng rng(substream_seed(seed, 0));
    if (ensemble.field == Field::real) {
        for (auto& e : t.data()) e = rng.gaussian();
    } else {
        for (auto& e : t.data()) e = rng.complex_gaussian();
    }
    if (ensemble.symmetrized) return symmetrize(t);
    return t;
}

DenseTensor symmetrize(const DenseTensor& t) {
    const int p = t.order();
    std::vector<int> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    DenseTensor out(p, t.dim(), t.field());
    std::vector<int> idx(p), pidx(p);
    const double inv = 1.0 / static_cast<double>(perms.size());
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        t.decode(flat, idx.data());
        std::complex<double> acc = 0.0;
        for (const auto& pi : perms) {
            for (int a = 0; a < p; ++a) pidx[a] = idx[pi[a]];
            acc += t[t.flat_index(pidx.data())];
        }
        out[flat] = acc * inv;
    }
    return out;
}

SignalVector sample_signal(int dim, std::uint64_t seed) {
    if (dim < 1) throw contract_error("signal dim must be >= 1");
    Rng rng(substream_seed(seed, 0));
    Eigen::VectorXd v(dim);
    double norm2 = 0.0;
    do {
        for (int i = 0; i < dim; ++i) v[i] = rng.gaussian();
        norm2 = v.squaredNorm();
    } while (norm2 == 0.0);
    v *= std::sqrt(static_cast<double>(dim) / norm2);
    return SignalVector{v};
}

DenseTensor make_spiked(double lambda, const SignalVector& signal, const DenseTensor& noise) {
    if (signal.dim() != noise.dim())
        throw contract_error("signal/noise dimension mismatch");
    const int p = noise.order();
    DenseTensor out(p, noise.dim(), noise.field());
    std::vector<int> idx(p);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        out.decode(flat, idx.data());
        double prod = lambda;
        for (int a = 0; a < p; ++a) prod *= signal.v[idx[a]];
        out[flat] = noise[flat] + prod;
    }
    return out;
}

double correlation(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
    if (x.size() != y.size()) throw contract_error("correlation: size mismatch");
    const double nx = x.norm(), ny = y.norm();
    if (nx == 0.0 || ny == 0.0) throw contract_error("correlation: zero vector");
    return std::abs(x.dot(y)) / (nx * ny);
}

double correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size()) throw contract_error("correlation: size mismatch");
    const double nx = x.norm(), ny = y.norm();
    if (nx == 0.0 || ny == 0.0) throw contract_error("correlation: zero vector");
    return std::abs(x.dot(y)) / (nx * ny);
}

Eigen::VectorXd tensor_power_step(const DenseTensor& t0, const Eigen::VectorXcd& u) {
    const int p = t0.order();
    const int n = t0.dim();
    if (u.size() != n) throw contract_error("tensor_power_step: vector dim mismatch");
    if (std::abs(u.norm() - 1.0) > 1e-8)
        throw contract_error("tensor_power_step: input must be a unit vector");

    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(n);
    std::vector<int> idx(p);
    for (std::size_t flat = 0; flat < t0.size(); ++flat) {
        t0.decode(flat, idx.data());
        std::complex<double> w = t0[flat];
        if (w == 0.0) continue;
        for (int a = 1; a < p; ++a) w *= u[idx[a]];
        acc[idx[0]] += w;
    }
    return acc.real();
}

Eigen::VectorXd tensor_power_step(const DenseTensor& t0, const Eigen::VectorXd& u) {
    return tensor_power_step(t0, Eigen::VectorXcd(u.cast<std::complex<double>>()));
}

Eigen::MatrixXcd unfold_to_matrix(const DenseTensor& t, int row_legs) {
    const int p = t.order();
    if (row_legs < 1 || row_legs >= p)
        throw contract_error("unfold_to_matrix: row_legs must be in [1, order)");
    std::size_t rows = 1, cols = 1;
    for (int a = 0; a < row_legs; ++a) rows *= static_cast<std::size_t>(t.dim());
    for (int a = row_legs; a < p; ++a) cols *= static_cast<std::size_t>(t.dim());
    Eigen::MatrixXcd m(rows, cols);
    for (std::size_t flat = 0; flat < t.size(); ++flat)
        m(flat / cols, flat % cols) = t[flat];
    return m;
}

SpikedInstance sample_instance(int p, int dim, double lambda, const Ensemble& ensemble,
                               std::uint64_t seed) {
    SignalVector v = sample_signal(dim, substream_seed(seed, 0));
    DenseTensor noise = sample_gaussian_tensor(p, dim, ensemble, substream_seed(seed, 1));
    return SpikedInstance{p, dim, lambda, ensemble, v, make_spiked(lambda, v, noise), seed};
}

} // namespace stpca
