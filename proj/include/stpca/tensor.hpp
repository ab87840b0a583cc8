#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "stpca/errors.hpp"

namespace stpca {

enum class Field { real, complex_ };

/// Noise ensemble: iid unit-variance entries, optionally symmetrized after the
/// draw. Complex entries have Re/Im variance 1/2 each.
struct Ensemble {
    Field field = Field::real;
    bool symmetrized = false;
};

/// Dense order-p tensor over [0,N)^p, row-major (first index slowest).
/// Entries are always stored complex; `field` records whether the imaginary
/// parts are structurally zero.
class DenseTensor {
public:
    static constexpr std::size_t max_entries = 20'000'000;

    DenseTensor(int order, int dim, Field field);

    int order() const { return order_; }
    int dim() const { return dim_; }
    Field field() const { return field_; }
    bool is_real() const { return field_ == Field::real; }
    std::size_t size() const { return entries_.size(); }

    std::complex<double>& operator[](std::size_t flat) { return entries_[flat]; }
    const std::complex<double>& operator[](std::size_t flat) const { return entries_[flat]; }

    std::size_t flat_index(const int* idx) const;
    std::size_t flat_index(const std::vector<int>& idx) const { return flat_index(idx.data()); }
    void decode(std::size_t flat, int* idx) const;

    std::complex<double> at(const std::vector<int>& idx) const { return entries_[flat_index(idx)]; }
    void set(const std::vector<int>& idx, std::complex<double> v) { entries_[flat_index(idx)] = v; }

    double abs_sum() const;
    double squared_norm() const;

    std::vector<std::complex<double>>& data() { return entries_; }
    const std::vector<std::complex<double>>& data() const { return entries_; }

private:
    int order_;
    int dim_;
    Field field_;
    std::vector<std::complex<double>> entries_;
};

/// iid Gaussian draw; one generator substream per tensor, derived from `seed`.
DenseTensor sample_gaussian_tensor(int order, int dim, const Ensemble& ensemble, std::uint64_t seed);

/// Average over all order! index permutations.
DenseTensor symmetrize(const DenseTensor& t);

/// Planted direction with |v| = sqrt(N) exactly.
struct SignalVector {
    Eigen::VectorXd v;
    int dim() const { return static_cast<int>(v.size()); }
};

SignalVector sample_signal(int dim, std::uint64_t seed);

/// t0 = lambda * v^{otimes p} + noise. Result is complex iff the noise is.
DenseTensor make_spiked(double lambda, const SignalVector& signal, const DenseTensor& noise);

/// |<x|y>| / (|x| |y|); throws on a zero vector.
double correlation(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);
double correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// One tensor power-method step: x_mu = sum T0[mu, nu_2..nu_p] u_{nu_2}..u_{nu_p}
/// with the first leg free; the real part is returned (t0 may be complex).
/// Requires |u| = 1.
Eigen::VectorXd tensor_power_step(const DenseTensor& t0, const Eigen::VectorXcd& u);
Eigen::VectorXd tensor_power_step(const DenseTensor& t0, const Eigen::VectorXd& u);

/// Flatten the first `row_legs` legs to the row index (row-major), the rest to
/// the column index.
Eigen::MatrixXcd unfold_to_matrix(const DenseTensor& t, int row_legs);

/// A sampled planted instance: t0 = lambda v^{otimes p} + G.
struct SpikedInstance {
    int p = 0;
    int dim = 0;
    double lambda = 0.0;
    Ensemble ensemble;
    SignalVector signal;
    DenseTensor t0;
    std::uint64_t seed = 0;
};

/// Substream 0 of `seed` draws the signal, substream 1 the noise.
SpikedInstance sample_instance(int p, int dim, double lambda, const Ensemble& ensemble,
                               std::uint64_t seed);

} // namespace stpca
