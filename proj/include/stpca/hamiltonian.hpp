#pragma once

#include <complex>
#include <memory>

#include <Eigen/Dense>

#include "stpca/fock.hpp"
#include "stpca/tensor.hpp"

namespace stpca {

/// Number-conserving operator H = (A + A^dag)/2 where A attaches the first
/// q/2 legs of an even-order coefficient tensor to creation operators and the
/// last q/2 legs to annihilation operators.
///
/// For odd source order p the coefficient tensor is the order-2(p-1) pair
/// contraction: creation legs (mu_1..mu_h, nu_1..nu_h) and annihilation legs
/// (mu_{h+1}.., nu_{h+1}..) with h=(p-1)/2, entries sum_s T[mu,s] T[nu,s].
/// The pair tensor is materialized when it fits the dense cap and contracted
/// on the fly otherwise.
class HamiltonianOperator {
public:
    int source_order() const { return source_p_; }
    int coeff_order() const { return q_; }
    const BasisPtr& basis() const { return basis_; }
    std::size_t dimension() const { return basis_->dimension(); }

    FockVector apply(const FockVector& in) const;

    /// Dense Hermitian matrix in the occupation basis; guarded by `cap`.
    Eigen::MatrixXcd materialize_dense(std::size_t cap = 5000) const;

    /// Single matrix element <row|H|col>, computed on demand in poly(n_bos).
    std::complex<double> element(std::size_t row, std::size_t col) const;

    /// Cheap cached bound on the operator norm: sum|coeff| * n_bos^{q/2}.
    double norm_bound() const { return norm_bound_; }

    /// Dense coefficient tensor if materialized (null when contracting lazily).
    const DenseTensor* coefficients() const { return coeff_ ? coeff_.get() : nullptr; }

    friend HamiltonianOperator build_even(const DenseTensor& t, const BasisPtr& basis);
    friend HamiltonianOperator build_odd(const DenseTensor& t, const BasisPtr& basis);

private:
    HamiltonianOperator() = default;

    std::complex<double> coeff_entry(const int* cre, const int* ann) const;
    std::complex<double> coeff_entry_swapped(const int* cre, const int* ann) const;

    // expand column j of A (given coefficient side) into sink(i, value)
    template <bool Swapped, typename Sink>
    void a_column(std::size_t j, Sink&& sink) const;
    template <bool Swapped>
    std::complex<double> a_element(std::size_t row, std::size_t col) const;

    int source_p_ = 0;
    int q_ = 0;
    int half_ = 0;
    BasisPtr basis_;
    std::shared_ptr<const DenseTensor> coeff_;       // order q, when materialized
    std::shared_ptr<const DenseTensor> coeff_swap_;  // conj + half-swapped copy
    std::shared_ptr<const DenseTensor> odd_source_;  // order p, lazy odd mode
    double norm_bound_ = 0.0;
};

/// Even p: n_bos >= p/2 required (the operator annihilates everything below).
HamiltonianOperator build_even(const DenseTensor& t, const BasisPtr& basis);

/// Odd p: n_bos >= p-1 required; equals build_even on the pair tensor.
HamiltonianOperator build_odd(const DenseTensor& t, const BasisPtr& basis);

/// Dispatch on the tensor order's parity.
HamiltonianOperator build_hamiltonian(const DenseTensor& t, const BasisPtr& basis);

/// Order-2(p-1) pair tensor used by the odd construction (exposed for tests).
DenseTensor odd_pair_tensor(const DenseTensor& t);

/// <psi|H|psi> for a normalized psi; checks the imaginary part vanishes.
double quantum_expectation(const HamiltonianOperator& h, const FockVector& psi);

} // namespace stpca
