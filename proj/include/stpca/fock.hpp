#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "stpca/errors.hpp"
#include "stpca/tensor.hpp"

namespace stpca {

/// Fixed-particle-number bosonic occupation basis: all (n_0..n_{N-1}) with
/// sum n_mu = bosons, enumerated in descending lexicographic order, so
/// (2,0,0) < (1,1,0) < (1,0,1) < (0,2,0) < ... as indices 0,1,2,3,...
/// Ranking is a perfect hash computed from a cumulative Pascal table.
class OccupationBasis {
public:
    OccupationBasis(int modes, int bosons);

    int modes() const { return modes_; }
    int bosons() const { return bosons_; }
    std::size_t dimension() const { return states_.size(); }

    const std::vector<int>& state(std::size_t i) const { return states_[i]; }
    std::size_t rank(const int* occ) const;
    std::size_t rank(const std::vector<int>& occ) const { return rank(occ.data()); }

    /// n!/prod(n_mu!) for state i: the number of product-basis arrangements.
    double multiplicity(std::size_t i) const { return multiplicities_[i]; }
    double multiplicity(const int* occ) const;

    /// C(modes+bosons-1, bosons), with an explicit overflow/size check.
    static std::size_t dimension_for(int modes, int bosons);

private:
    int modes_;
    int bosons_;
    std::vector<std::vector<int>> states_;
    std::vector<double> multiplicities_;
    // cum_[m][k] = number of ways to put <= k bosons into m modes, summed by count
    std::vector<std::vector<std::size_t>> cum_;
};

using BasisPtr = std::shared_ptr<const OccupationBasis>;

BasisPtr make_basis(int modes, int bosons);

/// Amplitudes over an OccupationBasis.
struct FockVector {
    BasisPtr basis;
    Eigen::VectorXcd amplitudes;

    double norm() const { return amplitudes.norm(); }
    void require_normalized(double tol = 1e-10) const;
    FockVector normalized() const;
    std::complex<double> dot(const FockVector& other) const;
};

FockVector zero_fock(const BasisPtr& basis);

enum class LadderKind { create, annihilate };

struct LadderOp {
    LadderKind kind;
    int mode;
};

/// Apply the operator product ops[0] ops[1] ... ops[k-1] (rightmost factor acts
/// first) to `in`. The net boson count change must be zero; otherwise the
/// result leaves the fixed-number basis and a contract_error is thrown.
FockVector apply_monomial(const std::vector<LadderOp>& ops, const FockVector& in);

/// Symmetric product state v^{otimes n} embedded in the occupation basis,
/// normalized: amplitude sqrt(n!/prod n_mu!) prod (v_mu/|v|)^{n_mu}.
FockVector product_state(const BasisPtr& basis, const Eigen::VectorXcd& v);
FockVector product_state(const BasisPtr& basis, const Eigen::VectorXd& v);

/// Projection of an order-n_bos tensor onto the symmetric subspace, expressed
/// in the occupation basis: amplitude at o equals the mean of the entries over
/// all index tuples consistent with o, scaled by sqrt(multiplicity(o)).
/// Returned unnormalized together with its norm; for symmetric input the norm
/// equals the tensor norm, and antisymmetric components are annihilated.
struct TensorEmbedding {
    FockVector state;
    double norm = 0.0;
};

TensorEmbedding tensor_to_fock(const BasisPtr& basis, const DenseTensor& t);

/// Single-particle density matrix rho_{mu nu} = <a^dag_mu a_nu> / n_bos:
/// Hermitian, PSD, unit trace for a normalized state.
struct DensityMatrix {
    Eigen::MatrixXcd m;

    double trace_real() const { return m.trace().real(); }
    double hermiticity_defect() const { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const;
};

DensityMatrix single_particle_density_matrix(const FockVector& psi);

} // namespace stpca
