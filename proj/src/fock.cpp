#include "stpca/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace stpca {

namespace {

constexpr std::size_t basis_cap = 4'000'000;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

std::size_t OccupationBasis::dimension_for(int modes, int bosons) {
    if (modes < 1) throw contract_error("basis needs at least one mode");
    if (bosons < 0) throw contract_error("boson count must be >= 0");
    // C(modes+bosons-1, bosons) via the multiplicative form, guarded.
    std::size_t d = 1;
    for (int k = 1; k <= bosons; ++k) {
        const std::size_t num = static_cast<std::size_t>(modes - 1 + k);
        if (d > (basis_cap * 16) / num)
            throw size_error("occupation basis dimension overflows the desk-scale cap");
        d = d * num / static_cast<std::size_t>(k);
    }
    if (d > basis_cap) throw size_error("occupation basis dimension exceeds the desk-scale cap");
    return d;
}

OccupationBasis::OccupationBasis(int modes, int bosons) : modes_(modes), bosons_(bosons) {
    const std::size_t dim = dimension_for(modes, bosons);
    states_.reserve(dim);
    multiplicities_.reserve(dim);

    std::vector<int> occ(modes, 0);
    // Descending lexicographic enumeration.
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == modes_ - 1) {
            occ[pos] = rem;
            states_.push_back(occ);
            return;
        }
        for (int v = rem; v >= 0; --v) {
            occ[pos] = v;
            self(self, pos + 1, rem - v);
        }
    };
    rec(rec, 0, bosons);

    for (const auto& s : states_) multiplicities_.push_back(multiplicity(s.data()));

    // count(m, w) = C(m+w-1, w); cum_[m][k] = sum_{w<=k} count(m, w)
    cum_.assign(modes + 1, std::vector<std::size_t>(bosons + 1, 0));
    for (int m = 1; m <= modes; ++m) {
        std::size_t count = 1; // w = 0
        cum_[m][0] = 1;
        for (int w = 1; w <= bosons; ++w) {
            count = count * static_cast<std::size_t>(m - 1 + w) / static_cast<std::size_t>(w);
            cum_[m][w] = cum_[m][w - 1] + count;
        }
    }
}

std::size_t OccupationBasis::rank(const int* occ) const {
    std::size_t r = 0;
    int rem = bosons_;
    for (int mu = 0; mu < modes_ - 1; ++mu) {
        const int n = occ[mu];
        if (n < rem) {
            // states agreeing so far but with occupancy > n at mu come first
            r += cum_[modes_ - 1 - mu][rem - n - 1];
        }
        rem -= n;
    }
    return r;
}

double OccupationBasis::multiplicity(const int* occ) const {
    double m = factorial(bosons_);
    for (int mu = 0; mu < modes_; ++mu) m /= factorial(occ[mu]);
    return m;
}

BasisPtr make_basis(int modes, int bosons) {
    return std::make_shared<OccupationBasis>(modes, bosons);
}

void FockVector::require_normalized(double tol) const {
    if (std::abs(norm() - 1.0) > tol)
        throw contract_error("fock vector is not normalized");
}

FockVector FockVector::normalized() const {
    const double n = norm();
    if (n == 0.0) throw contract_error("cannot normalize the zero vector");
    return FockVector{basis, amplitudes / n};
}

std::complex<double> FockVector::dot(const FockVector& other) const {
    if (basis.get() != other.basis.get() &&
        (basis->modes() != other.basis->modes() || basis->bosons() != other.basis->bosons()))
        throw contract_error("fock vectors live on different bases");
    return amplitudes.dot(other.amplitudes); // conjugates the left argument
}

FockVector zero_fock(const BasisPtr& basis) {
    return FockVector{basis, Eigen::VectorXcd::Zero(basis->dimension())};
}

FockVector apply_monomial(const std::vector<LadderOp>& ops, const FockVector& in) {
    const auto& basis = *in.basis;
    int net = 0;
    for (const auto& op : ops) net += (op.kind == LadderKind::create) ? 1 : -1;
    if (net != 0)
        throw contract_error("monomial does not conserve the boson number");
    for (const auto& op : ops)
        if (op.mode < 0 || op.mode >= basis.modes())
            throw contract_error("monomial mode index out of range");

    FockVector out = zero_fock(in.basis);
    std::vector<int> occ(basis.modes());
    for (std::size_t j = 0; j < basis.dimension(); ++j) {
        const std::complex<double> a = in.amplitudes[j];
        if (a == 0.0) continue;
        occ = basis.state(j);
        double factor = 1.0;
        bool dead = false;
        // rightmost operator acts first
        for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
            if (it->kind == LadderKind::annihilate) {
                if (occ[it->mode] == 0) { dead = true; break; }
                factor *= std::sqrt(static_cast<double>(occ[it->mode]));
                --occ[it->mode];
            } else {
                ++occ[it->mode];
                factor *= std::sqrt(static_cast<double>(occ[it->mode]));
            }
        }
        if (dead) continue;
        out.amplitudes[basis.rank(occ)] += factor * a;
    }
    return out;
}

FockVector product_state(const BasisPtr& basis, const Eigen::VectorXcd& v) {
    if (v.size() != basis->modes())
        throw contract_error("product_state: vector dimension mismatch");
    const double nv = v.norm();
    if (nv == 0.0) throw contract_error("product_state: zero vector");
    const Eigen::VectorXcd u = v / nv;

    FockVector out = zero_fock(basis);
    for (std::size_t i = 0; i < basis->dimension(); ++i) {
        const auto& occ = basis->state(i);
        std::complex<double> amp = std::sqrt(basis->multiplicity(i));
        for (int mu = 0; mu < basis->modes(); ++mu)
            for (int k = 0; k < occ[mu]; ++k) amp *= u[mu];
        out.amplitudes[i] = amp;
    }
    return out;
}

FockVector product_state(const BasisPtr& basis, const Eigen::VectorXd& v) {
    return product_state(basis, Eigen::VectorXcd(v.cast<std::complex<double>>()));
}

TensorEmbedding tensor_to_fock(const BasisPtr& basis, const DenseTensor& t) {
    if (t.order() != basis->bosons())
        throw contract_error("tensor_to_fock: tensor order must equal the boson count");
    if (t.dim() != basis->modes())
        throw contract_error("tensor_to_fock: tensor dim must equal the mode count");

    FockVector out = zero_fock(basis);
    const int p = t.order();
    std::vector<int> idx(p);
    std::vector<int> occ(basis->modes());
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        t.decode(flat, idx.data());
        std::fill(occ.begin(), occ.end(), 0);
        for (int a = 0; a < p; ++a) ++occ[idx[a]];
        out.amplitudes[basis->rank(occ)] += t[flat];
    }
    for (std::size_t i = 0; i < basis->dimension(); ++i)
        out.amplitudes[i] /= std::sqrt(basis->multiplicity(i));
    return TensorEmbedding{out, out.norm()};
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

DensityMatrix single_particle_density_matrix(const FockVector& psi) {
    psi.require_normalized();
    const auto& basis = *psi.basis;
    const int N = basis.modes();
    const int n = basis.bosons();
    if (n == 0) throw contract_error("density matrix undefined for zero bosons");

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(N, N);
    std::vector<int> occ(N);
    for (std::size_t j = 0; j < basis.dimension(); ++j) {
        const std::complex<double> a = psi.amplitudes[j];
        if (a == 0.0) continue;
        const auto& s = basis.state(j);
        for (int nu = 0; nu < N; ++nu) {
            if (s[nu] == 0) continue;
            rho(nu, nu) += std::norm(a) * static_cast<double>(s[nu]);
            for (int mu = 0; mu < N; ++mu) {
                if (mu == nu) continue;
                occ = s;
                --occ[nu];
                ++occ[mu];
                const double f = std::sqrt(static_cast<double>(s[nu])) *
                                 std::sqrt(static_cast<double>(occ[mu]));
                rho(mu, nu) += std::conj(psi.amplitudes[basis.rank(occ)]) * a * f;
            }
        }
    }
    rho /= static_cast<double>(n);
    return DensityMatrix{rho};
}

} // namespace stpca
