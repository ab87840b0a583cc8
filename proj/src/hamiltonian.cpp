#include "stpca/hamiltonian.hpp"

#include <cmath>

namespace stpca {

namespace {

double pow_int(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

} // namespace

DenseTensor odd_pair_tensor(const DenseTensor& t) {
    const int p = t.order();
    if (p % 2 == 0 || p < 3) throw contract_error("pair tensor needs odd order >= 3");
    const int N = t.dim();
    const int h = (p - 1) / 2;
    const int q = 2 * (p - 1);

    DenseTensor out(q, N, t.field());
    const std::size_t block = 1; // suppress unused warnings on tiny builds
    (void)block;

    std::size_t half_span = 1;
    for (int a = 0; a < p - 1; ++a) half_span *= static_cast<std::size_t>(N);

    std::vector<int> mu(p - 1), nu(p - 1), x(q);
    for (std::size_t mf = 0; mf < half_span; ++mf) {
        // decode mu (row-major over p-1 legs)
        std::size_t r = mf;
        for (int a = p - 2; a >= 0; --a) { mu[a] = static_cast<int>(r % N); r /= N; }
        for (std::size_t nf = 0; nf < half_span; ++nf) {
            r = nf;
            for (int a = p - 2; a >= 0; --a) { nu[a] = static_cast<int>(r % N); r /= N; }
            std::complex<double> acc = 0.0;
            const std::size_t mb = mf * N, nb = nf * N;
            for (int s = 0; s < N; ++s) acc += t[mb + s] * t[nb + s];
            // creation block (mu_1..mu_h, nu_1..nu_h), annihilation block (rest)
            for (int a = 0; a < h; ++a) { x[a] = mu[a]; x[h + a] = nu[a]; }
            for (int a = 0; a < h; ++a) { x[2 * h + a] = mu[h + a]; x[3 * h + a] = nu[h + a]; }
            out[out.flat_index(x.data())] = acc;
        }
    }
    return out;
}

std::complex<double> HamiltonianOperator::coeff_entry(const int* cre, const int* ann) const {
    if (coeff_) {
        std::size_t flat = 0;
        for (int a = 0; a < half_; ++a) flat = flat * basis_->modes() + cre[a];
        for (int a = 0; a < half_; ++a) flat = flat * basis_->modes() + ann[a];
        return (*coeff_)[flat];
    }
    // lazy odd mode: contract the source tensor pair over the last leg
    const DenseTensor& t = *odd_source_;
    const int N = t.dim();
    const int h = (source_p_ - 1) / 2;
    std::size_t mf = 0, nf = 0;
    for (int a = 0; a < h; ++a) mf = mf * N + cre[a];
    for (int a = 0; a < h; ++a) mf = mf * N + ann[a];
    for (int a = 0; a < h; ++a) nf = nf * N + cre[h + a];
    for (int a = 0; a < h; ++a) nf = nf * N + ann[h + a];
    std::complex<double> acc = 0.0;
    const std::size_t mb = mf * N, nb = nf * N;
    for (int s = 0; s < N; ++s) acc += t[mb + s] * t[nb + s];
    return acc;
}

std::complex<double> HamiltonianOperator::coeff_entry_swapped(const int* cre, const int* ann) const {
    if (coeff_swap_) {
        std::size_t flat = 0;
        for (int a = 0; a < half_; ++a) flat = flat * basis_->modes() + cre[a];
        for (int a = 0; a < half_; ++a) flat = flat * basis_->modes() + ann[a];
        return (*coeff_swap_)[flat];
    }
    return std::conj(coeff_entry(ann, cre));
}

template <bool Swapped, typename Sink>
void HamiltonianOperator::a_column(std::size_t j, Sink&& sink) const {
    const auto& basis = *basis_;
    const int N = basis.modes();
    std::vector<int> occ = basis.state(j);
    std::vector<int> occupied;
    for (int m = 0; m < N; ++m)
        if (occ[m] > 0) occupied.push_back(m);

    std::vector<int> ann(half_), cre(half_);

    auto rec_cre = [&](auto&& self, int d, double fac) -> void {
        if (d == half_) {
            const auto c = Swapped ? coeff_entry_swapped(cre.data(), ann.data())
                                   : coeff_entry(cre.data(), ann.data());
            if (c != 0.0) sink(basis.rank(occ), c * fac);
            return;
        }
        for (int mu = 0; mu < N; ++mu) {
            cre[d] = mu;
            ++occ[mu];
            self(self, d + 1, fac * std::sqrt(static_cast<double>(occ[mu])));
            --occ[mu];
        }
    };

    auto rec_ann = [&](auto&& self, int d, double fac) -> void {
        if (d == half_) {
            rec_cre(rec_cre, 0, fac);
            return;
        }
        for (int m : occupied) {
            if (occ[m] == 0) continue;
            ann[d] = m;
            const double f = fac * std::sqrt(static_cast<double>(occ[m]));
            --occ[m];
            self(self, d + 1, f);
            ++occ[m];
        }
    };
    rec_ann(rec_ann, 0, 1.0);
}

template <bool Swapped>
std::complex<double> HamiltonianOperator::a_element(std::size_t row, std::size_t col) const {
    const auto& basis = *basis_;
    const int N = basis.modes();
    std::vector<int> occ = basis.state(col);
    const std::vector<int>& target = basis.state(row);
    std::vector<int> occupied;
    for (int m = 0; m < N; ++m)
        if (occ[m] > 0) occupied.push_back(m);

    std::vector<int> ann(half_), cre(half_), need(N);
    std::complex<double> total = 0.0;

    // sum over ordered creation arrangements of the needed multiset
    auto rec_arr = [&](auto&& self, int d, std::complex<double>& acc) -> void {
        if (d == half_) {
            acc += Swapped ? coeff_entry_swapped(cre.data(), ann.data())
                           : coeff_entry(cre.data(), ann.data());
            return;
        }
        for (int mu = 0; mu < N; ++mu) {
            if (need[mu] == 0) continue;
            --need[mu];
            cre[d] = mu;
            self(self, d + 1, acc);
            ++need[mu];
        }
    };

    auto rec_ann = [&](auto&& self, int d, double fac) -> void {
        if (d == half_) {
            double fac_c = fac;
            for (int mu = 0; mu < N; ++mu) {
                need[mu] = target[mu] - occ[mu];
                if (need[mu] < 0) return;
                for (int k = occ[mu] + 1; k <= target[mu]; ++k)
                    fac_c *= std::sqrt(static_cast<double>(k));
            }
            std::complex<double> csum = 0.0;
            rec_arr(rec_arr, 0, csum);
            total += csum * fac_c;
            return;
        }
        for (int m : occupied) {
            if (occ[m] == 0) continue;
            ann[d] = m;
            const double f = fac * std::sqrt(static_cast<double>(occ[m]));
            --occ[m];
            self(self, d + 1, f);
            ++occ[m];
        }
    };
    rec_ann(rec_ann, 0, 1.0);
    return total;
}

FockVector HamiltonianOperator::apply(const FockVector& in) const {
    if (in.basis->modes() != basis_->modes() || in.basis->bosons() != basis_->bosons())
        throw contract_error("apply: vector basis mismatch");
    FockVector out = zero_fock(in.basis);
    for (std::size_t j = 0; j < basis_->dimension(); ++j) {
        const std::complex<double> a = in.amplitudes[j];
        if (a == 0.0) continue;
        const std::complex<double> w = 0.5 * a;
        a_column<false>(j, [&](std::size_t i, std::complex<double> v) {
            out.amplitudes[i] += w * v;
        });
        a_column<true>(j, [&](std::size_t i, std::complex<double> v) {
            out.amplitudes[i] += w * v;
        });
    }
    return out;
}

Eigen::MatrixXcd HamiltonianOperator::materialize_dense(std::size_t cap) const {
    const std::size_t D = basis_->dimension();
    if (D > cap) throw size_error("materialize_dense: basis dimension exceeds the cap");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(D, D);
    for (std::size_t j = 0; j < D; ++j) {
        a_column<false>(j, [&](std::size_t i, std::complex<double> v) { m(i, j) += 0.5 * v; });
        a_column<true>(j, [&](std::size_t i, std::complex<double> v) { m(i, j) += 0.5 * v; });
    }
    return m;
}

std::complex<double> HamiltonianOperator::element(std::size_t row, std::size_t col) const {
    return 0.5 * (a_element<false>(row, col) + std::conj(a_element<false>(col, row)));
}

HamiltonianOperator build_even(const DenseTensor& t, const BasisPtr& basis) {
    if (t.order() < 2 || t.order() % 2 != 0)
        throw contract_error("build_even: tensor order must be even and >= 2");
    if (t.dim() != basis->modes())
        throw contract_error("build_even: tensor dim must equal the mode count");
    if (basis->bosons() < t.order() / 2)
        throw contract_error("build_even: operator is degenerate for n_bos < order/2");

    HamiltonianOperator h;
    h.source_p_ = t.order();
    h.q_ = t.order();
    h.half_ = t.order() / 2;
    h.basis_ = basis;

    auto coeff = std::make_shared<DenseTensor>(t);
    // conj + swap of the creation/annihilation halves: A(swapped) = A(coeff)^dag
    auto swapped = std::make_shared<DenseTensor>(t.order(), t.dim(), t.field());
    const int half = h.half_;
    const int N = t.dim();
    std::vector<int> idx(t.order()), sidx(t.order());
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        t.decode(flat, idx.data());
        for (int a = 0; a < half; ++a) {
            sidx[a] = idx[half + a];
            sidx[half + a] = idx[a];
        }
        (*swapped)[swapped->flat_index(sidx.data())] = std::conj(t[flat]);
    }
    (void)N;

    h.coeff_ = coeff;
    h.coeff_swap_ = swapped;
    h.norm_bound_ = coeff->abs_sum() * pow_int(basis->bosons(), h.half_);
    return h;
}

HamiltonianOperator build_odd(const DenseTensor& t, const BasisPtr& basis) {
    const int p = t.order();
    if (p < 3 || p % 2 == 0)
        throw contract_error("build_odd: tensor order must be odd and >= 3");
    if (t.dim() != basis->modes())
        throw contract_error("build_odd: tensor dim must equal the mode count");
    if (basis->bosons() < p - 1)
        throw contract_error("build_odd: operator is degenerate for n_bos < p-1");

    const int q = 2 * (p - 1);
    const int N = t.dim();
    double qsize = 1.0;
    for (int a = 0; a < q; ++a) qsize *= N;

    if (qsize <= static_cast<double>(DenseTensor::max_entries)) {
        HamiltonianOperator h = build_even(odd_pair_tensor(t), basis);
        h.source_p_ = p;
        return h;
    }

    // lazy mode: keep the order-p source, contract pairs on demand
    HamiltonianOperator h;
    h.source_p_ = p;
    h.q_ = q;
    h.half_ = q / 2;
    h.basis_ = basis;
    h.odd_source_ = std::make_shared<DenseTensor>(t);

    // sum|pair tensor| <= sum_s (sum_mu |T[mu,s]|)^2, computed without materializing
    std::vector<double> per_s(N, 0.0);
    for (std::size_t flat = 0; flat < t.size(); ++flat)
        per_s[flat % N] += std::abs(t[flat]);
    double abs_bound = 0.0;
    for (double s : per_s) abs_bound += s * s;
    h.norm_bound_ = abs_bound * pow_int(basis->bosons(), h.half_);
    return h;
}

HamiltonianOperator build_hamiltonian(const DenseTensor& t, const BasisPtr& basis) {
    return (t.order() % 2 == 0) ? build_even(t, basis) : build_odd(t, basis);
}

double quantum_expectation(const HamiltonianOperator& h, const FockVector& psi) {
    psi.require_normalized();
    const FockVector hpsi = h.apply(psi);
    const std::complex<double> val = psi.dot(hpsi);
    if (std::abs(val.imag()) > 1e-8 * (1.0 + std::abs(val)))
        throw contract_error("quantum_expectation: non-real expectation value");
    return val.real();
}

} // namespace stpca
