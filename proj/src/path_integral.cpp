#include "stpca/path_integral.hpp"

#include <cmath>

namespace stpca {

void GeneratorCircuit::push_hamiltonian(std::shared_ptr<const HamiltonianOperator> h) {
    if (!h) throw contract_error("push_hamiltonian: null operator");
    if (h->basis()->modes() != basis_->modes() || h->basis()->bosons() != basis_->bosons())
        throw contract_error("push_hamiltonian: operator basis mismatch");
    CircuitGate g;
    g.kind = CircuitGate::Kind::hamiltonian;
    g.h = std::move(h);
    gates_.push_back(std::move(g));
}

void GeneratorCircuit::push_monomial(int create_mode, int annihilate_mode) {
    const int N = basis_->modes();
    if (create_mode < 0 || create_mode >= N || annihilate_mode < 0 || annihilate_mode >= N)
        throw contract_error("push_monomial: mode out of range");
    CircuitGate g;
    g.kind = CircuitGate::Kind::monomial;
    g.create_mode = create_mode;
    g.annihilate_mode = annihilate_mode;
    gates_.push_back(g);
}

std::complex<double> GeneratorCircuit::gate_element(int g, std::size_t row,
                                                    std::size_t col) const {
    const CircuitGate& gate = gates_.at(g);
    if (gate.kind == CircuitGate::Kind::hamiltonian) return gate.h->element(row, col);

    // <row| a^dag_mu a_nu |col>
    const std::vector<int>& from = basis_->state(col);
    const std::vector<int>& to = basis_->state(row);
    const int mu = gate.create_mode, nu = gate.annihilate_mode;
    if (from[nu] == 0) return 0.0;
    if (mu == nu) return (row == col) ? double(from[nu]) : 0.0;
    const int N = basis_->modes();
    for (int m = 0; m < N; ++m) {
        const int expect = from[m] - (m == nu ? 1 : 0) + (m == mu ? 1 : 0);
        if (to[m] != expect) return 0.0;
    }
    return std::sqrt(double(from[nu])) * std::sqrt(double(from[mu] + 1));
}

namespace {

// value(g, j) = <y| gate_{d-1} ... gate_g |j>
std::complex<double> naive_value(const GeneratorCircuit& c, int g, std::size_t j,
                                 std::size_t y) {
    if (g == c.depth()) return (j == y) ? 1.0 : 0.0;
    const std::size_t D = c.basis()->dimension();
    ComplexAccumulator acc;
    for (std::size_t i = 0; i < D; ++i) {
        const std::complex<double> e = c.gate_element(g, i, j);
        if (e == 0.0) continue;
        const std::complex<double> rest = naive_value(c, g + 1, i, y);
        if (rest == 0.0) continue;
        acc.add(e * rest);
    }
    return acc.value();
}

struct FrameGuard {
    RecursionStats* stats;
    explicit FrameGuard(RecursionStats* s) : stats(s) {
        if (!stats) return;
        ++stats->calls;
        ++stats->live_frames;
        if (stats->live_frames > stats->peak_frames) stats->peak_frames = stats->live_frames;
    }
    ~FrameGuard() {
        if (stats) --stats->live_frames;
    }
};

// amplitude of the gate slice [lo, hi) between basis states x and y
std::complex<double> recursive_slice(const GeneratorCircuit& c, int lo, int hi, std::size_t x,
                                     std::size_t y, RecursionStats* stats) {
    FrameGuard guard(stats);
    const int d = hi - lo;
    if (d == 1) return c.gate_element(lo, y, x);
    const int mid = lo + (d + 1) / 2; // bottom slice gets the ceil half
    const std::size_t D = c.basis()->dimension();
    ComplexAccumulator acc;
    for (std::size_t z = 0; z < D; ++z) {
        const std::complex<double> bottom = recursive_slice(c, lo, mid, x, z, stats);
        if (bottom == 0.0) continue;
        const std::complex<double> top = recursive_slice(c, mid, hi, z, y, stats);
        acc.add(bottom * top);
    }
    return acc.value();
}

} // namespace

std::complex<double> amplitude_naive(const GeneratorCircuit& circuit, std::size_t x,
                                     std::size_t y) {
    const std::size_t D = circuit.basis()->dimension();
    if (circuit.depth() < 1) throw contract_error("amplitude_naive: empty circuit");
    if (x >= D || y >= D) throw contract_error("amplitude_naive: basis index out of range");
    return naive_value(circuit, 0, x, y);
}

std::complex<double> amplitude_recursive(const GeneratorCircuit& circuit, std::size_t x,
                                         std::size_t y, RecursionStats* stats) {
    const std::size_t D = circuit.basis()->dimension();
    if (circuit.depth() < 1) throw contract_error("amplitude_recursive: empty circuit");
    if (x >= D || y >= D) throw contract_error("amplitude_recursive: basis index out of range");
    return recursive_slice(circuit, 0, circuit.depth(), x, y, stats);
}

std::complex<double> powered_density_entry(const std::shared_ptr<const HamiltonianOperator>& h,
                                           int m, int mu, int nu, std::size_t x,
                                           RecursionStats* stats) {
    if (!h) throw contract_error("powered_density_entry: null operator");
    if (m < 1) throw contract_error("powered_density_entry: power count must be >= 1");
    const BasisPtr& basis = h->basis();

    GeneratorCircuit numerator(basis);
    for (int i = 0; i < m; ++i) numerator.push_hamiltonian(h);
    numerator.push_monomial(mu, nu);
    for (int i = 0; i < m; ++i) numerator.push_hamiltonian(h);

    GeneratorCircuit denominator(basis);
    for (int i = 0; i < 2 * m; ++i) denominator.push_hamiltonian(h);

    const std::complex<double> den = amplitude_recursive(denominator, x, x, stats);
    const std::complex<double> num = amplitude_recursive(numerator, x, x, stats);
    if (std::abs(den) < 1e-280)
        throw degenerate_start_error("powered_density_entry: vanishing denominator");
    return num / den;
}

int default_power_count(const SpectralThresholds& th, std::size_t dim) {
    if (th.e_signal <= th.e_max)
        throw contract_error("default_power_count: requires e_signal > e_max");
    const double m = std::log(double(dim)) / std::log(th.e_signal / th.e_max);
    return std::max(1, static_cast<int>(std::ceil(m)));
}

} // namespace stpca
