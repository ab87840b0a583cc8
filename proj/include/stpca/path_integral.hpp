#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "stpca/fock.hpp"
#include "stpca/hamiltonian.hpp"
#include "stpca/spectral.hpp"

namespace stpca {

/// Two-float compensated accumulator (Neumaier variant): keeps a running
/// correction term so long alternating sums stay accurate.
struct CompensatedSum {
    double sum = 0.0;
    double correction = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            correction += (sum - t) + x;
        else
            correction += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + correction; }
};

struct ComplexAccumulator {
    CompensatedSum re, im;
    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

struct CircuitGate {
    enum class Kind { hamiltonian, monomial };
    Kind kind = Kind::monomial;
    std::shared_ptr<const HamiltonianOperator> h; // hamiltonian gates
    int create_mode = 0;                          // monomial a^dag_mu a_nu
    int annihilate_mode = 0;
};

/// Ordered, number-conserving gate list applied right to left: the first
/// pushed gate acts first. Not necessarily unitary.
class GeneratorCircuit {
public:
    explicit GeneratorCircuit(BasisPtr basis) : basis_(std::move(basis)) {}

    void push_hamiltonian(std::shared_ptr<const HamiltonianOperator> h);
    void push_monomial(int create_mode, int annihilate_mode);

    int depth() const { return static_cast<int>(gates_.size()); }
    const CircuitGate& gate(int i) const { return gates_.at(i); }
    const BasisPtr& basis() const { return basis_; }

    /// On-demand matrix element of gate g; nothing is materialized.
    std::complex<double> gate_element(int g, std::size_t row, std::size_t col) const;

private:
    BasisPtr basis_;
    std::vector<CircuitGate> gates_;
};

/// Direct sum over all intermediate basis assignments (exponential time,
/// polynomial space). Gate elements are evaluated on demand.
std::complex<double> amplitude_naive(const GeneratorCircuit& circuit, std::size_t x,
                                     std::size_t y);

struct RecursionStats {
    std::uint64_t calls = 0;  // total evaluator invocations
    int live_frames = 0;      // currently open frames
    int peak_frames = 0;      // maximum ever open at once
};

/// Depth-halving evaluation: <y|C|x> = sum_z <y|C_top|z><z|C_bottom|x>.
/// Peak live frames stay within ceil(log2 depth) + 1.
std::complex<double> amplitude_recursive(const GeneratorCircuit& circuit, std::size_t x,
                                         std::size_t y, RecursionStats* stats = nullptr);

/// <x| H^m a^dag_mu a_nu H^m |x> / <x| H^2m |x>, both sides evaluated by the
/// depth-halving recursion. Throws degenerate_start_error when the denominator
/// vanishes so the caller can re-draw x.
std::complex<double> powered_density_entry(const std::shared_ptr<const HamiltonianOperator>& h,
                                           int m, int mu, int nu, std::size_t x,
                                           RecursionStats* stats = nullptr);

/// Default power count ceil(ln D / ln(e_signal/e_max)); requires e_signal > e_max.
int default_power_count(const SpectralThresholds& th, std::size_t dim);

} // namespace stpca
