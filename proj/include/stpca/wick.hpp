#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stpca/tensor.hpp"

namespace stpca {

enum class VertexLabel { gaussian, gaussian_conj, signal };

struct NetVertex {
    VertexLabel label = VertexLabel::gaussian;
    int order = 2;
    bool symmetrized = false;
};

struct LegRef {
    int vertex = 0;
    int leg = 0;
};

/// A closed or partially open contraction diagram. Gaussian vertices are
/// insertions of one shared random tensor (conjugated for gaussian_conj);
/// signal vertices are rank-one insertions of strength lambda whose legs pin
/// their strand to the first coordinate axis, sqrt(N) per leg.
struct TensorNetwork {
    int dim = 0;
    Field field = Field::real;
    double lambda = 1.0;
    double gaussian_scale = 1.0; // standard deviation multiplier on the noise
    std::vector<NetVertex> vertices;
    std::vector<std::pair<LegRef, LegRef>> edges;
    std::vector<LegRef> open_legs;

    int edge_count() const { return static_cast<int>(edges.size()); }
    int gaussian_count() const;

    /// Checks leg degrees (each leg in exactly one edge or marked open),
    /// uniform Gaussian order, index ranges.
    void validate() const;
};

/// One perfect matching of the Gaussian vertices. n_loop is the closed-loop
/// count under the order-preserving leg identification.
struct Pairing {
    std::vector<std::pair<int, int>> pairs;
    int n_loop = -1;
};

struct PairingEnumeration {
    std::vector<Pairing> pairings;
    bool zero_expectation = false; // parity or conjugation imbalance
};

/// All pairings: m!! in the real case, (m/2)! in the complex case where
/// plain vertices match only conjugated ones. Vertex cap 12.
PairingEnumeration enumerate_pairings(const TensorNetwork& net);

/// Closed-loop count for one pairing with order-preserving leg matching.
/// Strands pinned by a signal leg or ending at an open leg are not loops.
int loop_count(const TensorNetwork& net, const Pairing& pairing);

/// Contribution of one pairing: N^{n_loop} summed over leg matchings
/// (all order! bijections, weight 1/order!, when a symmetrized vertex is
/// involved), times lambda * N^{order/2} per signal vertex and the noise
/// scale per Gaussian vertex.
double pairing_value(const TensorNetwork& net, const Pairing& pairing);

/// Exact expectation of the network value: sum of pairing_value over all
/// pairings (zero when the Gaussian count rules every pairing out).
double expected_value(const TensorNetwork& net);

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t trials = 0;
};

/// Monte-Carlo estimate of the network value by direct contraction over all
/// edge index assignments, fresh noise per trial. Requires a closed network.
McEstimate mc_estimate(const TensorNetwork& net, std::size_t trials, std::uint64_t seed);

/// The doubled diagram for second moments: the network next to its
/// conjugated copy, so expected_value(doubled) = E[|value|^2].
TensorNetwork doubled_network(const TensorNetwork& net);

/// Scalar action of the squared noise Hamiltonian on the occupation space.
/// closed_form is the exact mean diagonal for the complex ensemble (the real
/// ensemble sits within a vanishing relative correction); bound_form is the
/// coarser envelope J * n_bos^{p/2} * N^{p/2} used by the energy thresholds.
struct H2ScalarReport {
    double closed_form = 0.0;
    double bound_form = 0.0;
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    std::size_t trials = 0;
};

H2ScalarReport expected_h2_scalar(int p, int dim, int n_bos, Field field,
                                  std::size_t trials = 200, std::uint64_t seed = 7);

/// Fixture loader / saver; the document carries dim, field, lambda, vertices
/// (label, order, symmetrized), edges as endpoint pairs, and open legs.
TensorNetwork network_from_json(const std::string& text);
std::string network_to_json(const TensorNetwork& net);

/// Small named diagram suite used by the verification runs: an edge pair, a
/// four-vertex ring, a signal-dressed pair, and a symmetrized triple pair.
std::vector<std::pair<std::string, TensorNetwork>> builtin_network_suite(int dim, Field field);

} // namespace stpca
