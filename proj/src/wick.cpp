#include "stpca/wick.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "stpca/fock.hpp"
#include "stpca/hamiltonian.hpp"
#include "stpca/rng.hpp"

namespace stpca {

namespace {

constexpr int gaussian_vertex_cap = 12;

double pow_int(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

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

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct LegIndexer {
    std::vector<int> offset;
    int total = 0;
    explicit LegIndexer(const TensorNetwork& net) {
        offset.reserve(net.vertices.size());
        for (const auto& v : net.vertices) {
            offset.push_back(total);
            total += v.order;
        }
    }
    int id(const LegRef& l) const { return offset[l.vertex] + l.leg; }
    int id(int vertex, int leg) const { return offset[vertex] + leg; }
};

bool is_gaussian(const NetVertex& v) { return v.label != VertexLabel::signal; }

// closed-loop count for a fully specified leg identification; sigma[k] maps
// legs of pairs[k].first onto legs of pairs[k].second
int loops_for_matching(const TensorNetwork& net, const LegIndexer& ix,
                       const std::vector<std::pair<int, int>>& pairs,
                       const std::vector<const int*>& sigma) {
    UnionFind uf(ix.total);
    for (const auto& e : net.edges) uf.unite(ix.id(e.first), ix.id(e.second));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const int order = net.vertices[pairs[k].first].order;
        for (int l = 0; l < order; ++l)
            uf.unite(ix.id(pairs[k].first, l), ix.id(pairs[k].second, sigma[k][l]));
    }

    std::vector<char> pinned(ix.total, 0), open_end(ix.total, 0);
    for (std::size_t v = 0; v < net.vertices.size(); ++v)
        if (net.vertices[v].label == VertexLabel::signal)
            for (int l = 0; l < net.vertices[v].order; ++l)
                pinned[uf.find(ix.id(static_cast<int>(v), l))] = 1;
    for (const auto& l : net.open_legs) open_end[uf.find(ix.id(l))] = 1;

    std::vector<char> seen(ix.total, 0);
    int loops = 0;
    for (int n = 0; n < ix.total; ++n) {
        const int r = uf.find(n);
        if (seen[r]) continue;
        seen[r] = 1;
        if (!pinned[r] && !open_end[r]) ++loops;
    }
    return loops;
}

} // namespace

int TensorNetwork::gaussian_count() const {
    int c = 0;
    for (const auto& v : vertices)
        if (is_gaussian(v)) ++c;
    return c;
}

void TensorNetwork::validate() const {
    if (dim < 1) throw contract_error("network: dim must be positive");
    if (vertices.empty()) throw contract_error("network: no vertices");
    int g_order = -1;
    for (const auto& v : vertices) {
        if (v.order < 1) throw contract_error("network: vertex order must be >= 1");
        if (is_gaussian(v)) {
            if (g_order == -1) g_order = v.order;
            if (v.order != g_order)
                throw contract_error("network: Gaussian vertices must share one order");
        }
    }
    const LegIndexer ix(*this);
    std::vector<int> degree(ix.total, 0);
    auto touch = [&](const LegRef& l) {
        if (l.vertex < 0 || l.vertex >= static_cast<int>(vertices.size()))
            throw contract_error("network: edge endpoint vertex out of range");
        if (l.leg < 0 || l.leg >= vertices[l.vertex].order)
            throw contract_error("network: edge endpoint leg out of range");
        ++degree[ix.id(l)];
    };
    for (const auto& e : edges) {
        touch(e.first);
        touch(e.second);
    }
    for (const auto& l : open_legs) touch(l);
    for (int d : degree)
        if (d != 1) throw contract_error("network: every leg needs exactly one edge or open mark");
}

PairingEnumeration enumerate_pairings(const TensorNetwork& net) {
    net.validate();
    PairingEnumeration out;

    std::vector<int> plain, conj;
    for (std::size_t v = 0; v < net.vertices.size(); ++v) {
        if (!is_gaussian(net.vertices[v])) continue;
        if (net.field == Field::complex_ && net.vertices[v].label == VertexLabel::gaussian_conj)
            conj.push_back(static_cast<int>(v));
        else
            plain.push_back(static_cast<int>(v));
    }
    const int m = static_cast<int>(plain.size() + conj.size());
    if (m > gaussian_vertex_cap) throw size_error("enumerate_pairings: vertex cap exceeded");
    if (m == 0) {
        out.pairings.push_back(Pairing{{}, 0});
        out.pairings.back().n_loop = loop_count(net, out.pairings.back());
        return out;
    }

    if (net.field == Field::complex_) {
        if (plain.size() != conj.size()) {
            out.zero_expectation = true;
            return out;
        }
        std::vector<int> perm(conj);
        std::sort(perm.begin(), perm.end());
        do {
            Pairing p;
            for (std::size_t i = 0; i < plain.size(); ++i) p.pairs.emplace_back(plain[i], perm[i]);
            p.n_loop = loop_count(net, p);
            out.pairings.push_back(std::move(p));
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }

    if (m % 2 != 0) {
        out.zero_expectation = true;
        return out;
    }
    std::vector<int> pool = plain;
    std::vector<std::pair<int, int>> acc;
    auto rec = [&](auto&& self) -> void {
        if (pool.empty()) {
            Pairing p;
            p.pairs = acc;
            p.n_loop = loop_count(net, p);
            out.pairings.push_back(std::move(p));
            return;
        }
        const int a = pool.front();
        for (std::size_t j = 1; j < pool.size(); ++j) {
            const int b = pool[j];
            std::vector<int> rest;
            for (std::size_t k = 1; k < pool.size(); ++k)
                if (k != j) rest.push_back(pool[k]);
            acc.emplace_back(a, b);
            std::swap(pool, rest);
            self(self);
            std::swap(pool, rest);
            acc.pop_back();
        }
    };
    rec(rec);
    return out;
}

int loop_count(const TensorNetwork& net, const Pairing& pairing) {
    const LegIndexer ix(net);
    std::vector<std::vector<int>> identity;
    std::vector<const int*> sigma;
    identity.reserve(pairing.pairs.size());
    for (const auto& pr : pairing.pairs) {
        std::vector<int> id(net.vertices[pr.first].order);
        std::iota(id.begin(), id.end(), 0);
        identity.push_back(std::move(id));
    }
    for (const auto& id : identity) sigma.push_back(id.data());
    return loops_for_matching(net, ix, pairing.pairs, sigma);
}

double pairing_value(const TensorNetwork& net, const Pairing& pairing) {
    const LegIndexer ix(net);

    double signal_factor = 1.0;
    for (const auto& v : net.vertices)
        if (v.label == VertexLabel::signal)
            signal_factor *= net.lambda * pow_int(std::sqrt(double(net.dim)), v.order);

    double noise_factor = 1.0;
    for (const auto& v : net.vertices)
        if (is_gaussian(v)) noise_factor *= net.gaussian_scale;

    const std::size_t k_pairs = pairing.pairs.size();
    std::vector<std::vector<int>> perm(k_pairs);
    std::vector<const int*> sigma(k_pairs);
    for (std::size_t k = 0; k < k_pairs; ++k) {
        perm[k].resize(net.vertices[pairing.pairs[k].first].order);
        std::iota(perm[k].begin(), perm[k].end(), 0);
        sigma[k] = perm[k].data();
    }

    double total = 0.0;
    auto rec = [&](auto&& self, std::size_t k, double weight) -> void {
        if (k == k_pairs) {
            const int loops = loops_for_matching(net, ix, pairing.pairs, sigma);
            total += weight * pow_int(double(net.dim), loops);
            return;
        }
        const auto& a = net.vertices[pairing.pairs[k].first];
        const auto& b = net.vertices[pairing.pairs[k].second];
        if (!a.symmetrized && !b.symmetrized) {
            std::iota(perm[k].begin(), perm[k].end(), 0);
            self(self, k + 1, weight);
            return;
        }
        std::iota(perm[k].begin(), perm[k].end(), 0);
        const double w = weight / factorial(a.order);
        do {
            self(self, k + 1, w);
        } while (std::next_permutation(perm[k].begin(), perm[k].end()));
        std::iota(perm[k].begin(), perm[k].end(), 0);
    };
    rec(rec, 0, 1.0);
    return signal_factor * noise_factor * total;
}

double expected_value(const TensorNetwork& net) {
    const PairingEnumeration en = enumerate_pairings(net);
    if (en.zero_expectation) return 0.0;
    double sum = 0.0;
    for (const auto& p : en.pairings) sum += pairing_value(net, p);
    return sum;
}

TensorNetwork doubled_network(const TensorNetwork& net) {
    net.validate();
    TensorNetwork d = net;
    const int V = static_cast<int>(net.vertices.size());
    for (const auto& v : net.vertices) {
        NetVertex c = v;
        if (net.field == Field::complex_) {
            if (v.label == VertexLabel::gaussian) c.label = VertexLabel::gaussian_conj;
            else if (v.label == VertexLabel::gaussian_conj) c.label = VertexLabel::gaussian;
        }
        d.vertices.push_back(c);
    }
    for (const auto& e : net.edges)
        d.edges.push_back({{e.first.vertex + V, e.first.leg}, {e.second.vertex + V, e.second.leg}});
    for (const auto& l : net.open_legs) d.open_legs.push_back({l.vertex + V, l.leg});
    return d;
}

McEstimate mc_estimate(const TensorNetwork& net, std::size_t trials, std::uint64_t seed) {
    net.validate();
    if (trials < 2) throw contract_error("mc_estimate: trials must be >= 2");
    if (!net.open_legs.empty()) throw contract_error("mc_estimate: network must be closed");

    const int E = net.edge_count();
    const int N = net.dim;

    // leg -> edge slot
    const LegIndexer ix(net);
    std::vector<int> leg_edge(ix.total, -1);
    for (int e = 0; e < E; ++e) {
        leg_edge[ix.id(net.edges[e].first)] = e;
        leg_edge[ix.id(net.edges[e].second)] = e;
    }

    int g_order = 0;
    bool any_gauss = false, any_sym = false;
    for (const auto& v : net.vertices)
        if (is_gaussian(v)) {
            any_gauss = true;
            g_order = v.order;
            if (v.symmetrized) any_sym = true;
        }

    double sum = 0.0, sumsq = 0.0;
    std::vector<int> assign(std::max(E, 1), 0);
    std::vector<int> tuple;

    for (std::size_t t = 0; t < trials; ++t) {
        DenseTensor g(1, 1, net.field), gsym(1, 1, net.field);
        if (any_gauss) {
            g = sample_gaussian_tensor(g_order, N, Ensemble{net.field, false},
                                       substream_seed(seed, t));
            if (net.gaussian_scale != 1.0)
                for (auto& z : g.data()) z *= net.gaussian_scale;
            if (any_sym) gsym = symmetrize(g);
        }

        std::complex<double> val = 0.0;
        std::fill(assign.begin(), assign.end(), 0);
        bool done = false;
        while (!done) {
            std::complex<double> prod = 1.0;
            for (std::size_t v = 0; v < net.vertices.size() && prod != 0.0; ++v) {
                const auto& vert = net.vertices[v];
                tuple.assign(vert.order, 0);
                for (int l = 0; l < vert.order; ++l)
                    tuple[l] = assign[leg_edge[ix.id(static_cast<int>(v), l)]];
                if (vert.label == VertexLabel::signal) {
                    bool pinned = true;
                    for (int l = 0; l < vert.order; ++l)
                        if (tuple[l] != 0) pinned = false;
                    prod *= pinned ? net.lambda * pow_int(std::sqrt(double(N)), vert.order) : 0.0;
                } else {
                    const DenseTensor& src = vert.symmetrized ? gsym : g;
                    std::complex<double> entry = src[src.flat_index(tuple.data())];
                    if (net.field == Field::complex_ && vert.label == VertexLabel::gaussian_conj)
                        entry = std::conj(entry);
                    prod *= entry;
                }
            }
            val += prod;

            done = true;
            for (int e = 0; e < E; ++e) {
                if (++assign[e] < N) {
                    done = false;
                    break;
                }
                assign[e] = 0;
            }
            if (E == 0) done = true;
        }
        sum += val.real();
        sumsq += val.real() * val.real();
    }

    McEstimate r;
    r.trials = trials;
    r.mean = sum / double(trials);
    const double var = std::max(0.0, (sumsq - double(trials) * r.mean * r.mean) / double(trials - 1));
    r.stderr_ = std::sqrt(var / double(trials));
    return r;
}

H2ScalarReport expected_h2_scalar(int p, int dim, int n_bos, Field field, std::size_t trials,
                                  std::uint64_t seed) {
    if (p < 2 || p % 2 != 0)
        throw contract_error("expected_h2_scalar: even order required (reduce odd orders first)");
    if (n_bos < p / 2) throw contract_error("expected_h2_scalar: n_bos must be >= p/2");
    if (trials < 2) throw contract_error("expected_h2_scalar: trials must be >= 2");

    const int h = p / 2;
    H2ScalarReport rep;
    double rising = 1.0;
    for (int i = 0; i < h; ++i) rising *= double(dim + n_bos - h + i);
    rep.closed_form = 0.5 * factorial(h) * binomial(n_bos, h) * rising;

    double j = factorial(h) * binomial(n_bos, h) / pow_int(double(n_bos), h);
    if (field == Field::complex_) j *= 2.0;
    rep.bound_form = j * pow_int(double(n_bos), h) * pow_int(double(dim), h);

    const BasisPtr basis = make_basis(dim, n_bos);
    const double D = double(basis->dimension());
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const DenseTensor eta =
            sample_gaussian_tensor(p, dim, Ensemble{field, false}, substream_seed(seed, 500 + t));
        const HamiltonianOperator ham = build_even(eta, basis);
        const Eigen::MatrixXcd m = ham.materialize_dense(basis->dimension());
        const double diag_mean = m.squaredNorm() / D; // trace(H^2)/D for Hermitian H
        sum += diag_mean;
        sumsq += diag_mean * diag_mean;
    }
    rep.trials = trials;
    rep.mc_mean = sum / double(trials);
    const double var =
        std::max(0.0, (sumsq - double(trials) * rep.mc_mean * rep.mc_mean) / double(trials - 1));
    rep.mc_stderr = std::sqrt(var / double(trials));
    return rep;
}

TensorNetwork network_from_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    TensorNetwork net;
    net.dim = doc.at("dim").get<int>();
    net.field = doc.at("field").get<std::string>() == "complex" ? Field::complex_ : Field::real;
    net.lambda = doc.value("lambda", 1.0);
    net.gaussian_scale = doc.value("gaussian_scale", 1.0);
    for (const auto& v : doc.at("vertices")) {
        NetVertex nv;
        const std::string label = v.at("label").get<std::string>();
        if (label == "G") nv.label = VertexLabel::gaussian;
        else if (label == "Gbar") nv.label = VertexLabel::gaussian_conj;
        else if (label == "signal") nv.label = VertexLabel::signal;
        else throw contract_error("network_from_json: unknown vertex label");
        nv.order = v.at("order").get<int>();
        nv.symmetrized = v.value("symmetrized", false);
        net.vertices.push_back(nv);
    }
    auto leg = [](const nlohmann::json& j) { return LegRef{j.at(0).get<int>(), j.at(1).get<int>()}; };
    if (doc.contains("edges"))
        for (const auto& e : doc["edges"]) net.edges.push_back({leg(e.at(0)), leg(e.at(1))});
    if (doc.contains("open"))
        for (const auto& l : doc["open"]) net.open_legs.push_back(leg(l));
    net.validate();
    return net;
}

std::string network_to_json(const TensorNetwork& net) {
    nlohmann::json doc;
    doc["dim"] = net.dim;
    doc["field"] = net.field == Field::complex_ ? "complex" : "real";
    doc["lambda"] = net.lambda;
    doc["gaussian_scale"] = net.gaussian_scale;
    doc["vertices"] = nlohmann::json::array();
    for (const auto& v : net.vertices) {
        nlohmann::json jv;
        jv["label"] = v.label == VertexLabel::gaussian ? "G"
                      : v.label == VertexLabel::gaussian_conj ? "Gbar" : "signal";
        jv["order"] = v.order;
        jv["symmetrized"] = v.symmetrized;
        doc["vertices"].push_back(jv);
    }
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : net.edges)
        doc["edges"].push_back({{e.first.vertex, e.first.leg}, {e.second.vertex, e.second.leg}});
    doc["open"] = nlohmann::json::array();
    for (const auto& l : net.open_legs) doc["open"].push_back({l.vertex, l.leg});
    return doc.dump(2);
}

} // namespace stpca
