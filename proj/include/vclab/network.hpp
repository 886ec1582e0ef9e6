#pragma once

// Feedforward networks as directed acyclic graphs with exact rational
// parameters.
//
// Node indices [0, input_count) are the input nodes; every other index is a
// computation unit with a bias and an activation. Layers are derived, never
// declared: inputs are layer 0 and a unit's layer is one more than the
// deepest of its predecessors, so skip edges are allowed. The single sink is
// the output unit and its activation must be the identity.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vclab/pwl.hpp"
#include "vclab/rational.hpp"

namespace vclab {

using NodeIndex = std::size_t;

struct Unit {
    std::string id;
    Rational bias;
    Activation activation;

    friend bool operator==(const Unit&, const Unit&) = default;
};

struct Edge {
    NodeIndex from;
    NodeIndex to;
    Rational weight;

    friend bool operator==(const Edge&, const Edge&) = default;
};

class Network {
public:
    std::size_t input_count() const noexcept { return input_count_; }
    std::size_t unit_count() const noexcept { return units_.size(); }
    std::size_t node_count() const noexcept { return input_count_ + units_.size(); }
    bool is_input(NodeIndex v) const noexcept { return v < input_count_; }

    /// Unit data for a non-input node.
    const Unit& unit(NodeIndex v) const { return units_.at(v - input_count_); }
    const std::vector<Unit>& units() const noexcept { return units_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    NodeIndex output() const noexcept { return output_; }

    /// "x<i>" for inputs, the unit id otherwise.
    std::string node_id(NodeIndex v) const;

    /// Units in a topological order (inputs excluded).
    const std::vector<NodeIndex>& topological_order() const noexcept { return order_; }
    /// Indices into edges() of the edges entering v.
    std::span<const std::size_t> in_edges(NodeIndex v) const;
    std::size_t layer(NodeIndex v) const { return layer_.at(v); }
    /// Length of the longest path, i.e. the output node's layer.
    std::size_t depth() const noexcept { return layer_[output_]; }

    /// Parameters in canonical order: every edge weight (edge order), then
    /// every unit bias (unit order). Size is W.
    std::vector<Rational> parameters() const;

    /// Same graph and activations with new parameters in parameters() order.
    Network with_parameters(std::span<const Rational> params) const;

    friend bool operator==(const Network& a, const Network& b) {
        return a.input_count_ == b.input_count_ && a.units_ == b.units_ && a.edges_ == b.edges_ && a.output_ == b.output_;
    }

private:
    friend class NetworkBuilder;
    Network() = default;
    void index();

    std::size_t input_count_ = 0;
    std::vector<Unit> units_;
    std::vector<Edge> edges_;
    NodeIndex output_ = 0;

    std::vector<NodeIndex> order_;
    std::vector<std::size_t> in_offsets_;
    std::vector<std::size_t> in_list_;
    std::vector<std::size_t> layer_;
};

/// Incremental construction with validation at build().
class NetworkBuilder {
public:
    explicit NetworkBuilder(std::size_t input_count);

    NodeIndex input(std::size_t i) const;
    NodeIndex add_unit(std::string id, Rational bias, Activation activation);
    void add_edge(NodeIndex from, NodeIndex to, Rational weight);
    std::size_t node_count() const noexcept { return input_count_ + units_.size(); }

    /// Checks ids are unique, the graph is acyclic, every unit has an incoming
    /// edge, `output` is the only sink and uses the identity activation.
    /// Throws ValidationError.
    Network build(NodeIndex output) const;

private:
    std::size_t input_count_;
    std::vector<Unit> units_;
    std::vector<Edge> edges_;
};

/// Exact output for input vector x. Throws ArityError on length mismatch.
Rational forward_eval(const Network& net, std::span<const Rational> x);
/// Exact value of every node, indexed by NodeIndex.
std::vector<Rational> forward_all(const Network& net, std::span<const Rational> x);
/// Output of the same architecture under an alternative parameter vector
/// (parameters() order), without materializing a new Network.
Rational forward_eval_with(const Network& net, std::span<const Rational> params, std::span<const Rational> x);
/// As above, reusing `scratch` for node values across calls.
Rational forward_eval_with(const Network& net, std::span<const Rational> params, std::span<const Rational> x,
                           std::vector<Rational>& scratch);

/// 1 iff the output is strictly positive.
int sign_of_output(const Network& net, std::span<const Rational> x);

/// Function of the single input computed at every node. Requires one input
/// and piecewise-linear activations; throws UnsupportedError otherwise.
std::vector<PwlFunction> symbolic_forward_all(const Network& net);
PwlFunction symbolic_forward(const Network& net);

/// Number of directed paths from any input node to each node.
std::vector<Integer> path_counts(const Network& net);

/// Architecture figures consumed by the bound formulas.
struct ArchSummary {
    Integer W;   // weights + biases
    Integer U;   // computation units
    std::size_t L = 0;
    std::vector<Integer> k;               // units in layer 1..L
    std::vector<Integer> Wi_layerwise;    // parameters entering layer i
    std::vector<Integer> Wi_cumulative;   // parameters entering layers 1..i
    Integer p;   // max pieces of a non-output activation
    Integer d;   // max degree of a non-output activation
    Rational Lbar;
    Integer R;

    /// Fills W, U, L, cumulative counts, Lbar and R from per-layer data.
    /// Throws DomainError on empty or inconsistent layers.
    static ArchSummary from_layers(std::vector<Integer> k, std::vector<Integer> Wi_layerwise, Integer p, Integer d);

    /// W_i in the sense of the depth-weighted bounds: layerwise when d = 0,
    /// cumulative otherwise.
    const std::vector<Integer>& Wi() const { return d.sign() == 0 ? Wi_layerwise : Wi_cumulative; }
    /// sum of Wi() = Lbar * W.
    Integer Wi_sum() const;

    friend bool operator==(const ArchSummary&, const ArchSummary&) = default;
};

ArchSummary summarize(const Network& net);

/// The target labelling f: S_n x S_m -> {0,1}; bit(j, i) = f(e_j, e_i).
class LabelMatrix {
public:
    LabelMatrix(std::size_t n, std::size_t m);
    /// Labelling number `index` of the 2^(nm) exhaustive enumeration:
    /// bit j*m+i of index is entry (j, i).
    static LabelMatrix from_index(std::size_t n, std::size_t m, unsigned long long index);

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return m_; }
    int bit(std::size_t j, std::size_t i) const { return bits_.at(j * m_ + i); }
    void set(std::size_t j, std::size_t i, int value);

    friend bool operator==(const LabelMatrix&, const LabelMatrix&) = default;

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<unsigned char> bits_;
};

} // namespace vclab
