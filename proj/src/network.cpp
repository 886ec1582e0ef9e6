#include "vclab/network.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "vclab/error.hpp"

namespace vclab {

std::string Network::node_id(NodeIndex v) const {
    if (is_input(v)) return "x" + std::to_string(v);
    return unit(v).id;
}

std::span<const std::size_t> Network::in_edges(NodeIndex v) const {
    return std::span<const std::size_t>(in_list_).subspan(in_offsets_.at(v), in_offsets_.at(v + 1) - in_offsets_.at(v));
}

std::vector<Rational> Network::parameters() const {
    std::vector<Rational> params;
    params.reserve(edges_.size() + units_.size());
    for (const Edge& e : edges_) params.push_back(e.weight);
    for (const Unit& u : units_) params.push_back(u.bias);
    return params;
}

Network Network::with_parameters(std::span<const Rational> params) const {
    if (params.size() != edges_.size() + units_.size()) {
        throw ArityError("expected " + std::to_string(edges_.size() + units_.size()) + " parameters, got " +
                         std::to_string(params.size()));
    }
    Network copy = *this;
    for (std::size_t i = 0; i < edges_.size(); ++i) copy.edges_[i].weight = params[i];
    for (std::size_t i = 0; i < units_.size(); ++i) copy.units_[i].bias = params[edges_.size() + i];
    return copy;
}

void Network::index() {
    const std::size_t n = node_count();
    in_offsets_.assign(n + 1, 0);
    for (const Edge& e : edges_) ++in_offsets_[e.to + 1];
    for (std::size_t v = 0; v < n; ++v) in_offsets_[v + 1] += in_offsets_[v];
    in_list_.assign(edges_.size(), 0);
    std::vector<std::size_t> fill(in_offsets_.begin(), in_offsets_.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) in_list_[fill[edges_[i].to]++] = i;

    // Kahn's algorithm; ties broken by node index so the order is deterministic.
    std::vector<std::vector<NodeIndex>> out(n);
    std::vector<std::size_t> indegree(n, 0);
    for (const Edge& e : edges_) {
        out[e.from].push_back(e.to);
        ++indegree[e.to];
    }
    std::set<NodeIndex> ready;
    for (NodeIndex v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.insert(v);
    }
    layer_.assign(n, 0);
    order_.clear();
    std::size_t visited = 0;
    while (!ready.empty()) {
        NodeIndex v = *ready.begin();
        ready.erase(ready.begin());
        ++visited;
        if (!is_input(v)) order_.push_back(v);
        for (NodeIndex w : out[v]) {
            layer_[w] = std::max(layer_[w], layer_[v] + 1);
            if (--indegree[w] == 0) ready.insert(w);
        }
    }
    if (visited != n) throw ValidationError(ValidationError::Kind::cycle, "network graph contains a cycle");
}

NetworkBuilder::NetworkBuilder(std::size_t input_count) : input_count_(input_count) {}

NodeIndex NetworkBuilder::input(std::size_t i) const {
    if (i >= input_count_) throw DomainError("input index " + std::to_string(i) + " out of range");
    return i;
}

NodeIndex NetworkBuilder::add_unit(std::string id, Rational bias, Activation activation) {
    units_.push_back(Unit{std::move(id), std::move(bias), std::move(activation)});
    return input_count_ + units_.size() - 1;
}

void NetworkBuilder::add_edge(NodeIndex from, NodeIndex to, Rational weight) {
    if (from >= node_count() || to >= node_count()) {
        throw ValidationError(ValidationError::Kind::unknown_id, "edge refers to a node that does not exist");
    }
    edges_.push_back(Edge{from, to, std::move(weight)});
}

Network NetworkBuilder::build(NodeIndex output) const {
    using Kind = ValidationError::Kind;
    Network net;
    net.input_count_ = input_count_;
    net.units_ = units_;
    net.edges_ = edges_;
    net.output_ = output;

    if (units_.empty()) throw ValidationError(Kind::malformed, "network has no computation units");
    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < input_count_; ++i) ids.insert(net.node_id(i));
    for (const Unit& u : units_) {
        if (u.id.empty()) throw ValidationError(Kind::malformed, "unit with empty id");
        if (!ids.insert(u.id).second) throw ValidationError(Kind::duplicate_id, "duplicate node id '" + u.id + "'");
    }

    std::set<std::pair<NodeIndex, NodeIndex>> seen;
    for (const Edge& e : edges_) {
        if (e.to < input_count_) {
            throw ValidationError(Kind::malformed, "edge into input node '" + net.node_id(e.to) + "'");
        }
        if (e.from == e.to) throw ValidationError(Kind::cycle, "self-loop at '" + net.node_id(e.from) + "'");
        if (!seen.insert({e.from, e.to}).second) {
            throw ValidationError(Kind::malformed,
                                  "duplicate edge " + net.node_id(e.from) + " -> " + net.node_id(e.to));
        }
    }

    if (output < input_count_ || output >= net.node_count()) {
        throw ValidationError(Kind::bad_output, "output must be a computation unit");
    }
    if (net.unit(output).activation.kind() != Activation::Kind::identity) {
        throw ValidationError(Kind::bad_output, "output unit '" + net.unit(output).id + "' must use the identity activation");
    }

    net.index();

    std::vector<std::size_t> outdegree(net.node_count(), 0);
    for (const Edge& e : edges_) ++outdegree[e.from];
    for (NodeIndex v = input_count_; v < net.node_count(); ++v) {
        if (net.in_edges(v).empty()) {
            throw ValidationError(Kind::unreachable, "unit '" + net.node_id(v) + "' has no incoming edge");
        }
    }
    for (NodeIndex v = 0; v < net.node_count(); ++v) {
        if (v != output && outdegree[v] == 0) {
            throw ValidationError(Kind::multiple_sinks,
                                  "node '" + net.node_id(v) + "' is a second sink besides output '" + net.unit(output).id + "'");
        }
    }
    if (outdegree[output] != 0) throw ValidationError(Kind::bad_output, "output unit must be the sink");
    return net;
}

namespace {

void check_arity(const Network& net, std::span<const Rational> x) {
    if (x.size() != net.input_count()) {
        throw ArityError("network takes " + std::to_string(net.input_count()) + " inputs, got " + std::to_string(x.size()));
    }
}

} // namespace

std::vector<Rational> forward_all(const Network& net, std::span<const Rational> x) {
    check_arity(net, x);
    std::vector<Rational> value(net.node_count());
    std::copy(x.begin(), x.end(), value.begin());
    const auto& edges = net.edges();
    for (NodeIndex v : net.topological_order()) {
        const Unit& u = net.unit(v);
        Rational pre = u.bias;
        for (std::size_t e : net.in_edges(v)) {
            const Edge& edge = edges[e];
            if (edge.weight.is_zero() || value[edge.from].is_zero()) continue;
            pre += edge.weight * value[edge.from];
        }
        value[v] = u.activation(pre);
    }
    return value;
}

Rational forward_eval(const Network& net, std::span<const Rational> x) { return forward_all(net, x)[net.output()]; }

Rational forward_eval_with(const Network& net, std::span<const Rational> params, std::span<const Rational> x) {
    std::vector<Rational> scratch;
    return forward_eval_with(net, params, x, scratch);
}

Rational forward_eval_with(const Network& net, std::span<const Rational> params, std::span<const Rational> x,
                           std::vector<Rational>& value) {
    check_arity(net, x);
    const auto& edges = net.edges();
    if (params.size() != edges.size() + net.unit_count()) throw ArityError("parameter vector has wrong length");
    value.resize(net.node_count());
    std::copy(x.begin(), x.end(), value.begin());
    for (NodeIndex v : net.topological_order()) {
        Rational pre = params[edges.size() + (v - net.input_count())];
        for (std::size_t e : net.in_edges(v)) {
            const Rational& w = params[e];
            if (w.is_zero() || value[edges[e].from].is_zero()) continue;
            pre += w * value[edges[e].from];
        }
        value[v] = net.unit(v).activation(pre);
    }
    return value[net.output()];
}

int sign_of_output(const Network& net, std::span<const Rational> x) { return forward_eval(net, x).sign() > 0 ? 1 : 0; }

std::vector<PwlFunction> symbolic_forward_all(const Network& net) {
    if (net.input_count() != 1) {
        throw UnsupportedError("symbolic propagation needs a univariate network, this one has " +
                               std::to_string(net.input_count()) + " inputs");
    }
    std::vector<PwlFunction> fn(net.node_count());
    fn[0] = PwlFunction();
    std::vector<std::pair<Rational, const PwlFunction*>> terms;
    for (NodeIndex v : net.topological_order()) {
        const Unit& u = net.unit(v);
        if (u.activation.degree() > 1) throw UnsupportedError("activation of '" + u.id + "' is not piecewise linear");
        terms.clear();
        for (std::size_t e : net.in_edges(v)) {
            const Edge& edge = net.edges()[e];
            terms.emplace_back(edge.weight, &fn[edge.from]);
        }
        PwlFunction pre = affine_combine(std::span<const std::pair<Rational, const PwlFunction*>>(terms), u.bias);
        fn[v] = compose_activation(u.activation, pre);
    }
    return fn;
}

PwlFunction symbolic_forward(const Network& net) { return symbolic_forward_all(net)[net.output()]; }

std::vector<Integer> path_counts(const Network& net) {
    std::vector<Integer> count(net.node_count(), Integer(0));
    for (NodeIndex v = 0; v < net.input_count(); ++v) count[v] = 1;
    for (NodeIndex v : net.topological_order()) {
        for (std::size_t e : net.in_edges(v)) count[v] += count[net.edges()[e].from];
    }
    return count;
}

ArchSummary ArchSummary::from_layers(std::vector<Integer> k, std::vector<Integer> Wi_layerwise, Integer p, Integer d) {
    if (k.empty()) throw DomainError("architecture has no layers");
    if (k.size() != Wi_layerwise.size()) throw DomainError("k and Wi must list the same number of layers");
    if (p.sign() <= 0) throw DomainError("activation piece count p must be at least 1");
    if (d.sign() < 0) throw DomainError("activation degree d must be non-negative");
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i].sign() <= 0) throw DomainError("layer " + std::to_string(i + 1) + " has no units");
        if (Wi_layerwise[i] < k[i]) {
            throw DomainError("layer " + std::to_string(i + 1) + " has fewer parameters than units (each unit has a bias)");
        }
    }

    ArchSummary s;
    s.L = k.size();
    s.k = std::move(k);
    s.Wi_layerwise = std::move(Wi_layerwise);
    s.p = std::move(p);
    s.d = std::move(d);
    s.W = 0;
    s.U = 0;
    for (std::size_t i = 0; i < s.L; ++i) {
        s.W += s.Wi_layerwise[i];
        s.U += s.k[i];
        s.Wi_cumulative.push_back(s.W);
    }
    s.Lbar = Rational(s.Wi_sum(), s.W);

    // R = sum_i k_i (1 + (i-1) d^(i-1)), with 0^0 = 1
    s.R = 0;
    const unsigned long dd = static_cast<unsigned long>(s.d.to_long());
    for (std::size_t i = 1; i <= s.L; ++i) {
        Integer term = Integer(static_cast<long>(i - 1)) * Integer::pow(Integer(dd), i - 1);
        s.R += s.k[i - 1] * (Integer(1) + term);
    }
    return s;
}

Integer ArchSummary::Wi_sum() const {
    Integer sum = 0;
    for (const Integer& w : Wi()) sum += w;
    return sum;
}

ArchSummary summarize(const Network& net) {
    const std::size_t L = net.depth();
    std::vector<Integer> k(L, Integer(0));
    std::vector<Integer> wi(L, Integer(0));
    long p = 1;
    int d = 0;
    bool any_hidden = false;
    for (NodeIndex v : net.topological_order()) {
        std::size_t layer = net.layer(v);
        k[layer - 1] += 1;
        wi[layer - 1] += Integer(static_cast<long>(net.in_edges(v).size() + 1));
        if (v == net.output()) continue;
        const Activation& act = net.unit(v).activation;
        p = std::max(p, static_cast<long>(act.pieces()));
        d = std::max(d, act.degree());
        any_hidden = true;
    }
    // Affine networks have no non-output activations; report the identity's figures.
    if (!any_hidden) d = 1;
    return ArchSummary::from_layers(std::move(k), std::move(wi), Integer(p), Integer(d));
}

LabelMatrix::LabelMatrix(std::size_t n, std::size_t m) : n_(n), m_(m), bits_(n * m, 0) {
    if (n == 0 || m == 0) throw DomainError("label matrix dimensions must be positive");
}

LabelMatrix LabelMatrix::from_index(std::size_t n, std::size_t m, unsigned long long index) {
    LabelMatrix f(n, m);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) f.bits_[j * m + i] = static_cast<unsigned char>((index >> (j * m + i)) & 1ULL);
    }
    return f;
}

void LabelMatrix::set(std::size_t j, std::size_t i, int value) {
    if (value != 0 && value != 1) throw DomainError("labels must be 0 or 1");
    bits_.at(j * m_ + i) = static_cast<unsigned char>(value);
}

} // namespace vclab
