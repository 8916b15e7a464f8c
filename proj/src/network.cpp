#include "netmorph/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "netmorph/errors.hpp"

namespace netmorph {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Relu: return "relu";
        case Activation::BinaryStep: return "binary_step";
        case Activation::Identity: return "identity";
    }
    return "?";
}

namespace {

double apply(Activation a, double v) {
    switch (a) {
        case Activation::Relu: return v > 0.0 ? v : 0.0;
        case Activation::BinaryStep: return v >= 0.0 ? 1.0 : 0.0;
        case Activation::Identity: return v;
    }
    return v;
}

}  // namespace

Network::Network(int input_dim, std::vector<Neuron> neurons, Readout output)
    : input_dim_(input_dim), neurons_(std::move(neurons)), output_(std::move(output)) {
    if (input_dim_ <= 0) throw input_error("input_dim must be positive");

    int max_id = -1;
    for (const auto& n : neurons_) max_id = std::max(max_id, n.id);
    index_of_id_.assign(max_id + 1, -1);

    for (size_t i = 0; i < neurons_.size(); ++i) {
        const Neuron& n = neurons_[i];
        if (n.id < 0) throw parse_error("negative neuron id");
        if (index_of_id_[n.id] != -1)
            throw parse_error("duplicate neuron id " + std::to_string(n.id));
        if (!std::isfinite(n.bias))
            throw input_error("non-finite bias at neuron " + std::to_string(n.id));
        bool touches_source = !n.incoming.empty();
        for (const Term& t : n.incoming) {
            if (!std::isfinite(t.weight))
                throw input_error("non-finite weight at neuron " + std::to_string(n.id));
            if (is_input_source(t.source)) {
                if (input_coordinate(t.source) >= input_dim_)
                    throw input_error("input coordinate out of range at neuron " +
                                      std::to_string(n.id));
            } else {
                if (t.source > max_id || index_of_id_[t.source] == -1)
                    throw parse_error("neuron " + std::to_string(n.id) +
                                      " references id " + std::to_string(t.source) +
                                      " that does not precede it (cycle or forward edge)");
            }
        }
        if (!touches_source)
            throw input_error("neuron " + std::to_string(n.id) +
                              " has no incoming edges (unreachable from input)");
        index_of_id_[n.id] = static_cast<int>(i);
    }
    if (!std::isfinite(output_.bias)) throw input_error("non-finite output bias");
    for (const Term& t : output_.terms) {
        if (!std::isfinite(t.weight)) throw input_error("non-finite output weight");
        if (is_input_source(t.source) || t.source > max_id || index_of_id_[t.source] == -1)
            throw parse_error("output references unknown neuron id " +
                              std::to_string(t.source));
    }
    evaluator_ = std::make_shared<const Evaluator>(*this);
}

bool Network::readout_trivial() const {
    return output_.bias == 0.0 && output_.terms.size() == 1 &&
           output_.terms[0].weight == 1.0;
}

int Network::index_of(int id) const {
    if (id < 0 || id >= static_cast<int>(index_of_id_.size()) || index_of_id_[id] < 0)
        throw input_error("unknown neuron id " + std::to_string(id));
    return index_of_id_[id];
}

double Network::evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != input_dim_)
        throw input_error("evaluate: expected " + std::to_string(input_dim_) +
                          " inputs, got " + std::to_string(x.size()));
    std::vector<double> scratch;
    return (*evaluator_)(x, scratch);
}

double Network::evaluate1(double x) const { return evaluate(std::span<const double>(&x, 1)); }

Evaluator::Evaluator(const Network& net) : input_dim_(net.input_dim()) {
    const auto& neurons = net.neurons();
    scratch_size_ = static_cast<size_t>(input_dim_) + neurons.size();
    ops_.reserve(neurons.size());
    for (const Neuron& n : neurons) {
        Op op;
        op.act = n.activation;
        op.bias = n.bias;
        op.begin = static_cast<int32_t>(edges_.size());
        for (const Term& t : n.incoming) {
            const int32_t slot = is_input_source(t.source)
                                     ? input_coordinate(t.source)
                                     : input_dim_ + net.index_of(t.source);
            edges_.emplace_back(slot, t.weight);
        }
        op.end = static_cast<int32_t>(edges_.size());
        ops_.push_back(op);
    }
    out_bias_ = net.output().bias;
    for (const Term& t : net.output().terms)
        out_terms_.emplace_back(input_dim_ + net.index_of(t.source), t.weight);
}

double Evaluator::operator()(std::span<const double> x, std::vector<double>& scratch) const {
    if (scratch.size() < scratch_size_) scratch.resize(scratch_size_);
    for (int j = 0; j < input_dim_; ++j) scratch[j] = x[j];
    double* buf = scratch.data();
    size_t slot = input_dim_;
    for (const Op& op : ops_) {
        double v = op.bias;
        for (int32_t e = op.begin; e < op.end; ++e) v += edges_[e].second * buf[edges_[e].first];
        buf[slot++] = apply(op.act, v);
    }
    double out = out_bias_;
    for (const auto& [s, w] : out_terms_) out += w * buf[s];
    return out;
}

StructureMetrics Network::metrics() const {
    StructureMetrics m;
    m.neuron_count = static_cast<int>(neurons_.size());
    int params = static_cast<int>(output_.terms.size()) + 1;
    for (const auto& n : neurons_) params += static_cast<int>(n.incoming.size()) + 1;
    m.parameter_count = params;

    // Route lengths per neuron as bitsets: a neuron sits in layer L for every
    // route of length L it has, so shortcut-fed neurons count in several
    // layers. Depth is the longest route, plus one affine op for a
    // non-trivial readout.
    const size_t nbits = neurons_.size() + 2;
    const size_t words = (nbits + 63) / 64;
    std::vector<std::vector<uint64_t>> routes(neurons_.size(),
                                              std::vector<uint64_t>(words, 0));
    auto set_bit = [&](std::vector<uint64_t>& bs, size_t b) { bs[b / 64] |= 1ULL << (b % 64); };
    auto or_shifted = [&](std::vector<uint64_t>& dst, const std::vector<uint64_t>& src) {
        // dst |= src << 1
        uint64_t carry = 0;
        for (size_t w = 0; w < words; ++w) {
            const uint64_t v = src[w];
            dst[w] |= (v << 1) | carry;
            carry = v >> 63;
        }
    };
    for (size_t i = 0; i < neurons_.size(); ++i) {
        for (const Term& t : neurons_[i].incoming) {
            if (is_input_source(t.source))
                set_bit(routes[i], 1);
            else
                or_shifted(routes[i], routes[index_of_id_[t.source]]);
        }
    }
    int max_route = 0;
    std::vector<int> layer_count(nbits + 1, 0);
    for (size_t i = 0; i < neurons_.size(); ++i) {
        for (size_t b = 1; b < nbits; ++b) {
            if (routes[i][b / 64] & (1ULL << (b % 64))) {
                layer_count[b]++;
                max_route = std::max(max_route, static_cast<int>(b));
            }
        }
    }
    m.width = 1;
    for (size_t b = 0; b < layer_count.size(); ++b) m.width = std::max(m.width, layer_count[b]);
    m.depth = std::max(1, max_route + (readout_trivial() ? 0 : 1));
    return m;
}

int NetworkBuilder::add_neuron(Activation act, double bias, std::vector<Term> incoming) {
    const int id = static_cast<int>(neurons_.size());
    neurons_.push_back(Neuron{id, act, bias, std::move(incoming)});
    return id;
}

void NetworkBuilder::set_output(double bias, std::vector<Term> terms) {
    output_.bias = bias;
    output_.terms = std::move(terms);
}

Network NetworkBuilder::build() && {
    return Network(input_dim_, std::move(neurons_), std::move(output_));
}

namespace {

// Appends src's neurons to the builder under fresh ids; returns the id map.
std::vector<int> splice(NetworkBuilder& b, const Network& src) {
    std::vector<int> remap(src.neurons().size(), -1);
    for (size_t i = 0; i < src.neurons().size(); ++i) {
        const Neuron& n = src.neurons()[i];
        std::vector<Term> in;
        in.reserve(n.incoming.size());
        for (const Term& t : n.incoming) {
            if (is_input_source(t.source))
                in.push_back(t);
            else
                in.push_back(Term{static_cast<SourceId>(remap[src.index_of(t.source)]),
                                  t.weight});
        }
        remap[i] = b.add_neuron(n.activation, n.bias, std::move(in));
    }
    return remap;
}

}  // namespace

Network compose_sum(std::span<const Network> nets, std::span<const double> weights,
                    double bias) {
    if (nets.empty()) throw input_error("compose_sum: no networks");
    if (nets.size() != weights.size())
        throw input_error("compose_sum: weight count mismatch");
    const int dim = nets[0].input_dim();
    for (const Network& n : nets)
        if (n.input_dim() != dim) throw input_error("compose_sum: input_dim mismatch");

    NetworkBuilder b(dim);
    double out_bias = bias;
    std::vector<Term> out_terms;
    for (size_t m = 0; m < nets.size(); ++m) {
        const auto remap = splice(b, nets[m]);
        out_bias += weights[m] * nets[m].output().bias;
        for (const Term& t : nets[m].output().terms)
            out_terms.push_back(Term{static_cast<SourceId>(remap[nets[m].index_of(t.source)]),
                                     weights[m] * t.weight});
    }
    b.set_output(out_bias, std::move(out_terms));
    return std::move(b).build();
}

Network compose_stack(std::span<const Network> blocks) {
    if (blocks.empty()) throw input_error("compose_stack: no blocks");
    const int dim = blocks[0].input_dim();
    for (const Network& n : blocks)
        if (n.input_dim() != dim) throw input_error("compose_stack: input_dim mismatch");

    NetworkBuilder b(dim);
    int acc = -1;             // id of the running accumulator neuron
    double pending_bias = 0;  // constants from blocks without neurons
    for (const Network& blk : blocks) {
        const auto remap = splice(b, blk);
        std::vector<Term> in;
        for (const Term& t : blk.output().terms)
            in.push_back(Term{static_cast<SourceId>(remap[blk.index_of(t.source)]), t.weight});
        if (in.empty()) {
            pending_bias += blk.output().bias;
            continue;
        }
        if (acc >= 0) in.push_back(Term{acc, 1.0});
        acc = b.add_neuron(Activation::Identity, blk.output().bias + pending_bias,
                           std::move(in));
        pending_bias = 0.0;
    }
    if (acc < 0) {
        b.set_output(pending_bias, {});
    } else {
        b.set_output(pending_bias, {Term{acc, 1.0}});
    }
    return std::move(b).build();
}

Network fold_input_affine(const Network& net, const std::vector<std::vector<double>>& W,
                          std::span<const double> c) {
    const int dim = net.input_dim();
    if (static_cast<int>(W.size()) != dim || static_cast<int>(c.size()) != dim)
        throw input_error("fold_input_affine: map dimension mismatch");

    std::vector<Neuron> neurons = net.neurons();
    for (Neuron& n : neurons) {
        std::vector<double> q(dim, 0.0);
        std::vector<Term> rest;
        for (const Term& t : n.incoming) {
            if (is_input_source(t.source))
                q[input_coordinate(t.source)] += t.weight;
            else
                rest.push_back(t);
        }
        bool any = false;
        for (int j = 0; j < dim; ++j) any = any || q[j] != 0.0;
        if (!any) continue;
        // q^T (W x + c) = (W^T q)^T x + q^T c
        std::vector<Term> in;
        for (int j = 0; j < dim; ++j) {
            double wj = 0.0;
            for (int i = 0; i < dim; ++i) wj += q[i] * W[i][j];
            if (wj != 0.0) in.push_back(Term{input_source(j), wj});
        }
        for (int i = 0; i < dim; ++i) n.bias += q[i] * c[i];
        if (in.empty())
            in.push_back(Term{input_source(0), 0.0});  // keep the neuron anchored
        for (const Term& t : rest) in.push_back(t);
        n.incoming = std::move(in);
    }
    return Network(dim, std::move(neurons), net.output());
}

}  // namespace netmorph
