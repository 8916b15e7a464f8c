#ifndef NETMORPH_NETWORK_HPP
#define NETMORPH_NETWORK_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace netmorph {

enum class Activation { Relu, BinaryStep, Identity };

const char* activation_name(Activation a);

// A term of an affine preactivation. Sources are either earlier neurons
// (id >= 0) or input coordinates, encoded as negative values.
using SourceId = int32_t;
constexpr SourceId input_source(int k) { return -1 - k; }
constexpr bool is_input_source(SourceId s) { return s < 0; }
constexpr int input_coordinate(SourceId s) { return -1 - static_cast<int>(s); }

struct Term {
    SourceId source;
    double weight;
};

struct Neuron {
    int id;
    Activation activation;
    double bias;
    std::vector<Term> incoming;
};

// Linear readout over neuron outputs. No activation: the output neurons of
// the constructions sum block outputs, nothing more.
struct Readout {
    double bias = 0.0;
    std::vector<Term> terms;  // neuron sources only
};

struct StructureMetrics {
    int width = 0;
    int depth = 0;
    int neuron_count = 0;
    int parameter_count = 0;
};

class Evaluator;

// Immutable DAG of neurons in topological order, with explicit shortcut
// edges. Construction validates: sources precede their consumers, weights
// are finite, every neuron is reachable from some input, readout ids exist.
class Network {
public:
    Network(int input_dim, std::vector<Neuron> neurons, Readout output);

    int input_dim() const { return input_dim_; }
    const std::vector<Neuron>& neurons() const { return neurons_; }
    const Readout& output() const { return output_; }

    // True when the readout is the identity on a single neuron: value
    // passthrough, not an affine operation, so it does not add a route step.
    bool readout_trivial() const;

    double evaluate(std::span<const double> x) const;
    double evaluate1(double x) const;

    const Evaluator& evaluator() const { return *evaluator_; }

    // Position of a neuron id in the topological list.
    int index_of(int id) const;

    StructureMetrics metrics() const;

private:
    int input_dim_;
    std::vector<Neuron> neurons_;
    Readout output_;
    std::vector<int> index_of_id_;  // dense map; ids are kept small
    std::shared_ptr<const Evaluator> evaluator_;
};

// Flattened forward pass. Buffer slots [0, D) hold the input, slot D+i the
// i-th neuron output. Share one Evaluator across threads; give each thread
// its own scratch.
class Evaluator {
public:
    explicit Evaluator(const Network& net);

    double operator()(std::span<const double> x, std::vector<double>& scratch) const;
    size_t scratch_size() const { return scratch_size_; }

private:
    struct Op {
        Activation act;
        int32_t begin;
        int32_t end;
        double bias;
    };
    int input_dim_;
    size_t scratch_size_;
    std::vector<Op> ops_;
    std::vector<std::pair<int32_t, double>> edges_;
    double out_bias_;
    std::vector<std::pair<int32_t, double>> out_terms_;
};

// Incremental construction helper; ids are assigned sequentially.
class NetworkBuilder {
public:
    explicit NetworkBuilder(int input_dim) : input_dim_(input_dim) {}

    int add_neuron(Activation act, double bias, std::vector<Term> incoming);
    void set_output(double bias, std::vector<Term> terms);

    int input_dim() const { return input_dim_; }
    int next_id() const { return static_cast<int>(neurons_.size()); }

    Network build() &&;

private:
    int input_dim_;
    std::vector<Neuron> neurons_;
    Readout output_;
};

// bias + sum_i weights[i] * nets[i](x). Widths add (no new neurons), depth is
// the max over inputs plus the readout op.
Network compose_sum(std::span<const Network> nets, std::span<const double> weights,
                    double bias);

// sum_m blocks[m](x), realized as a chain of Identity accumulator neurons
// t_m = blocks[m](x) + t_{m-1}; x reaches every block through shortcut edges.
// Depth grows by one accumulator per appended block.
Network compose_stack(std::span<const Network> blocks);

// Rebuilds the network to compute net(W x + c) by folding the affine map
// into every input-touching term. Structure is unchanged.
Network fold_input_affine(const Network& net, const std::vector<std::vector<double>>& W,
                          std::span<const double> c);

}  // namespace netmorph

#endif
