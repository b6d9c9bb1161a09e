#pragma once

// Shared fixtures and reference implementations for the test binaries.

#include <cmath>
#include <initializer_list>
#include <map>
#include <vector>

#include "neatnc/environment.hpp"
#include "neatnc/neat.hpp"

namespace testing {

using namespace neatnc;

struct Edge {
    int innovation;
    int source;
    int target;
    double weight;
    bool enabled = true;
};

// Inputs 0..n_in-1, outputs next, then the listed hidden ids. All biases zero, tanh everywhere.
inline Genome make_genome(int n_in, int n_out, std::initializer_list<int> hidden, std::initializer_list<Edge> edges,
                          std::optional<double> fitness = std::nullopt) {
    Genome g;
    for (int i = 0; i < n_in; ++i) g.nodes.push_back({i, NodeKind::input, Activation::tanh, 0.0});
    for (int i = 0; i < n_out; ++i) g.nodes.push_back({n_in + i, NodeKind::output, Activation::tanh, 0.0});
    for (int h : hidden) g.nodes.push_back({h, NodeKind::hidden, Activation::tanh, 0.0});
    for (const auto& e : edges) g.connections.push_back({e.innovation, e.source, e.target, e.weight, e.enabled});
    g.fitness = fitness;
    g.sort_genes();
    return g;
}

// Random genome with n_in inputs, 2 outputs, up to `max_hidden` hidden nodes,
// arbitrary (possibly cyclic, self-looping) edges and random activations.
inline Genome random_small_genome(Rng& rng, int n_in, int max_hidden, double edge_prob) {
    Genome g;
    const int n_out = 2;
    const int hidden = static_cast<int>(rng.index(static_cast<std::size_t>(max_hidden) + 1));
    const Activation acts[] = {Activation::tanh, Activation::relu, Activation::sigmoid};
    for (int i = 0; i < n_in; ++i) g.nodes.push_back({i, NodeKind::input, Activation::tanh, 0.0});
    for (int i = 0; i < n_out; ++i) g.nodes.push_back({n_in + i, NodeKind::output, Activation::tanh, rng.uniform(-1, 1)});
    for (int i = 0; i < hidden; ++i)
        g.nodes.push_back({n_in + n_out + i, NodeKind::hidden, acts[rng.index(3)], rng.uniform(-1, 1)});
    const int total = n_in + n_out + hidden;
    int innov = 0;
    for (int s = 0; s < total; ++s)
        for (int t = n_in; t < total; ++t)
            if (rng.bernoulli(edge_prob))
                g.connections.push_back({innov++, s, t, rng.uniform(-2, 2), rng.bernoulli(0.85)});
    g.sort_genes();
    return g;
}

// Dense-matrix reference for synchronous recurrent updates:
// x_{k+1}[i] = act_i(b_i + sum_j W[i][j] * x_k[j]) for non-input i, with the
// input entries of x_k overwritten by the current inputs.
class DenseReference {
public:
    DenseReference(const Genome& g, int n_in) : n_in_(n_in) {
        std::map<int, std::size_t> index;
        for (const auto& n : g.nodes) {
            index[n.id] = ids_.size();
            ids_.push_back(n.id);
            bias_.push_back(n.bias);
            act_.push_back(n.activation);
            kind_.push_back(n.kind);
        }
        const std::size_t n = ids_.size();
        w_.assign(n, std::vector<double>(n, 0.0));
        for (const auto& c : g.connections)
            if (c.enabled) w_[index.at(c.target)][index.at(c.source)] += c.weight;
        x_.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (kind_[i] == NodeKind::output) outputs_.push_back(i);
    }

    std::pair<double, double> step(const std::vector<double>& inputs) {
        const std::size_t n = ids_.size();
        std::vector<double> prev = x_;
        for (int i = 0; i < n_in_; ++i) prev[static_cast<std::size_t>(i)] = inputs[static_cast<std::size_t>(i)];
        std::vector<double> next = prev;
        for (std::size_t i = 0; i < n; ++i) {
            if (kind_[i] == NodeKind::input) continue;
            double s = bias_[i];
            for (std::size_t j = 0; j < n; ++j) s += w_[i][j] * prev[j];
            next[i] = apply_activation(act_[i], s);
        }
        x_ = next;
        return {x_[outputs_[0]], x_[outputs_[1]]};
    }

private:
    int n_in_;
    std::vector<int> ids_;
    std::vector<double> bias_;
    std::vector<Activation> act_;
    std::vector<NodeKind> kind_;
    std::vector<std::vector<double>> w_;
    std::vector<double> x_;
    std::vector<std::size_t> outputs_;
};

inline Scenario open_arena() {
    Scenario s;
    s.name = "open";
    s.start = {0.0, 0.0, 0.0, 0.0};
    s.goal = {{1000.0, 0.0}, 15.0};
    return s;
}

}  // namespace testing
