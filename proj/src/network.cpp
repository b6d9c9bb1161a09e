#include <algorithm>
#include <cmath>
#include <map>

#include "neatnc/network.hpp"

namespace neatnc {
namespace {

struct Layout {
    std::map<int, std::size_t> slot_of;
    std::vector<std::size_t> inputs;
    std::vector<std::size_t> outputs;
};

Layout layout_for(const Genome& genome) {
    Layout layout;
    for (std::size_t i = 0; i < genome.nodes.size(); ++i) {
        const auto& node = genome.nodes[i];
        layout.slot_of[node.id] = i;
        if (node.kind == NodeKind::input) layout.inputs.push_back(i);
        if (node.kind == NodeKind::output) layout.outputs.push_back(i);
    }
    return layout;
}

std::vector<detail::NodeEval> plan_for(const Genome& genome, const Layout& layout) {
    std::map<int, detail::NodeEval> by_node;
    for (const auto& node : genome.nodes) {
        if (node.kind == NodeKind::input) continue;
        by_node.emplace(node.id, detail::NodeEval{layout.slot_of.at(node.id), node.bias, node.activation, {}});
    }
    for (const auto& c : genome.connections) {
        if (!c.enabled) continue;
        by_node.at(c.target).incoming.emplace_back(layout.slot_of.at(c.source), c.weight);
    }
    std::vector<detail::NodeEval> plan;
    for (auto& [id, eval] : by_node) plan.push_back(std::move(eval));
    return plan;
}

void check_inputs(std::span<const double> inputs, std::size_t expected) {
    require(inputs.size() == expected, "network expects " + std::to_string(expected) + " inputs, got " +
                                           std::to_string(inputs.size()));
    for (double v : inputs) require(std::isfinite(v), "network input is not finite");
}

double evaluate_node(const detail::NodeEval& node, std::span<const double> source) {
    double sum = node.bias;
    for (const auto& [slot, weight] : node.incoming) sum += weight * source[slot];
    return apply_activation(node.activation, sum);
}

}  // namespace

RecurrentNetwork RecurrentNetwork::build(const Genome& genome, std::size_t n_inputs) {
    validate_genome(genome, n_inputs, kControlOutputs);
    const Layout layout = layout_for(genome);
    RecurrentNetwork net;
    net.input_slots_ = layout.inputs;
    net.output_slots_ = layout.outputs;
    net.plan_ = plan_for(genome, layout);
    net.values_.assign(genome.nodes.size(), 0.0);
    net.previous_.assign(genome.nodes.size(), 0.0);
    return net;
}

NetworkOutput RecurrentNetwork::activate(std::span<const double> inputs) {
    check_inputs(inputs, input_slots_.size());
    previous_ = values_;
    for (std::size_t i = 0; i < input_slots_.size(); ++i) {
        previous_[input_slots_[i]] = inputs[i];
        values_[input_slots_[i]] = inputs[i];
    }
    for (const auto& node : plan_) values_[node.slot] = evaluate_node(node, previous_);
    return {values_[output_slots_[0]], values_[output_slots_[1]]};
}

void RecurrentNetwork::reset_state() {
    std::fill(values_.begin(), values_.end(), 0.0);
    std::fill(previous_.begin(), previous_.end(), 0.0);
}

FeedforwardNetwork FeedforwardNetwork::build(const Genome& genome, std::size_t n_inputs) {
    validate_genome(genome, n_inputs, kControlOutputs);
    const Layout layout = layout_for(genome);
    auto pending = plan_for(genome, layout);

    std::vector<bool> ready(genome.nodes.size(), false);
    for (std::size_t slot : layout.inputs) ready[slot] = true;

    FeedforwardNetwork net;
    net.input_slots_ = layout.inputs;
    net.output_slots_ = layout.outputs;
    net.slot_count_ = genome.nodes.size();
    while (!pending.empty()) {
        auto it = std::find_if(pending.begin(), pending.end(), [&](const detail::NodeEval& node) {
            return std::all_of(node.incoming.begin(), node.incoming.end(),
                               [&](const auto& edge) { return ready[edge.first]; });
        });
        require(it != pending.end(), "feedforward network: genome contains a cycle");
        ready[it->slot] = true;
        net.plan_.push_back(std::move(*it));
        pending.erase(it);
    }
    return net;
}

NetworkOutput FeedforwardNetwork::activate(std::span<const double> inputs) const {
    check_inputs(inputs, input_slots_.size());
    std::vector<double> values(slot_count_, 0.0);
    for (std::size_t i = 0; i < input_slots_.size(); ++i) values[input_slots_[i]] = inputs[i];
    for (const auto& node : plan_) values[node.slot] = evaluate_node(node, values);
    return {values[output_slots_[0]], values[output_slots_[1]]};
}

}  // namespace neatnc
