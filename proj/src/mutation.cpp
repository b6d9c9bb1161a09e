#include <algorithm>
#include <map>
#include <vector>

#include "neatnc/neat.hpp"

namespace neatnc {
namespace {

constexpr Activation kActivationOptions[] = {Activation::tanh, Activation::relu, Activation::sigmoid};

// Is `to` reachable from `from` following every connection gene?
bool reachable(const Genome& genome, int from, int to) {
    std::map<int, std::vector<int>> adjacency;
    for (const auto& c : genome.connections) adjacency[c.source].push_back(c.target);
    std::vector<int> stack{from};
    std::vector<int> seen;
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        if (id == to) return true;
        if (std::find(seen.begin(), seen.end(), id) != seen.end()) continue;
        seen.push_back(id);
        for (int next : adjacency[id]) stack.push_back(next);
    }
    return false;
}

double clamp_weight(double w, double limit) { return std::clamp(w, -limit, limit); }

}  // namespace

Genome mutate_add_node(Genome genome, InnovationRegistry& registry, Rng& rng) {
    std::vector<std::size_t> enabled;
    for (std::size_t i = 0; i < genome.connections.size(); ++i)
        if (genome.connections[i].enabled) enabled.push_back(i);
    if (enabled.empty()) return genome;

    const std::size_t pick = enabled[rng.index(enabled.size())];
    const ConnectionGene old = genome.connections[pick];
    const auto split = registry.split(old.innovation, old.source, old.target);
    if (genome.find_node(split.node_id) != nullptr) return genome;

    const Activation act = kActivationOptions[rng.index(std::size(kActivationOptions))];
    genome.connections[pick].enabled = false;
    genome.nodes.push_back({split.node_id, NodeKind::hidden, act, 0.0});
    genome.connections.push_back({split.in_innovation, old.source, split.node_id, 1.0, true});
    genome.connections.push_back({split.out_innovation, split.node_id, old.target, old.weight, true});
    genome.sort_genes();
    return genome;
}

Genome mutate_add_connection(Genome genome, InnovationRegistry& registry, Rng& rng, bool allow_recurrent) {
    std::vector<std::pair<int, int>> candidates;
    for (const auto& src : genome.nodes) {
        for (const auto& dst : genome.nodes) {
            if (dst.kind == NodeKind::input) continue;
            if (genome.find_connection(src.id, dst.id) != nullptr) continue;
            if (!allow_recurrent && (src.id == dst.id || reachable(genome, dst.id, src.id))) continue;
            candidates.emplace_back(src.id, dst.id);
        }
    }
    if (candidates.empty()) return genome;

    const auto [source, target] = candidates[rng.index(candidates.size())];
    const double weight = rng.uniform(-1.0, 1.0);
    genome.connections.push_back({registry.connection_innovation(source, target), source, target, weight, true});
    genome.sort_genes();
    return genome;
}

Genome mutate_delete_connection(Genome genome, Rng& rng) {
    if (genome.connections.empty()) return genome;
    genome.connections.erase(genome.connections.begin() +
                             static_cast<std::ptrdiff_t>(rng.index(genome.connections.size())));
    return genome;
}

Genome mutate_delete_node(Genome genome, Rng& rng) {
    const auto hidden = genome.node_ids(NodeKind::hidden);
    if (hidden.empty()) return genome;
    const int victim = hidden[rng.index(hidden.size())];
    std::erase_if(genome.nodes, [victim](const NodeGene& n) { return n.id == victim; });
    std::erase_if(genome.connections,
                  [victim](const ConnectionGene& c) { return c.source == victim || c.target == victim; });
    return genome;
}

Genome mutate_weights(Genome genome, Rng& rng, double perturb_sigma, double replace_prob, double gene_rate,
                      double limit) {
    auto mutate = [&](double value) {
        if (!rng.bernoulli(gene_rate)) return value;
        if (rng.bernoulli(replace_prob)) return rng.uniform(-1.0, 1.0);
        return clamp_weight(value + rng.normal(0.0, perturb_sigma), limit);
    };
    for (auto& c : genome.connections) c.weight = mutate(c.weight);
    for (auto& n : genome.nodes)
        if (n.kind != NodeKind::input) n.bias = mutate(n.bias);
    return genome;
}

}  // namespace neatnc
