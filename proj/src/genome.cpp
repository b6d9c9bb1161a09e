#include <algorithm>
#include <cmath>
#include <set>

#include "neatnc/neat.hpp"

namespace neatnc {

std::string to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::input: return "input";
        case NodeKind::hidden: return "hidden";
        case NodeKind::output: return "output";
    }
    return "?";
}

std::string to_string(Activation act) {
    switch (act) {
        case Activation::tanh: return "tanh";
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
    }
    return "?";
}

NodeKind node_kind_from_string(const std::string& s) {
    if (s == "input") return NodeKind::input;
    if (s == "hidden") return NodeKind::hidden;
    if (s == "output") return NodeKind::output;
    throw ContractError("unknown node kind: " + s);
}

Activation activation_from_string(const std::string& s) {
    if (s == "tanh") return Activation::tanh;
    if (s == "relu") return Activation::relu;
    if (s == "sigmoid") return Activation::sigmoid;
    throw ContractError("unknown activation: " + s);
}

double apply_activation(Activation act, double x) {
    switch (act) {
        case Activation::tanh: return std::tanh(x);
        case Activation::relu: return x > 0.0 ? x : 0.0;
        case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    }
    return x;
}

std::size_t Genome::count(NodeKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [kind](const NodeGene& n) { return n.kind == kind; }));
}

const NodeGene* Genome::find_node(int node_id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), node_id,
                               [](const NodeGene& n, int id) { return n.id < id; });
    return (it != nodes.end() && it->id == node_id) ? &*it : nullptr;
}

NodeGene* Genome::find_node(int node_id) {
    return const_cast<NodeGene*>(std::as_const(*this).find_node(node_id));
}

const ConnectionGene* Genome::find_connection(int source, int target) const {
    for (const auto& c : connections)
        if (c.source == source && c.target == target) return &c;
    return nullptr;
}

std::vector<int> Genome::node_ids(NodeKind kind) const {
    std::vector<int> ids;
    for (const auto& n : nodes)
        if (n.kind == kind) ids.push_back(n.id);
    return ids;
}

void Genome::sort_genes() {
    std::sort(nodes.begin(), nodes.end(), [](const NodeGene& a, const NodeGene& b) { return a.id < b.id; });
    std::sort(connections.begin(), connections.end(),
              [](const ConnectionGene& a, const ConnectionGene& b) { return a.innovation < b.innovation; });
}

bool same_structure(const Genome& a, const Genome& b) {
    return a.nodes == b.nodes && a.connections == b.connections;
}

void validate_genome(const Genome& genome, std::size_t n_inputs, std::size_t n_outputs) {
    std::set<int> ids;
    for (const auto& n : genome.nodes) {
        require(ids.insert(n.id).second, "duplicate node id " + std::to_string(n.id));
        if (n.kind == NodeKind::output)
            require(n.activation == Activation::tanh, "output node " + std::to_string(n.id) + " must use tanh");
    }
    require(genome.count(NodeKind::input) == n_inputs,
            "expected " + std::to_string(n_inputs) + " input nodes, found " +
                std::to_string(genome.count(NodeKind::input)));
    require(genome.count(NodeKind::output) == n_outputs,
            "expected " + std::to_string(n_outputs) + " output nodes, found " +
                std::to_string(genome.count(NodeKind::output)));

    std::set<std::pair<int, int>> pairs;
    std::set<int> innovations;
    for (const auto& c : genome.connections) {
        require(innovations.insert(c.innovation).second,
                "duplicate innovation " + std::to_string(c.innovation));
        require(pairs.emplace(c.source, c.target).second,
                "duplicate connection " + std::to_string(c.source) + "->" + std::to_string(c.target));
        const NodeGene* src = genome.find_node(c.source);
        const NodeGene* dst = genome.find_node(c.target);
        require(src != nullptr && dst != nullptr, "dangling connection innovation " + std::to_string(c.innovation));
        require(dst->kind != NodeKind::input, "connection into input node " + std::to_string(c.target));
        require(std::isfinite(c.weight), "non-finite weight");
    }
}

bool is_acyclic(const Genome& genome) {
    std::map<int, std::vector<int>> adjacency;
    std::map<int, int> indegree;
    for (const auto& n : genome.nodes) indegree[n.id] = 0;
    for (const auto& c : genome.connections) {
        if (c.source == c.target) return false;
        adjacency[c.source].push_back(c.target);
        ++indegree[c.target];
    }
    std::vector<int> ready;
    for (const auto& [id, deg] : indegree)
        if (deg == 0) ready.push_back(id);
    std::size_t visited = 0;
    while (!ready.empty()) {
        const int id = ready.back();
        ready.pop_back();
        ++visited;
        for (int next : adjacency[id])
            if (--indegree[next] == 0) ready.push_back(next);
    }
    return visited == indegree.size();
}

int InnovationRegistry::connection_innovation(int source, int target) {
    auto [it, inserted] = connections_.try_emplace({source, target}, next_innovation_);
    if (inserted) ++next_innovation_;
    return it->second;
}

InnovationRegistry::Split InnovationRegistry::split(int connection_innovation, int source, int target) {
    if (auto it = splits_.find(connection_innovation); it != splits_.end()) return it->second;
    Split s{next_node_id_++, 0, 0};
    s.in_innovation = next_innovation_++;
    s.out_innovation = next_innovation_++;
    connections_[{source, s.node_id}] = s.in_innovation;
    connections_[{s.node_id, target}] = s.out_innovation;
    splits_.emplace(connection_innovation, s);
    return s;
}

void InnovationRegistry::begin_generation() {
    connections_.clear();
    splits_.clear();
}

EvolutionConfig EvolutionConfig::neat_nc() { return EvolutionConfig{}; }

EvolutionConfig EvolutionConfig::vanilla() {
    EvolutionConfig c;
    c.num_inputs = 8;
    c.elitism = 3;
    c.conn_delete_rate = 0.3;
    c.node_delete_rate = 0.1;
    c.allow_recurrent = false;
    return c;
}

void EvolutionConfig::validate() const {
    auto prob = [](double p, const char* name) {
        require(p >= 0.0 && p <= 1.0, std::string(name) + " must lie in [0, 1]");
    };
    prob(conn_add_rate, "conn_add_rate");
    prob(conn_delete_rate, "conn_delete_rate");
    prob(node_add_rate, "node_add_rate");
    prob(node_delete_rate, "node_delete_rate");
    prob(weight_mutate_rate, "weight_mutate_rate");
    prob(weight_replace_rate, "weight_replace_rate");
    prob(disable_inherit_prob, "disable_inherit_prob");
    prob(survival_fraction, "survival_fraction");
    require(population_size >= 1, "population_size must be positive");
    require(population_size >= elitism, "population_size must be >= elitism");
    require(num_inputs >= 1 && num_outputs >= 1, "network arity must be positive");
    require(weight_perturb_sigma >= 0.0, "weight_perturb_sigma must be non-negative");
    require(weight_limit > 0.0, "weight_limit must be positive");
    require(compatibility_threshold >= 0.0, "compatibility_threshold must be non-negative");
}

Genome make_initial_genome(const EvolutionConfig& config, InnovationRegistry& registry, Rng& rng) {
    Genome g;
    const int n_in = static_cast<int>(config.num_inputs);
    const int n_out = static_cast<int>(config.num_outputs);
    for (int i = 0; i < n_in; ++i) g.nodes.push_back({i, NodeKind::input, Activation::tanh, 0.0});
    for (int o = 0; o < n_out; ++o)
        g.nodes.push_back({n_in + o, NodeKind::output, Activation::tanh, rng.uniform(-1.0, 1.0)});
    for (int i = 0; i < n_in; ++i)
        for (int o = 0; o < n_out; ++o) {
            const int target = n_in + o;
            g.connections.push_back(
                {registry.connection_innovation(i, target), i, target, rng.uniform(-1.0, 1.0), true});
        }
    g.sort_genes();
    return g;
}

}  // namespace neatnc
