#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "neatnc/common.hpp"

namespace neatnc {

enum class NodeKind { input, hidden, output };
enum class Activation { tanh, relu, sigmoid };

std::string to_string(NodeKind kind);
std::string to_string(Activation act);
NodeKind node_kind_from_string(const std::string& s);
Activation activation_from_string(const std::string& s);

double apply_activation(Activation act, double x);

struct NodeGene {
    int id = 0;
    NodeKind kind = NodeKind::hidden;
    Activation activation = Activation::tanh;
    double bias = 0.0;

    friend bool operator==(const NodeGene&, const NodeGene&) = default;
};

struct ConnectionGene {
    int innovation = 0;
    int source = 0;
    int target = 0;
    double weight = 0.0;
    bool enabled = true;

    friend bool operator==(const ConnectionGene&, const ConnectionGene&) = default;
};

/// Network blueprint. Nodes are kept sorted by id, connections by innovation.
/// Input ids are 0..n_in-1, outputs n_in..n_in+n_out-1, hidden ids above that.
struct Genome {
    std::uint64_t id = 0;
    std::vector<NodeGene> nodes;
    std::vector<ConnectionGene> connections;
    std::optional<double> fitness;
    std::optional<int> species_id;

    [[nodiscard]] std::size_t count(NodeKind kind) const;
    [[nodiscard]] const NodeGene* find_node(int node_id) const;
    [[nodiscard]] NodeGene* find_node(int node_id);
    [[nodiscard]] const ConnectionGene* find_connection(int source, int target) const;
    [[nodiscard]] std::vector<int> node_ids(NodeKind kind) const;

    void sort_genes();
};

/// True when nodes and connection genes (innovation, endpoints, weight,
/// enabled flag) coincide; fitness and bookkeeping ids are ignored.
bool same_structure(const Genome& a, const Genome& b);

/// Throws ContractError with a reason if the genome breaks any structural
/// invariant (duplicate ids or pairs, dangling endpoints, arity, inputs with
/// incoming edges, non-tanh outputs).
void validate_genome(const Genome& genome, std::size_t n_inputs, std::size_t n_outputs);

/// Cycle check over every connection gene, enabled or not.
bool is_acyclic(const Genome& genome);

/// Hands out innovation numbers and node ids. Structural signatures are
/// remembered until begin_generation() so identical mutations in the same
/// generation share numbers.
class InnovationRegistry {
public:
    struct Split {
        int node_id;
        int in_innovation;
        int out_innovation;
    };

    InnovationRegistry() = default;
    InnovationRegistry(int next_innovation, int next_node_id)
        : next_innovation_(next_innovation), next_node_id_(next_node_id) {}

    int connection_innovation(int source, int target);
    Split split(int connection_innovation, int source, int target);
    void begin_generation();

    [[nodiscard]] int next_innovation() const { return next_innovation_; }
    [[nodiscard]] int next_node_id() const { return next_node_id_; }

private:
    std::map<std::pair<int, int>, int> connections_;
    std::map<int, Split> splits_;
    int next_innovation_ = 0;
    int next_node_id_ = 0;
};

struct EvolutionConfig {
    std::size_t num_inputs = 21;
    std::size_t num_outputs = 2;
    std::size_t population_size = 50;
    std::size_t generations = 10;
    std::size_t elitism = 4;
    double conn_add_rate = 0.5;
    double conn_delete_rate = 0.2;
    double node_add_rate = 0.2;
    double node_delete_rate = 0.2;
    double weight_mutate_rate = 0.8;
    double weight_perturb_sigma = 0.5;
    double weight_replace_rate = 0.1;
    double weight_limit = 30.0;
    double disable_inherit_prob = 0.75;
    double c1_excess = 1.0;
    double c2_disjoint = 1.0;
    double c3_weight = 0.5;
    double compatibility_threshold = 3.0;
    double survival_fraction = 0.2;
    bool allow_recurrent = true;

    /// Defaults for the navigation-cell recurrent variant.
    static EvolutionConfig neat_nc();
    /// Defaults for the radar feedforward baseline.
    static EvolutionConfig vanilla();

    void validate() const;
};

/// Fully connected inputs->outputs, uniform [-1, 1] weights and biases.
Genome make_initial_genome(const EvolutionConfig& config, InnovationRegistry& registry, Rng& rng);

Genome mutate_add_node(Genome genome, InnovationRegistry& registry, Rng& rng);
Genome mutate_add_connection(Genome genome, InnovationRegistry& registry, Rng& rng,
                             bool allow_recurrent);
Genome mutate_delete_connection(Genome genome, Rng& rng);
/// Removes a random hidden node and every connection touching it.
Genome mutate_delete_node(Genome genome, Rng& rng);
/// Each gene is touched with probability gene_rate; a touched gene is
/// replaced by a uniform [-1, 1] sample with probability replace_prob,
/// otherwise perturbed by N(0, perturb_sigma). Results clamped to +-limit.
Genome mutate_weights(Genome genome, Rng& rng, double perturb_sigma, double replace_prob,
                      double gene_rate = 1.0, double limit = 30.0);

Genome crossover(const Genome& parent_a, const Genome& parent_b, Rng& rng,
                 double disable_inherit_prob = 0.75);

double compatibility_distance(const Genome& a, const Genome& b, const EvolutionConfig& config);

struct Species {
    int id = 0;
    Genome representative;
    std::vector<std::size_t> members;  // indices into the population
};

struct SpeciesSet {
    std::vector<Species> species;
    int next_species_id = 0;
};

/// Assigns every genome to a species (writing Genome::species_id). Existing
/// species first re-anchor on their closest unassigned genome.
SpeciesSet speciate(std::vector<Genome>& population, SpeciesSet species_set,
                    const EvolutionConfig& config);

/// Builds the next generation. Every genome must carry a fitness.
std::vector<Genome> reproduce(const std::vector<Genome>& population, const SpeciesSet& species_set,
                              const EvolutionConfig& config, InnovationRegistry& registry, Rng& rng,
                              std::uint64_t& next_genome_id);

struct GenerationStats {
    std::size_t generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    std::size_t species_count = 0;

    friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

struct EvolutionResult {
    Genome best;
    std::vector<GenerationStats> log;
};

using PopulationEvaluator = std::function<std::vector<double>(std::span<const Genome>)>;

/// Evaluates the initial population, then `generations` rounds of
/// speciate -> reproduce -> evaluate. Returns the best genome seen.
EvolutionResult evolve(const EvolutionConfig& config, const PopulationEvaluator& evaluator, Rng& rng);

}  // namespace neatnc
