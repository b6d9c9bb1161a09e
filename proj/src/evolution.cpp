#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "neatnc/neat.hpp"

namespace neatnc {
namespace {

const ConnectionGene* find_innovation(const Genome& g, int innovation) {
    auto it = std::lower_bound(g.connections.begin(), g.connections.end(), innovation,
                               [](const ConnectionGene& c, int inn) { return c.innovation < inn; });
    return (it != g.connections.end() && it->innovation == innovation) ? &*it : nullptr;
}

bool fitter_first(const Genome& a, const Genome& b) {
    if (*a.fitness != *b.fitness) return *a.fitness > *b.fitness;
    return a.id < b.id;
}

std::vector<std::size_t> ranked(const std::vector<Genome>& population, std::vector<std::size_t> indices) {
    std::stable_sort(indices.begin(), indices.end(), [&](std::size_t i, std::size_t j) {
        return fitter_first(population[i], population[j]);
    });
    return indices;
}

// Largest-remainder apportionment of `total` slots by non-negative weights.
std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t total) {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<std::size_t> counts(weights.size(), 0);
    if (weights.empty() || total == 0) return counts;
    std::vector<double> remainders(weights.size(), 0.0);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double share = sum > 0.0 ? weights[i] / sum * static_cast<double>(total)
                                        : static_cast<double>(total) / static_cast<double>(weights.size());
        counts[i] = static_cast<std::size_t>(std::floor(share));
        remainders[i] = share - std::floor(share);
        assigned += counts[i];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size(), ++assigned) ++counts[order[k]];
    return counts;
}

std::size_t roulette(const std::vector<double>& weights, Rng& rng) {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    double ticket = rng.uniform() * sum;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        ticket -= weights[i];
        if (ticket < 0.0) return i;
    }
    return weights.size() - 1;
}

}  // namespace

Genome crossover(const Genome& parent_a, const Genome& parent_b, Rng& rng, double disable_inherit_prob) {
    require(parent_a.fitness.has_value() && parent_b.fitness.has_value(),
            "crossover: both parents must be evaluated");
    const bool b_fitter = *parent_b.fitness > *parent_a.fitness;
    const Genome& fitter = b_fitter ? parent_b : parent_a;
    const Genome& other = b_fitter ? parent_a : parent_b;

    Genome child;
    for (const auto& gene : fitter.connections) {
        ConnectionGene inherited = gene;
        if (const ConnectionGene* match = find_innovation(other, gene.innovation)) {
            if (rng.bernoulli(0.5)) inherited = *match;
            // Parents that agree pass the flag on unchanged, so crossover(g, g) == g.
            if (gene.enabled != match->enabled) inherited.enabled = !rng.bernoulli(disable_inherit_prob);
        }
        child.connections.push_back(inherited);
    }

    for (const auto& node : fitter.nodes) {
        const NodeGene* match = other.find_node(node.id);
        child.nodes.push_back(match != nullptr && match->kind == node.kind && rng.bernoulli(0.5) ? *match : node);
    }
    child.sort_genes();
    return child;
}

double compatibility_distance(const Genome& a, const Genome& b, const EvolutionConfig& config) {
    const int max_a = a.connections.empty() ? -1 : a.connections.back().innovation;
    const int max_b = b.connections.empty() ? -1 : b.connections.back().innovation;

    std::size_t excess = 0, disjoint = 0, matching = 0;
    double weight_diff = 0.0;
    for (const auto& gene : a.connections) {
        if (const ConnectionGene* match = find_innovation(b, gene.innovation)) {
            ++matching;
            weight_diff += std::abs(gene.weight - match->weight);
        } else if (gene.innovation > max_b) {
            ++excess;
        } else {
            ++disjoint;
        }
    }
    for (const auto& gene : b.connections) {
        if (find_innovation(a, gene.innovation) != nullptr) continue;
        if (gene.innovation > max_a) ++excess;
        else ++disjoint;
    }

    const std::size_t larger = std::max(a.connections.size(), b.connections.size());
    const double n = larger < 20 ? 1.0 : static_cast<double>(larger);
    const double mean_weight = matching > 0 ? weight_diff / static_cast<double>(matching) : 0.0;
    return config.c1_excess * static_cast<double>(excess) / n +
           config.c2_disjoint * static_cast<double>(disjoint) / n + config.c3_weight * mean_weight;
}

SpeciesSet speciate(std::vector<Genome>& population, SpeciesSet species_set, const EvolutionConfig& config) {
    std::vector<bool> assigned(population.size(), false);
    std::vector<Species> next;

    for (auto& s : species_set.species) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_index = population.size();
        for (std::size_t i = 0; i < population.size(); ++i) {
            if (assigned[i]) continue;
            const double d = compatibility_distance(s.representative, population[i], config);
            if (d < best) {
                best = d;
                best_index = i;
            }
        }
        if (best_index == population.size()) continue;
        assigned[best_index] = true;
        next.push_back({s.id, population[best_index], {best_index}});
    }

    for (std::size_t i = 0; i < population.size(); ++i) {
        if (assigned[i]) continue;
        auto home = std::find_if(next.begin(), next.end(), [&](const Species& s) {
            return compatibility_distance(s.representative, population[i], config) <= config.compatibility_threshold;
        });
        if (home != next.end()) {
            home->members.push_back(i);
        } else {
            next.push_back({species_set.next_species_id++, population[i], {i}});
        }
    }

    std::erase_if(next, [](const Species& s) { return s.members.empty(); });
    for (auto& s : next) {
        std::sort(s.members.begin(), s.members.end());
        for (std::size_t i : s.members) population[i].species_id = s.id;
        s.representative.species_id = s.id;
    }
    species_set.species = std::move(next);
    return species_set;
}

std::vector<Genome> reproduce(const std::vector<Genome>& population, const SpeciesSet& species_set,
                              const EvolutionConfig& config, InnovationRegistry& registry, Rng& rng,
                              std::uint64_t& next_genome_id) {
    for (const auto& g : population) require(g.fitness.has_value(), "reproduce: unevaluated genome");
    require(!population.empty(), "reproduce: empty population");
    registry.begin_generation();

    std::vector<std::size_t> all(population.size());
    std::iota(all.begin(), all.end(), 0);
    const auto order = ranked(population, all);

    std::vector<Genome> next;
    next.reserve(config.population_size);
    for (std::size_t i = 0; i < config.elitism && i < order.size(); ++i) {
        Genome elite = population[order[i]];
        elite.id = next_genome_id++;
        elite.fitness.reset();
        elite.species_id.reset();
        next.push_back(std::move(elite));
    }
    const std::size_t remaining = config.population_size - next.size();
    if (remaining == 0) return next;

    double f_min = std::numeric_limits<double>::infinity();
    double f_max = -std::numeric_limits<double>::infinity();
    for (const auto& g : population) {
        f_min = std::min(f_min, *g.fitness);
        f_max = std::max(f_max, *g.fitness);
    }
    const double range = std::max(f_max - f_min, 1.0);
    auto adjusted = [&](const Genome& g) { return (*g.fitness - f_min) / range; };

    // Species that were never assigned (e.g. a hand-built set) fall back to one pool.
    std::vector<std::vector<std::size_t>> groups;
    for (const auto& s : species_set.species)
        if (!s.members.empty()) groups.push_back(s.members);
    if (groups.empty()) groups.push_back(all);

    std::vector<double> species_scores;
    for (const auto& members : groups) {
        double sum = 0.0;
        for (std::size_t i : members) sum += adjusted(population[i]);
        species_scores.push_back(sum / static_cast<double>(members.size()));
    }
    const auto spawn = apportion(species_scores, remaining);

    for (std::size_t s = 0; s < groups.size(); ++s) {
        if (spawn[s] == 0) continue;
        const auto members = ranked(population, groups[s]);
        const auto keep = std::min(
            members.size(),
            std::max<std::size_t>(std::min<std::size_t>(2, members.size()),
                                  static_cast<std::size_t>(std::ceil(config.survival_fraction *
                                                                     static_cast<double>(members.size())))));
        std::vector<double> weights;
        for (std::size_t k = 0; k < keep; ++k) weights.push_back(adjusted(population[members[k]]) + 1e-3);

        for (std::size_t j = 0; j < spawn[s]; ++j) {
            const Genome& p1 = population[members[roulette(weights, rng)]];
            const Genome& p2 = population[members[roulette(weights, rng)]];
            Genome child = crossover(p1, p2, rng, config.disable_inherit_prob);
            if (rng.bernoulli(config.node_add_rate)) child = mutate_add_node(std::move(child), registry, rng);
            if (rng.bernoulli(config.node_delete_rate)) child = mutate_delete_node(std::move(child), rng);
            if (rng.bernoulli(config.conn_add_rate))
                child = mutate_add_connection(std::move(child), registry, rng, config.allow_recurrent);
            if (rng.bernoulli(config.conn_delete_rate)) child = mutate_delete_connection(std::move(child), rng);
            child = mutate_weights(std::move(child), rng, config.weight_perturb_sigma, config.weight_replace_rate,
                                   config.weight_mutate_rate, config.weight_limit);
            child.id = next_genome_id++;
            child.fitness.reset();
            child.species_id.reset();
            next.push_back(std::move(child));
        }
    }
    return next;
}

EvolutionResult evolve(const EvolutionConfig& config, const PopulationEvaluator& evaluator, Rng& rng) {
    config.validate();
    InnovationRegistry registry(0, static_cast<int>(config.num_inputs + config.num_outputs));
    std::uint64_t next_genome_id = 0;

    std::vector<Genome> population;
    population.reserve(config.population_size);
    for (std::size_t i = 0; i < config.population_size; ++i) {
        Genome g = make_initial_genome(config, registry, rng);
        g.id = next_genome_id++;
        population.push_back(std::move(g));
    }

    EvolutionResult result;
    SpeciesSet species;
    bool have_best = false;

    for (std::size_t generation = 0;; ++generation) {
        const auto scores = evaluator(std::span<const Genome>(population));
        require(scores.size() == population.size(), "evaluator returned the wrong number of fitness values");
        double sum = 0.0;
        for (std::size_t i = 0; i < population.size(); ++i) {
            require(std::isfinite(scores[i]), "evaluator returned non-finite fitness for genome " +
                                                  std::to_string(population[i].id) + " in generation " +
                                                  std::to_string(generation));
            population[i].fitness = scores[i];
            sum += scores[i];
        }
        species = speciate(population, std::move(species), config);

        const Genome* gen_best = &population.front();
        for (const auto& g : population)
            if (fitter_first(g, *gen_best)) gen_best = &g;
        if (!have_best || *gen_best->fitness > *result.best.fitness) {
            result.best = *gen_best;
            have_best = true;
        }
        result.log.push_back({generation, *gen_best->fitness, sum / static_cast<double>(population.size()),
                              species.species.size()});

        if (generation >= config.generations) break;
        population = reproduce(population, species, config, registry, rng, next_genome_id);
    }
    return result;
}

}  // namespace neatnc
