#pragma once

#include <span>
#include <utility>
#include <vector>

#include "neatnc/neat.hpp"

namespace neatnc {

/// Number of navigation-cell inputs fed to the recurrent controller.
inline constexpr std::size_t kNavInputs = 21;
/// Number of radar inputs fed to the feedforward baseline.
inline constexpr std::size_t kRadarInputs = 8;
inline constexpr std::size_t kControlOutputs = 2;

struct NetworkOutput {
    double angular = 0.0;
    double linear = 0.0;
};

namespace detail {
struct NodeEval {
    std::size_t slot;
    double bias;
    Activation activation;
    std::vector<std::pair<std::size_t, double>> incoming;  // (source slot, weight)
};
}  // namespace detail

/// Stateful phenotype with synchronous updates: each step reads non-input
/// values from the previous step's snapshot, inputs from the current step.
class RecurrentNetwork {
public:
    static RecurrentNetwork build(const Genome& genome, std::size_t n_inputs = kNavInputs);

    NetworkOutput activate(std::span<const double> inputs);
    void reset_state();

    [[nodiscard]] std::span<const double> state() const { return values_; }
    [[nodiscard]] std::size_t input_count() const { return input_slots_.size(); }

private:
    std::vector<std::size_t> input_slots_;
    std::vector<std::size_t> output_slots_;
    std::vector<detail::NodeEval> plan_;
    std::vector<double> values_;
    std::vector<double> previous_;
};

/// Stateless phenotype over an acyclic graph, evaluated in topological order.
class FeedforwardNetwork {
public:
    static FeedforwardNetwork build(const Genome& genome, std::size_t n_inputs = kRadarInputs);

    [[nodiscard]] NetworkOutput activate(std::span<const double> inputs) const;

    [[nodiscard]] std::size_t input_count() const { return input_slots_.size(); }

private:
    std::vector<std::size_t> input_slots_;
    std::vector<std::size_t> output_slots_;
    std::vector<detail::NodeEval> plan_;
    std::size_t slot_count_ = 0;
};

inline RecurrentNetwork build_recurrent(const Genome& genome, std::size_t n_inputs = kNavInputs) {
    return RecurrentNetwork::build(genome, n_inputs);
}

inline FeedforwardNetwork build_feedforward(const Genome& genome, std::size_t n_inputs = kRadarInputs) {
    return FeedforwardNetwork::build(genome, n_inputs);
}

}  // namespace neatnc
