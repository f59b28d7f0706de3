#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivelab/gridworld.hpp"
#include "ivelab/mdp.hpp"

namespace ivelab {

// Optimizer and batching protocol for the tabular fits. One "epoch" is
// ceil(|buffer| / batch_size) optimizer steps; batches are sampled with
// replacement.
struct TrainConfig {
    double learning_rate = 5e-5;
    int epochs = 10000;
    int batch_size = 128;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
};

// Adam moment estimates, shaped like the parameter vector they track.
struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    long step_count = 0;

    explicit AdamState(std::size_t n_params = 0)
        : first_moment(n_params, 0.0), second_moment(n_params, 0.0) {}
};

// One Adam update with bias correction, in place.
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               const TrainConfig& config);

// Tabular model parameters: unnormalized transition logits and reward means.
struct LearnedTabularModel {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> transition_logits;  // [s][a][s']
    std::vector<double> reward;             // [s][a]
    bool empty_buffer_warning = false;

    double& logit(int s, int a, int s2) {
        return transition_logits[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s2];
    }
    double& reward_at(int s, int a) {
        return reward[static_cast<std::size_t>(s) * n_actions + a];
    }
    double reward_at(int s, int a) const {
        return reward[static_cast<std::size_t>(s) * n_actions + a];
    }
};

// Maximum-likelihood fit of the tabular model: cross-entropy on next states
// plus squared error on rewards, minimized over minibatches with Adam.
// Parameters are initialized from N(0,1) with config.seed; (s,a) pairs never
// present in the buffer keep their initialization exactly. An empty buffer
// returns the initialization with empty_buffer_warning set.
LearnedTabularModel fit_model_mle(const ExperienceBuffer& buffer, int n_states, int n_actions,
                                  const TrainConfig& config);

// Expected-SARSA action-value fit: squared semi-gradient TD error against the
// stopped target r + gamma * sum_a' pi(a'|s') q(s', a'). Initialization is
// N(0,1) from config.seed unless an explicit init is supplied.
ActionValues fit_q_expected_sarsa(const ExperienceBuffer& buffer, const PolicyTable& policy,
                                  int n_states, int n_actions, double gamma,
                                  const TrainConfig& config,
                                  const std::optional<ActionValues>& init = std::nullopt);

// Materializes the learned model as an exact MDP: row-softmax of the logits,
// rewards copied, gamma attached.
TabularMdp learned_model_to_mdp(const LearnedTabularModel& model, double gamma);

// Explicit value ensemble: n expected-SARSA fits on the same buffer differing
// only in seed (member i uses config.seed + i for both init and batching).
std::vector<ActionValues> train_eve(const ExperienceBuffer& buffer, const PolicyTable& policy,
                                    int n_states, int n_actions, double gamma,
                                    const TrainConfig& config, int n);

// Explicit model ensemble: n MLE fits, seeded as in train_eve.
std::vector<LearnedTabularModel> train_emve(const ExperienceBuffer& buffer, int n_states,
                                            int n_actions, const TrainConfig& config, int n);

// Named-array serialization: rows `name,index_tuple,value` with the tuple
// joined by ':' (e.g. `transition_logits,0:1:2,-0.35`).
struct NamedArray {
    std::string name;
    std::vector<int> dims;
    std::vector<double> data;
};
void write_named_arrays_csv(const std::vector<NamedArray>& arrays, const std::string& path);
std::vector<NamedArray> read_named_arrays_csv(const std::string& path);
std::vector<NamedArray> model_to_named_arrays(const LearnedTabularModel& model);

}  // namespace ivelab
