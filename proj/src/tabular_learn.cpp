#include "ivelab/tabular_learn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ivelab/rng.hpp"

namespace ivelab {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (epochs < 0) throw std::invalid_argument("TrainConfig: epochs must be >= 0");
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               const TrainConfig& config) {
    if (params.size() != grads.size() || params.size() != state.first_moment.size() ||
        params.size() != state.second_moment.size())
        throw std::invalid_argument("adam_step: shape mismatch");
    state.step_count += 1;
    double bc1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(state.step_count));
    double bc2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < params.size(); ++i) {
        double g = grads[i];
        double m = state.first_moment[i] = config.adam_beta1 * state.first_moment[i] +
                                           (1.0 - config.adam_beta1) * g;
        double v = state.second_moment[i] = config.adam_beta2 * state.second_moment[i] +
                                            (1.0 - config.adam_beta2) * g * g;
        params[i] -= config.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + config.adam_eps);
    }
}

namespace {

long total_steps(const ExperienceBuffer& buffer, const TrainConfig& config) {
    long steps_per_epoch = (buffer.size() + config.batch_size - 1) / config.batch_size;
    return steps_per_epoch * config.epochs;
}

void check_buffer_indices(const ExperienceBuffer& buffer, int n_states, int n_actions) {
    for (const Transition& t : buffer.transitions)
        if (t.s < 0 || t.s >= n_states || t.s_next < 0 || t.s_next >= n_states || t.a < 0 ||
            t.a >= n_actions)
            throw std::invalid_argument("buffer indices exceed the given shape");
}

}  // namespace

LearnedTabularModel fit_model_mle(const ExperienceBuffer& buffer, int n_states, int n_actions,
                                  const TrainConfig& config) {
    config.validate();
    check_buffer_indices(buffer, n_states, n_actions);
    Rng rng(config.seed);
    LearnedTabularModel model;
    model.n_states = n_states;
    model.n_actions = n_actions;
    model.transition_logits.resize(static_cast<std::size_t>(n_states) * n_actions * n_states);
    model.reward.resize(static_cast<std::size_t>(n_states) * n_actions);
    for (double& x : model.transition_logits) x = rng.normal();
    for (double& x : model.reward) x = rng.normal();
    if (buffer.empty()) {
        model.empty_buffer_warning = true;
        return model;
    }

    std::size_t n_logits = model.transition_logits.size();
    std::vector<double> grads(n_logits + model.reward.size(), 0.0);
    std::vector<double> params(n_logits + model.reward.size());
    std::copy(model.transition_logits.begin(), model.transition_logits.end(), params.begin());
    std::copy(model.reward.begin(), model.reward.end(), params.begin() + n_logits);
    AdamState state(params.size());
    std::vector<double> softmax(n_states);

    long steps = total_steps(buffer, config);
    for (long step = 0; step < steps; ++step) {
        std::fill(grads.begin(), grads.end(), 0.0);
        for (int b = 0; b < config.batch_size; ++b) {
            const Transition& t = buffer.transitions[rng.uniform_int(buffer.size())];
            std::size_t row = (static_cast<std::size_t>(t.s) * n_actions + t.a) * n_states;
            double max_logit = params[row];
            for (int j = 1; j < n_states; ++j) max_logit = std::max(max_logit, params[row + j]);
            double total = 0.0;
            for (int j = 0; j < n_states; ++j)
                total += softmax[j] = std::exp(params[row + j] - max_logit);
            double inv_batch = 1.0 / config.batch_size;
            for (int j = 0; j < n_states; ++j)
                grads[row + j] += (softmax[j] / total - (j == t.s_next ? 1.0 : 0.0)) * inv_batch;
            std::size_t ri = n_logits + static_cast<std::size_t>(t.s) * n_actions + t.a;
            grads[ri] += 2.0 * (params[ri] - t.r) * inv_batch;
        }
        adam_step(params, grads, state, config);
    }

    std::copy(params.begin(), params.begin() + n_logits, model.transition_logits.begin());
    std::copy(params.begin() + n_logits, params.end(), model.reward.begin());
    return model;
}

ActionValues fit_q_expected_sarsa(const ExperienceBuffer& buffer, const PolicyTable& policy,
                                  int n_states, int n_actions, double gamma,
                                  const TrainConfig& config,
                                  const std::optional<ActionValues>& init) {
    config.validate();
    check_buffer_indices(buffer, n_states, n_actions);
    if (policy.n_states != n_states || policy.n_actions != n_actions)
        throw std::invalid_argument("fit_q_expected_sarsa: policy shape mismatch");
    Rng rng(config.seed);
    ActionValues q(n_states, n_actions);
    if (init) {
        if (init->n_states != n_states || init->n_actions != n_actions)
            throw std::invalid_argument("fit_q_expected_sarsa: init shape mismatch");
        q = *init;
    } else {
        for (double& x : q.values) x = rng.normal();
    }
    if (buffer.empty()) return q;

    std::vector<double> grads(q.values.size());
    AdamState state(q.values.size());
    long steps = total_steps(buffer, config);
    for (long step = 0; step < steps; ++step) {
        std::fill(grads.begin(), grads.end(), 0.0);
        double inv_batch = 1.0 / config.batch_size;
        for (int b = 0; b < config.batch_size; ++b) {
            const Transition& t = buffer.transitions[rng.uniform_int(buffer.size())];
            double bootstrap = 0.0;  // stopped target, no gradient flows through it
            for (int a2 = 0; a2 < n_actions; ++a2)
                bootstrap += policy.at(t.s_next, a2) * q.at(t.s_next, a2);
            double target = t.r + gamma * bootstrap;
            grads[static_cast<std::size_t>(t.s) * n_actions + t.a] +=
                2.0 * (q.at(t.s, t.a) - target) * inv_batch;
        }
        adam_step(q.values, grads, state, config);
    }
    return q;
}

TabularMdp learned_model_to_mdp(const LearnedTabularModel& model, double gamma) {
    int n_states = model.n_states;
    int n_actions = model.n_actions;
    std::vector<double> transition(model.transition_logits.size());
    for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < n_actions; ++a) {
            std::size_t row = (static_cast<std::size_t>(s) * n_actions + a) * n_states;
            double max_logit = model.transition_logits[row];
            for (int j = 1; j < n_states; ++j)
                max_logit = std::max(max_logit, model.transition_logits[row + j]);
            double total = 0.0;
            for (int j = 0; j < n_states; ++j)
                total += transition[row + j] = std::exp(model.transition_logits[row + j] - max_logit);
            for (int j = 0; j < n_states; ++j) transition[row + j] /= total;
        }
    return TabularMdp(n_states, n_actions, std::move(transition), model.reward, gamma);
}

std::vector<ActionValues> train_eve(const ExperienceBuffer& buffer, const PolicyTable& policy,
                                    int n_states, int n_actions, double gamma,
                                    const TrainConfig& config, int n) {
    if (n < 2) throw std::invalid_argument("train_eve: need at least 2 members");
    std::vector<ActionValues> members;
    members.reserve(n);
    for (int i = 0; i < n; ++i) {
        TrainConfig member_config = config;
        member_config.seed = config.seed + static_cast<std::uint64_t>(i);
        members.push_back(
            fit_q_expected_sarsa(buffer, policy, n_states, n_actions, gamma, member_config));
    }
    return members;
}

std::vector<LearnedTabularModel> train_emve(const ExperienceBuffer& buffer, int n_states,
                                            int n_actions, const TrainConfig& config, int n) {
    if (n < 2) throw std::invalid_argument("train_emve: need at least 2 members");
    std::vector<LearnedTabularModel> members;
    members.reserve(n);
    for (int i = 0; i < n; ++i) {
        TrainConfig member_config = config;
        member_config.seed = config.seed + static_cast<std::uint64_t>(i);
        members.push_back(fit_model_mle(buffer, n_states, n_actions, member_config));
    }
    return members;
}

void write_named_arrays_csv(const std::vector<NamedArray>& arrays, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "name,index,value\n";
    char buf[96];
    for (const NamedArray& arr : arrays) {
        std::vector<int> idx(arr.dims.size(), 0);
        for (std::size_t flat = 0; flat < arr.data.size(); ++flat) {
            out << arr.name << ',';
            for (std::size_t d = 0; d < idx.size(); ++d) out << (d ? ":" : "") << idx[d];
            std::snprintf(buf, sizeof(buf), ",%.17g\n", arr.data[flat]);
            out << buf;
            for (int d = static_cast<int>(idx.size()) - 1; d >= 0; --d) {
                if (++idx[d] < arr.dims[d]) break;
                idx[d] = 0;
            }
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<NamedArray> read_named_arrays_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "name,index,value")
        throw std::runtime_error("named arrays csv: bad header");
    std::vector<NamedArray> arrays;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string name, index, value;
        if (!std::getline(row, name, ',') || !std::getline(row, index, ',') ||
            !std::getline(row, value))
            throw std::runtime_error("named arrays csv: bad row: " + line);
        std::vector<int> idx;
        std::istringstream tuple(index);
        std::string part;
        while (std::getline(tuple, part, ':')) idx.push_back(std::stoi(part));
        if (arrays.empty() || arrays.back().name != name) {
            arrays.push_back(NamedArray{name, std::vector<int>(idx.size(), 0), {}});
        }
        NamedArray& arr = arrays.back();
        for (std::size_t d = 0; d < idx.size(); ++d)
            arr.dims[d] = std::max(arr.dims[d], idx[d] + 1);
        arr.data.push_back(std::stod(value));
    }
    return arrays;
}

std::vector<NamedArray> model_to_named_arrays(const LearnedTabularModel& model) {
    return {
        NamedArray{"transition_logits",
                   {model.n_states, model.n_actions, model.n_states},
                   model.transition_logits},
        NamedArray{"reward", {model.n_states, model.n_actions}, model.reward},
    };
}

}  // namespace ivelab
