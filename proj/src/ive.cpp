#include "ivelab/ive.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ivelab {

namespace {

// Population mean and standard deviation over `count` members laid out with
// stride 1 starting at `first`.
void member_stats(const double* first, int count, double& mean, double& std) {
    double sum = 0.0;
    for (int k = 0; k < count; ++k) sum += first[k];
    mean = sum / count;
    double var = 0.0;
    for (int k = 0; k < count; ++k) {
        double d = first[k] - mean;
        var += d * d;
    }
    std = std::sqrt(var / count);
}

void fill_stats(IveReport& report) {
    report.mean.resize(report.n_states);
    report.std.resize(report.n_states);
    for (int s = 0; s < report.n_states; ++s)
        member_stats(&report.kmpv[static_cast<std::size_t>(s) * (report.n + 1)], report.n + 1,
                     report.mean[s], report.std[s]);
}

template <typename Operator>
IveReport ive_exact_impl(const TabularMdp& model_mdp, const StateValues& v, int n, Operator&& op) {
    if (n < 1) throw std::invalid_argument("ive_exact: n must be >= 1");
    if (v.n_states() != model_mdp.n_states)
        throw std::invalid_argument("ive_exact: value size mismatch");
    IveReport report;
    report.n = n;
    report.n_states = model_mdp.n_states;
    report.kmpv.resize(static_cast<std::size_t>(model_mdp.n_states) * (n + 1));
    StateValues current = v;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) current = op(current);
        for (int s = 0; s < model_mdp.n_states; ++s)
            report.kmpv[static_cast<std::size_t>(s) * (n + 1) + k] = current.values[s];
    }
    fill_stats(report);
    return report;
}

}  // namespace

IveReport ive_exact(const TabularMdp& model_mdp, const PolicyTable& policy, const StateValues& v,
                    int n) {
    return ive_exact_impl(model_mdp, v, n, [&](const StateValues& x) {
        return bellman_eval_apply(model_mdp, policy, x);
    });
}

IveReport ive_opt_exact(const TabularMdp& model_mdp, const StateValues& v, int n) {
    return ive_exact_impl(model_mdp, v, n,
                          [&](const StateValues& x) { return bellman_opt_apply(model_mdp, x); });
}

ActionIveReport ive_exact_q(const TabularMdp& model_mdp, const PolicyTable& policy,
                            const StateValues& v, int n) {
    if (n < 1) throw std::invalid_argument("ive_exact_q: n must be >= 1");
    if (v.n_states() != model_mdp.n_states)
        throw std::invalid_argument("ive_exact_q: value size mismatch");
    ActionIveReport report;
    report.n = n;
    report.n_states = model_mdp.n_states;
    report.n_actions = model_mdp.n_actions;
    report.kmpv.resize(static_cast<std::size_t>(model_mdp.n_states) * model_mdp.n_actions * n);
    StateValues current = v;  // (T^pi)^{k-1} v while filling member k
    for (int k = 1; k <= n; ++k) {
        if (k > 1) current = bellman_eval_apply(model_mdp, policy, current);
        for (int s = 0; s < model_mdp.n_states; ++s)
            for (int a = 0; a < model_mdp.n_actions; ++a) {
                double expected_next = 0.0;
                for (int s2 = 0; s2 < model_mdp.n_states; ++s2)
                    expected_next += model_mdp.p(s, a, s2) * current.values[s2];
                report.kmpv[(static_cast<std::size_t>(s) * model_mdp.n_actions + a) * n + (k - 1)] =
                    model_mdp.r(s, a) + model_mdp.gamma * expected_next;
            }
    }
    report.mean.resize(static_cast<std::size_t>(report.n_states) * report.n_actions);
    report.std.resize(report.mean.size());
    for (std::size_t sa = 0; sa < report.mean.size(); ++sa)
        member_stats(&report.kmpv[sa * n], n, report.mean[sa], report.std[sa]);
    return report;
}

EnsembleStats action_ive_stats_with_q0(const ActionIveReport& report, const ActionValues& q) {
    if (q.n_states != report.n_states || q.n_actions != report.n_actions)
        throw std::invalid_argument("action_ive_stats_with_q0: shape mismatch");
    EnsembleStats stats;
    std::size_t pairs = static_cast<std::size_t>(report.n_states) * report.n_actions;
    stats.mean.resize(pairs);
    stats.std.resize(pairs);
    std::vector<double> members(report.n + 1);
    for (std::size_t sa = 0; sa < pairs; ++sa) {
        members[0] = q.values[sa];
        for (int k = 1; k <= report.n; ++k) members[k] = report.kmpv[sa * report.n + (k - 1)];
        member_stats(members.data(), report.n + 1, stats.mean[sa], stats.std[sa]);
    }
    return stats;
}

std::vector<double> mc_k_mpv(const ModelSampler& model_sampler,
                             const PolicySampler& policy_sampler, const ValueFn& v, double gamma,
                             int s, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("mc_k_mpv: n must be >= 1");
    Rng rng(seed);
    std::vector<double> out(n + 1);
    out[0] = v(s);
    double reward_prefix = 0.0;
    double discount = 1.0;  // gamma^{k-1} entering step k
    int state = s;
    for (int k = 1; k <= n; ++k) {
        int action = policy_sampler(state, rng);
        auto [r, next] = model_sampler(state, action, rng);
        reward_prefix += discount * r;
        discount *= gamma;
        state = next;
        out[k] = reward_prefix + discount * v(state);
    }
    return out;
}

std::vector<double> mc_k_mpv(const TabularMdp& model_mdp, const PolicyTable& policy,
                             const StateValues& v, int s, int n, std::uint64_t seed) {
    ModelSampler model_sampler = [&](int state, int action, Rng& rng) {
        const double* row = &model_mdp.transition[(static_cast<std::size_t>(state) *
                                                   model_mdp.n_actions + action) *
                                                  model_mdp.n_states];
        int next = rng.categorical(row, row + model_mdp.n_states);
        return std::make_pair(model_mdp.r(state, action), next);
    };
    PolicySampler policy_sampler = [&](int state, Rng& rng) {
        const double* row = &policy.probs[static_cast<std::size_t>(state) * policy.n_actions];
        return rng.categorical(row, row + policy.n_actions);
    };
    ValueFn value = [&](int state) { return v.values[state]; };
    return mc_k_mpv(model_sampler, policy_sampler, value, model_mdp.gamma, s, n, seed);
}

std::vector<double> mc_k_mpv_mean(const TabularMdp& model_mdp, const PolicyTable& policy,
                                  const StateValues& v, int s, int n, std::uint64_t seed,
                                  int n_samples) {
    if (n_samples < 1) throw std::invalid_argument("mc_k_mpv_mean: n_samples must be >= 1");
    std::vector<double> acc(n + 1, 0.0);
    for (int i = 0; i < n_samples; ++i) {
        std::vector<double> one = mc_k_mpv(model_mdp, policy, v, s, n, seed + i);
        for (int k = 0; k <= n; ++k) acc[k] += one[k];
    }
    for (double& x : acc) x /= n_samples;
    return acc;
}

std::vector<double> combine(const IveReport& report, const SignalCombiner& combiner) {
    std::vector<double> out(report.n_states);
    for (int s = 0; s < report.n_states; ++s)
        out[s] = report.mean[s] + combiner.beta * report.std[s];
    return out;
}

EnsembleStats eve_stats(const std::vector<ActionValues>& members) {
    if (members.size() < 2) throw std::invalid_argument("eve_stats: need at least 2 members");
    std::size_t pairs = members[0].values.size();
    for (const ActionValues& m : members)
        if (m.values.size() != pairs) throw std::invalid_argument("eve_stats: shape mismatch");
    EnsembleStats stats;
    stats.mean.resize(pairs);
    stats.std.resize(pairs);
    std::vector<double> column(members.size());
    for (std::size_t sa = 0; sa < pairs; ++sa) {
        for (std::size_t i = 0; i < members.size(); ++i) column[i] = members[i].values[sa];
        member_stats(column.data(), static_cast<int>(members.size()), stats.mean[sa],
                     stats.std[sa]);
    }
    return stats;
}

EnsembleStats emve_stats(const std::vector<LearnedTabularModel>& models,
                         const PolicyTable& policy, const StateValues& v, double gamma) {
    if (models.size() < 2) throw std::invalid_argument("emve_stats: need at least 2 models");
    std::vector<StateValues> one_step;
    one_step.reserve(models.size());
    for (const LearnedTabularModel& m : models)
        one_step.push_back(bellman_eval_apply(learned_model_to_mdp(m, gamma), policy, v));
    return state_ensemble_stats(one_step);
}

EnsembleStats state_ensemble_stats(const std::vector<StateValues>& members) {
    if (members.size() < 2)
        throw std::invalid_argument("state_ensemble_stats: need at least 2 members");
    int n_states = members[0].n_states();
    EnsembleStats stats;
    stats.mean.resize(n_states);
    stats.std.resize(n_states);
    std::vector<double> column(members.size());
    for (int s = 0; s < n_states; ++s) {
        for (std::size_t i = 0; i < members.size(); ++i) column[i] = members[i].values[s];
        member_stats(column.data(), static_cast<int>(members.size()), stats.mean[s],
                     stats.std[s]);
    }
    return stats;
}

void write_ive_report_csv(const IveReport& report, const std::string& members_path,
                          const std::string& summary_path) {
    std::ofstream members(members_path);
    if (!members) throw std::runtime_error("cannot open " + members_path + " for writing");
    members << "state,k,value\n";
    char buf[96];
    for (int s = 0; s < report.n_states; ++s)
        for (int k = 0; k <= report.n; ++k) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", s, k, report.at(s, k));
            members << buf;
        }
    std::ofstream summary(summary_path);
    if (!summary) throw std::runtime_error("cannot open " + summary_path + " for writing");
    summary << "state,mu,sigma\n";
    for (int s = 0; s < report.n_states; ++s) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", s, report.mean[s], report.std[s]);
        summary << buf;
    }
}

}  // namespace ivelab
