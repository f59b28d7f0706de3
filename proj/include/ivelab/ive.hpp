#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ivelab/mdp.hpp"
#include "ivelab/rng.hpp"
#include "ivelab/tabular_learn.hpp"

namespace ivelab {

// Implicit value ensemble over states: the k-step model-predicted values
// v^k = (T^pi)^k v for k = 0..n, plus their per-state ensemble mean and
// population standard deviation.
struct IveReport {
    int n = 0;
    int n_states = 0;
    std::vector<double> kmpv;  // [s * (n + 1) + k]
    std::vector<double> mean;  // mu-IVE(n) per state
    std::vector<double> std;   // sigma-IVE(n) per state

    double at(int s, int k) const { return kmpv[static_cast<std::size_t>(s) * (n + 1) + k]; }
};

// Action-conditioned variant: members are the k-step model-predicted values
// with the first action fixed, for k = 1..n (k = 0 cannot condition on an
// action). Statistics are per (s, a) over the n members.
struct ActionIveReport {
    int n = 0;
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> kmpv;  // [(s * n_actions + a) * n + (k - 1)]
    std::vector<double> mean;  // per (s, a)
    std::vector<double> std;   // per (s, a)

    double at(int s, int a, int k) const {
        return kmpv[(static_cast<std::size_t>(s) * n_actions + a) * n + (k - 1)];
    }
};

// Weight for the mu + beta * sigma signal; beta > 0 seeks self-inconsistency,
// beta < 0 avoids it, beta = 0 is neutral.
struct SignalCombiner {
    double beta = 0.0;
};

// Per-state and per-(s,a) ensemble statistics share this shape.
struct EnsembleStats {
    std::vector<double> mean;
    std::vector<double> std;
};

// Exact IVE under the evaluation operator of model_mdp; costs n operator
// applications total.
IveReport ive_exact(const TabularMdp& model_mdp, const PolicyTable& policy, const StateValues& v,
                    int n);

// Exact action-conditioned IVE:
//   kmpv[s][a][k] = r(s,a) + gamma * sum_s' p(s'|s,a) ((T^pi)^{k-1} v)(s').
ActionIveReport ive_exact_q(const TabularMdp& model_mdp, const PolicyTable& policy,
                            const StateValues& v, int n);

// Exact IVE under the optimality operator.
IveReport ive_opt_exact(const TabularMdp& model_mdp, const StateValues& v, int n);

// Statistics over the n+1 member action-value ensemble {q, Tq, ..., T^n q}:
// the raw action-values join the report's model-backed members as the 0-step
// member. Used to build the disagreement tables that drive action selection.
EnsembleStats action_ive_stats_with_q0(const ActionIveReport& report, const ActionValues& q);

// Samples one trajectory of length n from the model/policy pair and returns
// the Monte-Carlo k-MPV estimates for every k = 0..n computed from the shared
// prefix: entry k = sum_{i=1..k} gamma^{i-1} r_i + gamma^k v(s_k).
// model_sampler draws (reward, next state) from m(.,.|s,a); policy_sampler
// draws an action from pi(.|s). Deterministic given the seed.
using ModelSampler = std::function<std::pair<double, int>(int s, int a, Rng& rng)>;
using PolicySampler = std::function<int(int s, Rng& rng)>;
using ValueFn = std::function<double(int s)>;

std::vector<double> mc_k_mpv(const ModelSampler& model_sampler,
                             const PolicySampler& policy_sampler, const ValueFn& v, double gamma,
                             int s, int n, std::uint64_t seed);

// Convenience overload sampling from a tabular model and policy.
std::vector<double> mc_k_mpv(const TabularMdp& model_mdp, const PolicyTable& policy,
                             const StateValues& v, int s, int n, std::uint64_t seed);

// Mean of n_samples trajectories seeded seed, seed+1, ....
std::vector<double> mc_k_mpv_mean(const TabularMdp& model_mdp, const PolicyTable& policy,
                                  const StateValues& v, int s, int n, std::uint64_t seed,
                                  int n_samples);

// mean + beta * std, elementwise.
std::vector<double> combine(const IveReport& report, const SignalCombiner& combiner);

// Population statistics across explicit value-ensemble members, per (s, a).
EnsembleStats eve_stats(const std::vector<ActionValues>& members);

// Population statistics across one-step applications T_{m_i} v of each
// explicit model-ensemble member, per state.
EnsembleStats emve_stats(const std::vector<LearnedTabularModel>& models,
                         const PolicyTable& policy, const StateValues& v, double gamma);

// Population statistics across arbitrary per-state functions.
EnsembleStats state_ensemble_stats(const std::vector<StateValues>& members);

// CSV output: members as `state,k,value` rows, summary as `state,mu,sigma`.
void write_ive_report_csv(const IveReport& report, const std::string& members_path,
                          const std::string& summary_path);

}  // namespace ivelab
