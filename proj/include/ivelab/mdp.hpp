#pragma once

#include <vector>

namespace ivelab {

// Row-sum tolerance for probability tables.
inline constexpr double kStochasticTol = 1e-12;

// A state-indexed value function v: S -> R.
struct StateValues {
    std::vector<double> values;

    int n_states() const { return static_cast<int>(values.size()); }
};

// A (state, action)-indexed value function q: S x A -> R, stored row-major.
struct ActionValues {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> values;  // [s * n_actions + a]

    ActionValues() = default;
    ActionValues(int states, int actions, double fill = 0.0)
        : n_states(states),
          n_actions(actions),
          values(static_cast<std::size_t>(states) * actions, fill) {}

    double& at(int s, int a) { return values[static_cast<std::size_t>(s) * n_actions + a]; }
    double at(int s, int a) const { return values[static_cast<std::size_t>(s) * n_actions + a]; }
};

// A stochastic policy pi(a|s); every row sums to 1.
struct PolicyTable {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> probs;  // [s * n_actions + a]

    PolicyTable() = default;
    PolicyTable(int states, int actions, std::vector<double> p);

    double at(int s, int a) const { return probs[static_cast<std::size_t>(s) * n_actions + a]; }
    void validate() const;
};

// A row-stochastic S x S matrix (policy-coupled Markov chain kernel).
struct StochasticMatrix {
    int n_states = 0;
    std::vector<double> entries;  // [s * n_states + s2]

    StochasticMatrix() = default;
    StochasticMatrix(int states, std::vector<double> e);

    double at(int s, int s2) const { return entries[static_cast<std::size_t>(s) * n_states + s2]; }
    void validate() const;
};

// An exact finite MDP: transition probabilities p(s'|s,a), expected immediate
// rewards r(s,a) and a discount gamma in [0, 1).
struct TabularMdp {
    int n_states = 0;
    int n_actions = 0;
    double gamma = 0.0;
    std::vector<double> transition;  // [s][a][s'], row-major
    std::vector<double> reward;      // [s][a]

    TabularMdp() = default;
    TabularMdp(int states, int actions, std::vector<double> p, std::vector<double> r,
               double discount);

    double p(int s, int a, int s2) const {
        return transition[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s2];
    }
    double r(int s, int a) const { return reward[static_cast<std::size_t>(s) * n_actions + a]; }

    void validate() const;
};

// Convenience policies.
PolicyTable uniform_policy(int n_states, int n_actions);
PolicyTable deterministic_policy(const std::vector<int>& action_per_state, int n_actions);

// One application of the Bellman evaluation operator:
//   (T^pi v)(s) = sum_a pi(a|s) [ r(s,a) + gamma * sum_s' p(s'|s,a) v(s') ].
StateValues bellman_eval_apply(const TabularMdp& mdp, const PolicyTable& policy,
                               const StateValues& v);

// k repeated applications; k = 0 returns v unchanged.
StateValues bellman_eval_apply_k(const TabularMdp& mdp, const PolicyTable& policy,
                                 const StateValues& v, int k);

// One application of the Bellman optimality operator:
//   (T* v)(s) = max_a [ r(s,a) + gamma * sum_s' p(s'|s,a) v(s') ].
StateValues bellman_opt_apply(const TabularMdp& mdp, const StateValues& v);

// Fixed point of T^pi, iterated from zero until the sup-norm residual
// ||T^pi v - v||_inf drops below tol. Throws if it has not converged within
// max_iterations (gamma < 1 guarantees convergence; the cap catches misuse).
StateValues policy_evaluation(const TabularMdp& mdp, const PolicyTable& policy,
                              double tol = 1e-10, long max_iterations = 100000);

// Fixed point of T*, same iteration scheme.
StateValues value_iteration(const TabularMdp& mdp, double tol = 1e-10,
                            long max_iterations = 100000);

// v(s) = sum_a pi(a|s) q(s,a).
StateValues induce_state_values(const ActionValues& q, const PolicyTable& policy);

// Policy-coupled chain kernel p^pi(s'|s) = sum_a p(s'|s,a) pi(a|s).
StochasticMatrix policy_transition_kernel(const TabularMdp& mdp, const PolicyTable& policy);

StochasticMatrix matrix_multiply(const StochasticMatrix& a, const StochasticMatrix& b);
StochasticMatrix matrix_power(const StochasticMatrix& m, int l);

// (start, target) entry of the l-th power of the kernel; l = 0 is the identity.
double occupancy_probability(const StochasticMatrix& kernel, int start, int target, int l);

// occupancy_probability for every l in 0..l_max in one pass (result[l]).
std::vector<double> occupancy_curve(const StochasticMatrix& kernel, int start, int target,
                                    int l_max);

}  // namespace ivelab
