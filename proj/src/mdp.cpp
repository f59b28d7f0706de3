#include "ivelab/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace ivelab {

namespace {

void check_probability_rows(const std::vector<double>& table, std::size_t n_rows,
                            std::size_t row_len, const char* what) {
    if (table.size() != n_rows * row_len)
        throw std::invalid_argument(std::string(what) + ": wrong table size");
    for (std::size_t row = 0; row < n_rows; ++row) {
        double sum = 0.0;
        for (std::size_t j = 0; j < row_len; ++j) {
            double p = table[row * row_len + j];
            if (!(p >= 0.0))
                throw std::invalid_argument(std::string(what) + ": negative or NaN entry");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kStochasticTol)
            throw std::invalid_argument(std::string(what) + ": row does not sum to 1");
    }
}

void check_finite(const std::vector<double>& xs, const char* what) {
    for (double x : xs)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace

PolicyTable::PolicyTable(int states, int actions, std::vector<double> p)
    : n_states(states), n_actions(actions), probs(std::move(p)) {
    validate();
}

void PolicyTable::validate() const {
    if (n_states <= 0 || n_actions <= 0)
        throw std::invalid_argument("PolicyTable: counts must be positive");
    check_probability_rows(probs, n_states, n_actions, "PolicyTable");
}

StochasticMatrix::StochasticMatrix(int states, std::vector<double> e)
    : n_states(states), entries(std::move(e)) {
    validate();
}

void StochasticMatrix::validate() const {
    if (n_states <= 0) throw std::invalid_argument("StochasticMatrix: size must be positive");
    check_probability_rows(entries, n_states, n_states, "StochasticMatrix");
}

TabularMdp::TabularMdp(int states, int actions, std::vector<double> p, std::vector<double> r,
                       double discount)
    : n_states(states),
      n_actions(actions),
      gamma(discount),
      transition(std::move(p)),
      reward(std::move(r)) {
    validate();
}

void TabularMdp::validate() const {
    if (n_states <= 0 || n_actions <= 0)
        throw std::invalid_argument("TabularMdp: counts must be positive");
    if (!(gamma >= 0.0) || gamma >= 1.0)
        throw std::invalid_argument("TabularMdp: gamma must lie in [0, 1)");
    check_probability_rows(transition, static_cast<std::size_t>(n_states) * n_actions, n_states,
                           "TabularMdp transition");
    if (reward.size() != static_cast<std::size_t>(n_states) * n_actions)
        throw std::invalid_argument("TabularMdp: wrong reward size");
    check_finite(reward, "TabularMdp reward");
}

PolicyTable uniform_policy(int n_states, int n_actions) {
    std::vector<double> p(static_cast<std::size_t>(n_states) * n_actions, 1.0 / n_actions);
    return PolicyTable(n_states, n_actions, std::move(p));
}

PolicyTable deterministic_policy(const std::vector<int>& action_per_state, int n_actions) {
    int n_states = static_cast<int>(action_per_state.size());
    std::vector<double> p(static_cast<std::size_t>(n_states) * n_actions, 0.0);
    for (int s = 0; s < n_states; ++s) {
        int a = action_per_state[s];
        if (a < 0 || a >= n_actions)
            throw std::invalid_argument("deterministic_policy: action out of range");
        p[static_cast<std::size_t>(s) * n_actions + a] = 1.0;
    }
    return PolicyTable(n_states, n_actions, std::move(p));
}

namespace {

void require_dims(const TabularMdp& mdp, const StateValues& v) {
    if (v.n_states() != mdp.n_states)
        throw std::invalid_argument("value function size does not match MDP");
}

void require_dims(const TabularMdp& mdp, const PolicyTable& policy) {
    if (policy.n_states != mdp.n_states || policy.n_actions != mdp.n_actions)
        throw std::invalid_argument("policy shape does not match MDP");
}

// Expected one-step backup r(s,a) + gamma * sum_s' p(s'|s,a) v(s').
double action_backup(const TabularMdp& mdp, const StateValues& v, int s, int a) {
    double expected_next = 0.0;
    const double* row =
        &mdp.transition[(static_cast<std::size_t>(s) * mdp.n_actions + a) * mdp.n_states];
    for (int s2 = 0; s2 < mdp.n_states; ++s2) expected_next += row[s2] * v.values[s2];
    return mdp.r(s, a) + mdp.gamma * expected_next;
}

}  // namespace

StateValues bellman_eval_apply(const TabularMdp& mdp, const PolicyTable& policy,
                               const StateValues& v) {
    require_dims(mdp, v);
    require_dims(mdp, policy);
    StateValues out;
    out.values.resize(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
        double acc = 0.0;
        for (int a = 0; a < mdp.n_actions; ++a) {
            double pi = policy.at(s, a);
            if (pi != 0.0) acc += pi * action_backup(mdp, v, s, a);
        }
        out.values[s] = acc;
    }
    return out;
}

StateValues bellman_eval_apply_k(const TabularMdp& mdp, const PolicyTable& policy,
                                 const StateValues& v, int k) {
    if (k < 0) throw std::invalid_argument("bellman_eval_apply_k: k must be >= 0");
    StateValues out = v;
    for (int i = 0; i < k; ++i) out = bellman_eval_apply(mdp, policy, out);
    return out;
}

StateValues bellman_opt_apply(const TabularMdp& mdp, const StateValues& v) {
    require_dims(mdp, v);
    StateValues out;
    out.values.resize(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
        double best = action_backup(mdp, v, s, 0);
        for (int a = 1; a < mdp.n_actions; ++a) best = std::max(best, action_backup(mdp, v, s, a));
        out.values[s] = best;
    }
    return out;
}

namespace {

template <typename Operator>
StateValues fixed_point(const TabularMdp& mdp, double tol, long max_iterations, Operator&& op) {
    if (!(tol > 0.0)) throw std::invalid_argument("fixed point: tol must be positive");
    StateValues v;
    v.values.assign(mdp.n_states, 0.0);
    for (long it = 0; it < max_iterations; ++it) {
        StateValues next = op(v);
        double residual = 0.0;
        for (int s = 0; s < mdp.n_states; ++s)
            residual = std::max(residual, std::abs(next.values[s] - v.values[s]));
        v = std::move(next);
        if (residual <= tol) return v;
    }
    throw std::runtime_error("fixed point iteration did not converge");
}

}  // namespace

StateValues policy_evaluation(const TabularMdp& mdp, const PolicyTable& policy, double tol,
                              long max_iterations) {
    require_dims(mdp, policy);
    return fixed_point(mdp, tol, max_iterations,
                       [&](const StateValues& v) { return bellman_eval_apply(mdp, policy, v); });
}

StateValues value_iteration(const TabularMdp& mdp, double tol, long max_iterations) {
    return fixed_point(mdp, tol, max_iterations,
                       [&](const StateValues& v) { return bellman_opt_apply(mdp, v); });
}

StateValues induce_state_values(const ActionValues& q, const PolicyTable& policy) {
    if (q.n_states != policy.n_states || q.n_actions != policy.n_actions)
        throw std::invalid_argument("induce_state_values: shape mismatch");
    StateValues out;
    out.values.resize(q.n_states);
    for (int s = 0; s < q.n_states; ++s) {
        double acc = 0.0;
        for (int a = 0; a < q.n_actions; ++a) acc += policy.at(s, a) * q.at(s, a);
        out.values[s] = acc;
    }
    return out;
}

StochasticMatrix policy_transition_kernel(const TabularMdp& mdp, const PolicyTable& policy) {
    require_dims(mdp, policy);
    std::vector<double> entries(static_cast<std::size_t>(mdp.n_states) * mdp.n_states, 0.0);
    for (int s = 0; s < mdp.n_states; ++s)
        for (int a = 0; a < mdp.n_actions; ++a) {
            double pi = policy.at(s, a);
            if (pi == 0.0) continue;
            for (int s2 = 0; s2 < mdp.n_states; ++s2)
                entries[static_cast<std::size_t>(s) * mdp.n_states + s2] += pi * mdp.p(s, a, s2);
        }
    return StochasticMatrix(mdp.n_states, std::move(entries));
}

StochasticMatrix matrix_multiply(const StochasticMatrix& a, const StochasticMatrix& b) {
    if (a.n_states != b.n_states) throw std::invalid_argument("matrix_multiply: size mismatch");
    int n = a.n_states;
    std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i) * n + j] += aik * b.at(k, j);
        }
    StochasticMatrix result;
    result.n_states = n;
    result.entries = std::move(out);
    return result;
}

StochasticMatrix matrix_power(const StochasticMatrix& m, int l) {
    if (l < 0) throw std::invalid_argument("matrix_power: l must be >= 0");
    int n = m.n_states;
    StochasticMatrix acc;
    acc.n_states = n;
    acc.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) acc.entries[static_cast<std::size_t>(i) * n + i] = 1.0;
    for (int i = 0; i < l; ++i) acc = matrix_multiply(acc, m);
    return acc;
}

double occupancy_probability(const StochasticMatrix& kernel, int start, int target, int l) {
    if (start < 0 || start >= kernel.n_states || target < 0 || target >= kernel.n_states)
        throw std::invalid_argument("occupancy_probability: state index out of range");
    if (l < 0) throw std::invalid_argument("occupancy_probability: l must be >= 0");
    return occupancy_curve(kernel, start, target, l)[l];
}

std::vector<double> occupancy_curve(const StochasticMatrix& kernel, int start, int target,
                                    int l_max) {
    if (start < 0 || start >= kernel.n_states || target < 0 || target >= kernel.n_states)
        throw std::invalid_argument("occupancy_curve: state index out of range");
    if (l_max < 0) throw std::invalid_argument("occupancy_curve: l_max must be >= 0");
    int n = kernel.n_states;
    std::vector<double> row(n, 0.0), next(n);
    row[start] = 1.0;
    std::vector<double> out;
    out.reserve(l_max + 1);
    out.push_back(start == target ? 1.0 : 0.0);
    for (int l = 1; l <= l_max; ++l) {
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += row[i] * kernel.at(i, j);
            next[j] = acc;
        }
        row.swap(next);
        out.push_back(row[target]);
    }
    return out;
}

}  // namespace ivelab
