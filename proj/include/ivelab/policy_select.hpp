#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivelab/ive.hpp"
#include "ivelab/mdp.hpp"

namespace ivelab {

// Per-(s,a) ensemble standard deviations used for uncertainty-driven action
// selection.
struct DisagreementTable {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> sigma;  // [s * n_actions + a]

    double at(int s, int a) const { return sigma[static_cast<std::size_t>(s) * n_actions + a]; }
    void validate() const;
};

// Deterministic policy putting probability 1 on argmax_a sigma[s][a]; ties
// break to the lowest action index.
PolicyTable seeking_policy(const DisagreementTable& table);

// argmin analogue with the same tie-break.
PolicyTable averse_policy(const DisagreementTable& table);

// Elementwise mean over k = 0..n of the optimality-operator k-MPVs.
StateValues mu_ive_value_estimate(const TabularMdp& model_mdp, const StateValues& v, int n);

// One row of the robustness study output.
struct PlanningStudyRow {
    int trial = 0;
    std::string estimator;  // "k=0".."k=n" or "mu_ive"
    double mean_abs_err = 0.0;
    double median_abs_err = 0.0;
};

struct PlanningStudyResult {
    std::vector<PlanningStudyRow> rows;
    // Whether per-state |mu-IVE - v*| <= max_k |v^k - v*| held in every trial.
    bool convex_hull_ok = true;
    double worst_convexity_violation = 0.0;
    // Medians across trials of the per-trial mean absolute errors.
    double median_err_mu = 0.0;
    double median_err_k1 = 0.0;
    double median_err_kn = 0.0;
};

// Robustness of ensemble-averaged value prediction under model/value noise.
// Per trial: perturb the true model's transition logits and rewards with
// Gaussian noise of the given scale (logit-space noise keeps rows stochastic),
// perturb v* likewise, then measure per-state absolute error against v* for
// every fixed-k optimality-operator estimate and for the mu-IVE(n) average.
PlanningStudyResult planning_robustness_study(const TabularMdp& true_mdp,
                                              double perturbation_scale, int n, int trials,
                                              std::uint64_t seed);

// Random dense MDP with softmax(N(0,1)) transition rows and N(0,1) rewards.
TabularMdp random_mdp(int n_states, int n_actions, double gamma, std::uint64_t seed);

}  // namespace ivelab
