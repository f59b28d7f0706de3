#include "ivelab/policy_select.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ivelab/rng.hpp"

namespace ivelab {

void DisagreementTable::validate() const {
    if (n_states <= 0 || n_actions <= 0)
        throw std::invalid_argument("DisagreementTable: counts must be positive");
    if (sigma.size() != static_cast<std::size_t>(n_states) * n_actions)
        throw std::invalid_argument("DisagreementTable: wrong size");
    for (double x : sigma)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw std::invalid_argument("DisagreementTable: entries must be finite and >= 0");
}

namespace {

template <typename Better>
PolicyTable extremal_policy(const DisagreementTable& table, Better&& better) {
    table.validate();
    std::vector<int> chosen(table.n_states, 0);
    for (int s = 0; s < table.n_states; ++s) {
        int best = 0;
        for (int a = 1; a < table.n_actions; ++a)
            if (better(table.at(s, a), table.at(s, best))) best = a;
        chosen[s] = best;
    }
    return deterministic_policy(chosen, table.n_actions);
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

PolicyTable seeking_policy(const DisagreementTable& table) {
    return extremal_policy(table, [](double a, double b) { return a > b; });
}

PolicyTable averse_policy(const DisagreementTable& table) {
    return extremal_policy(table, [](double a, double b) { return a < b; });
}

StateValues mu_ive_value_estimate(const TabularMdp& model_mdp, const StateValues& v, int n) {
    IveReport report = ive_opt_exact(model_mdp, v, n);
    StateValues out;
    out.values = report.mean;
    return out;
}

TabularMdp random_mdp(int n_states, int n_actions, double gamma, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> transition(static_cast<std::size_t>(n_states) * n_actions * n_states);
    std::vector<double> reward(static_cast<std::size_t>(n_states) * n_actions);
    for (std::size_t row = 0; row < reward.size(); ++row) {
        double total = 0.0;
        for (int j = 0; j < n_states; ++j)
            total += transition[row * n_states + j] = std::exp(rng.normal());
        for (int j = 0; j < n_states; ++j) transition[row * n_states + j] /= total;
    }
    for (double& x : reward) x = rng.normal();
    return TabularMdp(n_states, n_actions, std::move(transition), std::move(reward), gamma);
}

PlanningStudyResult planning_robustness_study(const TabularMdp& true_mdp,
                                              double perturbation_scale, int n, int trials,
                                              std::uint64_t seed) {
    if (perturbation_scale < 0.0)
        throw std::invalid_argument("planning_robustness_study: scale must be >= 0");
    if (trials < 1) throw std::invalid_argument("planning_robustness_study: trials must be >= 1");
    if (n < 1) throw std::invalid_argument("planning_robustness_study: n must be >= 1");

    StateValues v_star = value_iteration(true_mdp, 1e-12);
    PlanningStudyResult result;
    std::vector<double> mu_trial_errors, k1_trial_errors, kn_trial_errors;

    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(seed + static_cast<std::uint64_t>(trial));
        TabularMdp perturbed = true_mdp;
        if (perturbation_scale > 0.0) {
            for (int s = 0; s < true_mdp.n_states; ++s)
                for (int a = 0; a < true_mdp.n_actions; ++a) {
                    std::size_t row =
                        (static_cast<std::size_t>(s) * true_mdp.n_actions + a) * true_mdp.n_states;
                    double total = 0.0;
                    for (int j = 0; j < true_mdp.n_states; ++j) {
                        double logit = std::log(true_mdp.transition[row + j]) +
                                       perturbation_scale * rng.normal();
                        total += perturbed.transition[row + j] = std::exp(logit);
                    }
                    for (int j = 0; j < true_mdp.n_states; ++j)
                        perturbed.transition[row + j] /= total;
                }
            for (double& r : perturbed.reward) r += perturbation_scale * rng.normal();
        }
        StateValues v_noisy = v_star;
        if (perturbation_scale > 0.0)
            for (double& x : v_noisy.values) x += perturbation_scale * rng.normal();

        IveReport report = ive_opt_exact(perturbed, v_noisy, n);
        for (int k = 0; k <= n; ++k) {
            std::vector<double> errs(true_mdp.n_states);
            for (int s = 0; s < true_mdp.n_states; ++s)
                errs[s] = std::abs(report.at(s, k) - v_star.values[s]);
            double mean = 0.0;
            for (double e : errs) mean += e;
            mean /= errs.size();
            result.rows.push_back(
                PlanningStudyRow{trial, "k=" + std::to_string(k), mean, median(errs)});
            if (k == 1) k1_trial_errors.push_back(mean);
            if (k == n) kn_trial_errors.push_back(mean);
        }
        std::vector<double> mu_errs(true_mdp.n_states);
        for (int s = 0; s < true_mdp.n_states; ++s) {
            mu_errs[s] = std::abs(report.mean[s] - v_star.values[s]);
            double worst_k = 0.0;
            for (int k = 0; k <= n; ++k)
                worst_k = std::max(worst_k, std::abs(report.at(s, k) - v_star.values[s]));
            if (mu_errs[s] > worst_k) {
                result.convex_hull_ok = false;
                result.worst_convexity_violation =
                    std::max(result.worst_convexity_violation, mu_errs[s] - worst_k);
            }
        }
        double mu_mean = 0.0;
        for (double e : mu_errs) mu_mean += e;
        mu_mean /= mu_errs.size();
        result.rows.push_back(PlanningStudyRow{trial, "mu_ive", mu_mean, median(mu_errs)});
        mu_trial_errors.push_back(mu_mean);
    }

    result.median_err_mu = median(mu_trial_errors);
    result.median_err_k1 = median(k1_trial_errors);
    result.median_err_kn = median(kn_trial_errors);
    return result;
}

}  // namespace ivelab
