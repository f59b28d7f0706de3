#include "ivelab/gridworld.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ivelab/rng.hpp"

namespace ivelab {

void GridworldSpec::validate() const {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("GridworldSpec: grid dimensions must be positive");
    if (!(wind_prob >= 0.0 && wind_prob <= 1.0))
        throw std::invalid_argument("GridworldSpec: wind_prob must lie in [0, 1]");
    if (episode_length <= 0)
        throw std::invalid_argument("GridworldSpec: episode_length must be positive");
    if (excluded_cell && (*excluded_cell < 0 || *excluded_cell >= n_states()))
        throw std::invalid_argument("GridworldSpec: excluded_cell out of bounds");
    if (!(gamma >= 0.0) || gamma >= 1.0)
        throw std::invalid_argument("GridworldSpec: gamma must lie in [0, 1)");
}

int grid_move(const GridworldSpec& spec, int s, int a) {
    int row = s / spec.width;
    int col = s % spec.width;
    switch (a) {
        case kNorth: --row; break;
        case kWest: --col; break;
        case kSouth: ++row; break;
        case kEast: ++col; break;
        default: throw std::invalid_argument("grid_move: bad action");
    }
    if (row < 0 || row >= spec.height || col < 0 || col >= spec.width) return s;
    return row * spec.width + col;
}

TabularMdp build_gridworld(const GridworldSpec& spec) {
    spec.validate();
    int n = spec.n_states();
    std::vector<double> transition(static_cast<std::size_t>(n) * kGridActions * n, 0.0);
    std::vector<double> reward(static_cast<std::size_t>(n) * kGridActions, 0.0);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < kGridActions; ++a) {
            double* row = &transition[(static_cast<std::size_t>(s) * kGridActions + a) * n];
            for (int b = 0; b < kGridActions; ++b) {
                double w = spec.wind_prob / kGridActions + (b == a ? 1.0 - spec.wind_prob : 0.0);
                row[grid_move(spec, s, b)] += w;
            }
            double sum = 0.0;
            for (int s2 = 0; s2 < n; ++s2) sum += row[s2];
            for (int s2 = 0; s2 < n; ++s2) row[s2] /= sum;
        }
    return TabularMdp(n, kGridActions, std::move(transition), std::move(reward), spec.gamma);
}

ExperienceBuffer rollout(const TabularMdp& mdp, const GridworldSpec& spec,
                         const PolicyTable& policy, int n_steps, int start, std::uint64_t seed,
                         const std::string& policy_label) {
    if (n_steps < 1) throw std::invalid_argument("rollout: n_steps must be >= 1");
    if (start < 0 || start >= mdp.n_states)
        throw std::invalid_argument("rollout: start state out of range");
    Rng rng(seed);
    ExperienceBuffer buffer;
    buffer.seed = seed;
    buffer.policy_label = policy_label;
    buffer.steps = n_steps;
    buffer.transitions.reserve(n_steps);
    int s = start;
    for (int t = 0; t < n_steps; ++t) {
        if (t % spec.episode_length == 0) s = start;
        const double* pi = &policy.probs[static_cast<std::size_t>(s) * policy.n_actions];
        int a = rng.categorical(pi, pi + policy.n_actions);
        const double* row =
            &mdp.transition[(static_cast<std::size_t>(s) * mdp.n_actions + a) * mdp.n_states];
        int s_next = rng.categorical(row, row + mdp.n_states);
        buffer.transitions.push_back(Transition{s, a, mdp.r(s, a), s_next});
        s = s_next;
    }
    return buffer;
}

ExperienceBuffer exclude_cell(const ExperienceBuffer& buffer, int cell) {
    ExperienceBuffer out;
    out.seed = buffer.seed;
    out.policy_label = buffer.policy_label;
    out.steps = buffer.steps;
    for (const Transition& t : buffer.transitions)
        if (t.s != cell && t.s_next != cell) out.transitions.push_back(t);
    return out;
}

void write_buffer_csv(const ExperienceBuffer& buffer, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "# seed=" << buffer.seed << " policy=" << buffer.policy_label
        << " steps=" << buffer.steps << "\n";
    out << "s,a,r,s_next\n";
    char line[128];
    for (const Transition& t : buffer.transitions) {
        std::snprintf(line, sizeof(line), "%d,%d,%.17g,%d\n", t.s, t.a, t.r, t.s_next);
        out << line;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

ExperienceBuffer read_buffer_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    ExperienceBuffer buffer;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error("buffer csv: missing metadata comment");
    {
        std::istringstream meta(line.substr(2));
        std::string field;
        while (meta >> field) {
            auto eq = field.find('=');
            if (eq == std::string::npos) continue;
            std::string key = field.substr(0, eq);
            std::string value = field.substr(eq + 1);
            if (key == "seed") buffer.seed = std::stoull(value);
            else if (key == "policy") buffer.policy_label = value;
            else if (key == "steps") buffer.steps = std::stoi(value);
        }
    }
    if (!std::getline(in, line) || line != "s,a,r,s_next")
        throw std::runtime_error("buffer csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Transition t;
        if (std::sscanf(line.c_str(), "%d,%d,%lg,%d", &t.s, &t.a, &t.r, &t.s_next) != 4)
            throw std::runtime_error("buffer csv: bad row: " + line);
        buffer.transitions.push_back(t);
    }
    return buffer;
}

}  // namespace ivelab
