#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivelab/mdp.hpp"

namespace ivelab {

// Movement actions, one per cardinal direction.
enum GridAction : int { kNorth = 0, kWest = 1, kSouth = 2, kEast = 3 };
inline constexpr int kGridActions = 4;

// An empty rectangular gridworld. States are indexed row-major with 0 at the
// top-left and width*height-1 at the bottom-right. Rewards are identically
// zero. With probability wind_prob the chosen action is replaced by a draw
// uniform over all four actions (the draw may coincide with the chosen one),
// so the intended direction succeeds with probability (1 - wind_prob) +
// wind_prob / 4. Moving into a wall leaves the agent in place.
struct GridworldSpec {
    int width = 5;
    int height = 5;
    double wind_prob = 0.0;
    int episode_length = 20;
    std::optional<int> excluded_cell;  // state index of the held-out cell
    double gamma = 0.9;

    int n_states() const { return width * height; }
    void validate() const;
};

// One experience tuple.
struct Transition {
    int s = 0;
    int a = 0;
    double r = 0.0;
    int s_next = 0;
};

// Ordered experience with the provenance needed for bit-exact replay.
struct ExperienceBuffer {
    std::vector<Transition> transitions;
    std::uint64_t seed = 0;
    std::string policy_label;
    int steps = 0;  // steps requested from the generating rollout

    int size() const { return static_cast<int>(transitions.size()); }
    bool empty() const { return transitions.empty(); }
};

// Target cell of a single (wind-free) move; walls bump back to the cell.
int grid_move(const GridworldSpec& spec, int s, int a);

// Exact ground-truth MDP for the spec; no sampling involved.
TabularMdp build_gridworld(const GridworldSpec& spec);

// Episodic rollouts of length spec.episode_length, restarting at `start`,
// until n_steps transitions are collected. Deterministic given the seed.
ExperienceBuffer rollout(const TabularMdp& mdp, const GridworldSpec& spec,
                         const PolicyTable& policy, int n_steps, int start, std::uint64_t seed,
                         const std::string& policy_label = "");

// Drops every transition with s == cell or s_next == cell, preserving order.
ExperienceBuffer exclude_cell(const ExperienceBuffer& buffer, int cell);

// CSV serialization: a leading `# seed=... policy=... steps=...` comment,
// then a `s,a,r,s_next` header and one transition per line.
void write_buffer_csv(const ExperienceBuffer& buffer, const std::string& path);
ExperienceBuffer read_buffer_csv(const std::string& path);

}  // namespace ivelab
