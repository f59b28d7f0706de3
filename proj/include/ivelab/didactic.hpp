#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ivelab/tape.hpp"

namespace ivelab {

// The 1-D value-prediction experiment: a scalar state s in [-3, +3] is mapped
// to a 32-dim latent z by a representation network, and a value head, reward
// head and recurrent transition cell compose into k-step model-predicted
// values
//   v^k(s) = sum_{j=1..k} gamma^{j-1} r(z^j) + gamma^k v(z^k),   z^0 = h(s),
// with z^{j+1} = p(z^j). All MLPs have one hidden layer of 32 ELU units; the
// representation output is tanh-squashed so z stays in [-1, +1]^32; the
// transition cell is a standard LSTM step applied with zero initial hidden
// and cell state.
inline constexpr int kDidacticLatent = 32;

struct DidacticConfig {
    double gamma = 0.9;
    int n_points = 10;
    int k_max = 10;
    double learning_rate = 1e-3;
    double weight_decay = 1e-4;
    int steps = 5000;
    std::uint64_t seed = 0;

    void validate() const;
};

// Named segments of the flat parameter vector.
enum DidacticSegment : int {
    kHW1 = 0, kHB1, kHW2, kHB2,          // representation (omega)
    kVW1, kVB1, kVW2, kVB2,              // value head (phi)
    kRW1, kRB1, kRW2, kRB2,              // reward head (theta_r)
    kPWx, kPWh, kPB,                     // transition cell (theta_p)
    kNumSegments
};

struct SegmentSpec {
    const char* name;
    int rows;
    int cols;
    int offset;
    int size() const { return rows * cols; }
};

// All four networks' parameters in one flat vector.
struct DidacticParams {
    std::vector<double> flat;

    static const std::array<SegmentSpec, kNumSegments>& layout();
    static int total_size();

    // Fan-in-scaled Gaussian init (W ~ N(0, 1/fan_in), biases zero).
    static DidacticParams random_init(std::uint64_t seed);

    const double* segment(int seg) const { return flat.data() + layout()[seg].offset; }
    double* segment(int seg) { return flat.data() + layout()[seg].offset; }
};

// Node ids of the bound parameter leaves on a tape.
struct BoundParams {
    std::array<int, kNumSegments> ids;
};

BoundParams bind_params(Tape& tape, const DidacticParams& params);

// Graph builders. Latent nodes have size kDidacticLatent; heads are scalars.
int latent_node(Tape& tape, const BoundParams& bound, double s);
int transition_node(Tape& tape, const BoundParams& bound, int z);
int value_node(Tape& tape, const BoundParams& bound, int z);
int reward_node(Tape& tape, const BoundParams& bound, int z);
int kmpv_node(Tape& tape, const BoundParams& bound, double s, int k, double gamma, int k_max);

// Plain-value evaluators (fresh scratch tape per call).
double forward_kmpv(const DidacticParams& params, double s, int k, double gamma, int k_max);
std::vector<double> didactic_latent(const DidacticParams& params, double s);
std::vector<double> didactic_transition(const DidacticParams& params,
                                        const std::vector<double>& z);
double didactic_value(const DidacticParams& params, const std::vector<double>& z);
double didactic_reward(const DidacticParams& params, const std::vector<double>& z);

// Training data: (state, value target) pairs.
struct DidacticDataset {
    std::vector<double> states;
    std::vector<double> targets;

    int size() const { return static_cast<int>(states.size()); }
};

// Default targets: v_i = sin(2 s_i) at n evenly spaced states in [-2, 2].
DidacticDataset default_didactic_dataset(int n_points = 10);

// CSV with header `s,target`.
DidacticDataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const DidacticDataset& dataset, const std::string& path);

// Training loss sum_i sum_{k=0..k_max} (v^k(s_i) - target_i)^2 and its
// gradient with respect to the flat parameter vector.
double didactic_loss(const DidacticParams& params, const DidacticDataset& dataset, int k_max,
                     double gamma);
std::vector<double> didactic_loss_grad(const DidacticParams& params,
                                       const DidacticDataset& dataset, int k_max, double gamma);

// Loss per k (each term summed over the dataset), for convergence checks.
std::vector<double> didactic_loss_per_k(const DidacticParams& params,
                                        const DidacticDataset& dataset, int k_max, double gamma);

// Full-batch AdamW (decoupled weight decay) for config.steps steps.
DidacticParams train_didactic(const DidacticDataset& dataset, const DidacticConfig& config);

// k-MPV curves over a probe grid with per-probe ensemble mean and standard
// deviation over k = 0..n.
struct DidacticCurve {
    std::vector<double> probes;
    int n = 0;
    std::vector<double> values;  // [probe * (n + 1) + k]
    std::vector<double> mu;
    std::vector<double> sigma;

    double at(int probe, int k) const {
        return values[static_cast<std::size_t>(probe) * (n + 1) + k];
    }
};

DidacticCurve ive_curve(const DidacticParams& params, const std::vector<double>& probe_states,
                        int n, double gamma, int k_max);

// Curve CSVs: members as `s,k,value`, summary as `s,mu,sigma`.
void write_curve_csv(const DidacticCurve& curve, const std::string& members_path,
                     const std::string& summary_path);

}  // namespace ivelab
