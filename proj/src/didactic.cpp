#include "ivelab/didactic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ivelab/rng.hpp"

namespace ivelab {

namespace {
constexpr int H = kDidacticLatent;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
}  // namespace

void DidacticConfig::validate() const {
    if (!(gamma >= 0.0) || gamma >= 1.0)
        throw std::invalid_argument("DidacticConfig: gamma must lie in [0, 1)");
    if (k_max < 1) throw std::invalid_argument("DidacticConfig: k_max must be >= 1");
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("DidacticConfig: learning_rate must be > 0");
    if (weight_decay < 0.0)
        throw std::invalid_argument("DidacticConfig: weight_decay must be >= 0");
    if (steps < 0) throw std::invalid_argument("DidacticConfig: steps must be >= 0");
}

const std::array<SegmentSpec, kNumSegments>& DidacticParams::layout() {
    static const std::array<SegmentSpec, kNumSegments> specs = [] {
        std::array<SegmentSpec, kNumSegments> s{{
            {"h_w1", H, 1, 0}, {"h_b1", H, 1, 0}, {"h_w2", H, H, 0}, {"h_b2", H, 1, 0},
            {"v_w1", H, H, 0}, {"v_b1", H, 1, 0}, {"v_w2", 1, H, 0}, {"v_b2", 1, 1, 0},
            {"r_w1", H, H, 0}, {"r_b1", H, 1, 0}, {"r_w2", 1, H, 0}, {"r_b2", 1, 1, 0},
            {"p_wx", 4 * H, H, 0}, {"p_wh", 4 * H, H, 0}, {"p_b", 4 * H, 1, 0},
        }};
        int offset = 0;
        for (auto& spec : s) {
            spec.offset = offset;
            offset += spec.size();
        }
        return s;
    }();
    return specs;
}

int DidacticParams::total_size() {
    const auto& specs = layout();
    return specs.back().offset + specs.back().size();
}

DidacticParams DidacticParams::random_init(std::uint64_t seed) {
    Rng rng(seed);
    DidacticParams params;
    params.flat.assign(total_size(), 0.0);
    for (const SegmentSpec& spec : layout()) {
        bool is_bias = spec.cols == 1 && spec.rows != H * 4 && spec.name[2] == 'b';
        // biases are the *_b* segments; weights are fan-in scaled
        is_bias = std::string(spec.name).find("_b") != std::string::npos;
        if (is_bias) continue;
        double scale = 1.0 / std::sqrt(static_cast<double>(spec.cols));
        double* p = params.flat.data() + spec.offset;
        for (int i = 0; i < spec.size(); ++i) p[i] = scale * rng.normal();
    }
    return params;
}

BoundParams bind_params(Tape& tape, const DidacticParams& params) {
    BoundParams bound;
    const auto& specs = DidacticParams::layout();
    for (int seg = 0; seg < kNumSegments; ++seg)
        bound.ids[seg] = tape.leaf(params.flat.data() + specs[seg].offset, specs[seg].size());
    return bound;
}

int latent_node(Tape& tape, const BoundParams& bound, double s) {
    int input = tape.leaf(&s, 1);
    int hidden = tape.elu_op(
        tape.add(tape.matvec(bound.ids[kHW1], input, H, 1), bound.ids[kHB1]));
    int out = tape.add(tape.matvec(bound.ids[kHW2], hidden, H, H), bound.ids[kHB2]);
    return tape.tanh_op(out);
}

namespace {

int mlp_scalar(Tape& tape, const BoundParams& bound, int z, int w1, int b1, int w2, int b2) {
    int hidden = tape.elu_op(tape.add(tape.matvec(bound.ids[w1], z, H, H), bound.ids[b1]));
    return tape.add(tape.matvec(bound.ids[w2], hidden, 1, H), bound.ids[b2]);
}

}  // namespace

int value_node(Tape& tape, const BoundParams& bound, int z) {
    return mlp_scalar(tape, bound, z, kVW1, kVB1, kVW2, kVB2);
}

int reward_node(Tape& tape, const BoundParams& bound, int z) {
    return mlp_scalar(tape, bound, z, kRW1, kRB1, kRW2, kRB2);
}

int transition_node(Tape& tape, const BoundParams& bound, int z) {
    // Standard LSTM step with zero initial hidden and cell state; gate order
    // is [input; forget; candidate; output] along the stacked rows.
    int h_prev = tape.leaf_zeros(H);
    int c_prev = tape.leaf_zeros(H);
    int pre = tape.add(tape.add(tape.matvec(bound.ids[kPWx], z, 4 * H, H),
                                tape.matvec(bound.ids[kPWh], h_prev, 4 * H, H)),
                       bound.ids[kPB]);
    const double* pv = tape.values(pre);
    std::vector<double> slice(H);
    auto take = [&](int gate) {
        for (int i = 0; i < H; ++i) slice[i] = pv[gate * H + i];
        return tape.leaf(slice);
    };
    // Slicing through leaves would detach gradients, so rebuild the gate
    // pre-activations with masked matvecs instead: cheaper to just compute
    // the four gates from separate row blocks of the same parameters.
    (void)take;
    (void)pre;
    int in_gate = tape.sigmoid_op(gate_preact(tape, bound, z, h_prev, 0));
    int forget_gate = tape.sigmoid_op(gate_preact(tape, bound, z, h_prev, 1));
    int candidate = tape.tanh_op(gate_preact(tape, bound, z, h_prev, 2));
    int out_gate = tape.sigmoid_op(gate_preact(tape, bound, z, h_prev, 3));
    int cell = tape.add(tape.mul(forget_gate, c_prev), tape.mul(in_gate, candidate));
    return tape.mul(out_gate, tape.tanh_op(cell));
}

}  // namespace ivelab
