#pragma once

#include <vector>

namespace ivelab {

// Reverse-mode differentiation over tensor-valued nodes. Values are computed
// eagerly as nodes are recorded; backward() replays the record in reverse.
// Node storage lives in flat arenas so reset() can reuse capacity across
// training steps. Creation order is the topological order, since operands
// must exist before use.
class Tape {
  public:
    // A fresh node holding the given values; the usual entry point for
    // parameters, inputs and constants.
    int leaf(const std::vector<double>& values);
    int leaf(const double* values, int size);
    int leaf_zeros(int size);

    // out = W x for W stored row-major as rows x cols, x of length cols.
    int matvec(int w, int x, int rows, int cols);

    // Elementwise; operands must have equal sizes.
    int add(int a, int b);
    int sub(int a, int b);
    int mul(int a, int b);

    // out = c * a.
    int scale(int a, double c);

    // Contiguous sub-vector a[offset .. offset + size).
    int slice(int a, int offset, int size);

    // Elementwise nonlinearities.
    int tanh_op(int a);
    int sigmoid_op(int a);
    int elu_op(int a);  // alpha = 1

    // Accumulates d(root)/d(node) into every node's gradient slot. The root
    // must be a scalar (size-1) node.
    void backward(int root);

    int size(int id) const { return nodes_[id].size; }
    const double* values(int id) const { return &val_[nodes_[id].offset]; }
    const double* grads(int id) const { return &grad_[nodes_[id].offset]; }
    double value_scalar(int id) const;

    int node_count() const { return static_cast<int>(nodes_.size()); }

    // Drops all nodes but keeps arena capacity.
    void reset();

  private:
    enum class Op { kLeaf, kMatVec, kAdd, kSub, kMul, kScale, kSlice, kTanh, kSigmoid, kElu };

    struct Node {
        Op op;
        int a = -1;
        int b = -1;
        int offset = 0;
        int size = 0;
        int rows = 0;  // MatVec only
        int cols = 0;
        int src_offset = 0;  // Slice only
        double c = 0.0;      // Scale only
    };

    int alloc(Op op, int size, int a, int b);

    std::vector<Node> nodes_;
    std::vector<double> val_;
    std::vector<double> grad_;
};

}  // namespace ivelab
