#include "ivelab/tape.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace ivelab {

int Tape::alloc(Op op, int size, int a, int b) {
    Node node;
    node.op = op;
    node.a = a;
    node.b = b;
    node.size = size;
    node.offset = static_cast<int>(val_.size());
    val_.resize(val_.size() + size);
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
}

int Tape::leaf(const std::vector<double>& values) {
    return leaf(values.data(), static_cast<int>(values.size()));
}

int Tape::leaf(const double* values, int size) {
    int id = alloc(Op::kLeaf, size, -1, -1);
    std::memcpy(&val_[nodes_[id].offset], values, sizeof(double) * size);
    return id;
}

int Tape::leaf_zeros(int size) {
    int id = alloc(Op::kLeaf, size, -1, -1);
    std::memset(&val_[nodes_[id].offset], 0, sizeof(double) * size);
    return id;
}

int Tape::matvec(int w, int x, int rows, int cols) {
    if (nodes_[w].size != rows * cols || nodes_[x].size != cols)
        throw std::invalid_argument("matvec: shape mismatch");
    int id = alloc(Op::kMatVec, rows, w, x);
    nodes_[id].rows = rows;
    nodes_[id].cols = cols;
    const double* wm = values(w);
    const double* xv = values(x);
    double* out = &val_[nodes_[id].offset];
    for (int i = 0; i < rows; ++i) {
        double acc = 0.0;
        const double* row = wm + static_cast<std::size_t>(i) * cols;
        for (int j = 0; j < cols; ++j) acc += row[j] * xv[j];
        out[i] = acc;
    }
    return id;
}

namespace {
void require_same_size(int sa, int sb, const char* what) {
    if (sa != sb) throw std::invalid_argument(std::string(what) + ": size mismatch");
}
}  // namespace

int Tape::add(int a, int b) {
    require_same_size(nodes_[a].size, nodes_[b].size, "add");
    int n = nodes_[a].size;
    int id = alloc(Op::kAdd, n, a, b);
    const double* av = values(a);
    const double* bv = values(b);
    double* out = &val_[nodes_[id].offset];
    for (int i = 0; i < n; ++i) out[i] = av[i] + bv[i];
    return id;
}

int Tape::sub(int a, int b) {
    require_same_size(nodes_[a].size, nodes_[b].size, "sub");
    int n = nodes_[a].size;
    int id = alloc(Op::kSub, n, a, b);
    const double* av = values(a);
    const double* bv = values(b);
    double* out = &val_[nodes_[id].offset];
    for (int i = 0; i < n; ++i) out[i] = av[i] - bv[i];
    return id;
}

int Tape::mul(int a, int b) {
    require_same_size(nodes_[a].size, nodes_[b].size, "mul");
    int n = nodes_[a].size;
    int id = alloc(Op::kMul, n, a, b);
    const double* av = values(a);
    const double* bv = values(b);
    double* out = &val_[nodes_[id].offset];
    for (int i = 0; i < n; ++i) out[i] = av[i] * bv[i];
    return id;
}

int Tape::scale(int a, double c) {
    int n = nodes_[a].size;
    int id = alloc(Op::kScale, n, a, -1);
    nodes_[id].c = c;
    const double* av = values(a);
    double* out = &val_[nodes_[id].offset];
    for (int i = 0; i < n; ++i) out[i] = c * av[i];
    return id;
}

int Tape::slice(int a, int offset, int size) {
    if (offset < 0 || size < 0 || offset + size > nodes_[a].size)
        throw std::invalid_argument("slice: out of range");
    int id = alloc(Op::kSlice, size, a, -1);
    nodes_[id].src_offset = offset;
    const double* av = &val_[nodes_[a].offset];
    double* out = &val_[nodes_[id].offset];
    for (int i = 0; i < size; ++i) out[i] = av[offset + i];
    return id;
}

int Tape::tanh_op(int a) {
    int n = nodes_[a].size;
    int id = alloc(Op::kTanh, n, a, -1);
    const double* av = values(a);
    double* out = &val_[nodes_[id].offset];
    for (int i = 0; i < n; ++i) out[i] = std::tanh(av[i]);
    return id;
}

int Tape::sigmoid_op(int a) {
    int n = nodes_[a].size;
    int id = alloc(Op::kSigmoid, n, a, -1);
    const double* av = values(a);
    double* out = &val_[nodes_[id].offset];
    for (int i = 0; i < n; ++i) out[i] = 1.0 / (1.0 + std::exp(-av[i]));
    return id;
}

int Tape::elu_op(int a) {
    int n = nodes_[a].size;
    int id = alloc(Op::kElu, n, a, -1);
    const double* av = values(a);
    double* out = &val_[nodes_[id].offset];
    for (int i = 0; i < n; ++i) out[i] = av[i] > 0.0 ? av[i] : std::exp(av[i]) - 1.0;
    return id;
}

double Tape::value_scalar(int id) const {
    if (nodes_[id].size != 1) throw std::invalid_argument("value_scalar: node is not scalar");
    return val_[nodes_[id].offset];
}

void Tape::backward(int root) {
    if (root < 0 || root >= node_count()) throw std::invalid_argument("backward: bad root");
    if (nodes_[root].size != 1) throw std::invalid_argument("backward: root must be scalar");
    grad_.assign(val_.size(), 0.0);
    grad_[nodes_[root].offset] = 1.0;
    for (int id = root; id >= 0; --id) {
        const Node& node = nodes_[id];
        const double* g = &grad_[node.offset];
        switch (node.op) {
            case Op::kLeaf: break;
            case Op::kMatVec: {
                const double* wm = &val_[nodes_[node.a].offset];
                const double* xv = &val_[nodes_[node.b].offset];
                double* gw = &grad_[nodes_[node.a].offset];
                double* gx = &grad_[nodes_[node.b].offset];
                for (int i = 0; i < node.rows; ++i) {
                    double gi = g[i];
                    if (gi == 0.0) continue;
                    const double* row = wm + static_cast<std::size_t>(i) * node.cols;
                    double* grow = gw + static_cast<std::size_t>(i) * node.cols;
                    for (int j = 0; j < node.cols; ++j) {
                        grow[j] += gi * xv[j];
                        gx[j] += gi * row[j];
                    }
                }
                break;
            }
            case Op::kAdd: {
                double* ga = &grad_[nodes_[node.a].offset];
                double* gb = &grad_[nodes_[node.b].offset];
                for (int i = 0; i < node.size; ++i) {
                    ga[i] += g[i];
                    gb[i] += g[i];
                }
                break;
            }
            case Op::kSub: {
                double* ga = &grad_[nodes_[node.a].offset];
                double* gb = &grad_[nodes_[node.b].offset];
                for (int i = 0; i < node.size; ++i) {
                    ga[i] += g[i];
                    gb[i] -= g[i];
                }
                break;
            }
            case Op::kMul: {
                const double* av = &val_[nodes_[node.a].offset];
                const double* bv = &val_[nodes_[node.b].offset];
                double* ga = &grad_[nodes_[node.a].offset];
                double* gb = &grad_[nodes_[node.b].offset];
                for (int i = 0; i < node.size; ++i) {
                    ga[i] += g[i] * bv[i];
                    gb[i] += g[i] * av[i];
                }
                break;
            }
            case Op::kScale: {
                double* ga = &grad_[nodes_[node.a].offset];
                for (int i = 0; i < node.size; ++i) ga[i] += node.c * g[i];
                break;
            }
            case Op::kSlice: {
                double* ga = &grad_[nodes_[node.a].offset];
                for (int i = 0; i < node.size; ++i) ga[node.src_offset + i] += g[i];
                break;
            }
            case Op::kTanh: {
                const double* ov = &val_[node.offset];
                double* ga = &grad_[nodes_[node.a].offset];
                for (int i = 0; i < node.size; ++i) ga[i] += g[i] * (1.0 - ov[i] * ov[i]);
                break;
            }
            case Op::kSigmoid: {
                const double* ov = &val_[node.offset];
                double* ga = &grad_[nodes_[node.a].offset];
                for (int i = 0; i < node.size; ++i) ga[i] += g[i] * ov[i] * (1.0 - ov[i]);
                break;
            }
            case Op::kElu: {
                const double* av = &val_[nodes_[node.a].offset];
                const double* ov = &val_[node.offset];
                double* ga = &grad_[nodes_[node.a].offset];
                for (int i = 0; i < node.size; ++i)
                    ga[i] += g[i] * (av[i] > 0.0 ? 1.0 : ov[i] + 1.0);
                break;
            }
        }
    }
}

void Tape::reset() {
    nodes_.clear();
    val_.clear();
    grad_.clear();
}

}  // namespace ivelab
