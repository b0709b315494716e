#pragma once

#include "glyphlab/tensor.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace glyphlab::denoiser {

// One value in the dynamically built compute graph. Gradients are allocated
// lazily and accumulated by Tape::backward.
struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;

    void ensure_grad() {
        if (grad.shape != value.shape) grad = Tensor(value.shape);
    }
};

using NodePtr = std::shared_ptr<Node>;

// Reverse-mode tape. Operations compute values eagerly and record a backward
// closure; backward() replays the closures in reverse build order, which is
// a valid reverse-topological order for an eagerly built graph.
class Tape {
public:
    NodePtr leaf(const Tensor& value, bool requires_grad);

    // y = W x + b over [C,H,W] maps. Kernel 3x3 pad 1 (stride 1 or 2) or
    // 1x1 stride 1, selected by the weight shape [Cout,Cin,K,K].
    NodePtr conv2d(const NodePtr& x, const NodePtr& w, const NodePtr& b, int stride = 1);

    // GroupNorm over [C,H,W] with per-channel gamma/beta, eps 1e-5.
    NodePtr group_norm(const NodePtr& x, const NodePtr& gamma, const NodePtr& beta, int groups);

    NodePtr silu(const NodePtr& x);

    NodePtr add(const NodePtr& a, const NodePtr& b);
    NodePtr scale(const NodePtr& a, double s);

    // Channel-wise concatenation of [Ca,H,W] and [Cb,H,W].
    NodePtr concat_ch(const NodePtr& a, const NodePtr& b);

    // Nearest-neighbor 2x upsample of [C,H,W].
    NodePtr upsample_nearest2x(const NodePtr& x);

    // y = W x (+ b) for vectors; W is [out,in], b may be null.
    NodePtr linear(const NodePtr& w, const NodePtr& b, const NodePtr& x);

    NodePtr concat_vec(const NodePtr& a, const NodePtr& b);
    NodePtr slice_vec(const NodePtr& x, int offset, int len);

    // Per-channel affine modulation: y[c,:,:] = x[c,:,:] * (1 + s[c]) + t[c].
    NodePtr film(const NodePtr& x, const NodePtr& scale_vec, const NodePtr& shift_vec);

    // Single-head softmax attention over spatial positions of [C,H,W]
    // q, k, v; scores scaled by 1/sqrt(C).
    NodePtr attention(const NodePtr& q, const NodePtr& k, const NodePtr& v);

    // Mean squared error against a constant target; returns a [1] node.
    NodePtr mse(const NodePtr& pred, const Tensor& target);

    // Seeds d(root)/d(root) = 1 and propagates. root must be a [1] node.
    void backward(const NodePtr& root);

    std::size_t size() const { return back_ops_.size(); }

private:
    std::vector<std::function<void()>> back_ops_;

    NodePtr make(Tensor value, bool requires_grad);
};

}  // namespace glyphlab::denoiser
