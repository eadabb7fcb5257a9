#pragma once

#include "holocycle/nn/ops.hpp"
#include "holocycle/nn/params.hpp"

namespace holo::nn {

/// Patch discriminator: 4x4 convs with filter doubling, batch norm after each
/// conv except the first, leaky-ReLU slope 0.2, and a 1-channel patch head.
/// The first (layers-1) convs use stride 2, the last stride 1, as does the
/// head; at paper scale (layers 4, base 64) a 256x256 input yields the 30x30
/// patch map with a 70x70 receptive field.
struct DiscriminatorSpec {
    int in_channels = 1;
    int layers = 3;         // paper scale: 4
    int base_filters = 16;  // paper scale: 64
    double leaky_slope = 0.2;

    /// Patch-map edge size for a given input edge: conv arithmetic
    /// s -> floor((s - 4 + 2) / stride) + 1 per layer plus the head.
    int patch_size(int input) const {
        int s = input;
        for (int i = 0; i < layers; ++i) {
            const int stride = i < layers - 1 ? 2 : 1;
            s = (s - 4 + 2) / stride + 1;
        }
        return (s - 4 + 2) / 1 + 1;  // head conv
    }
};

template <typename T>
class PatchDiscriminator {
public:
    PatchDiscriminator(DiscriminatorSpec spec, uint64_t init_seed) : spec_(spec) {
        if (spec.layers < 2) throw ConfigError("discriminator: layers must be >= 2");
        uint64_t stream = 1000;
        int cin = spec.in_channels;
        int filters = spec.base_filters;
        for (int i = 0; i < spec.layers; ++i) {
            Layer l;
            const std::string p = "conv" + std::to_string(i);
            l.w = params_.add(p + ".w", kaiming_init<T>(Shape{filters, cin, 4, 4}, cin * 16, init_seed, ++stream));
            l.b = params_.add(p + ".b", Tensor<T>(Shape{1, filters, 1, 1}));
            l.stride = i < spec.layers - 1 ? 2 : 1;
            if (i > 0) {
                l.bn_gamma = params_.add(p + ".bn.gamma", Tensor<T>(Shape{1, filters, 1, 1}, T(1)));
                l.bn_beta = params_.add(p + ".bn.beta", Tensor<T>(Shape{1, filters, 1, 1}));
                l.bn_mean = params_.add(p + ".bn.running_mean", Tensor<T>(Shape{1, filters, 1, 1}), false);
                l.bn_var = params_.add(p + ".bn.running_var", Tensor<T>(Shape{1, filters, 1, 1}, T(1)), false);
            }
            layers_.push_back(l);
            cin = filters;
            filters *= 2;
        }
        head_w_ = params_.add("head.w", kaiming_init<T>(Shape{1, cin, 4, 4}, cin * 16, init_seed, ++stream));
        head_b_ = params_.add("head.b", Tensor<T>(Shape{1, 1, 1, 1}));
    }

    /// Patch map of logits (no sigmoid); losses apply the stable BCE form.
    Var<T> forward(Tape<T>& tape, const BoundParams<T>& bp, Var<T> x, bool training, bool update_running = true) {
        (void)tape;
        Var<T> cur = x;
        for (const auto& l : layers_) {
            cur = conv2d(cur, bp.vars[static_cast<size_t>(l.w)], bp.vars[static_cast<size_t>(l.b)], l.stride, 1);
            if (l.bn_gamma >= 0) {
                BatchNormState<T> state;
                state.running_mean = &params_.value(l.bn_mean);
                state.running_var = &params_.value(l.bn_var);
                cur = batchnorm2d(cur, bp.vars[static_cast<size_t>(l.bn_gamma)], bp.vars[static_cast<size_t>(l.bn_beta)], state,
                                  training, update_running);
            }
            cur = leaky_relu(cur, spec_.leaky_slope);
        }
        return conv2d(cur, bp.vars[static_cast<size_t>(head_w_)], bp.vars[static_cast<size_t>(head_b_)], 1, 1);
    }

    ParamStore<T>& params() { return params_; }
    const ParamStore<T>& params() const { return params_; }
    const DiscriminatorSpec& spec() const { return spec_; }

private:
    struct Layer {
        int w = -1, b = -1;
        int bn_gamma = -1, bn_beta = -1, bn_mean = -1, bn_var = -1;
        int stride = 2;
    };

    DiscriminatorSpec spec_;
    ParamStore<T> params_;
    std::vector<Layer> layers_;
    int head_w_ = -1;
    int head_b_ = -1;
};

}  // namespace holo::nn
