#pragma once

#include "holocycle/nn/ops.hpp"
#include "holocycle/nn/params.hpp"

namespace holo::nn {

/// U-Net layout: per level two 3x3 convs + ReLU, 2x2 max-pool downsampling
/// with channel doubling, transposed-conv upsampling with skip concatenation,
/// and a 1x1 output head. Spatial size is preserved end to end.
struct GeneratorSpec {
    int in_channels = 1;
    int out_channels = 2;
    int depth = 3;          // pooling levels (paper scale: 5)
    int base_channels = 16;  // paper scale: 64

    int size_multiple() const { return 1 << depth; }
};

template <typename T>
class UNet {
public:
    UNet(GeneratorSpec spec, uint64_t init_seed) : spec_(spec) {
        if (spec.depth < 1) throw ConfigError("unet: depth must be >= 1");
        if (spec.in_channels < 1 || spec.out_channels < 1) throw ConfigError("unet: bad channel counts");
        uint64_t stream = 0;
        auto conv = [&](const std::string& name, int cin, int cout, int k) {
            ConvRef ref;
            ref.w = params_.add(name + ".w", kaiming_init<T>(Shape{cout, cin, k, k}, cin * k * k, init_seed, ++stream));
            ref.b = params_.add(name + ".b", Tensor<T>(Shape{1, cout, 1, 1}));
            return ref;
        };
        auto tconv = [&](const std::string& name, int cin, int cout) {
            ConvRef ref;
            ref.w = params_.add(name + ".w", kaiming_init<T>(Shape{cin, cout, 2, 2}, cin * 4, init_seed, ++stream));
            ref.b = params_.add(name + ".b", Tensor<T>(Shape{1, cout, 1, 1}));
            return ref;
        };

        int ch = spec.base_channels;
        enc_.push_back({conv("enc0.conv1", spec.in_channels, ch, 3), conv("enc0.conv2", ch, ch, 3)});
        for (int level = 1; level < spec.depth; ++level) {
            const std::string p = "enc" + std::to_string(level);
            enc_.push_back({conv(p + ".conv1", ch, ch * 2, 3), conv(p + ".conv2", ch * 2, ch * 2, 3)});
            ch *= 2;
        }
        bottom_ = {conv("bottom.conv1", ch, ch * 2, 3), conv("bottom.conv2", ch * 2, ch * 2, 3)};
        ch *= 2;
        for (int level = spec.depth - 1; level >= 0; --level) {
            const std::string p = "dec" + std::to_string(level);
            DecoderLevel d;
            d.up = tconv(p + ".up", ch, ch / 2);
            d.conv1 = conv(p + ".conv1", ch, ch / 2, 3);
            d.conv2 = conv(p + ".conv2", ch / 2, ch / 2, 3);
            dec_.push_back(d);
            ch /= 2;
        }
        head_ = conv("head", ch, spec.out_channels, 1);
    }

    Var<T> forward(Tape<T>& tape, const BoundParams<T>& bp, Var<T> x) const {
        const Shape s = x.val().shape;
        if (s.c != spec_.in_channels)
            throw ShapeError("unet: expected " + std::to_string(spec_.in_channels) + " input channels, got " + std::to_string(s.c));
        if (s.h % spec_.size_multiple() != 0 || s.w % spec_.size_multiple() != 0)
            throw ShapeError("unet: spatial size " + s.str() + " not divisible by " + std::to_string(spec_.size_multiple()));
        (void)tape;

        auto apply = [&](const ConvRef& c, Var<T> v, int pad) {
            return conv2d(v, bp.vars[static_cast<size_t>(c.w)], bp.vars[static_cast<size_t>(c.b)], 1, pad);
        };

        std::vector<Var<T>> skips;
        Var<T> cur = x;
        for (const auto& level : enc_) {
            cur = relu(apply(level.conv1, cur, 1));
            cur = relu(apply(level.conv2, cur, 1));
            skips.push_back(cur);
            cur = maxpool2(cur);
        }
        cur = relu(apply(bottom_.conv1, cur, 1));
        cur = relu(apply(bottom_.conv2, cur, 1));
        for (size_t i = 0; i < dec_.size(); ++i) {
            const DecoderLevel& d = dec_[i];
            cur = conv_transpose2d(cur, bp.vars[static_cast<size_t>(d.up.w)], bp.vars[static_cast<size_t>(d.up.b)], 2);
            cur = concat_c(cur, skips[skips.size() - 1 - i]);
            cur = relu(apply(d.conv1, cur, 1));
            cur = relu(apply(d.conv2, cur, 1));
        }
        return apply(head_, cur, 0);
    }

    ParamStore<T>& params() { return params_; }
    const ParamStore<T>& params() const { return params_; }
    const GeneratorSpec& spec() const { return spec_; }

private:
    struct ConvRef {
        int w = -1;
        int b = -1;
    };
    struct EncoderLevel {
        ConvRef conv1, conv2;
    };
    struct DecoderLevel {
        ConvRef up, conv1, conv2;
    };

    GeneratorSpec spec_;
    ParamStore<T> params_;
    std::vector<EncoderLevel> enc_;
    EncoderLevel bottom_;
    std::vector<DecoderLevel> dec_;
    ConvRef head_;
};

}  // namespace holo::nn
