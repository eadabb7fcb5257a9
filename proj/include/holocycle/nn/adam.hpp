#pragma once

#include "holocycle/nn/params.hpp"

namespace holo::nn {

/// ADAM with betas (0.5, 0.999), the usual GAN setting.
template <typename T>
class Adam {
public:
    explicit Adam(double beta1 = 0.5, double beta2 = 0.999, double eps = 1e-8)
        : beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void attach(const ParamStore<T>& store) {
        slots_.clear();
        for (const auto& e : store.entries()) slots_.push_back(e.trainable ? Slot{Tensor<T>(e.value.shape), Tensor<T>(e.value.shape)} : Slot{});
        step_count_ = 0;
    }

    /// grads[i] may be null for non-trainable entries.
    void step(ParamStore<T>& store, const std::vector<const Tensor<T>*>& grads, double lr) {
        if (slots_.size() != store.size()) throw ConfigError("adam: optimizer not attached to this store");
        ++step_count_;
        const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_count_));
        const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_count_));
        for (size_t i = 0; i < store.size(); ++i) {
            auto& e = store.entries()[i];
            if (!e.trainable || grads[i] == nullptr) continue;
            Slot& s = slots_[i];
            const Tensor<T>& g = *grads[i];
            for (size_t k = 0; k < e.value.v.size(); ++k) {
                const double gv = static_cast<double>(g.v[k]);
                const double m = beta1_ * static_cast<double>(s.m.v[k]) + (1.0 - beta1_) * gv;
                const double v = beta2_ * static_cast<double>(s.v.v[k]) + (1.0 - beta2_) * gv * gv;
                s.m.v[k] = static_cast<T>(m);
                s.v.v[k] = static_cast<T>(v);
                e.value.v[k] -= static_cast<T>(lr * (m / bc1) / (std::sqrt(v / bc2) + eps_));
            }
        }
    }

    long step_count() const { return step_count_; }
    void set_step_count(long t) { step_count_ = t; }

    struct Slot {
        Tensor<T> m, v;
    };
    std::vector<Slot>& slots() { return slots_; }
    const std::vector<Slot>& slots() const { return slots_; }

private:
    double beta1_, beta2_, eps_;
    long step_count_ = 0;
    std::vector<Slot> slots_;
};

}  // namespace holo::nn
