#pragma once

#include <unordered_map>

#include "holocycle/nn/tape.hpp"
#include "holocycle/rng.hpp"

namespace holo::nn {

/// Ordered, named parameter container. Non-trainable entries hold layer state
/// (batch-norm running statistics); everything is checkpointed.
template <typename T>
class ParamStore {
public:
    struct Entry {
        std::string name;
        Tensor<T> value;
        bool trainable = true;
    };

    int add(std::string name, Tensor<T> init, bool trainable = true) {
        if (by_name_.count(name)) throw ConfigError("duplicate parameter name " + name);
        by_name_.emplace(name, entries_.size());
        entries_.push_back(Entry{std::move(name), std::move(init), trainable});
        return static_cast<int>(entries_.size()) - 1;
    }

    Tensor<T>& value(int idx) { return entries_[static_cast<size_t>(idx)].value; }
    const Tensor<T>& value(int idx) const { return entries_[static_cast<size_t>(idx)].value; }
    Tensor<T>& value(const std::string& name) { return entries_[by_name_.at(name)].value; }

    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<Entry>& entries() { return entries_; }
    size_t size() const { return entries_.size(); }

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, size_t> by_name_;
};

/// Per-tape binding of a store: each trainable entry becomes one leaf Var,
/// shared across every use of the network on that tape (so cycle losses that
/// apply a generator twice accumulate into a single gradient).
template <typename T>
struct BoundParams {
    std::vector<Var<T>> vars;
};

template <typename T>
BoundParams<T> bind_params(Tape<T>& tape, const ParamStore<T>& store, bool with_grad) {
    BoundParams<T> bound;
    bound.vars.reserve(store.size());
    for (const auto& e : store.entries()) bound.vars.push_back(tape.leaf(e.value, with_grad && e.trainable));
    return bound;
}

/// Kaiming-style normal init, std = sqrt(2 / fan_in), deterministic in seed.
template <typename T>
Tensor<T> kaiming_init(Shape shape, int fan_in, uint64_t seed, uint64_t stream) {
    CounterRng rng(seed, stream);
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    Tensor<T> t(shape);
    for (T& x : t.v) x = static_cast<T>(stddev * rng.normal());
    return t;
}

}  // namespace holo::nn
