#pragma once

#include <cmath>
#include <functional>

#include "holocycle/nn/tensor.hpp"

namespace holo::nn {

// Reverse-mode autodiff on a linear tape. Nodes are appended in execution
// order, so walking the tape backwards is a valid topological order. Values
// and gradients are plain tensors; backward closures accumulate into parent
// gradients. Single precision carries training, double precision carries the
// finite-difference gradient oracles.

template <typename T>
class Tape;

template <typename T>
struct Var {
    Tape<T>* tape = nullptr;
    int id = -1;

    const Tensor<T>& val() const { return tape->value(id); }
    const Shape& shape() const { return tape->value(id).shape; }
};

template <typename T>
class Tape {
public:
    struct Node {
        Tensor<T> val;
        Tensor<T> grad;  // allocated on demand during backward
        std::function<void(Tape&, int)> back;
        bool needs_grad = false;
    };

    Var<T> leaf(Tensor<T> value, bool needs_grad = false) {
        nodes_.push_back(Node{std::move(value), {}, nullptr, needs_grad});
        return {this, static_cast<int>(nodes_.size()) - 1};
    }

    Var<T> constant(Tensor<T> value) { return leaf(std::move(value), false); }

    /// needs_grad is inherited from the parents.
    Var<T> make(Tensor<T> value, std::initializer_list<Var<T>> parents, std::function<void(Tape&, int)> back) {
        bool needs = false;
        for (const Var<T>& p : parents) needs = needs || nodes_[static_cast<size_t>(p.id)].needs_grad;
        nodes_.push_back(Node{std::move(value), {}, needs ? std::move(back) : nullptr, needs});
        return {this, static_cast<int>(nodes_.size()) - 1};
    }

    const Tensor<T>& value(int id) const { return nodes_[static_cast<size_t>(id)].val; }
    bool needs_grad(int id) const { return nodes_[static_cast<size_t>(id)].needs_grad; }

    /// For ops with multiple result nodes: the shared backward must live on the
    /// earliest-created node so every consumer has already run when it fires.
    void set_back(int id, std::function<void(Tape&, int)> back) { nodes_[static_cast<size_t>(id)].back = std::move(back); }

    /// Gradient buffer, zero-initialized on first access.
    Tensor<T>& grad(int id) {
        Node& n = nodes_[static_cast<size_t>(id)];
        if (n.grad.v.empty()) n.grad = Tensor<T>(n.val.shape);
        return n.grad;
    }
    Tensor<T>& grad(Var<T> v) { return grad(v.id); }

    /// Accumulate into a parent's gradient only if it participates.
    void accumulate(int id, const Tensor<T>& g) {
        if (!nodes_[static_cast<size_t>(id)].needs_grad) return;
        Tensor<T>& dst = grad(id);
        for (size_t i = 0; i < dst.v.size(); ++i) dst.v[i] += g.v[i];
    }

    void backward(Var<T> root) {
        Node& r = nodes_[static_cast<size_t>(root.id)];
        if (r.val.shape.count() != 1) throw ShapeError("backward root must be scalar, got " + r.val.shape.str());
        grad(root.id).v[0] = T(1);
        // Closures run even with an unallocated (all-zero) gradient so that
        // multi-output ops whose shared backward lives on one node still fire.
        for (int i = root.id; i >= 0; --i) {
            Node& n = nodes_[static_cast<size_t>(i)];
            if (n.needs_grad && n.back) n.back(*this, i);
        }
    }

    size_t size() const { return nodes_.size(); }

private:
    std::vector<Node> nodes_;
};

namespace detail {

template <typename T>
void check_same_shape(const Var<T>& a, const Var<T>& b, const char* op) {
    if (!(a.val().shape == b.val().shape))
        throw ShapeError(std::string(op) + ": shape mismatch " + a.val().shape.str() + " vs " + b.val().shape.str());
}

}  // namespace detail

// ---- elementwise arithmetic -------------------------------------------------

template <typename T>
Var<T> add(Var<T> a, Var<T> b) {
    detail::check_same_shape(a, b, "add");
    Tensor<T> out = a.val();
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.val().v[i];
    const int pa = a.id, pb = b.id;
    return a.tape->make(std::move(out), {a, b}, [pa, pb](Tape<T>& t, int self) {
        t.accumulate(pa, t.grad(self));
        t.accumulate(pb, t.grad(self));
    });
}

template <typename T>
Var<T> sub(Var<T> a, Var<T> b) {
    detail::check_same_shape(a, b, "sub");
    Tensor<T> out = a.val();
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.val().v[i];
    const int pa = a.id, pb = b.id;
    return a.tape->make(std::move(out), {a, b}, [pa, pb](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        t.accumulate(pa, g);
        if (t.needs_grad(pb)) {
            Tensor<T>& gb = t.grad(pb);
            for (size_t i = 0; i < gb.v.size(); ++i) gb.v[i] -= g.v[i];
        }
    });
}

template <typename T>
Var<T> mul(Var<T> a, Var<T> b) {
    detail::check_same_shape(a, b, "mul");
    Tensor<T> out = a.val();
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b.val().v[i];
    const int pa = a.id, pb = b.id;
    return a.tape->make(std::move(out), {a, b}, [pa, pb](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        if (t.needs_grad(pa)) {
            Tensor<T>& ga = t.grad(pa);
            const Tensor<T>& bv = t.value(pb);
            for (size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += g.v[i] * bv.v[i];
        }
        if (t.needs_grad(pb)) {
            Tensor<T>& gb = t.grad(pb);
            const Tensor<T>& av = t.value(pa);
            for (size_t i = 0; i < gb.v.size(); ++i) gb.v[i] += g.v[i] * av.v[i];
        }
    });
}

template <typename T>
Var<T> div(Var<T> a, Var<T> b) {
    detail::check_same_shape(a, b, "div");
    Tensor<T> out = a.val();
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] /= b.val().v[i];
    const int pa = a.id, pb = b.id;
    return a.tape->make(std::move(out), {a, b}, [pa, pb](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const Tensor<T>& av = t.value(pa);
        const Tensor<T>& bv = t.value(pb);
        if (t.needs_grad(pa)) {
            Tensor<T>& ga = t.grad(pa);
            for (size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += g.v[i] / bv.v[i];
        }
        if (t.needs_grad(pb)) {
            Tensor<T>& gb = t.grad(pb);
            for (size_t i = 0; i < gb.v.size(); ++i) gb.v[i] -= g.v[i] * av.v[i] / (bv.v[i] * bv.v[i]);
        }
    });
}

template <typename T>
Var<T> scale(Var<T> a, double s) {
    Tensor<T> out = a.val();
    for (T& x : out.v) x = static_cast<T>(x * s);
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa, s](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        Tensor<T>& ga = t.grad(pa);
        for (size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += static_cast<T>(g.v[i] * s);
    });
}

template <typename T>
Var<T> add_const(Var<T> a, double s) {
    Tensor<T> out = a.val();
    for (T& x : out.v) x = static_cast<T>(x + s);
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa](Tape<T>& t, int self) { t.accumulate(pa, t.grad(self)); });
}

/// s - a
template <typename T>
Var<T> sub_from(double s, Var<T> a) {
    Tensor<T> out = a.val();
    for (T& x : out.v) x = static_cast<T>(s - x);
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        if (!t.needs_grad(pa)) return;
        Tensor<T>& ga = t.grad(pa);
        for (size_t i = 0; i < ga.v.size(); ++i) ga.v[i] -= g.v[i];
    });
}

template <typename T>
Var<T> neg(Var<T> a) {
    return sub_from<T>(0.0, a);
}

// ---- elementwise nonlinearities --------------------------------------------

template <typename T>
Var<T> vabs(Var<T> a) {
    Tensor<T> out = a.val();
    for (T& x : out.v) x = std::abs(x);
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const Tensor<T>& av = t.value(pa);
        Tensor<T>& ga = t.grad(pa);
        for (size_t i = 0; i < ga.v.size(); ++i)
            ga.v[i] += av.v[i] > T(0) ? g.v[i] : (av.v[i] < T(0) ? -g.v[i] : T(0));
    });
}

template <typename T>
Var<T> square(Var<T> a) {
    Tensor<T> out = a.val();
    for (T& x : out.v) x = x * x;
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const Tensor<T>& av = t.value(pa);
        Tensor<T>& ga = t.grad(pa);
        for (size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += T(2) * av.v[i] * g.v[i];
    });
}

template <typename T>
Var<T> vsqrt(Var<T> a) {
    Tensor<T> out = a.val();
    for (T& x : out.v) x = std::sqrt(x);
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const Tensor<T>& ov = t.value(self);
        Tensor<T>& ga = t.grad(pa);
        for (size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += g.v[i] / (T(2) * ov.v[i]);
    });
}

/// max(a, m); the clamped branch passes zero gradient.
template <typename T>
Var<T> clamp_min(Var<T> a, double m) {
    Tensor<T> out = a.val();
    for (T& x : out.v) x = std::max(x, static_cast<T>(m));
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa, m](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const Tensor<T>& av = t.value(pa);
        Tensor<T>& ga = t.grad(pa);
        for (size_t i = 0; i < ga.v.size(); ++i)
            if (av.v[i] > static_cast<T>(m)) ga.v[i] += g.v[i];
    });
}

template <typename T>
Var<T> relu(Var<T> a) {
    Tensor<T> out = a.val();
    for (T& x : out.v) x = x > T(0) ? x : T(0);
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const Tensor<T>& av = t.value(pa);
        Tensor<T>& ga = t.grad(pa);
        for (size_t i = 0; i < ga.v.size(); ++i)
            if (av.v[i] > T(0)) ga.v[i] += g.v[i];
    });
}

template <typename T>
Var<T> leaky_relu(Var<T> a, double slope) {
    Tensor<T> out = a.val();
    for (T& x : out.v) x = x > T(0) ? x : static_cast<T>(slope * x);
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa, slope](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const Tensor<T>& av = t.value(pa);
        Tensor<T>& ga = t.grad(pa);
        for (size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += av.v[i] > T(0) ? g.v[i] : static_cast<T>(slope * g.v[i]);
    });
}

template <typename T>
Var<T> sigmoid(Var<T> a) {
    Tensor<T> out = a.val();
    for (T& x : out.v) x = T(1) / (T(1) + std::exp(-x));
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const Tensor<T>& ov = t.value(self);
        Tensor<T>& ga = t.grad(pa);
        for (size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += g.v[i] * ov.v[i] * (T(1) - ov.v[i]);
    });
}

/// log(1 + exp(a)), computed in the overflow-safe split form.
template <typename T>
Var<T> softplus(Var<T> a) {
    Tensor<T> out = a.val();
    for (T& x : out.v) x = x > T(0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const Tensor<T>& av = t.value(pa);
        Tensor<T>& ga = t.grad(pa);
        for (size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += g.v[i] / (T(1) + std::exp(-av.v[i]));
    });
}

// ---- reductions and layout --------------------------------------------------

template <typename T>
Var<T> sum_all(Var<T> a) {
    T acc = T(0);
    for (T x : a.val().v) acc += x;
    Tensor<T> out(Shape{1, 1, 1, 1});
    out.v[0] = acc;
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa](Tape<T>& t, int self) {
        const T g = t.grad(self).v[0];
        Tensor<T>& ga = t.grad(pa);
        for (T& x : ga.v) x += g;
    });
}

template <typename T>
Var<T> mean_all(Var<T> a) {
    return scale(sum_all(a), 1.0 / static_cast<double>(a.val().shape.count()));
}

/// Reduce H and W, keeping (N, C, 1, 1).
template <typename T>
Var<T> sum_hw(Var<T> a) {
    const Shape s = a.val().shape;
    Tensor<T> out(Shape{s.n, s.c, 1, 1});
    const size_t plane = static_cast<size_t>(s.h) * s.w;
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < s.c; ++c) {
            const T* p = a.val().plane(n, c);
            T acc = T(0);
            for (size_t i = 0; i < plane; ++i) acc += p[i];
            out.at(n, c, 0, 0) = acc;
        }
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa, s, plane](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        Tensor<T>& ga = t.grad(pa);
        for (int n = 0; n < s.n; ++n)
            for (int c = 0; c < s.c; ++c) {
                const T gv = g.at(n, c, 0, 0);
                T* p = ga.plane(n, c);
                for (size_t i = 0; i < plane; ++i) p[i] += gv;
            }
    });
}

template <typename T>
Var<T> concat_c(Var<T> a, Var<T> b) {
    const Shape sa = a.val().shape;
    const Shape sb = b.val().shape;
    if (sa.n != sb.n || sa.h != sb.h || sa.w != sb.w) throw ShapeError("concat_c: incompatible shapes");
    Tensor<T> out(Shape{sa.n, sa.c + sb.c, sa.h, sa.w});
    const size_t plane = static_cast<size_t>(sa.h) * sa.w;
    for (int n = 0; n < sa.n; ++n) {
        for (int c = 0; c < sa.c; ++c) std::copy_n(a.val().plane(n, c), plane, out.plane(n, c));
        for (int c = 0; c < sb.c; ++c) std::copy_n(b.val().plane(n, c), plane, out.plane(n, sa.c + c));
    }
    const int pa = a.id, pb = b.id;
    return a.tape->make(std::move(out), {a, b}, [pa, pb, sa, sb, plane](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        if (t.needs_grad(pa)) {
            Tensor<T>& ga = t.grad(pa);
            for (int n = 0; n < sa.n; ++n)
                for (int c = 0; c < sa.c; ++c) {
                    const T* src = g.plane(n, c);
                    T* dst = ga.plane(n, c);
                    for (size_t i = 0; i < plane; ++i) dst[i] += src[i];
                }
        }
        if (t.needs_grad(pb)) {
            Tensor<T>& gb = t.grad(pb);
            for (int n = 0; n < sb.n; ++n)
                for (int c = 0; c < sb.c; ++c) {
                    const T* src = g.plane(n, sa.c + c);
                    T* dst = gb.plane(n, c);
                    for (size_t i = 0; i < plane; ++i) dst[i] += src[i];
                }
        }
    });
}

template <typename T>
Var<T> channels(Var<T> a, int first, int count) {
    const Shape s = a.val().shape;
    if (first < 0 || first + count > s.c) throw ShapeError("channels: slice out of range");
    Tensor<T> out(Shape{s.n, count, s.h, s.w});
    const size_t plane = static_cast<size_t>(s.h) * s.w;
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < count; ++c) std::copy_n(a.val().plane(n, first + c), plane, out.plane(n, c));
    const int pa = a.id;
    return a.tape->make(std::move(out), {a}, [pa, s, first, count, plane](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        Tensor<T>& ga = t.grad(pa);
        for (int n = 0; n < s.n; ++n)
            for (int c = 0; c < count; ++c) {
                const T* src = g.plane(n, c);
                T* dst = ga.plane(n, first + c);
                for (size_t i = 0; i < plane; ++i) dst[i] += src[i];
            }
    });
}

/// Mean binary cross-entropy against a constant 0/1 target, on logits.
template <typename T>
Var<T> bce_with_logits_mean(Var<T> logits, double target) {
    // bce(l, t) = (1 - t) * l + softplus(-l)
    Var<T> loss = softplus(neg(logits));
    if (target < 1.0) loss = add(loss, scale(logits, 1.0 - target));
    return mean_all(loss);
}

}  // namespace holo::nn
