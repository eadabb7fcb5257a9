#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holocycle/errors.hpp"

namespace holo::nn {

/// Dense NCHW shape; unused axes stay 1.
struct Shape {
    int n = 1;
    int c = 1;
    int h = 1;
    int w = 1;

    int64_t count() const { return static_cast<int64_t>(n) * c * h * w; }
    bool operator==(const Shape&) const = default;
    std::string str() const {
        return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," + std::to_string(w) + ")";
    }
};

template <typename T>
struct Tensor {
    Shape shape;
    std::vector<T> v;

    Tensor() = default;
    explicit Tensor(Shape s, T fill = T(0)) : shape(s), v(static_cast<size_t>(s.count()), fill) {}

    T& at(int n_, int c_, int y, int x) {
        return v[((static_cast<size_t>(n_) * shape.c + c_) * shape.h + y) * shape.w + x];
    }
    const T& at(int n_, int c_, int y, int x) const {
        return v[((static_cast<size_t>(n_) * shape.c + c_) * shape.h + y) * shape.w + x];
    }

    T* plane(int n_, int c_) { return v.data() + (static_cast<size_t>(n_) * shape.c + c_) * shape.h * shape.w; }
    const T* plane(int n_, int c_) const { return v.data() + (static_cast<size_t>(n_) * shape.c + c_) * shape.h * shape.w; }
};

template <typename T>
Tensor<T> tensor_cast(const Tensor<double>& src) {
    Tensor<T> out(src.shape);
    for (size_t i = 0; i < src.v.size(); ++i) out.v[i] = static_cast<T>(src.v[i]);
    return out;
}

}  // namespace holo::nn
