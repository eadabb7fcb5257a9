#pragma once

#include <Eigen/Dense>
#include <complex>

#include "holocycle/fft.hpp"
#include "holocycle/metrics.hpp"
#include "holocycle/nn/tape.hpp"

namespace holo::nn {

// Structured layers. Convolutions run as per-sample im2col + GEMM; the batch
// loop is OpenMP-parallel with each sample's output written by exactly one
// thread and cross-sample reductions (weight grads, batch stats) summed
// sequentially in index order, so results are bitwise independent of the
// thread count.

namespace detail {

template <typename T>
using MatRM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapRM = Eigen::Map<MatRM<T>>;
template <typename T>
using CMapRM = Eigen::Map<const MatRM<T>>;

template <typename T>
void im2col(const Tensor<T>& x, int n, int kh, int kw, int stride, int pad, int ho, int wo, T* col) {
    const Shape s = x.shape;
    const int64_t hw = static_cast<int64_t>(ho) * wo;
    for (int ci = 0; ci < s.c; ++ci) {
        const T* src = x.plane(n, ci);
        for (int ky = 0; ky < kh; ++ky)
            for (int kx = 0; kx < kw; ++kx) {
                T* dst = col + ((static_cast<int64_t>(ci) * kh + ky) * kw + kx) * hw;
                for (int oy = 0; oy < ho; ++oy) {
                    const int iy = oy * stride - pad + ky;
                    if (iy < 0 || iy >= s.h) {
                        for (int ox = 0; ox < wo; ++ox) dst[static_cast<int64_t>(oy) * wo + ox] = T(0);
                        continue;
                    }
                    for (int ox = 0; ox < wo; ++ox) {
                        const int ix = ox * stride - pad + kx;
                        dst[static_cast<int64_t>(oy) * wo + ox] = (ix >= 0 && ix < s.w) ? src[static_cast<int64_t>(iy) * s.w + ix] : T(0);
                    }
                }
            }
    }
}

template <typename T>
void col2im_add(const T* col, int c, int kh, int kw, int stride, int pad, int ho, int wo, Tensor<T>& dx, int n) {
    const Shape s = dx.shape;
    const int64_t hw = static_cast<int64_t>(ho) * wo;
    for (int ci = 0; ci < c; ++ci) {
        T* dst = dx.plane(n, ci);
        for (int ky = 0; ky < kh; ++ky)
            for (int kx = 0; kx < kw; ++kx) {
                const T* src = col + ((static_cast<int64_t>(ci) * kh + ky) * kw + kx) * hw;
                for (int oy = 0; oy < ho; ++oy) {
                    const int iy = oy * stride - pad + ky;
                    if (iy < 0 || iy >= s.h) continue;
                    for (int ox = 0; ox < wo; ++ox) {
                        const int ix = ox * stride - pad + kx;
                        if (ix >= 0 && ix < s.w) dst[static_cast<int64_t>(iy) * s.w + ix] += src[static_cast<int64_t>(oy) * wo + ox];
                    }
                }
            }
    }
}

}  // namespace detail

/// 2D convolution, weight (Cout, Cin, kh, kw), bias (1, Cout, 1, 1).
template <typename T>
Var<T> conv2d(Var<T> x, Var<T> weight, Var<T> bias, int stride, int pad) {
    const Shape xs = x.val().shape;
    const Shape ws = weight.val().shape;
    if (ws.c != xs.c) throw ShapeError("conv2d: weight expects " + std::to_string(ws.c) + " input channels, got " + std::to_string(xs.c));
    if (bias.val().shape.count() != ws.n) throw ShapeError("conv2d: bias size mismatch");
    const int ho = (xs.h + 2 * pad - ws.h) / stride + 1;
    const int wo = (xs.w + 2 * pad - ws.w) / stride + 1;
    if (ho < 1 || wo < 1) throw ShapeError("conv2d: kernel larger than padded input");

    const int64_t kk = static_cast<int64_t>(ws.c) * ws.h * ws.w;
    const int64_t hw = static_cast<int64_t>(ho) * wo;
    Tensor<T> out(Shape{xs.n, ws.n, ho, wo});
    {
        detail::CMapRM<T> wmat(weight.val().v.data(), ws.n, kk);
#pragma omp parallel for schedule(static)
        for (int n = 0; n < xs.n; ++n) {
            std::vector<T> col(static_cast<size_t>(kk) * hw);
            detail::im2col(x.val(), n, ws.h, ws.w, stride, pad, ho, wo, col.data());
            detail::CMapRM<T> cmat(col.data(), kk, hw);
            detail::MapRM<T> omat(out.plane(n, 0), ws.n, hw);
            omat.noalias() = wmat * cmat;
            for (int co = 0; co < ws.n; ++co) {
                const T b = bias.val().v[static_cast<size_t>(co)];
                T* p = out.plane(n, co);
                for (int64_t i = 0; i < hw; ++i) p[i] += b;
            }
        }
    }

    const int px = x.id, pw = weight.id, pb = bias.id;
    return x.tape->make(std::move(out), {x, weight, bias}, [px, pw, pb, xs, ws, stride, pad, ho, wo, kk, hw](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const bool need_x = t.needs_grad(px);
        const bool need_w = t.needs_grad(pw);
        const bool need_b = t.needs_grad(pb);
        std::vector<Tensor<T>> dw_local;
        if (need_w) dw_local.assign(static_cast<size_t>(xs.n), Tensor<T>(ws));
        Tensor<T>* dx = need_x ? &t.grad(px) : nullptr;
        const Tensor<T>& xv = t.value(px);
        detail::CMapRM<T> wmat(t.value(pw).v.data(), ws.n, kk);
#pragma omp parallel for schedule(static)
        for (int n = 0; n < xs.n; ++n) {
            std::vector<T> col(static_cast<size_t>(kk) * hw);
            detail::im2col(xv, n, ws.h, ws.w, stride, pad, ho, wo, col.data());
            detail::CMapRM<T> cmat(col.data(), kk, hw);
            detail::CMapRM<T> gmat(g.plane(n, 0), ws.n, hw);
            if (need_w) {
                detail::MapRM<T> dwmat(dw_local[static_cast<size_t>(n)].v.data(), ws.n, kk);
                dwmat.noalias() = gmat * cmat.transpose();
            }
            if (need_x) {
                std::vector<T> dcol(static_cast<size_t>(kk) * hw);
                detail::MapRM<T> dcmat(dcol.data(), kk, hw);
                dcmat.noalias() = wmat.transpose() * gmat;
                detail::col2im_add(dcol.data(), xs.c, ws.h, ws.w, stride, pad, ho, wo, *dx, n);
            }
        }
        if (need_w) {
            Tensor<T>& dw = t.grad(pw);
            for (int n = 0; n < xs.n; ++n)
                for (size_t i = 0; i < dw.v.size(); ++i) dw.v[i] += dw_local[static_cast<size_t>(n)].v[i];
        }
        if (need_b) {
            Tensor<T>& db = t.grad(pb);
            for (int n = 0; n < xs.n; ++n)
                for (int co = 0; co < ws.n; ++co) {
                    const T* p = g.plane(n, co);
                    T acc = T(0);
                    for (int64_t i = 0; i < hw; ++i) acc += p[i];
                    db.v[static_cast<size_t>(co)] += acc;
                }
        }
    });
}

/// Transposed convolution, weight (Cin, Cout, kh, kw), no padding.
template <typename T>
Var<T> conv_transpose2d(Var<T> x, Var<T> weight, Var<T> bias, int stride) {
    const Shape xs = x.val().shape;
    const Shape ws = weight.val().shape;
    if (ws.n != xs.c) throw ShapeError("conv_transpose2d: weight expects " + std::to_string(ws.n) + " input channels");
    const int ho = (xs.h - 1) * stride + ws.h;
    const int wo = (xs.w - 1) * stride + ws.w;
    const int co = ws.c;
    const int64_t ckk = static_cast<int64_t>(co) * ws.h * ws.w;
    const int64_t hw_in = static_cast<int64_t>(xs.h) * xs.w;

    Tensor<T> out(Shape{xs.n, co, ho, wo});
    {
        detail::CMapRM<T> wmat(weight.val().v.data(), xs.c, ckk);
#pragma omp parallel for schedule(static)
        for (int n = 0; n < xs.n; ++n) {
            std::vector<T> cols(static_cast<size_t>(ckk) * hw_in);
            detail::CMapRM<T> xmat(x.val().plane(n, 0), xs.c, hw_in);
            detail::MapRM<T> cmat(cols.data(), ckk, hw_in);
            cmat.noalias() = wmat.transpose() * xmat;
            for (int c = 0; c < co; ++c) {
                T* dst = out.plane(n, c);
                const T b = bias.val().v[static_cast<size_t>(c)];
                for (int64_t i = 0; i < static_cast<int64_t>(ho) * wo; ++i) dst[i] = b;
            }
            for (int c = 0; c < co; ++c)
                for (int ky = 0; ky < ws.h; ++ky)
                    for (int kx = 0; kx < ws.w; ++kx) {
                        const T* src = cols.data() + ((static_cast<int64_t>(c) * ws.h + ky) * ws.w + kx) * hw_in;
                        T* dst = out.plane(n, c);
                        for (int y = 0; y < xs.h; ++y)
                            for (int ix = 0; ix < xs.w; ++ix)
                                dst[static_cast<int64_t>(y * stride + ky) * wo + ix * stride + kx] += src[static_cast<int64_t>(y) * xs.w + ix];
                    }
        }
    }

    const int px = x.id, pw = weight.id, pb = bias.id;
    return x.tape->make(std::move(out), {x, weight, bias}, [px, pw, pb, xs, ws, stride, ho, wo, co, ckk, hw_in](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const bool need_x = t.needs_grad(px);
        const bool need_w = t.needs_grad(pw);
        const bool need_b = t.needs_grad(pb);
        std::vector<Tensor<T>> dw_local;
        if (need_w) dw_local.assign(static_cast<size_t>(xs.n), Tensor<T>(ws));
        Tensor<T>* dx = need_x ? &t.grad(px) : nullptr;
        const Tensor<T>& xv = t.value(px);
        detail::CMapRM<T> wmat(t.value(pw).v.data(), xs.c, ckk);
#pragma omp parallel for schedule(static)
        for (int n = 0; n < xs.n; ++n) {
            // gather dOut into column layout, then both grads are GEMMs
            std::vector<T> dcols(static_cast<size_t>(ckk) * hw_in);
            for (int c = 0; c < co; ++c)
                for (int ky = 0; ky < ws.h; ++ky)
                    for (int kx = 0; kx < ws.w; ++kx) {
                        T* dst = dcols.data() + ((static_cast<int64_t>(c) * ws.h + ky) * ws.w + kx) * hw_in;
                        const T* src = g.plane(n, c);
                        for (int y = 0; y < xs.h; ++y)
                            for (int ix = 0; ix < xs.w; ++ix)
                                dst[static_cast<int64_t>(y) * xs.w + ix] = src[static_cast<int64_t>(y * stride + ky) * wo + ix * stride + kx];
                    }
            detail::CMapRM<T> dcmat(dcols.data(), ckk, hw_in);
            if (need_x) {
                detail::MapRM<T> dxmat(dx->plane(n, 0), xs.c, hw_in);
                dxmat.noalias() += wmat * dcmat;
            }
            if (need_w) {
                detail::CMapRM<T> xmat(xv.plane(n, 0), xs.c, hw_in);
                detail::MapRM<T> dwmat(dw_local[static_cast<size_t>(n)].v.data(), xs.c, ckk);
                dwmat.noalias() = xmat * dcmat.transpose();
            }
        }
        if (need_w) {
            Tensor<T>& dw = t.grad(pw);
            for (int n = 0; n < xs.n; ++n)
                for (size_t i = 0; i < dw.v.size(); ++i) dw.v[i] += dw_local[static_cast<size_t>(n)].v[i];
        }
        if (need_b) {
            Tensor<T>& db = t.grad(pb);
            for (int n = 0; n < xs.n; ++n)
                for (int c = 0; c < co; ++c) {
                    const T* p = g.plane(n, c);
                    T acc = T(0);
                    for (int64_t i = 0; i < static_cast<int64_t>(ho) * wo; ++i) acc += p[i];
                    db.v[static_cast<size_t>(c)] += acc;
                }
        }
    });
}

/// 2x2 max pooling, stride 2. Ties resolve to the first element in scan order.
template <typename T>
Var<T> maxpool2(Var<T> x) {
    const Shape s = x.val().shape;
    if (s.h % 2 != 0 || s.w % 2 != 0) throw ShapeError("maxpool2: spatial dims must be even, got " + s.str());
    const int ho = s.h / 2, wo = s.w / 2;
    Tensor<T> out(Shape{s.n, s.c, ho, wo});
    auto argmax = std::make_shared<std::vector<int32_t>>(out.v.size());
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < s.c; ++c) {
            const T* src = x.val().plane(n, c);
            T* dst = out.plane(n, c);
            int32_t* am = argmax->data() + (static_cast<size_t>(n) * s.c + c) * ho * wo;
            for (int oy = 0; oy < ho; ++oy)
                for (int ox = 0; ox < wo; ++ox) {
                    int best = (2 * oy) * s.w + 2 * ox;
                    T bv = src[best];
                    const int cand[3] = {(2 * oy) * s.w + 2 * ox + 1, (2 * oy + 1) * s.w + 2 * ox, (2 * oy + 1) * s.w + 2 * ox + 1};
                    for (int k = 0; k < 3; ++k)
                        if (src[cand[k]] > bv) {
                            best = cand[k];
                            bv = src[cand[k]];
                        }
                    dst[oy * wo + ox] = bv;
                    am[oy * wo + ox] = best;
                }
        }
    const int px = x.id;
    return x.tape->make(std::move(out), {x}, [px, s, ho, wo, argmax](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        Tensor<T>& dx = t.grad(px);
        for (int n = 0; n < s.n; ++n)
            for (int c = 0; c < s.c; ++c) {
                const T* gp = g.plane(n, c);
                T* dp = dx.plane(n, c);
                const int32_t* am = argmax->data() + (static_cast<size_t>(n) * s.c + c) * ho * wo;
                for (int i = 0; i < ho * wo; ++i) dp[am[i]] += gp[i];
            }
    });
}

/// Running statistics owned by the layer, updated in training mode.
template <typename T>
struct BatchNormState {
    Tensor<T>* running_mean = nullptr;  // (1, C, 1, 1)
    Tensor<T>* running_var = nullptr;
    double momentum = 0.1;
    double eps = 1e-5;
};

template <typename T>
Var<T> batchnorm2d(Var<T> x, Var<T> gamma, Var<T> beta, BatchNormState<T> state, bool training, bool update_running = true) {
    const Shape s = x.val().shape;
    if (gamma.val().shape.count() != s.c || beta.val().shape.count() != s.c) throw ShapeError("batchnorm2d: affine size mismatch");
    const int64_t m = static_cast<int64_t>(s.n) * s.h * s.w;
    auto mean = std::make_shared<std::vector<T>>(static_cast<size_t>(s.c));
    auto inv_std = std::make_shared<std::vector<T>>(static_cast<size_t>(s.c));

    if (training) {
#pragma omp parallel for schedule(static)
        for (int c = 0; c < s.c; ++c) {
            T acc = T(0);
            for (int n = 0; n < s.n; ++n) {
                const T* p = x.val().plane(n, c);
                for (int64_t i = 0; i < static_cast<int64_t>(s.h) * s.w; ++i) acc += p[i];
            }
            const T mu = acc / static_cast<T>(m);
            T var = T(0);
            for (int n = 0; n < s.n; ++n) {
                const T* p = x.val().plane(n, c);
                for (int64_t i = 0; i < static_cast<int64_t>(s.h) * s.w; ++i) {
                    const T d = p[i] - mu;
                    var += d * d;
                }
            }
            var /= static_cast<T>(m);
            (*mean)[static_cast<size_t>(c)] = mu;
            (*inv_std)[static_cast<size_t>(c)] = T(1) / std::sqrt(var + static_cast<T>(state.eps));
            if (update_running && state.running_mean) {
                T& rm = state.running_mean->v[static_cast<size_t>(c)];
                T& rv = state.running_var->v[static_cast<size_t>(c)];
                rm = static_cast<T>((1.0 - state.momentum) * rm + state.momentum * mu);
                rv = static_cast<T>((1.0 - state.momentum) * rv + state.momentum * var);
            }
        }
    } else {
        for (int c = 0; c < s.c; ++c) {
            (*mean)[static_cast<size_t>(c)] = state.running_mean->v[static_cast<size_t>(c)];
            (*inv_std)[static_cast<size_t>(c)] =
                T(1) / std::sqrt(state.running_var->v[static_cast<size_t>(c)] + static_cast<T>(state.eps));
        }
    }

    Tensor<T> out(s);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < s.c; ++c) {
        const T mu = (*mean)[static_cast<size_t>(c)];
        const T is = (*inv_std)[static_cast<size_t>(c)];
        const T gm = gamma.val().v[static_cast<size_t>(c)];
        const T bt = beta.val().v[static_cast<size_t>(c)];
        for (int n = 0; n < s.n; ++n) {
            const T* src = x.val().plane(n, c);
            T* dst = out.plane(n, c);
            for (int64_t i = 0; i < static_cast<int64_t>(s.h) * s.w; ++i) dst[i] = gm * (src[i] - mu) * is + bt;
        }
    }

    const int px = x.id, pg = gamma.id, pb = beta.id;
    return x.tape->make(std::move(out), {x, gamma, beta}, [px, pg, pb, s, m, mean, inv_std, training](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        const Tensor<T>& xv = t.value(px);
        const Tensor<T>& gm = t.value(pg);
        const bool need_x = t.needs_grad(px);
        Tensor<T>* dx = need_x ? &t.grad(px) : nullptr;
        Tensor<T>* dgamma = t.needs_grad(pg) ? &t.grad(pg) : nullptr;
        Tensor<T>* dbeta = t.needs_grad(pb) ? &t.grad(pb) : nullptr;
#pragma omp parallel for schedule(static)
        for (int c = 0; c < s.c; ++c) {
            const T mu = (*mean)[static_cast<size_t>(c)];
            const T is = (*inv_std)[static_cast<size_t>(c)];
            T s1 = T(0), s2 = T(0);
            for (int n = 0; n < s.n; ++n) {
                const T* gp = g.plane(n, c);
                const T* xp = xv.plane(n, c);
                for (int64_t i = 0; i < static_cast<int64_t>(s.h) * s.w; ++i) {
                    s1 += gp[i];
                    s2 += gp[i] * (xp[i] - mu) * is;
                }
            }
            if (dbeta) dbeta->v[static_cast<size_t>(c)] += s1;
            if (dgamma) dgamma->v[static_cast<size_t>(c)] += s2;
            if (!need_x) continue;
            const T gmc = gm.v[static_cast<size_t>(c)];
            if (training) {
                for (int n = 0; n < s.n; ++n) {
                    const T* gp = g.plane(n, c);
                    const T* xp = xv.plane(n, c);
                    T* dp = dx->plane(n, c);
                    for (int64_t i = 0; i < static_cast<int64_t>(s.h) * s.w; ++i) {
                        const T xhat = (xp[i] - mu) * is;
                        dp[i] += gmc * is * (gp[i] - (s1 + xhat * s2) / static_cast<T>(m));
                    }
                }
            } else {
                for (int n = 0; n < s.n; ++n) {
                    const T* gp = g.plane(n, c);
                    T* dp = dx->plane(n, c);
                    for (int64_t i = 0; i < static_cast<int64_t>(s.h) * s.w; ++i) dp[i] += gmc * is * gp[i];
                }
            }
        }
    });
}

// ---- Fourier-domain ops ------------------------------------------------------

template <typename T>
struct CVar {
    Var<T> re, im;
};

namespace detail {

/// Apply an FFT plane-by-plane; `conj_kernel` selects the +sign transform.
template <typename T>
Tensor<T> fft_planes(const Tensor<T>& re, const Tensor<T>& im, bool conj_kernel, double post_scale, Tensor<T>& out_im) {
    const Shape s = re.shape;
    Tensor<T> out_re(s);
    out_im = Tensor<T>(s);
    const int planes = s.n * s.c;
#pragma omp parallel for schedule(static)
    for (int p = 0; p < planes; ++p) {
        const int64_t off = static_cast<int64_t>(p) * s.h * s.w;
        std::vector<std::complex<T>> buf(static_cast<size_t>(s.h) * s.w);
        for (size_t i = 0; i < buf.size(); ++i) buf[i] = {re.v[static_cast<size_t>(off) + i], im.v[static_cast<size_t>(off) + i]};
        if (conj_kernel)
            fft::dft2_conj(buf.data(), buf.data(), s.w, s.h);
        else
            fft::dft2(buf.data(), buf.data(), s.w, s.h);
        const T scale = static_cast<T>(post_scale);
        for (size_t i = 0; i < buf.size(); ++i) {
            out_re.v[static_cast<size_t>(off) + i] = buf[i].real() * scale;
            out_im.v[static_cast<size_t>(off) + i] = buf[i].imag() * scale;
        }
    }
    return out_re;
}

template <typename T>
CVar<T> dft_common(CVar<T> x, bool inverse) {
    Tape<T>& tape = *x.re.tape;
    detail::check_same_shape(x.re, x.im, "dft2c");
    const Shape s = x.re.val().shape;
    const double norm = 1.0 / (static_cast<double>(s.h) * s.w);

    Tensor<T> out_im;
    Tensor<T> out_re = fft_planes(x.re.val(), x.im.val(), inverse, inverse ? norm : 1.0, out_im);

    // Linear op: adjoint of the unnormalized -kernel DFT is the +kernel DFT
    // and vice versa; the 1/(W*H) of the inverse carries over unchanged.
    Var<T> vre = tape.make(std::move(out_re), {x.re, x.im}, nullptr);
    Var<T> vim = tape.make(std::move(out_im), {x.re, x.im}, nullptr);
    const int pre = x.re.id, pim = x.im.id, sre = vre.id, sim = vim.id;
    tape.set_back(sre, [pre, pim, sre, sim, inverse, norm](Tape<T>& t, int) {
        const Tensor<T>& gre = t.grad(sre);
        const Tensor<T>& gim = t.grad(sim);
        Tensor<T> bim;
        Tensor<T> bre = fft_planes(gre, gim, !inverse, inverse ? norm : 1.0, bim);
        t.accumulate(pre, bre);
        t.accumulate(pim, bim);
    });
    return {vre, vim};
}

}  // namespace detail

/// Forward DFT of a complex pair, plane by plane (unnormalized).
template <typename T>
CVar<T> dft2c(CVar<T> x) {
    return detail::dft_common(x, false);
}

/// Normalized inverse DFT of a complex pair.
template <typename T>
CVar<T> idft2c(CVar<T> x) {
    return detail::dft_common(x, true);
}

template <typename T>
CVar<T> cmul(CVar<T> a, CVar<T> b) {
    return {sub(mul(a.re, b.re), mul(a.im, b.im)), add(mul(a.re, b.im), mul(a.im, b.re))};
}

template <typename T>
Var<T> cabs2(CVar<T> a) {
    return add(square(a.re), square(a.im));
}

/// Constant propagator factor for batched (N,1,H,W) complex planes.
template <typename T>
struct PropagatorPlanes {
    Tensor<T> re, im;  // (1,1,H,W)
};

template <typename T>
PropagatorPlanes<T> propagator_planes(const TransferFunction& tf) {
    PropagatorPlanes<T> p{Tensor<T>(Shape{1, 1, tf.height, tf.width}), Tensor<T>(Shape{1, 1, tf.height, tf.width})};
    for (size_t i = 0; i < tf.data.size(); ++i) {
        p.re.v[i] = static_cast<T>(tf.data[i].real());
        p.im.v[i] = static_cast<T>(tf.data[i].imag());
    }
    return p;
}

namespace detail {

/// Broadcast a (1,1,H,W) constant across (N,C,H,W).
template <typename T>
Tensor<T> tile_nc(const Tensor<T>& plane, int n, int c) {
    Tensor<T> out(Shape{n, c, plane.shape.h, plane.shape.w});
    const size_t hw = static_cast<size_t>(plane.shape.h) * plane.shape.w;
    for (int i = 0; i < n * c; ++i) std::copy_n(plane.v.data(), hw, out.v.data() + static_cast<size_t>(i) * hw);
    return out;
}

}  // namespace detail

/// Fresnel propagation of a batched complex pair: IDFT(DFT(x) * H).
template <typename T>
CVar<T> propagate_c(CVar<T> x, const PropagatorPlanes<T>& h) {
    Tape<T>& tape = *x.re.tape;
    const Shape s = x.re.val().shape;
    if (s.h != h.re.shape.h || s.w != h.re.shape.w) throw ShapeError("propagate_c: transfer function size mismatch");
    CVar<T> spec = dft2c(x);
    CVar<T> hvar{tape.constant(detail::tile_nc(h.re, s.n, s.c)), tape.constant(detail::tile_nc(h.im, s.n, s.c))};
    return idft2c(cmul(spec, hvar));
}

/// Sum over integer frequency rings: (N,C,H,W) -> (N,C,1,R).
template <typename T>
Var<T> ring_sum(Var<T> x, const RingMap& rings) {
    const Shape s = x.val().shape;
    if (s.h != rings.height || s.w != rings.width) throw ShapeError("ring_sum: ring map size mismatch");
    Tensor<T> out(Shape{s.n, s.c, 1, rings.n_rings});
    const size_t hw = static_cast<size_t>(s.h) * s.w;
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < s.c; ++c) {
            const T* src = x.val().plane(n, c);
            T* dst = out.plane(n, c);
            for (size_t i = 0; i < hw; ++i) {
                const int32_t r = rings.ring_of[i];
                if (r >= 0) dst[r] += src[i];
            }
        }
    const int px = x.id;
    const RingMap* rm = &rings;
    return x.tape->make(std::move(out), {x}, [px, s, rm, hw](Tape<T>& t, int self) {
        const Tensor<T>& g = t.grad(self);
        Tensor<T>& dx = t.grad(px);
        for (int n = 0; n < s.n; ++n)
            for (int c = 0; c < s.c; ++c) {
                const T* gp = g.plane(n, c);
                T* dp = dx.plane(n, c);
                for (size_t i = 0; i < hw; ++i) {
                    const int32_t r = rm->ring_of[i];
                    if (r >= 0) dp[i] += gp[r];
                }
            }
    });
}

}  // namespace holo::nn
