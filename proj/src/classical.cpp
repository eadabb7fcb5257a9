#include "holocycle/classical.hpp"

#include <algorithm>
#include <cmath>

#include "holocycle/fft.hpp"
#include "holocycle/rng.hpp"

namespace holo {

double PaganinConfig::effective_mu() const {
    if (mu) return *mu;
    const double k = 2.0 * std::numbers::pi / wavelength;
    const double beta = delta / delta_over_beta;
    return 2.0 * k * beta;
}

PaganinConfig paganin_aps_preset() {
    PaganinConfig cfg;
    cfg.delta_over_beta = 1e3;
    cfg.distance = 5e-3;
    // hc = 1.23984198 keV*nm, E = 25.7 keV
    cfg.wavelength = 1.23984198e-9 / 25.7;
    return cfg;
}

PaganinResult paganin_reconstruct(const RealImage& hologram, const RealImage& flat, const PaganinConfig& cfg) {
    require_same_grid(hologram, flat);
    if (!(cfg.delta_over_beta > 0.0) || !(cfg.distance > 0.0) || !(cfg.wavelength > 0.0) || !(cfg.delta > 0.0))
        throw ConfigError("paganin: all parameters must be strictly positive");
    for (double v : hologram.data)
        if (v < 0.0) throw std::domain_error("paganin: hologram intensity must be nonnegative");
    for (double v : flat.data)
        if (!(v > 0.0)) throw std::domain_error("paganin: flat field must be strictly positive");

    const int w = hologram.width;
    const int h = hologram.height;
    std::vector<std::complex<double>> buf(hologram.data.size());
    for (size_t i = 0; i < buf.size(); ++i) buf[i] = {hologram.data[i] / flat.data[i], 0.0};
    fft::dft2(buf.data(), buf.data(), w, h);

    const double coeff = cfg.delta_over_beta * cfg.wavelength * cfg.distance * std::numbers::pi;
    for (int iy = 0; iy < h; ++iy) {
        const double fy = fft::freq(iy, h, hologram.pixel_size);
        for (int ix = 0; ix < w; ++ix) {
            const double fx = fft::freq(ix, w, hologram.pixel_size);
            // 1 + (delta/beta) * (lambda z / 4pi) * (2 pi f)^2
            buf[static_cast<size_t>(iy) * w + ix] /= 1.0 + coeff * (fx * fx + fy * fy);
        }
    }
    fft::idft2(buf.data(), buf.data(), w, h);

    const double mu = cfg.effective_mu();
    const double k = 2.0 * std::numbers::pi / cfg.wavelength;
    const double beta = cfg.delta / cfg.delta_over_beta;
    PaganinResult out{RealImage(w, h, hologram.pixel_size), RealImage(w, h, hologram.pixel_size),
                      RealImage(w, h, hologram.pixel_size), 0};
    for (size_t i = 0; i < buf.size(); ++i) {
        const double filtered = buf[i].real();
        double t;
        if (filtered > 0.0) {
            t = std::max(0.0, -std::log(filtered) / mu);
        } else {
            t = 0.0;
            ++out.clamped_pixels;
        }
        out.thickness.data[i] = t;
        out.phase.data[i] = -k * cfg.delta * t;
        out.attenuation.data[i] = std::exp(-k * beta * t);
    }
    return out;
}

namespace {

double tv_l1_objective(const std::vector<double>& u, const std::vector<double>& f, int w, int h, double lambda) {
    double obj = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            const double gx = x + 1 < w ? u[i + 1] - u[i] : 0.0;
            const double gy = y + 1 < h ? u[i + w] - u[i] : 0.0;
            obj += std::sqrt(gx * gx + gy * gy) + lambda * std::abs(u[i] - f[i]);
        }
    return obj;
}

}  // namespace

TvResult tv_denoise_l1(const RealImage& img, double lambda, int iterations) {
    if (iterations < 1) throw ConfigError("tv_denoise_l1: iterations must be >= 1");
    const int w = img.width;
    const int h = img.height;
    const size_t n = img.data.size();
    const double tau = 1.0 / std::sqrt(8.0);
    const double sigma = tau;

    const std::vector<double>& f = img.data;
    std::vector<double> u = f;
    std::vector<double> u_bar = f;
    std::vector<double> px(n, 0.0), py(n, 0.0);

    TvResult result;
    result.objective.reserve(static_cast<size_t>(iterations));
    std::vector<double> best = u;
    double best_obj = tv_l1_objective(u, f, w, h, lambda);

    for (int it = 0; it < iterations; ++it) {
        // dual ascent + projection onto the pointwise unit ball
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const size_t i = static_cast<size_t>(y) * w + x;
                const double gx = x + 1 < w ? u_bar[i + 1] - u_bar[i] : 0.0;
                const double gy = y + 1 < h ? u_bar[i + w] - u_bar[i] : 0.0;
                double qx = px[i] + sigma * gx;
                double qy = py[i] + sigma * gy;
                const double mag = std::sqrt(qx * qx + qy * qy);
                if (mag > 1.0) {
                    qx /= mag;
                    qy /= mag;
                }
                px[i] = qx;
                py[i] = qy;
            }
        // primal descent with the L1 data shrink, then over-relaxation
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const size_t i = static_cast<size_t>(y) * w + x;
                double div = 0.0;
                if (x + 1 < w) div += px[i];
                if (x > 0) div -= px[i - 1];
                if (y + 1 < h) div += py[i];
                if (y > 0) div -= py[i - w];
                const double v = u[i] + tau * div;
                const double d = v - f[i];
                double unew;
                if (d > tau * lambda)
                    unew = v - tau * lambda;
                else if (d < -tau * lambda)
                    unew = v + tau * lambda;
                else
                    unew = f[i];
                u_bar[i] = 2.0 * unew - u[i];
                u[i] = unew;
            }
        const double obj = tv_l1_objective(u, f, w, h, lambda);
        if (obj < best_obj) {
            best_obj = obj;
            best = u;
        }
        result.objective.push_back(best_obj);
    }

    result.image = RealImage(w, h, img.pixel_size);
    result.image.data = std::move(best);
    return result;
}

GsResult alternating_projection_retrieve(const RealImage& hologram, const OpticsConfig& cfg, const IterativeConfig& it_cfg) {
    if (it_cfg.iterations < 1) throw ConfigError("alternating projections: iterations must be >= 1");
    if (!(it_cfg.relaxation > 0.0 && it_cfg.relaxation <= 1.0)) throw ConfigError("alternating projections: relaxation must be in (0,1]");
    for (double v : hologram.data)
        if (v < 0.0) throw std::domain_error("alternating projections: intensity must be nonnegative");
    if (it_cfg.support) require_same_grid(hologram, *it_cfg.support);

    const int w = hologram.width;
    const int h = hologram.height;
    std::vector<double> modulus(hologram.data.size());
    for (size_t i = 0; i < modulus.size(); ++i) modulus[i] = std::sqrt(hologram.data[i]);

    ComplexField det(w, h, hologram.pixel_size);
    CounterRng rng(it_cfg.seed, 0x6a5u);
    for (size_t i = 0; i < det.data.size(); ++i)
        det.data[i] = std::polar(modulus[i], rng.uniform(0.0, 2.0 * std::numbers::pi));

    const OpticsConfig back = cfg.with_distance(-cfg.distance());
    GsResult result;
    result.residual.reserve(static_cast<size_t>(it_cfg.iterations));

    for (int it = 0; it < it_cfg.iterations; ++it) {
        ComplexField obj = propagate(det, back);
        ComplexField constrained = obj;
        for (size_t i = 0; i < constrained.data.size(); ++i) {
            if (it_cfg.support && (*it_cfg.support).data[i] == 0.0) {
                constrained.data[i] = {1.0, 0.0};  // vacuum outside the object
                continue;
            }
            if (it_cfg.amplitude_bounds) {
                const double a = std::abs(constrained.data[i]);
                const double clamped = std::clamp(a, it_cfg.amplitude_bounds->first, it_cfg.amplitude_bounds->second);
                if (a > 0.0 && clamped != a) constrained.data[i] *= clamped / a;
                if (a == 0.0 && clamped > 0.0) constrained.data[i] = {clamped, 0.0};
            }
        }
        if (it_cfg.relaxation < 1.0) {
            for (size_t i = 0; i < constrained.data.size(); ++i)
                constrained.data[i] = (1.0 - it_cfg.relaxation) * obj.data[i] + it_cfg.relaxation * constrained.data[i];
        }
        det = propagate(constrained, cfg);
        double res = 0.0;
        for (size_t i = 0; i < det.data.size(); ++i) {
            const double d = std::norm(det.data[i]) - hologram.data[i];
            res += d * d;
        }
        result.residual.push_back(std::sqrt(res));
        // detector projection: keep phase, impose the measured modulus
        for (size_t i = 0; i < det.data.size(); ++i) {
            const double a = std::abs(det.data[i]);
            det.data[i] = a > 0.0 ? det.data[i] * (modulus[i] / a) : std::complex<double>{modulus[i], 0.0};
        }
    }

    result.object = propagate(det, back);
    return result;
}

}  // namespace holo
