#pragma once

#include <cstdint>
#include <optional>

#include "holocycle/field.hpp"
#include "holocycle/optics.hpp"

namespace holo {

/// Single-material phase retrieval settings. mu defaults to 2*k*beta with
/// beta inferred from delta and delta_over_beta; pass mu directly to override.
struct PaganinConfig {
    double delta_over_beta = 1e3;
    double distance = 0.1;    // meters
    double wavelength = 1e-10;  // meters
    double delta = 1e-3;
    std::optional<double> mu;  // 1/meters

    double effective_mu() const;
};

/// §4-style preset: 25.7 keV photons, z = 5 mm, delta/beta = 1e3.
PaganinConfig paganin_aps_preset();

struct PaganinResult {
    RealImage thickness;    // meters, clamped at 0
    RealImage phase;        // -k*delta*t
    RealImage attenuation;  // exp(-k*beta*t)
    long clamped_pixels = 0;  // filtered values <= 0 forced to zero thickness
};

/// t = -(1/mu) * ln( IDFT[ DFT(I/flat) / (1 + (delta/beta)*(lambda*z/(4*pi))*|2*pi*f|^2) ] ).
PaganinResult paganin_reconstruct(const RealImage& hologram, const RealImage& flat, const PaganinConfig& cfg);

struct TvResult {
    RealImage image;
    std::vector<double> objective;  // monitored objective of the returned sequence, one entry per iteration
};

/// Approximate minimizer of TV(u) + lambda*||u - img||_1 by the first-order
/// primal-dual scheme with tau = sigma = 1/sqrt(8), isotropic TV.
/// The iterate with the lowest objective seen so far is kept, so the
/// monitored objective sequence is non-increasing.
TvResult tv_denoise_l1(const RealImage& img, double lambda = 1.5, int iterations = 100);

struct IterativeConfig {
    int iterations = 200;
    std::optional<RealImage> support;  // binary mask; outside: unit transmission
    std::optional<std::pair<double, double>> amplitude_bounds;
    double relaxation = 1.0;  // in (0, 1]; 1 = plain alternating projections
    uint64_t seed = 0;        // for the random starting phase
};

struct GsResult {
    ComplexField object;            // object-plane field after the final detector projection
    std::vector<double> residual;   // per-iteration || |P psi|^2 - I ||_2
};

/// Alternating projections between object constraints and the measured
/// detector modulus, starting from amplitude sqrt(I) with random phase.
GsResult alternating_projection_retrieve(const RealImage& hologram, const OpticsConfig& cfg, const IterativeConfig& it_cfg);

}  // namespace holo
