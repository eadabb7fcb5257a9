#pragma once

#include <string>

#include "holocycle/field.hpp"

namespace holo {

/// Fourier-domain factor of the paraxial near-field propagator.
/// Pure phase: |data[f]| == 1 for every frequency bin.
struct TransferFunction {
    int width = 0;
    int height = 0;
    std::vector<std::complex<double>> data;  // over the wrapped DFT frequency grid

    const std::complex<double>& at(int fx, int fy) const { return data[static_cast<size_t>(fy) * width + fx]; }
};

/// H[fx,fy] = exp(-j*pi*lambda*z*(fx^2 + fy^2)) on the standard DFT frequency
/// grid f = index/(N*pixel_size) with negative frequencies wrapped. The
/// unobservable global factor exp(jkz) is omitted.
TransferFunction transfer_function(const OpticsConfig& cfg, int width, int height);

/// IDFT( DFT(field) * H ). Linear, unitary, periodic boundaries.
ComplexField propagate(const ComplexField& field, const OpticsConfig& cfg);

/// |propagate(field)|^2 at the detector plane.
RealImage forward_intensity(const ComplexField& field, const OpticsConfig& cfg);

/// Sampling diagnostics for the transfer-function discretization.
/// Out-of-regime configurations are flagged as warnings, never hard errors.
struct FresnelReport {
    double sampling_ratio = 0.0;       // lambda*z / pixel_size^2, must stay <= N
    double fresnel_number = 0.0;       // pixel_size^2 / (lambda*z); +inf at z=0
    int grid_size = 0;
    bool sampling_ok = true;
    std::string message;
};

FresnelReport fresnel_check(const OpticsConfig& cfg, int width);

}  // namespace holo
