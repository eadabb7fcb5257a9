#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "holocycle/errors.hpp"

namespace holo {

// Grid convention, binding for every module and for file I/O:
// row-major storage, origin at the top-left pixel, index = y * width + x.
// Complex samples are stored interleaved (re, im); std::complex<double>
// guarantees exactly that layout. All physics runs in double precision.

/// Discretized complex wavefront on a square-pixel grid.
struct ComplexField {
    int width = 0;
    int height = 0;
    double pixel_size = 0.0;  // meters
    std::vector<std::complex<double>> data;

    ComplexField() = default;
    ComplexField(int w, int h, double px, std::complex<double> fill = {0.0, 0.0});

    std::complex<double>& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    const std::complex<double>& at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return data.size(); }
};

/// Nonnegative-or-signed real 2D array (intensity, thickness, or phase map).
struct RealImage {
    int width = 0;
    int height = 0;
    double pixel_size = 0.0;  // meters
    std::vector<double> data;

    RealImage() = default;
    RealImage(int w, int h, double px, double fill = 0.0);

    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    const double& at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return data.size(); }
};

/// Wavelength/distance/pixel triple; distance may be negative (back-propagation).
class OpticsConfig {
public:
    OpticsConfig(double wavelength, double distance, double pixel_size);

    double wavelength() const { return wavelength_; }
    double distance() const { return distance_; }
    double pixel_size() const { return pixel_size_; }
    double wavenumber() const { return 2.0 * std::numbers::pi / wavelength_; }

    OpticsConfig with_distance(double z) const { return {wavelength_, z, pixel_size_}; }

private:
    double wavelength_;
    double distance_;
    double pixel_size_;
};

void validate(const ComplexField& f);
void validate(const RealImage& im);
void require_same_grid(const ComplexField& a, const ComplexField& b);
void require_same_grid(const RealImage& a, const RealImage& b);
void require_same_grid(const ComplexField& a, const RealImage& b);

/// data[p] = amplitude[p] * exp(j * phase[p]). Amplitude must be nonnegative.
ComplexField from_amp_phase(const RealImage& amplitude, const RealImage& phase);

/// output[p] = |field[p]|^2.
RealImage intensity(const ComplexField& field);

/// Sum over pixels of |data[p]|^2.
double energy(const ComplexField& field);

RealImage amplitude(const ComplexField& field);
RealImage phase(const ComplexField& field);

}  // namespace holo
