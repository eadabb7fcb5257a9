#include "holocycle/field.hpp"

#include <cmath>

namespace holo {

namespace {

void check_dims(int w, int h, double px) {
    if (w < 2 || h < 2) throw ShapeError("grid must be at least 2x2, got " + std::to_string(w) + "x" + std::to_string(h));
    if (!(px > 0.0)) throw ShapeError("pixel_size must be positive, got " + std::to_string(px));
}

}  // namespace

ComplexField::ComplexField(int w, int h, double px, std::complex<double> fill) : width(w), height(h), pixel_size(px) {
    check_dims(w, h, px);
    data.assign(static_cast<size_t>(w) * h, fill);
}

RealImage::RealImage(int w, int h, double px, double fill) : width(w), height(h), pixel_size(px) {
    check_dims(w, h, px);
    data.assign(static_cast<size_t>(w) * h, fill);
}

OpticsConfig::OpticsConfig(double wavelength, double distance, double pixel_size)
    : wavelength_(wavelength), distance_(distance), pixel_size_(pixel_size) {
    if (!(wavelength > 0.0)) throw ConfigError("wavelength must be positive");
    if (!(pixel_size > 0.0)) throw ConfigError("pixel_size must be positive");
    if (!std::isfinite(distance)) throw ConfigError("distance must be finite");
}

void validate(const ComplexField& f) {
    check_dims(f.width, f.height, f.pixel_size);
    if (f.data.size() != static_cast<size_t>(f.width) * f.height) throw ShapeError("field data length does not match width*height");
    for (const auto& z : f.data)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::domain_error("field contains non-finite samples");
}

void validate(const RealImage& im) {
    check_dims(im.width, im.height, im.pixel_size);
    if (im.data.size() != static_cast<size_t>(im.width) * im.height) throw ShapeError("image data length does not match width*height");
    for (double v : im.data)
        if (!std::isfinite(v)) throw std::domain_error("image contains non-finite samples");
}

namespace {
template <typename A, typename B>
void same_grid(const A& a, const B& b) {
    if (a.width != b.width || a.height != b.height)
        throw ShapeError("grid mismatch: " + std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                         std::to_string(b.width) + "x" + std::to_string(b.height));
}
}  // namespace

void require_same_grid(const ComplexField& a, const ComplexField& b) { same_grid(a, b); }
void require_same_grid(const RealImage& a, const RealImage& b) { same_grid(a, b); }
void require_same_grid(const ComplexField& a, const RealImage& b) { same_grid(a, b); }

ComplexField from_amp_phase(const RealImage& amplitude, const RealImage& phase) {
    require_same_grid(amplitude, phase);
    for (double a : amplitude.data)
        if (a < 0.0) throw std::domain_error("amplitude must be nonnegative");
    ComplexField out(amplitude.width, amplitude.height, amplitude.pixel_size);
    for (size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = std::polar(amplitude.data[i], phase.data[i]);
    return out;
}

RealImage intensity(const ComplexField& field) {
    RealImage out(field.width, field.height, field.pixel_size);
    for (size_t i = 0; i < field.data.size(); ++i) out.data[i] = std::norm(field.data[i]);
    return out;
}

double energy(const ComplexField& field) {
    double sum = 0.0;
    for (const auto& z : field.data) sum += std::norm(z);
    return sum;
}

RealImage amplitude(const ComplexField& field) {
    RealImage out(field.width, field.height, field.pixel_size);
    for (size_t i = 0; i < field.data.size(); ++i) out.data[i] = std::abs(field.data[i]);
    return out;
}

RealImage phase(const ComplexField& field) {
    RealImage out(field.width, field.height, field.pixel_size);
    for (size_t i = 0; i < field.data.size(); ++i) out.data[i] = std::arg(field.data[i]);
    return out;
}

}  // namespace holo
