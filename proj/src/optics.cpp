#include "holocycle/optics.hpp"

#include <cmath>
#include <limits>

#include "holocycle/fft.hpp"

namespace holo {

TransferFunction transfer_function(const OpticsConfig& cfg, int width, int height) {
    TransferFunction tf;
    tf.width = width;
    tf.height = height;
    tf.data.resize(static_cast<size_t>(width) * height);
    const double c = -std::numbers::pi * cfg.wavelength() * cfg.distance();
    for (int iy = 0; iy < height; ++iy) {
        const double fy = fft::freq(iy, height, cfg.pixel_size());
        for (int ix = 0; ix < width; ++ix) {
            const double fx = fft::freq(ix, width, cfg.pixel_size());
            tf.data[static_cast<size_t>(iy) * width + ix] = std::polar(1.0, c * (fx * fx + fy * fy));
        }
    }
    return tf;
}

ComplexField propagate(const ComplexField& field, const OpticsConfig& cfg) {
    if (field.data.size() != static_cast<size_t>(field.width) * field.height)
        throw ShapeError("field data length does not match width*height");
    const TransferFunction tf = transfer_function(cfg, field.width, field.height);
    ComplexField out(field.width, field.height, field.pixel_size);
    fft::dft2(field.data.data(), out.data.data(), field.width, field.height);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] *= tf.data[i];
    fft::idft2(out.data.data(), out.data.data(), field.width, field.height);
    return out;
}

RealImage forward_intensity(const ComplexField& field, const OpticsConfig& cfg) {
    return intensity(propagate(field, cfg));
}

FresnelReport fresnel_check(const OpticsConfig& cfg, int width) {
    FresnelReport r;
    r.grid_size = width;
    const double lz = cfg.wavelength() * std::abs(cfg.distance());
    r.sampling_ratio = lz / (cfg.pixel_size() * cfg.pixel_size());
    r.fresnel_number = lz > 0.0 ? cfg.pixel_size() * cfg.pixel_size() / lz : std::numeric_limits<double>::infinity();
    r.sampling_ok = r.sampling_ratio <= static_cast<double>(width);
    if (r.sampling_ok) {
        r.message = "sampling ok: lambda*z/px^2 = " + std::to_string(r.sampling_ratio) + " <= N = " + std::to_string(width);
    } else {
        r.message = "warning: transfer function undersampled, lambda*z/px^2 = " + std::to_string(r.sampling_ratio) +
                    " > N = " + std::to_string(width);
    }
    return r;
}

}  // namespace holo
