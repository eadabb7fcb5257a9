#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>

#include "holocycle/field.hpp"
#include "holocycle/optics.hpp"

namespace holo {

/// Complex index of refraction n = 1 - delta + j*beta.
struct MaterialSpec {
    double delta = 1e-3;
    double beta = 1e-6;
};

enum class ShapeKind { rectangle, circle };

/// One randomized shape. Circles use half_x as the radius; half_y is unused.
struct ShapeSpec {
    ShapeKind kind = ShapeKind::rectangle;
    double center_x = 0.0;  // pixels, continuous
    double center_y = 0.0;
    double half_x = 0.0;  // pixels
    double half_y = 0.0;
    double thickness = 0.0;  // meters

    bool covers(double px, double py) const;
};

struct SceneSpec {
    int frame = 256;
    uint64_t seed = 0;
    std::vector<ShapeSpec> shapes;

    bool operator==(const SceneSpec&) const = default;
};

struct SceneParams {
    int frame = 256;
    int n_max = 25;
    double t_max = 1e-8;  // meters
    // geometry ranges are fixed: half extents / radii uniform in [4, 64] px,
    // centers uniform over the frame, shapes may crop at the edge
    static constexpr double kMinHalfExtent = 4.0;
    static constexpr double kMaxHalfExtent = 64.0;
};

/// Deterministic in seed: shape count uniform in [1, n_max], kinds uniform,
/// thickness uniform in (0, t_max], geometry uniform within the frame.
SceneSpec sample_scene(uint64_t seed, const SceneParams& params);

/// Thickness cap that keeps the object phase k*delta*t within [0, pi].
double max_phase_thickness(const MaterialSpec& m, double wavelength);

/// Sum of covering shape thicknesses per pixel, clamped to clamp_max.
RealImage render_thickness(const SceneSpec& scene, double pixel_size,
                           double clamp_max = std::numeric_limits<double>::infinity());

/// Projection approximation: Psi = illumination * exp(-k*beta*t) * exp(-j*k*delta*t).
/// The unobservable vacuum factor exp(jkt) is dropped.
ComplexField transmissivity(const RealImage& thickness, const MaterialSpec& m, double wavelength,
                            const ComplexField& illumination);

/// Frame-to-frame illumination model: orthonormal low-order cosine modes with
/// Gaussian coefficients around a unit background.
struct FlatFieldModel {
    int width = 0;
    int height = 0;
    double coefficient_sigma = 0.05;
    std::vector<RealImage> modes;  // mutually orthonormal under the pixel inner product

    int n_modes() const { return static_cast<int>(modes.size()); }
};

FlatFieldModel make_flat_field_model(int width, int height, double pixel_size, int n_modes = 15,
                                     double coefficient_sigma = 0.05);

/// amplitude = 1 + sum_m c_m * mode_m with c_m ~ N(0, sigma), clamped to >= 0.05;
/// zero phase; deterministic in seed.
ComplexField sample_flat_field(const FlatFieldModel& model, uint64_t seed);

struct NoiseModel {
    double total_photons = 6.6e7;  // expected counts per frame
    bool enabled = true;
};

/// Propagate to the detector, scale so the expected count total equals
/// total_photons, draw per-pixel Poisson counts (stream split per pixel),
/// and rescale back. Noise disabled returns the exact propagated intensity.
RealImage simulate_hologram(const ComplexField& object, const OpticsConfig& cfg, const NoiseModel& noise, uint64_t seed);

enum class Pairing { paired, unpaired };

struct DatasetParams {
    SceneParams scene;
    MaterialSpec material;
    OpticsConfig optics{1e-10, 0.1, 1e-6};
    int flat_modes = 15;
    double flat_sigma = 0.05;
    NoiseModel noise;
};

struct DatasetPaths {
    std::filesystem::path root;
    std::filesystem::path manifest;
};

/// Write a dataset directory: objects/NNNNNN.pfd, holograms/NNNNNN.pfd and a
/// manifest.json recording every parameter and per-frame seed. Unpaired mode
/// draws objects and holograms from disjoint scene-seed streams.
DatasetPaths generate_dataset(const std::filesystem::path& out_dir, int n_frames, const DatasetParams& params,
                              uint64_t seed, Pairing pairing);

}  // namespace holo
