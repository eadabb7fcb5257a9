#include "holocycle/synth.hpp"

#include <algorithm>
#include <cmath>

#include "holocycle/io/manifest.hpp"
#include "holocycle/io/pfd.hpp"
#include "holocycle/rng.hpp"

namespace holo {

namespace {

// stream tags for deriving independent per-purpose RNG keys
enum Stream : uint64_t { kScene = 1, kFlat = 2, kNoise = 3, kStreamA = 0xA, kStreamB = 0xB };

char const* kObjectsDir = "objects";
char const* kHologramsDir = "holograms";

std::string frame_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d.pfd", index);
    return buf;
}

}  // namespace

bool ShapeSpec::covers(double px, double py) const {
    const double dx = px - center_x;
    const double dy = py - center_y;
    if (kind == ShapeKind::rectangle) return std::abs(dx) <= half_x && std::abs(dy) <= half_y;
    return dx * dx + dy * dy <= half_x * half_x;
}

SceneSpec sample_scene(uint64_t seed, const SceneParams& params) {
    if (params.n_max < 1) throw ConfigError("sample_scene: n_max must be >= 1");
    if (!(params.t_max > 0.0)) throw ConfigError("sample_scene: t_max must be positive");
    CounterRng rng(seed, kScene);
    SceneSpec scene;
    scene.frame = params.frame;
    scene.seed = seed;
    const int64_t count = rng.uniform_int(1, params.n_max);
    scene.shapes.reserve(static_cast<size_t>(count));
    for (int64_t i = 0; i < count; ++i) {
        ShapeSpec s;
        s.kind = rng.uniform_int(0, 1) == 0 ? ShapeKind::rectangle : ShapeKind::circle;
        s.center_x = rng.uniform(0.0, static_cast<double>(params.frame));
        s.center_y = rng.uniform(0.0, static_cast<double>(params.frame));
        s.half_x = rng.uniform(SceneParams::kMinHalfExtent, SceneParams::kMaxHalfExtent);
        s.half_y = s.kind == ShapeKind::rectangle ? rng.uniform(SceneParams::kMinHalfExtent, SceneParams::kMaxHalfExtent) : s.half_x;
        s.thickness = params.t_max * (1.0 - rng.uniform());  // uniform in (0, t_max]
        scene.shapes.push_back(s);
    }
    return scene;
}

double max_phase_thickness(const MaterialSpec& m, double wavelength) {
    const double k = 2.0 * std::numbers::pi / wavelength;
    return std::numbers::pi / (k * m.delta);
}

RealImage render_thickness(const SceneSpec& scene, double pixel_size, double clamp_max) {
    RealImage t(scene.frame, scene.frame, pixel_size, 0.0);
    for (const auto& s : scene.shapes) {
        // bounding box keeps the scan linear in covered area
        const int x0 = std::max(0, static_cast<int>(std::floor(s.center_x - s.half_x)));
        const int x1 = std::min(scene.frame - 1, static_cast<int>(std::ceil(s.center_x + s.half_x)));
        const int y0 = std::max(0, static_cast<int>(std::floor(s.center_y - (s.kind == ShapeKind::circle ? s.half_x : s.half_y))));
        const int y1 = std::min(scene.frame - 1, static_cast<int>(std::ceil(s.center_y + (s.kind == ShapeKind::circle ? s.half_x : s.half_y))));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                if (s.covers(x, y)) t.at(x, y) += s.thickness;
    }
    for (double& v : t.data) v = std::min(v, clamp_max);
    return t;
}

ComplexField transmissivity(const RealImage& thickness, const MaterialSpec& m, double wavelength,
                            const ComplexField& illumination) {
    require_same_grid(illumination, thickness);
    const double k = 2.0 * std::numbers::pi / wavelength;
    ComplexField out(illumination.width, illumination.height, illumination.pixel_size);
    for (size_t i = 0; i < out.data.size(); ++i) {
        const double t = thickness.data[i];
        if (t < 0.0) throw std::domain_error("transmissivity: negative thickness");
        out.data[i] = illumination.data[i] * std::polar(std::exp(-k * m.beta * t), -k * m.delta * t);
    }
    return out;
}

FlatFieldModel make_flat_field_model(int width, int height, double pixel_size, int n_modes, double coefficient_sigma) {
    if (n_modes < 0) throw ConfigError("flat-field model: n_modes must be >= 0");
    FlatFieldModel model;
    model.width = width;
    model.height = height;
    model.coefficient_sigma = coefficient_sigma;

    // (u, v) != (0, 0) ordered by (u+v, u); DCT-II sampling keeps the raw
    // products orthogonal, Gram-Schmidt below enforces exact orthonormality
    std::vector<std::pair<int, int>> orders;
    for (int s = 1; static_cast<int>(orders.size()) < n_modes; ++s)
        for (int u = 0; u <= s && static_cast<int>(orders.size()) < n_modes; ++u) orders.emplace_back(u, s - u);

    for (auto [u, v] : orders) {
        RealImage mode(width, height, pixel_size);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                mode.at(x, y) = std::cos(std::numbers::pi * u * (x + 0.5) / width) * std::cos(std::numbers::pi * v * (y + 0.5) / height);
        for (const auto& prev : model.modes) {
            double dot = 0.0;
            for (size_t i = 0; i < mode.data.size(); ++i) dot += mode.data[i] * prev.data[i];
            for (size_t i = 0; i < mode.data.size(); ++i) mode.data[i] -= dot * prev.data[i];
        }
        double nrm = 0.0;
        for (double x : mode.data) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm <= 0.0) throw std::domain_error("flat-field mode degenerated to zero");
        for (double& x : mode.data) x /= nrm;
        model.modes.push_back(std::move(mode));
    }
    return model;
}

ComplexField sample_flat_field(const FlatFieldModel& model, uint64_t seed) {
    CounterRng rng(seed, kFlat);
    std::vector<double> coeff(model.modes.size());
    for (double& c : coeff) c = model.coefficient_sigma * rng.normal();
    ComplexField out(model.width, model.height, model.modes.empty() ? 1.0 : model.modes.front().pixel_size);
    for (size_t i = 0; i < out.data.size(); ++i) {
        double a = 1.0;
        for (size_t m = 0; m < model.modes.size(); ++m) a += coeff[m] * model.modes[m].data[i];
        out.data[i] = {std::max(a, 0.05), 0.0};
    }
    return out;
}

RealImage simulate_hologram(const ComplexField& object, const OpticsConfig& cfg, const NoiseModel& noise, uint64_t seed) {
    RealImage ideal = forward_intensity(object, cfg);
    if (!noise.enabled) return ideal;
    if (!(noise.total_photons > 0.0)) throw ConfigError("noise model: total_photons must be positive");
    double sum = 0.0;
    for (double v : ideal.data) sum += v;
    if (sum <= 0.0) return ideal;
    const double scale = noise.total_photons / sum;
    const uint64_t pixel_key = derive_key(seed, kNoise);
    RealImage out(ideal.width, ideal.height, ideal.pixel_size);
    for (size_t i = 0; i < ideal.data.size(); ++i) {
        CounterRng rng(pixel_key, i);
        out.data[i] = static_cast<double>(rng.poisson(ideal.data[i] * scale)) / scale;
    }
    return out;
}

namespace {

struct FrameOutput {
    ComplexField object;
    RealImage hologram;
};

FrameOutput make_frame(uint64_t frame_key, const DatasetParams& p, const FlatFieldModel& flat) {
    const SceneSpec scene = sample_scene(frame_key, p.scene);
    const double clamp = max_phase_thickness(p.material, p.optics.wavelength());
    const RealImage t = render_thickness(scene, p.optics.pixel_size(), clamp);
    const ComplexField illum = sample_flat_field(flat, derive_key(frame_key, kFlat));
    FrameOutput out;
    out.object = transmissivity(t, p.material, p.optics.wavelength(), illum);
    out.hologram = simulate_hologram(out.object, p.optics, p.noise, derive_key(frame_key, kNoise));
    return out;
}

}  // namespace

DatasetPaths generate_dataset(const std::filesystem::path& out_dir, int n_frames, const DatasetParams& params,
                              uint64_t seed, Pairing pairing) {
    if (n_frames < 1) throw ConfigError("generate_dataset: n_frames must be >= 1");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir / kObjectsDir, ec);
    fs::create_directories(out_dir / kHologramsDir, ec);
    if (ec) throw IoError("cannot create dataset directories under " + out_dir.string());

    const FlatFieldModel flat =
        make_flat_field_model(params.scene.frame, params.scene.frame, params.optics.pixel_size(), params.flat_modes, params.flat_sigma);

    io::DatasetManifest m;
    m.pairing = pairing == Pairing::paired ? "paired" : "unpaired";
    m.n_frames = n_frames;
    m.seed = seed;
    m.wavelength = params.optics.wavelength();
    m.distance = params.optics.distance();
    m.pixel_size = params.optics.pixel_size();
    m.delta = params.material.delta;
    m.beta = params.material.beta;
    m.frame = params.scene.frame;
    m.n_max = params.scene.n_max;
    m.t_max = params.scene.t_max;
    m.flat_modes = params.flat_modes;
    m.flat_sigma = params.flat_sigma;
    m.total_photons = params.noise.total_photons;
    m.noise_enabled = params.noise.enabled;
    m.objects.resize(static_cast<size_t>(n_frames));
    m.holograms.resize(static_cast<size_t>(n_frames));

    const uint64_t key_a = pairing == Pairing::paired ? derive_key(seed, kStreamA) : derive_key(seed, kStreamA);
    const uint64_t key_b = pairing == Pairing::paired ? key_a : derive_key(seed, kStreamB);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_frames; ++i) {
        const std::string name = frame_name(i);
        const uint64_t seed_a = derive_key(key_a, static_cast<uint64_t>(i));
        const uint64_t seed_b = derive_key(key_b, static_cast<uint64_t>(i));
        if (pairing == Pairing::paired) {
            FrameOutput f = make_frame(seed_a, params, flat);
            io::write_pfd(out_dir / kObjectsDir / name, f.object);
            io::write_pfd(out_dir / kHologramsDir / name, f.hologram);
        } else {
            FrameOutput fa = make_frame(seed_a, params, flat);
            FrameOutput fb = make_frame(seed_b, params, flat);
            io::write_pfd(out_dir / kObjectsDir / name, fa.object);
            io::write_pfd(out_dir / kHologramsDir / name, fb.hologram);
        }
        m.objects[static_cast<size_t>(i)] = {i, std::string(kObjectsDir) + "/" + name, seed_a};
        m.holograms[static_cast<size_t>(i)] = {i, std::string(kHologramsDir) + "/" + name, seed_b};
    }

    DatasetPaths paths{out_dir, out_dir / "manifest.json"};
    io::write_manifest(paths.manifest, m);
    return paths;
}

}  // namespace holo
