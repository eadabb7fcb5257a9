#include "holocycle/io/manifest.hpp"

#include <fstream>

#include <json.hpp>

namespace holo::io {

using nlohmann::json;

namespace {

json frames_to_json(const std::vector<FrameEntry>& frames) {
    json arr = json::array();
    for (const auto& f : frames) arr.push_back({{"index", f.index}, {"file", f.file}, {"scene_seed", f.scene_seed}});
    return arr;
}

std::vector<FrameEntry> frames_from_json(const json& arr) {
    std::vector<FrameEntry> out;
    for (const auto& j : arr) {
        FrameEntry f;
        f.index = j.at("index").get<int>();
        f.file = j.at("file").get<std::string>();
        f.scene_seed = j.at("scene_seed").get<uint64_t>();
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace

std::string manifest_to_json(const DatasetManifest& m) {
    json j{{"schema_version", m.schema_version},
           {"pairing", m.pairing},
           {"n_frames", m.n_frames},
           {"seed", m.seed},
           {"optics", {{"wavelength", m.wavelength}, {"distance", m.distance}, {"pixel_size", m.pixel_size}}},
           {"material", {{"delta", m.delta}, {"beta", m.beta}}},
           {"scene", {{"frame", m.frame}, {"n_max", m.n_max}, {"t_max", m.t_max}}},
           {"flat_field", {{"n_modes", m.flat_modes}, {"coefficient_sigma", m.flat_sigma}}},
           {"noise", {{"total_photons", m.total_photons}, {"enabled", m.noise_enabled}}},
           {"format", "pfd-v1"},
           {"objects", frames_to_json(m.objects)},
           {"holograms", frames_to_json(m.holograms)}};
    return j.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text) {
    json j = json::parse(text);
    DatasetManifest m;
    m.schema_version = j.at("schema_version").get<int>();
    m.pairing = j.at("pairing").get<std::string>();
    m.n_frames = j.at("n_frames").get<int>();
    m.seed = j.at("seed").get<uint64_t>();
    m.wavelength = j.at("optics").at("wavelength").get<double>();
    m.distance = j.at("optics").at("distance").get<double>();
    m.pixel_size = j.at("optics").at("pixel_size").get<double>();
    m.delta = j.at("material").at("delta").get<double>();
    m.beta = j.at("material").at("beta").get<double>();
    m.frame = j.at("scene").at("frame").get<int>();
    m.n_max = j.at("scene").at("n_max").get<int>();
    m.t_max = j.at("scene").at("t_max").get<double>();
    m.flat_modes = j.at("flat_field").at("n_modes").get<int>();
    m.flat_sigma = j.at("flat_field").at("coefficient_sigma").get<double>();
    m.total_photons = j.at("noise").at("total_photons").get<double>();
    m.noise_enabled = j.at("noise").at("enabled").get<bool>();
    m.objects = frames_from_json(j.at("objects"));
    m.holograms = frames_from_json(j.at("holograms"));
    return m;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    const std::string text = manifest_to_json(m);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return manifest_from_json(text);
    } catch (const json::exception& e) {
        throw IoError("bad manifest " + path.string() + ": " + e.what());
    }
}

}  // namespace holo::io
