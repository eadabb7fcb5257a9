#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "holocycle/synth.hpp"

namespace holo::io {

struct FrameEntry {
    int index = 0;
    std::string file;
    uint64_t scene_seed = 0;
};

/// On-disk description of a generated dataset (manifest.json).
struct DatasetManifest {
    int schema_version = 1;
    std::string pairing;  // "paired" | "unpaired"
    int n_frames = 0;
    uint64_t seed = 0;
    double wavelength = 0.0;
    double distance = 0.0;
    double pixel_size = 0.0;
    double delta = 0.0;
    double beta = 0.0;
    int frame = 0;
    int n_max = 0;
    double t_max = 0.0;
    int flat_modes = 0;
    double flat_sigma = 0.0;
    double total_photons = 0.0;
    bool noise_enabled = true;
    std::vector<FrameEntry> objects;
    std::vector<FrameEntry> holograms;
};

std::string manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const std::string& text);

void write_manifest(const std::filesystem::path& path, const DatasetManifest& m);
DatasetManifest read_manifest(const std::filesystem::path& path);

}  // namespace holo::io
