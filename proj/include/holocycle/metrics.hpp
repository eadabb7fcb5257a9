#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "holocycle/field.hpp"

namespace holo {

/// Integer ring assignment over the wrapped DFT frequency grid.
/// Ring r = round(sqrt(fx^2 + fy^2)) in index units; radii past
/// floor(min(W,H)/2) (grid corners) are excluded with index -1.
struct RingMap {
    int width = 0;
    int height = 0;
    int n_rings = 0;
    std::vector<int32_t> ring_of;  // per pixel, -1 = excluded
    std::vector<int> counts;       // per ring
};

const RingMap& ring_index_map(int width, int height);

/// Normalized Fourier-space cross-correlation per radial frequency ring.
/// DC is ring 0 and is included.
struct FrcCurve {
    std::vector<double> ring_values;  // length floor(min(W,H)/2)+1
    std::vector<int> ring_counts;
    bool degenerate = false;  // some nonempty ring had zero power; its value reports 0
};

FrcCurve frc(const ComplexField& a, const ComplexField& b);
FrcCurve frc(const RealImage& a, const RealImage& b);

/// Mean over nonempty rings of (1 - FRC_r)^2.
double frcm(const ComplexField& a, const ComplexField& b);
double frcm(const RealImage& a, const RealImage& b);
double frcm(const FrcCurve& curve);

/// Mean over pixels (and re/im channels for complex inputs) of squared difference.
double l2_metric(const RealImage& a, const RealImage& b);
double l2_metric(const ComplexField& a, const ComplexField& b);

/// (1 - SSIM)/2 with the 11x11 sigma=1.5 Gaussian window, C1=(0.01)^2,
/// C2=(0.03)^2 on inputs rescaled to [0,1] by the pair's joint min/max.
/// Complex fields are scored per channel (re, im) and averaged.
double dssim(const RealImage& a, const RealImage& b);
double dssim(const ComplexField& a, const ComplexField& b);

struct FrameMetrics {
    int index = 0;
    double l2 = 0.0;
    double dssim = 0.0;
    double frcm = 0.0;
};

struct MetricReport {
    std::vector<FrameMetrics> frames;
    double mean_l2 = 0.0;
    double mean_dssim = 0.0;
    double mean_frcm = 0.0;
};

MetricReport evaluate(const std::vector<ComplexField>& reconstructions, const std::vector<ComplexField>& references);
MetricReport evaluate(const std::vector<RealImage>& reconstructions, const std::vector<RealImage>& references);

/// Directory form: frames are matched by identical file names (*.pfd).
MetricReport evaluate_dirs(const std::filesystem::path& recon_dir, const std::filesystem::path& ref_dir);

std::string report_to_json(const MetricReport& report);

}  // namespace holo
