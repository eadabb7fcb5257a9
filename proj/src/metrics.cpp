#include "holocycle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>

#include <json.hpp>

#include "holocycle/fft.hpp"
#include "holocycle/io/pfd.hpp"

namespace holo {

namespace {

int wrapped_index(int i, int n) { return i <= (n - 1) / 2 ? i : i - n; }

}  // namespace

const RingMap& ring_index_map(int width, int height) {
    static std::map<std::pair<int, int>, RingMap> cache;
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    auto it = cache.find({width, height});
    if (it != cache.end()) return it->second;

    RingMap map;
    map.width = width;
    map.height = height;
    map.n_rings = std::min(width, height) / 2 + 1;
    map.ring_of.resize(static_cast<size_t>(width) * height);
    map.counts.assign(static_cast<size_t>(map.n_rings), 0);
    for (int iy = 0; iy < height; ++iy) {
        const double fy = wrapped_index(iy, height);
        for (int ix = 0; ix < width; ++ix) {
            const double fx = wrapped_index(ix, width);
            const int r = static_cast<int>(std::llround(std::sqrt(fx * fx + fy * fy)));
            const bool keep = r < map.n_rings;
            map.ring_of[static_cast<size_t>(iy) * width + ix] = keep ? r : -1;
            if (keep) ++map.counts[static_cast<size_t>(r)];
        }
    }
    return cache.emplace(std::make_pair(width, height), std::move(map)).first->second;
}

namespace {

FrcCurve frc_of_spectra(const std::vector<std::complex<double>>& fa, const std::vector<std::complex<double>>& fb, int w, int h) {
    const RingMap& rings = ring_index_map(w, h);
    std::vector<double> num(static_cast<size_t>(rings.n_rings), 0.0);
    std::vector<double> pa(num.size(), 0.0), pb(num.size(), 0.0);
    for (size_t i = 0; i < fa.size(); ++i) {
        const int r = rings.ring_of[i];
        if (r < 0) continue;
        num[static_cast<size_t>(r)] += fa[i].real() * fb[i].real() + fa[i].imag() * fb[i].imag();
        pa[static_cast<size_t>(r)] += std::norm(fa[i]);
        pb[static_cast<size_t>(r)] += std::norm(fb[i]);
    }
    FrcCurve curve;
    curve.ring_counts = rings.counts;
    curve.ring_values.resize(num.size(), 0.0);
    for (size_t r = 0; r < num.size(); ++r) {
        if (rings.counts[r] == 0) continue;
        const double denom = pa[r] * pb[r];
        if (denom > 0.0) {
            curve.ring_values[r] = num[r] / std::sqrt(denom);
        } else {
            curve.degenerate = true;  // undefined ring reported as 0
        }
    }
    return curve;
}

std::vector<std::complex<double>> spectrum(const ComplexField& f) {
    std::vector<std::complex<double>> out(f.data.size());
    fft::dft2(f.data.data(), out.data(), f.width, f.height);
    return out;
}

std::vector<std::complex<double>> spectrum(const RealImage& im) {
    std::vector<std::complex<double>> tmp(im.data.size());
    for (size_t i = 0; i < im.data.size(); ++i) tmp[i] = {im.data[i], 0.0};
    std::vector<std::complex<double>> out(im.data.size());
    fft::dft2(tmp.data(), out.data(), im.width, im.height);
    return out;
}

}  // namespace

FrcCurve frc(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a, b);
    return frc_of_spectra(spectrum(a), spectrum(b), a.width, a.height);
}

FrcCurve frc(const RealImage& a, const RealImage& b) {
    require_same_grid(a, b);
    return frc_of_spectra(spectrum(a), spectrum(b), a.width, a.height);
}

double frcm(const FrcCurve& curve) {
    double sum = 0.0;
    int n = 0;
    for (size_t r = 0; r < curve.ring_values.size(); ++r) {
        if (curve.ring_counts[r] == 0) continue;
        const double d = 1.0 - curve.ring_values[r];
        sum += d * d;
        ++n;
    }
    return n > 0 ? sum / n : 0.0;
}

double frcm(const ComplexField& a, const ComplexField& b) { return frcm(frc(a, b)); }
double frcm(const RealImage& a, const RealImage& b) { return frcm(frc(a, b)); }

double l2_metric(const RealImage& a, const RealImage& b) {
    require_same_grid(a, b);
    double sum = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        sum += d * d;
    }
    return sum / static_cast<double>(a.data.size());
}

double l2_metric(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a, b);
    double sum = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) sum += std::norm(a.data[i] - b.data[i]);
    return sum / (2.0 * static_cast<double>(a.data.size()));
}

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = 0.01 * 0.01;  // (0.01 L)^2 with L = 1
constexpr double kSsimC2 = 0.03 * 0.03;

std::vector<double> gaussian_kernel() {
    std::vector<double> k(kSsimWindow);
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
        const double x = i - (kSsimWindow - 1) / 2.0;
        k[static_cast<size_t>(i)] = std::exp(-x * x / (2.0 * kSsimSigma * kSsimSigma));
        sum += k[static_cast<size_t>(i)];
    }
    for (double& v : k) v /= sum;
    return k;
}

// separable 'valid' filtering, output (w - 10) x (h - 10)
std::vector<double> filter_valid(const std::vector<double>& img, int w, int h) {
    static const std::vector<double> kernel = gaussian_kernel();
    const int wo = w - kSsimWindow + 1;
    const int ho = h - kSsimWindow + 1;
    std::vector<double> rows(static_cast<size_t>(wo) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < wo; ++x) {
            double acc = 0.0;
            for (int i = 0; i < kSsimWindow; ++i) acc += kernel[static_cast<size_t>(i)] * img[static_cast<size_t>(y) * w + x + i];
            rows[static_cast<size_t>(y) * wo + x] = acc;
        }
    std::vector<double> out(static_cast<size_t>(wo) * ho);
    for (int y = 0; y < ho; ++y)
        for (int x = 0; x < wo; ++x) {
            double acc = 0.0;
            for (int i = 0; i < kSsimWindow; ++i) acc += kernel[static_cast<size_t>(i)] * rows[static_cast<size_t>(y + i) * wo + x];
            out[static_cast<size_t>(y) * wo + x] = acc;
        }
    return out;
}

double dssim_channel(std::vector<double> a, std::vector<double> b, int w, int h) {
    if (w < kSsimWindow || h < kSsimWindow)
        throw ShapeError("dssim needs at least " + std::to_string(kSsimWindow) + "x" + std::to_string(kSsimWindow) + " images");
    double lo = a[0], hi = a[0];
    for (double v : a) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double v : b) lo = std::min(lo, v), hi = std::max(hi, v);
    if (hi == lo) return 0.0;  // constant equal inputs
    const double scale = 1.0 / (hi - lo);
    for (double& v : a) v = (v - lo) * scale;
    for (double& v : b) v = (v - lo) * scale;

    std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        aa[i] = a[i] * a[i];
        bb[i] = b[i] * b[i];
        ab[i] = a[i] * b[i];
    }
    const auto mu_a = filter_valid(a, w, h);
    const auto mu_b = filter_valid(b, w, h);
    const auto m_aa = filter_valid(aa, w, h);
    const auto m_bb = filter_valid(bb, w, h);
    const auto m_ab = filter_valid(ab, w, h);

    double ssim_sum = 0.0;
    for (size_t i = 0; i < mu_a.size(); ++i) {
        const double va = m_aa[i] - mu_a[i] * mu_a[i];
        const double vb = m_bb[i] - mu_b[i] * mu_b[i];
        const double cov = m_ab[i] - mu_a[i] * mu_b[i];
        ssim_sum += ((2.0 * mu_a[i] * mu_b[i] + kSsimC1) * (2.0 * cov + kSsimC2)) /
                    ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kSsimC1) * (va + vb + kSsimC2));
    }
    return (1.0 - ssim_sum / static_cast<double>(mu_a.size())) / 2.0;
}

}  // namespace

double dssim(const RealImage& a, const RealImage& b) {
    require_same_grid(a, b);
    return dssim_channel(a.data, b.data, a.width, a.height);
}

double dssim(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a, b);
    std::vector<double> are(a.data.size()), aim(a.data.size()), bre(a.data.size()), bim(a.data.size());
    for (size_t i = 0; i < a.data.size(); ++i) {
        are[i] = a.data[i].real();
        aim[i] = a.data[i].imag();
        bre[i] = b.data[i].real();
        bim[i] = b.data[i].imag();
    }
    return 0.5 * (dssim_channel(std::move(are), std::move(bre), a.width, a.height) +
                  dssim_channel(std::move(aim), std::move(bim), a.width, a.height));
}

namespace {

template <typename Img>
MetricReport evaluate_impl(const std::vector<Img>& recon, const std::vector<Img>& ref) {
    if (recon.size() != ref.size()) throw DatasetError("evaluate: frame count mismatch");
    if (recon.empty()) throw DatasetError("evaluate: empty dataset");
    MetricReport report;
    report.frames.resize(recon.size());
    for (size_t i = 0; i < recon.size(); ++i) {
        FrameMetrics& f = report.frames[i];
        f.index = static_cast<int>(i);
        f.l2 = l2_metric(recon[i], ref[i]);
        f.dssim = dssim(recon[i], ref[i]);
        f.frcm = frcm(recon[i], ref[i]);
        report.mean_l2 += f.l2;
        report.mean_dssim += f.dssim;
        report.mean_frcm += f.frcm;
    }
    const double n = static_cast<double>(recon.size());
    report.mean_l2 /= n;
    report.mean_dssim /= n;
    report.mean_frcm /= n;
    return report;
}

}  // namespace

MetricReport evaluate(const std::vector<ComplexField>& recon, const std::vector<ComplexField>& ref) {
    return evaluate_impl(recon, ref);
}

MetricReport evaluate(const std::vector<RealImage>& recon, const std::vector<RealImage>& ref) {
    return evaluate_impl(recon, ref);
}

MetricReport evaluate_dirs(const std::filesystem::path& recon_dir, const std::filesystem::path& ref_dir) {
    namespace fs = std::filesystem;
    auto list = [](const fs::path& dir) {
        std::set<std::string> names;
        if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".pfd") names.insert(e.path().filename().string());
        return names;
    };
    const auto recon_names = list(recon_dir);
    const auto ref_names = list(ref_dir);
    if (recon_names != ref_names) throw DatasetError("evaluate: file sets differ between " + recon_dir.string() + " and " + ref_dir.string());
    if (recon_names.empty()) throw DatasetError("evaluate: no .pfd frames in " + recon_dir.string());

    MetricReport report;
    int index = 0;
    for (const auto& name : recon_names) {
        const auto a = io::read_pfd(recon_dir / name);
        const auto b = io::read_pfd(ref_dir / name);
        if (a.index() != b.index()) throw DatasetError("evaluate: kind mismatch for frame " + name);
        FrameMetrics f;
        f.index = index++;
        if (std::holds_alternative<ComplexField>(a)) {
            const auto& ca = std::get<ComplexField>(a);
            const auto& cb = std::get<ComplexField>(b);
            f.l2 = l2_metric(ca, cb);
            f.dssim = dssim(ca, cb);
            f.frcm = frcm(ca, cb);
        } else {
            const auto& ra = std::get<RealImage>(a);
            const auto& rb = std::get<RealImage>(b);
            f.l2 = l2_metric(ra, rb);
            f.dssim = dssim(ra, rb);
            f.frcm = frcm(ra, rb);
        }
        report.mean_l2 += f.l2;
        report.mean_dssim += f.dssim;
        report.mean_frcm += f.frcm;
        report.frames.push_back(f);
    }
    const double n = static_cast<double>(report.frames.size());
    report.mean_l2 /= n;
    report.mean_dssim /= n;
    report.mean_frcm /= n;
    return report;
}

std::string report_to_json(const MetricReport& report) {
    nlohmann::json frames = nlohmann::json::array();
    for (const auto& f : report.frames)
        frames.push_back({{"index", f.index}, {"l2", f.l2}, {"dssim", f.dssim}, {"frcm", f.frcm}});
    nlohmann::json j{{"frames", frames},
                     {"mean", {{"l2", report.mean_l2}, {"dssim", report.mean_dssim}, {"frcm", report.mean_frcm}}},
                     {"config",
                      {{"schema_version", 1},
                       {"dssim_window", kSsimWindow},
                       {"dssim_sigma", kSsimSigma},
                       {"frc_rings", "rounded-integer-radius"}}}};
    return j.dump(2) + "\n";
}

}  // namespace holo
