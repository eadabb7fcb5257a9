#include "holocycle/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace holo::fft {

namespace {

// Plan creation is not thread-safe in FFTW; execution via the new-array
// interface is. Plans are cached per (w, h, sign) and created UNALIGNED so
// they can run on any caller buffer.
std::mutex plan_mutex;

fftw_plan plan_d(int w, int h, int sign) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard lock(plan_mutex);
    auto key = std::make_tuple(w, h, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> dummy(static_cast<size_t>(w) * h);
    auto* p = reinterpret_cast<fftw_complex*>(dummy.data());
    fftw_plan plan = fftw_plan_dft_2d(h, w, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, plan);
    return plan;
}

fftwf_plan plan_f(int w, int h, int sign) {
    static std::map<std::tuple<int, int, int>, fftwf_plan> cache;
    std::lock_guard lock(plan_mutex);
    auto key = std::make_tuple(w, h, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<float>> dummy(static_cast<size_t>(w) * h);
    auto* p = reinterpret_cast<fftwf_complex*>(dummy.data());
    fftwf_plan plan = fftwf_plan_dft_2d(h, w, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, plan);
    return plan;
}

}  // namespace

void dft2(const std::complex<double>* in, std::complex<double>* out, int w, int h) {
    fftw_execute_dft(plan_d(w, h, FFTW_FORWARD), reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void dft2_conj(const std::complex<double>* in, std::complex<double>* out, int w, int h) {
    fftw_execute_dft(plan_d(w, h, FFTW_BACKWARD), reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void idft2(const std::complex<double>* in, std::complex<double>* out, int w, int h) {
    dft2_conj(in, out, w, h);
    const double scale = 1.0 / (static_cast<double>(w) * h);
    const size_t n = static_cast<size_t>(w) * h;
    for (size_t i = 0; i < n; ++i) out[i] *= scale;
}

void dft2(const std::complex<float>* in, std::complex<float>* out, int w, int h) {
    fftwf_execute_dft(plan_f(w, h, FFTW_FORWARD), reinterpret_cast<fftwf_complex*>(const_cast<std::complex<float>*>(in)),
                      reinterpret_cast<fftwf_complex*>(out));
}

void dft2_conj(const std::complex<float>* in, std::complex<float>* out, int w, int h) {
    fftwf_execute_dft(plan_f(w, h, FFTW_BACKWARD), reinterpret_cast<fftwf_complex*>(const_cast<std::complex<float>*>(in)),
                      reinterpret_cast<fftwf_complex*>(out));
}

void idft2(const std::complex<float>* in, std::complex<float>* out, int w, int h) {
    dft2_conj(in, out, w, h);
    const float scale = 1.0f / (static_cast<float>(w) * h);
    const size_t n = static_cast<size_t>(w) * h;
    for (size_t i = 0; i < n; ++i) out[i] *= scale;
}

}  // namespace holo::fft
