#pragma once

#include <filesystem>
#include <variant>

#include "holocycle/field.hpp"

namespace holo::io {

// PFD container: magic "PFD1", u32 version, u32 width, u32 height,
// u32 channels (1 = real, 2 = complex interleaved re/im), u32 dtype
// (0 = f32, 1 = f64), f64 pixel_size, then row-major little-endian samples.
// Payload length must be exactly width*height*channels*dtype_size.

inline constexpr uint32_t kPfdVersion = 1;
inline constexpr int kDtypeF32 = 0;
inline constexpr int kDtypeF64 = 1;

struct PfdHeader {
    uint32_t version = kPfdVersion;
    uint32_t width = 0;
    uint32_t height = 0;
    uint32_t channels = 0;
    uint32_t dtype = kDtypeF64;
    double pixel_size = 0.0;
};

PfdHeader peek_pfd(const std::filesystem::path& path);

void write_pfd(const std::filesystem::path& path, const RealImage& image, int dtype = kDtypeF64);
void write_pfd(const std::filesystem::path& path, const ComplexField& field, int dtype = kDtypeF64);

RealImage read_pfd_real(const std::filesystem::path& path);
ComplexField read_pfd_complex(const std::filesystem::path& path);
std::variant<RealImage, ComplexField> read_pfd(const std::filesystem::path& path);

}  // namespace holo::io
