#include "holocycle/io/pfd.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace holo::io {

namespace {

constexpr char kMagic[4] = {'P', 'F', 'D', '1'};

void store_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void store_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void store_f64(std::string& out, double v) { store_u64(out, std::bit_cast<uint64_t>(v)); }
void store_f32(std::string& out, float v) { store_u32(out, std::bit_cast<uint32_t>(v)); }

uint32_t load_u32(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 | static_cast<uint32_t>(p[2]) << 16 |
           static_cast<uint32_t>(p[3]) << 24;
}

uint64_t load_u64(const unsigned char* p) {
    return static_cast<uint64_t>(load_u32(p)) | static_cast<uint64_t>(load_u32(p + 4)) << 32;
}

struct RawFile {
    PfdHeader header;
    std::vector<unsigned char> payload;
};

RawFile read_raw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 32) throw IoError("truncated PFD file " + path.string());
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw IoError("bad magic in " + path.string());
    RawFile f;
    f.header.version = load_u32(bytes.data() + 4);
    f.header.width = load_u32(bytes.data() + 8);
    f.header.height = load_u32(bytes.data() + 12);
    f.header.channels = load_u32(bytes.data() + 16);
    f.header.dtype = load_u32(bytes.data() + 20);
    f.header.pixel_size = std::bit_cast<double>(load_u64(bytes.data() + 24));
    if (f.header.version != kPfdVersion) throw IoError("unsupported PFD version in " + path.string());
    if (f.header.channels != 1 && f.header.channels != 2) throw IoError("bad channel count in " + path.string());
    if (f.header.dtype != kDtypeF32 && f.header.dtype != kDtypeF64) throw IoError("bad dtype in " + path.string());
    const size_t sample_size = f.header.dtype == kDtypeF32 ? 4 : 8;
    const size_t expect = static_cast<size_t>(f.header.width) * f.header.height * f.header.channels * sample_size;
    if (bytes.size() - 32 != expect)
        throw IoError("payload size mismatch in " + path.string() + " (expected " + std::to_string(expect) + " bytes, got " +
                      std::to_string(bytes.size() - 32) + ")");
    f.payload.assign(bytes.begin() + 32, bytes.end());
    return f;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

std::string header_bytes(uint32_t w, uint32_t h, uint32_t channels, uint32_t dtype, double pixel_size) {
    std::string out;
    out.append(kMagic, 4);
    store_u32(out, kPfdVersion);
    store_u32(out, w);
    store_u32(out, h);
    store_u32(out, channels);
    store_u32(out, dtype);
    store_f64(out, pixel_size);
    return out;
}

void append_samples(std::string& out, const double* values, size_t count, int dtype) {
    if (dtype == kDtypeF64) {
        for (size_t i = 0; i < count; ++i) store_f64(out, values[i]);
    } else {
        for (size_t i = 0; i < count; ++i) store_f32(out, static_cast<float>(values[i]));
    }
}

double load_sample(const unsigned char* p, int dtype) {
    if (dtype == kDtypeF64) return std::bit_cast<double>(load_u64(p));
    return static_cast<double>(std::bit_cast<float>(load_u32(p)));
}

}  // namespace

PfdHeader peek_pfd(const std::filesystem::path& path) { return read_raw(path).header; }

void write_pfd(const std::filesystem::path& path, const RealImage& image, int dtype) {
    std::string bytes = header_bytes(static_cast<uint32_t>(image.width), static_cast<uint32_t>(image.height), 1,
                                     static_cast<uint32_t>(dtype), image.pixel_size);
    append_samples(bytes, image.data.data(), image.data.size(), dtype);
    write_file(path, bytes);
}

void write_pfd(const std::filesystem::path& path, const ComplexField& field, int dtype) {
    std::string bytes = header_bytes(static_cast<uint32_t>(field.width), static_cast<uint32_t>(field.height), 2,
                                     static_cast<uint32_t>(dtype), field.pixel_size);
    // std::complex guarantees (re, im) layout, matching the interleaved format
    append_samples(bytes, reinterpret_cast<const double*>(field.data.data()), field.data.size() * 2, dtype);
    write_file(path, bytes);
}

RealImage read_pfd_real(const std::filesystem::path& path) {
    RawFile f = read_raw(path);
    if (f.header.channels != 1) throw IoError(path.string() + " is not a single-channel PFD file");
    RealImage im(static_cast<int>(f.header.width), static_cast<int>(f.header.height), f.header.pixel_size);
    const size_t sz = f.header.dtype == kDtypeF32 ? 4 : 8;
    for (size_t i = 0; i < im.data.size(); ++i) im.data[i] = load_sample(f.payload.data() + i * sz, static_cast<int>(f.header.dtype));
    return im;
}

ComplexField read_pfd_complex(const std::filesystem::path& path) {
    RawFile f = read_raw(path);
    if (f.header.channels != 2) throw IoError(path.string() + " is not a complex PFD file");
    ComplexField field(static_cast<int>(f.header.width), static_cast<int>(f.header.height), f.header.pixel_size);
    const size_t sz = f.header.dtype == kDtypeF32 ? 4 : 8;
    for (size_t i = 0; i < field.data.size(); ++i) {
        const double re = load_sample(f.payload.data() + (2 * i) * sz, static_cast<int>(f.header.dtype));
        const double im = load_sample(f.payload.data() + (2 * i + 1) * sz, static_cast<int>(f.header.dtype));
        field.data[i] = {re, im};
    }
    return field;
}

std::variant<RealImage, ComplexField> read_pfd(const std::filesystem::path& path) {
    const PfdHeader h = peek_pfd(path);
    if (h.channels == 1) return read_pfd_real(path);
    return read_pfd_complex(path);
}

}  // namespace holo::io
