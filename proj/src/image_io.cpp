#include "detangle/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#ifdef DETANGLE_HAVE_PNG
#include <csetjmp>
#include <png.h>
#endif

namespace detangle {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::error_code ec;
    if (!fs::exists(path, ec) || fs::is_directory(path, ec))
        throw FileNotFound("no such file: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("cannot open: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Reads one ASCII header integer, skipping whitespace and '#' comments.
int read_header_int(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(bytes[pos])) {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= bytes.size()) throw CorruptData("PPM header truncated");
    if (!std::isdigit(bytes[pos])) throw CorruptData("PPM header field is not a number");
    long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
        value = value * 10 + (bytes[pos] - '0');
        if (value > 1'000'000) throw CorruptData("PPM header value out of range");
        ++pos;
    }
    return static_cast<int>(value);
}

#ifdef DETANGLE_HAVE_PNG

struct PngReadState {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
};

void png_read_from_span(png_structp png, png_bytep out, png_size_t count) {
    auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (state->pos + count > state->bytes.size()) png_error(png, "truncated PNG");
    std::copy_n(state->bytes.begin() + state->pos, count, out);
    state->pos += count;
}

RgbImage decode_png(std::span<const std::uint8_t> bytes) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("libpng initialisation failed");
    }
    PngReadState state{bytes, 0};
    std::vector<std::uint8_t> rgb;
    png_uint_32 width = 0, height = 0;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw CorruptData("corrupt PNG data");
    }
    png_set_read_fn(png, &state, png_read_from_span);
    png_read_info(png, info);
    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);
    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(width) * 3)
        png_error(png, "unexpected PNG row layout");
    rgb.resize(static_cast<std::size_t>(width) * height * 3);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = rgb.data() + static_cast<std::size_t>(y) * width * 3;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);
    return RgbImage(static_cast<int>(width), static_cast<int>(height), std::move(rgb));
}

void write_png(const RgbImage& image, const fs::path& path) {
    FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) throw WriteError("cannot write: " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw WriteError("PNG encoding failed: " + path.string());
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    auto data = image.bytes();
    for (int y = 0; y < image.height(); ++y)
        png_write_row(png, const_cast<png_bytep>(data.data() + static_cast<std::size_t>(y) * image.width() * 3));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

#endif

bool is_png(std::span<const std::uint8_t> b) {
    static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return b.size() >= 8 && std::equal(sig, sig + 8, b.begin());
}

} // namespace

bool png_supported() {
#ifdef DETANGLE_HAVE_PNG
    return true;
#else
    return false;
#endif
}

RgbImage decode_ppm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') throw UnsupportedFormat("not a PPM image");
    if (bytes[1] != '6') throw UnsupportedFormat("only binary PPM (P6) is supported");
    std::size_t pos = 2;
    const int width = read_header_int(bytes, pos);
    const int height = read_header_int(bytes, pos);
    const int maxval = read_header_int(bytes, pos);
    if (width < 1 || height < 1) throw CorruptData("PPM dimensions must be positive");
    if (maxval != 255) throw UnsupportedFormat("PPM maxval must be 255, got " + std::to_string(maxval));
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw CorruptData("PPM header not terminated");
    ++pos;
    const std::size_t need = static_cast<std::size_t>(width) * height * 3;
    if (bytes.size() - pos < need)
        throw CorruptData("PPM pixel data truncated: expected " + std::to_string(need) + " bytes, found " +
                          std::to_string(bytes.size() - pos));
    std::vector<std::uint8_t> data(bytes.begin() + pos, bytes.begin() + pos + need);
    return RgbImage(width, height, std::move(data));
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& image) {
    const std::string header =
        "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    auto px = image.bytes();
    out.insert(out.end(), px.begin(), px.end());
    return out;
}

RgbImage load_image(const fs::path& path) {
    const auto bytes = read_file(path);
    if (is_png(bytes)) {
#ifdef DETANGLE_HAVE_PNG
        return decode_png(bytes);
#else
        throw UnsupportedFormat("PNG support not compiled in");
#endif
    }
    if (bytes.size() >= 2 && bytes[0] == 'P') return decode_ppm(bytes);
    throw UnsupportedFormat("unrecognised image format: " + path.string());
}

void save_image(const RgbImage& image, const fs::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") {
#ifdef DETANGLE_HAVE_PNG
        write_png(image, path);
        return;
#else
        throw UnsupportedFormat("PNG support not compiled in");
#endif
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw WriteError("cannot write: " + path.string());
    const auto bytes = encode_ppm(image);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw WriteError("write failed: " + path.string());
}

} // namespace detangle
