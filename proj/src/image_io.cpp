#include "trifuse/image_io.hpp"

#include "trifuse/image_ops.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace trifuse {

namespace {

[[noreturn]] void fail(const std::filesystem::path& p, const std::string& why) {
    throw std::runtime_error(p.string() + ": " + why);
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// ---------------------------------------------------------------- PNG read

LoadedImage load_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail(path, "cannot open");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "libpng init failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<png_byte> bytes;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "truncated or corrupt PNG");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color = png_get_color_type(png, info);
    if (w == 0 || h == 0) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "zero-dimension image");
    }

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_strip_alpha(png);
    png_read_update_info(png, info);

    bit_depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    bytes.resize(rowbytes * h);
    row_ptrs.resize(h);
    for (png_uint_32 i = 0; i < h; ++i) row_ptrs[i] = bytes.data() + i * rowbytes;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    const ValueRange range = (bit_depth == 16) ? ValueRange{0.0, 65535.0} : ValueRange{0.0, 255.0};
    auto sample = [&](png_uint_32 i, png_uint_32 j, int c) -> double {
        const png_byte* row = bytes.data() + i * rowbytes;
        if (bit_depth == 16) {
            const png_byte* s = row + 2 * (j * channels + c);
            return double((unsigned(s[0]) << 8) | unsigned(s[1]));  // network order
        }
        return double(row[j * channels + c]);
    };

    if (channels == 1) {
        Plane p(h, w);
        for (png_uint_32 i = 0; i < h; ++i)
            for (png_uint_32 j = 0; j < w; ++j) p(i, j) = sample(i, j, 0);
        return Image(std::move(p), range);
    }
    if (channels == 3) {
        ColorImage c;
        c.r.resize(h, w);
        c.g.resize(h, w);
        c.b.resize(h, w);
        c.range = range;
        for (png_uint_32 i = 0; i < h; ++i)
            for (png_uint_32 j = 0; j < w; ++j) {
                c.r(i, j) = sample(i, j, 0);
                c.g(i, j) = sample(i, j, 1);
                c.b(i, j) = sample(i, j, 2);
            }
        return c;
    }
    fail(path, "unsupported PNG channel layout");
}

// --------------------------------------------------------------- PNM read

int pnm_token(std::istream& in) {
    // Skips whitespace and '#' comments, then parses one decimal token.
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) return -1;
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = in.get();
    }
    return value;
}

LoadedImage load_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || (m1 != '5' && m1 != '6')) fail(path, "unsupported PNM variant");
    const bool color = (m1 == '6');
    const int w = pnm_token(in);
    const int h = pnm_token(in);
    const int maxval = pnm_token(in);
    if (w <= 0 || h <= 0) fail(path, "zero-dimension image");
    if (maxval <= 0 || maxval > 65535) fail(path, "bad maxval");
    const int bpp = maxval > 255 ? 2 : 1;
    if (color && bpp != 1) fail(path, "16-bit PPM not supported");

    const std::size_t n = std::size_t(w) * h * (color ? 3 : 1) * bpp;
    std::vector<unsigned char> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(n));
    if (std::size_t(in.gcount()) != n) fail(path, "truncated file");

    const ValueRange range{0.0, double(maxval > 255 ? 65535 : 255)};
    auto at = [&](int i, int j, int c) -> double {
        const std::size_t idx = (std::size_t(i) * w + j) * (color ? 3 : 1) + c;
        if (bpp == 2)
            return double((unsigned(buf[2 * idx]) << 8) | unsigned(buf[2 * idx + 1]));
        return double(buf[idx]);
    };
    if (!color) {
        Plane p(h, w);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) p(i, j) = at(i, j, 0);
        return Image(std::move(p), range);
    }
    ColorImage c;
    c.r.resize(h, w);
    c.g.resize(h, w);
    c.b.resize(h, w);
    c.range = range;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            c.r(i, j) = at(i, j, 0);
            c.g(i, j) = at(i, j, 1);
            c.b(i, j) = at(i, j, 2);
        }
    return c;
}

// -------------------------------------------------------------- encoding

unsigned quantize(double v, double lo, double hi) {
    v = std::min(hi, std::max(lo, v));
    return unsigned(v >= 0.0 ? std::floor(v + 0.5) : std::ceil(v - 0.5));
}

void save_png_gray(const Image& img, const std::filesystem::path& path, bool wide) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail(path, "cannot open for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        fail(path, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "PNG write error");
    }
    png_init_io(png, fp.get());
    const int depth = wide ? 16 : 8;
    png_set_IHDR(png, info, img.width(), img.height(), depth, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_byte> row(std::size_t(img.width()) * (wide ? 2 : 1));
    for (int i = 0; i < img.height(); ++i) {
        for (int j = 0; j < img.width(); ++j) {
            const unsigned q = quantize(img.px(i, j), img.range.lo, img.range.hi);
            if (wide) {
                row[2 * j] = png_byte(q >> 8);
                row[2 * j + 1] = png_byte(q & 0xff);
            } else {
                row[j] = png_byte(q);
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_png_rgb(const ColorImage& img, const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail(path, "cannot open for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        fail(path, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "PNG write error");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_byte> row(std::size_t(img.width()) * 3);
    for (int i = 0; i < img.height(); ++i) {
        for (int j = 0; j < img.width(); ++j) {
            row[3 * j + 0] = png_byte(quantize(img.r(i, j), img.range.lo, img.range.hi) & 0xff);
            row[3 * j + 1] = png_byte(quantize(img.g(i, j), img.range.lo, img.range.hi) & 0xff);
            row[3 * j + 2] = png_byte(quantize(img.b(i, j), img.range.lo, img.range.hi) & 0xff);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_pnm_gray(const Image& img, const std::filesystem::path& path, bool wide) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    out << "P5\n" << img.width() << " " << img.height() << "\n" << (wide ? 65535 : 255) << "\n";
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j) {
            const unsigned q = quantize(img.px(i, j), img.range.lo, img.range.hi);
            if (wide) out.put(char(q >> 8));
            out.put(char(q & 0xff));
        }
}

void save_pnm_rgb(const ColorImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j) {
            out.put(char(quantize(img.r(i, j), img.range.lo, img.range.hi) & 0xff));
            out.put(char(quantize(img.g(i, j), img.range.lo, img.range.hi) & 0xff));
            out.put(char(quantize(img.b(i, j), img.range.lo, img.range.hi) & 0xff));
        }
}

bool has_png_magic(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    unsigned char sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

}  // namespace

LoadedImage load_image(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) fail(path, "no such file");
    if (has_png_magic(path)) return load_png(path);
    std::ifstream in(path, std::ios::binary);
    char m0 = 0;
    in.get(m0);
    if (m0 == 'P') return load_pnm(path);
    fail(path, "unsupported format (expect PNG or binary PNM)");
}

Image as_gray(const LoadedImage& img) {
    if (std::holds_alternative<Image>(img)) return std::get<Image>(img);
    return to_luminance(std::get<ColorImage>(img));
}

void save_image(const Image& img, const std::filesystem::path& path) {
    require(img.width() >= 1 && img.height() >= 1, "save_image: empty image");
    const bool wide = img.range.hi > 255.5;
    const auto ext = path.extension().string();
    if (ext == ".pgm")
        save_pnm_gray(img, path, wide);
    else
        save_png_gray(img, path, wide);
}

void save_image(const ColorImage& img, const std::filesystem::path& path) {
    require(img.width() >= 1 && img.height() >= 1, "save_image: empty image");
    const auto ext = path.extension().string();
    if (ext == ".ppm")
        save_pnm_rgb(img, path);
    else
        save_png_rgb(img, path);
}

}  // namespace trifuse
