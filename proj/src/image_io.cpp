#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "rgbc/errors.hpp"
#include "rgbc/raster.hpp"

namespace rgbc {

namespace {

// Rec. 709 luma, computed in integers so that white maps to exactly 1.0.
constexpr std::uint64_t kLumR = 2126, kLumG = 7152, kLumB = 722, kLumDen = 10000;

double luma(std::uint64_t r, std::uint64_t g, std::uint64_t b, std::uint64_t maxval) {
    return static_cast<double>(kLumR * r + kLumG * g + kLumB * b) /
           static_cast<double>(kLumDen * maxval);
}

std::uint8_t quantize8(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

// --- PNM ---------------------------------------------------------------

class PnmReader {
public:
    explicit PnmReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    // Next whitespace/comment-delimited token in the header.
    std::string token() {
        skip_space_and_comments();
        std::string t;
        while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]))
            t.push_back(static_cast<char>(bytes_[pos_++]));
        if (t.empty()) throw FormatError("PNM: truncated header");
        return t;
    }

    std::size_t number() {
        const std::string t = token();
        std::size_t n = 0;
        for (char ch : t) {
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                throw FormatError("PNM: expected number, got '" + t + "'");
            n = n * 10 + static_cast<std::size_t>(ch - '0');
        }
        return n;
    }

    // Consumes the single whitespace byte that terminates the header of
    // binary variants, then hands out raw sample bytes.
    const std::uint8_t* raster(std::size_t need) {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
            throw FormatError("PNM: malformed header");
        ++pos_;
        if (bytes_.size() - pos_ < need) throw FormatError("PNM: truncated pixel data");
        return bytes_.data() + pos_;
    }

    std::size_t ascii_sample() { return number(); }

    bool ascii_bit() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size()) throw FormatError("PNM: truncated pixel data");
        const char ch = static_cast<char>(bytes_[pos_++]);
        if (ch == '0') return false;
        if (ch == '1') return true;
        throw FormatError("PNM: invalid bitmap digit");
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

} // namespace

namespace detail {

Raster decode_pnm(const std::vector<std::uint8_t>& bytes) {
    PnmReader rd(bytes);
    const std::string magic = rd.token();
    if (magic.size() != 2 || magic[0] != 'P' || magic[1] < '1' || magic[1] > '6')
        throw FormatError("PNM: bad magic");
    const int kind = magic[1] - '0';
    const bool bitmap = kind == 1 || kind == 4;
    const bool rgb = kind == 3 || kind == 6;
    const bool binary = kind >= 4;

    const std::size_t cols = rd.number();
    const std::size_t rows = rd.number();
    if (rows == 0 || cols == 0) throw FormatError("PNM: zero-dimension image");
    std::size_t maxval = 1;
    if (!bitmap) {
        maxval = rd.number();
        if (maxval == 0 || maxval > 65535) throw FormatError("PNM: invalid maxval");
    }
    const std::size_t channels = rgb ? 3 : 1;

    Raster img(rows, cols);
    if (binary && kind != 4) {
        const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
        const std::uint8_t* p = rd.raster(rows * cols * channels * bytes_per_sample);
        auto next = [&]() -> std::uint64_t {
            if (bytes_per_sample == 2) {
                const std::uint64_t v = (std::uint64_t{p[0]} << 8) | p[1];
                p += 2;
                return v;
            }
            return *p++;
        };
        for (double& out : img.values()) {
            if (rgb) {
                const auto r = next(), g = next(), b = next();
                out = luma(r, g, b, maxval);
            } else {
                out = static_cast<double>(next()) / static_cast<double>(maxval);
            }
        }
    } else if (kind == 4) {
        // packed bits, rows padded to whole bytes; 1 = black
        const std::size_t row_bytes = (cols + 7) / 8;
        const std::uint8_t* p = rd.raster(rows * row_bytes);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const std::uint8_t byte = p[r * row_bytes + c / 8];
                const bool black = (byte >> (7 - c % 8)) & 1;
                img(r, c) = black ? 0.0 : 1.0;
            }
    } else if (kind == 1) {
        for (double& out : img.values()) out = rd.ascii_bit() ? 0.0 : 1.0;
    } else {
        for (double& out : img.values()) {
            std::uint64_t s[3];
            for (std::size_t ch = 0; ch < channels; ++ch) {
                s[ch] = rd.ascii_sample();
                if (s[ch] > maxval) throw FormatError("PNM: sample exceeds maxval");
            }
            out = rgb ? luma(s[0], s[1], s[2], maxval)
                      : static_cast<double>(s[0]) / static_cast<double>(maxval);
        }
    }
    return img;
}

Raster decode_png(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw IoError("cannot open file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw Error("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw FormatError("invalid PNG: " + path);
    }
    png_init_io(png, fp);
    png_read_png(png, info,
                 PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_PACKING | PNG_TRANSFORM_STRIP_ALPHA,
                 nullptr);

    const std::size_t rows = png_get_image_height(png, info);
    const std::size_t cols = png_get_image_width(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    png_bytepp row_ptrs = png_get_rows(png, info);

    if (rows == 0 || cols == 0) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw FormatError("PNG: zero-dimension image");
    }
    if ((depth != 8 && depth != 16) || (channels != 1 && channels != 3)) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw FormatError("PNG: unsupported layout after expansion");
    }

    const std::uint64_t maxval = depth == 16 ? 65535 : 255;
    Raster img(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const png_bytep row = row_ptrs[r];
        for (std::size_t c = 0; c < cols; ++c) {
            std::uint64_t s[3] = {0, 0, 0};
            for (int ch = 0; ch < channels; ++ch) {
                const std::size_t idx = (c * channels + ch) * (depth / 8);
                s[ch] = depth == 16 ? (std::uint64_t{row[idx]} << 8) | row[idx + 1]
                                    : std::uint64_t{row[idx]};
            }
            img(r, c) = channels == 3
                            ? luma(s[0], s[1], s[2], maxval)
                            : static_cast<double>(s[0]) / static_cast<double>(maxval);
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return img;
}

} // namespace detail

void write_png_gray(const std::string& path, const Matrix& img) {
    if (img.empty()) throw ConfigError("write_png_gray: empty image");
    std::vector<std::uint8_t> pixels(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) pixels[i] = quantize8(img.values()[i]);
    std::vector<png_bytep> rows(img.rows());
    for (std::size_t r = 0; r < img.rows(); ++r) rows[r] = pixels.data() + r * img.cols();

    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IoError("cannot write file: " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw Error("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("PNG write failed: " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.cols()),
                 static_cast<png_uint_32>(img.rows()), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fclose(fp) != 0) throw IoError("PNG write failed: " + path);
}

void write_pgm(const std::string& path, const Matrix& img) {
    if (img.empty()) throw ConfigError("write_pgm: empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
    for (double v : img.values()) out.put(static_cast<char>(quantize8(v)));
    out.flush();
    if (!out) throw IoError("PGM write failed: " + path);
}

} // namespace rgbc
