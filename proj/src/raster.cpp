#include "rgbc/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "rgbc/errors.hpp"

namespace rgbc {

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path);
    return bytes;
}

bool has_png_signature(const std::vector<std::uint8_t>& bytes) {
    static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    return bytes.size() >= 8 && std::equal(sig, sig + 8, bytes.begin());
}

} // namespace

Raster load_image(const std::string& path) {
    const auto bytes = read_file(path);
    if (has_png_signature(bytes)) return detail::decode_png(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '6')
        return detail::decode_pnm(bytes);
    throw FormatError("unsupported image format: " + path);
}

Matrix resize_bilinear(const Matrix& m, std::size_t target_rows, std::size_t target_cols) {
    if (m.empty()) throw ConfigError("resize_bilinear: empty input");
    if (target_rows < 1 || target_cols < 1)
        throw ConfigError("resize_bilinear: target dimensions must be >= 1");
    if (target_rows == m.rows() && target_cols == m.cols()) return m;

    const std::size_t in_rows = m.rows(), in_cols = m.cols();
    const double row_scale = static_cast<double>(in_rows) / static_cast<double>(target_rows);
    const double col_scale = static_cast<double>(in_cols) / static_cast<double>(target_cols);

    // Precompute per-axis source indices and weights.
    std::vector<std::size_t> c0(target_cols), c1(target_cols);
    std::vector<double> cw(target_cols);
    for (std::size_t c = 0; c < target_cols; ++c) {
        double x = (static_cast<double>(c) + 0.5) * col_scale - 0.5;
        x = std::clamp(x, 0.0, static_cast<double>(in_cols - 1));
        c0[c] = static_cast<std::size_t>(x);
        c1[c] = std::min(c0[c] + 1, in_cols - 1);
        cw[c] = x - static_cast<double>(c0[c]);
    }

    Matrix out(target_rows, target_cols);
    for (std::size_t r = 0; r < target_rows; ++r) {
        double y = (static_cast<double>(r) + 0.5) * row_scale - 0.5;
        y = std::clamp(y, 0.0, static_cast<double>(in_rows - 1));
        const std::size_t r0 = static_cast<std::size_t>(y);
        const std::size_t r1 = std::min(r0 + 1, in_rows - 1);
        const double rw = y - static_cast<double>(r0);
        const double* top = m.row(r0);
        const double* bot = m.row(r1);
        double* dst = out.row(r);
        for (std::size_t c = 0; c < target_cols; ++c) {
            const double t = top[c0[c]] + (top[c1[c]] - top[c0[c]]) * cw[c];
            const double b = bot[c0[c]] + (bot[c1[c]] - bot[c0[c]]) * cw[c];
            dst[c] = t + (b - t) * rw;
        }
    }
    return out;
}

Raster normalize(const Raster& img, std::size_t target_rows, std::size_t target_cols) {
    Matrix out = resize_bilinear(img, target_rows, target_cols);
    for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
    return out;
}

} // namespace rgbc
