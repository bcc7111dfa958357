#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rgbc/matrix.hpp"

namespace rgbc {

/// Loads a PNG or PNM (PBM/PGM/PPM) image as a grayscale Raster.
/// Color inputs are reduced to Rec. 709 luminance; integer samples are
/// rescaled to [0,1] by the maximum representable value (255, 65535,
/// or the PNM maxval). The format is picked by file signature, not
/// extension.
///
/// Throws IoError if the file cannot be read, FormatError if the
/// contents are not a supported raster format or have zero dimensions.
Raster load_image(const std::string& path);

/// Bilinear resize to exactly target_rows x target_cols, output clamped
/// to [0,1]. Sample grid: output pixel centers at (i+0.5) scaled into
/// the input grid (align-corners = false), edge-clamped. Resizing to
/// the input's own dimensions is the identity; constants are preserved.
Raster normalize(const Raster& img, std::size_t target_rows, std::size_t target_cols);

/// Same resampling as normalize() but without the [0,1] clamp, for
/// transform-domain matrices such as sinograms.
Matrix resize_bilinear(const Matrix& m, std::size_t target_rows, std::size_t target_cols);

/// Writes an 8-bit grayscale PNG; values are clamped to [0,1] and
/// quantized by rounding to v*255.
void write_png_gray(const std::string& path, const Matrix& img);

/// Writes a binary (P5) PGM, 8-bit, same quantization as write_png_gray.
void write_pgm(const std::string& path, const Matrix& img);

namespace detail {
/// Decoders shared by load_image and the tests. `bytes` is the whole file.
Raster decode_pnm(const std::vector<std::uint8_t>& bytes);
Raster decode_png(const std::string& path);
} // namespace detail

} // namespace rgbc
