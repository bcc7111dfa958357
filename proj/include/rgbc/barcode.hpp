#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "rgbc/bitvec.hpp"
#include "rgbc/gabor.hpp"
#include "rgbc/matrix.hpp"

namespace rgbc {

enum class Method : std::uint8_t {
    RBC = 1,   // median-thresholded Radon projections
    GRIBC = 2, // Gabor bank applied to the resized Radon image
    GRGBC = 3, // per-filter Radon projection perpendicular to the stripes
};

const char* method_name(Method m);
Method method_from_name(const std::string& name); // throws ConfigError

/// Geometry and bank parameters that determine a barcode's bit layout.
/// The integer fields are persisted in archives; the Gabor free
/// parameters (f_max, gamma, eta, phi) are not and default as in
/// GaborBankConfig.
struct EncoderConfig {
    std::uint16_t n_scales = 0;       // N_u (GRIBC/GRGBC)
    std::uint16_t n_orientations = 0; // N_v (GRIBC/GRGBC)
    std::uint16_t win_rows = 0;       // s
    std::uint16_t win_cols = 0;       // t
    std::uint16_t image_side = 0;     // normalization target R_N = C_N
    std::uint16_t n_angles = 0;       // RBC projection count; N_v for GRGBC
    std::uint16_t d1 = 0;             // row downsampling factor
    std::uint16_t d2 = 0;             // column downsampling factor
    std::uint16_t bins_per_angle = 0; // RBC resampled projection length

    // Gabor free parameters; not part of the persisted layout, so they
    // must be supplied consistently when querying an archive.
    double f_max = 0.25;
    double gamma = std::numbers::sqrt2;
    double eta = std::numbers::sqrt2;
    double phi = 0.0;

    GaborBankConfig gabor_params() const;
};

/// True when the persisted layout fields (all u16 geometry) agree.
bool same_layout(const EncoderConfig& a, const EncoderConfig& b);

/// Method defaults: RBC 32px side with 128 bins/angle; GRIBC 128px side,
/// 180 angles, 4x4 decimation of 32x32 responses; GRGBC 64px side, 2x2
/// decimation, one guided projection per filter.
EncoderConfig default_config(Method method, std::size_t n_scales = 0,
                             std::size_t n_orientations = 0, std::size_t win_rows = 23,
                             std::size_t win_cols = 23, std::size_t n_angles = 8);

struct Barcode {
    Method method = Method::RBC;
    EncoderConfig config;
    BitVec bits;

    std::size_t n_bits() const { return bits.size(); }
    /// Bits are appended segment by segment: one segment per projection
    /// angle (RBC) or per (u,v) filter (GRIBC/GRGBC).
    std::size_t n_segments() const;
    std::size_t segment_length() const;
};

/// Median threshold and the >= comparison bits for a feature vector.
/// With nonzero_only the median is taken over the non-zero entries
/// (threshold 0 if all entries are zero). Even-length medians average
/// the two central order statistics. An all-zero vector yields all-ones
/// bits, a consequence of the >= rule that callers rely on.
struct Binarized {
    BitVec bits;
    double threshold = 0.0;
};
Binarized binarize_median(const std::vector<double>& vec, bool nonzero_only = false);

/// Expected bit count for a method/config without running the pipeline.
std::size_t code_length(Method method, const EncoderConfig& config);

Barcode rbc_encode(const Raster& img, const EncoderConfig& config);
Barcode gribc_encode(const Raster& img, const EncoderConfig& config);
Barcode grgbc_encode(const Raster& img, const EncoderConfig& config);
Barcode encode(Method method, const Raster& img, const EncoderConfig& config);

/// Writes the barcode as a black/white PNG: one row block per segment,
/// one column per bit (1 = black), each cell scaled to scale x scale
/// pixels.
void render_barcode(const Barcode& bc, const std::string& path, std::size_t scale = 1);

} // namespace rgbc
