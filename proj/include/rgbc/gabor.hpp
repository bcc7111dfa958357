#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "rgbc/matrix.hpp"

namespace rgbc {

/// Parameters of a Gabor filter bank: n_scales x n_orientations complex
/// kernels sampled on a centered win_rows x win_cols grid.
///
/// Scale u (1-based) uses frequency f_u = f_max / sqrt(2)^(u-1) and a
/// Gaussian envelope with sigma_u = eta / f_u along the wave direction,
/// gamma shaping the perpendicular direction. Orientation v (1-based)
/// uses theta_v = (v-1) * 180 / n_orientations degrees, measured as the
/// normal to the filter's parallel stripes.
struct GaborBankConfig {
    std::size_t n_scales = 5;       // N_u
    std::size_t n_orientations = 8; // N_v
    std::size_t win_rows = 23;      // s, odd
    std::size_t win_cols = 23;      // t, odd
    double f_max = 0.25;            // cycles/pixel, in (0, 0.5]
    double gamma = std::numbers::sqrt2;
    double eta = std::numbers::sqrt2;
    double phi = 0.0; // radians

    void validate() const; // throws ConfigError
};

/// One complex kernel of the bank. The center sample equals
/// f^2/(pi*gamma*eta) * exp(i*phi).
struct GaborKernel {
    std::size_t scale_index = 1;       // u in 1..N_u
    std::size_t orientation_index = 1; // v in 1..N_v
    double frequency = 0.0;            // f_u
    double orientation_deg = 0.0;      // theta_v
    Matrix re, im;                     // win_rows x win_cols

    std::size_t rows() const { return re.rows(); }
    std::size_t cols() const { return re.cols(); }
    std::complex<double> at(std::size_t r, std::size_t c) const {
        return {re(r, c), im(r, c)};
    }
};

/// All n_scales * n_orientations kernels, scale-major: index
/// (u-1)*n_orientations + (v-1).
std::vector<GaborKernel> build_bank(const GaborBankConfig& cfg);

/// Magnitude of the 2-D convolution of img with the kernel, zero-padded,
/// output cropped to the input extent ("same"). Kernels larger than the
/// image are accepted; the zero padding covers the overhang.
Matrix filter_magnitude(const Raster& img, const GaborKernel& kernel);

/// Strided decimation: keeps every d1-th row and d2-th column starting
/// at index 0. d1 and d2 must divide the matrix dimensions.
Matrix downsample(const Matrix& resp, std::size_t d1, std::size_t d2);

} // namespace rgbc
